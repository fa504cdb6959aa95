#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cache.hpp"
#include "conjecture.hpp"
#include "fermionic_ham.hpp"
#include "recursion.hpp"
#include "spectral.hpp"

namespace qkdv {

struct RunConfig {
    int kMax = 4;
    int jMax = 3;
    int nMax = 6;
    int mMax = 2;
    int qtrunc = 40;
    int jobs = 1;
    std::vector<int> kSet{1, 2, 3};
    std::string cacheDir = "qkdv-cache";
    std::string format = "json";

    void validate() const {
        if (kMax < 0 || jMax < 0 || nMax < 0 || mMax < 0)
            throw std::invalid_argument("config: bounds must be non-negative");
        if (qtrunc < 1 || jobs < 1)
            throw std::invalid_argument("config: qtrunc and jobs must be positive");
        if (jMax > kMax + 1) throw std::invalid_argument("config: jMax must be at most kMax + 1");
        if (mMax > jMax) throw std::invalid_argument("config: mMax must be at most jMax");
        if (format != "json" && format != "csv")
            throw std::invalid_argument("config: format must be json or csv");
        if (kSet.empty()) throw std::invalid_argument("config: kSet must be non-empty");
        for (int k : kSet)
            if (k < 0 || k > kMax)
                throw std::invalid_argument("config: kSet levels must lie in [0, kMax]");
    }

    int jCap(int k) const { return std::min(k + 1, jMax); }

    nlohmann::json toJson() const {
        nlohmann::json j;
        j["kMax"] = kMax;
        j["jMax"] = jMax;
        j["nMax"] = nMax;
        j["mMax"] = mMax;
        j["qtrunc"] = qtrunc;
        j["jobs"] = jobs;
        j["kSet"] = kSet;
        j["cacheDir"] = cacheDir;
        j["format"] = format;
        return j;
    }

    static RunConfig fromJson(const nlohmann::json& j) {
        RunConfig c;
        c.kMax = j.at("kMax").get<int>();
        c.jMax = j.at("jMax").get<int>();
        c.nMax = j.at("nMax").get<int>();
        c.mMax = j.at("mMax").get<int>();
        c.qtrunc = j.at("qtrunc").get<int>();
        c.jobs = j.at("jobs").get<int>();
        c.kSet = j.at("kSet").get<std::vector<int>>();
        c.cacheDir = j.at("cacheDir").get<std::string>();
        c.format = j.at("format").get<std::string>();
        return c;
    }
};

struct TablesResult {
    std::vector<GLevel> levels;  // g_{-1} .. g_{kMax}
    int computedBlocks = 0;
    int reusedBlocks = 0;
    bool rebuilt = false;  // a cached entry was present but unusable
};

// Load the hierarchy from the cache, or compute and persist it. Cached
// blocks from another engine version are invisible (their keys differ);
// corrupted payloads trigger a rebuild with a warning.
inline TablesResult ensureTables(const RunConfig& cfg, std::ostream& log,
                                 const std::string& version = engineVersion()) {
    TableCache cache(cfg.cacheDir, version);
    TablesResult out;

    bool complete = true;
    for (int k = -1; k <= cfg.kMax && complete; ++k) {
        GLevel g(k);
        for (int j = 0; j <= cfg.jCap(k); ++j) {
            auto block = cache.loadBlock(k, j);
            if (!block) {
                if (cache.has(k, j)) {
                    out.rebuilt = true;
                    log << "warning: cached table (k=" << k << ", j=" << j
                        << ") is corrupted; rebuilding\n";
                }
                complete = false;
                break;
            }
            gtableFromJson(g, *block);
            ++out.reusedBlocks;
        }
        if (complete) out.levels.push_back(std::move(g));
    }
    if (complete) return out;

    out.reusedBlocks = 0;
    out.levels = computeHierarchy(cfg.kMax, [&](int k) { return cfg.jCap(k); });
    for (const auto& g : out.levels)
        for (int j = 0; j <= cfg.jCap(g.level()); ++j) {
            if (cache.store(g, j)) ++out.computedBlocks;
            else ++out.reusedBlocks;
        }
    return out;
}

namespace clidetail {

inline void writeFile(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
}

inline std::vector<int> perturbLevels(const RunConfig& cfg, int kTop) {
    std::vector<int> ks;
    for (int k = 0; k <= kTop; ++k) ks.push_back(k);
    for (int k : cfg.kSet)
        if (k > kTop) ks.push_back(k);
    return ks;
}

// Homogeneous fits of E_k^[m](.;0) for k = 0..kTop from eigenvalues over all
// |lambda| <= N. Throws on falsification: a failed fit here is an engine bug
// or an undersized N, never something to paper over.
inline std::map<int, QExpr> eigenvalueFits(const std::vector<GLevel>& levels, const RunConfig& cfg,
                                           int kTop, int m, int N) {
    std::vector<std::vector<std::pair<Partition, Rational>>> values(static_cast<size_t>(kTop) + 1);
    auto ks = perturbLevels(cfg, kTop);
    for (int n = 0; n <= N; ++n) {
        EigenData data = perturb(levels, n, m, ks);
        for (const auto& e : data.entries)
            for (int k = 0; k <= kTop; ++k)
                values[static_cast<size_t>(k)].emplace_back(e.lambda, e.E.at(k)[static_cast<size_t>(m)]);
    }
    std::map<int, QExpr> fits;
    for (int k = 0; k <= kTop; ++k) {
        ShiftedFit fit = fitShiftedSymmetric(values[static_cast<size_t>(k)], k + 2 + m);
        if (fit.falsified) {
            std::ostringstream os;
            os << "eigenvalue fit falsified at k=" << k << ", m=" << m << ", witness "
               << fit.witness.str();
            throw std::runtime_error(os.str());
        }
        fits.emplace(k, fit.expr);
    }
    return fits;
}

}  // namespace clidetail

// Compute (or reuse) the hierarchy tables and record a manifest of the run.
inline int cmdTables(const RunConfig& cfg, std::ostream& log,
                     const std::string& version = engineVersion()) {
    cfg.validate();
    TablesResult r = ensureTables(cfg, log, version);
    nlohmann::json manifest;
    manifest["engine"] = version;
    manifest["kMax"] = cfg.kMax;
    manifest["jMax"] = cfg.jMax;
    clidetail::writeFile(std::filesystem::path(cfg.cacheDir) / "tables_manifest.json",
                         manifest.dump(2) + "\n");
    log << "tables: " << r.computedBlocks << " blocks computed, " << r.reusedBlocks
        << " reused\n";
    return 0;
}

// Diagonalize each degree block and write one EigenData file per degree.
inline int cmdSpectrum(const RunConfig& cfg, std::ostream& log,
                       const std::string& version = engineVersion()) {
    cfg.validate();
    TablesResult tables = ensureTables(cfg, log, version);
    try {
        for (int n = 0; n <= cfg.nMax; ++n) {
            EigenData data = perturb(tables.levels, n, cfg.mMax, cfg.kSet);
            nlohmann::json j;
            j["n"] = n;
            j["c"] = "0";
            nlohmann::json entries = nlohmann::json::array();
            for (const auto& e : data.entries) {
                nlohmann::json row;
                row["lambda"] = e.lambda.parts();
                nlohmann::json ev = nlohmann::json::object();
                for (const auto& [k, vals] : e.E) {
                    nlohmann::json per = nlohmann::json::array();
                    for (const auto& v : vals) per.push_back(v.str());
                    ev[std::to_string(k)] = std::move(per);
                }
                row["E"] = std::move(ev);
                nlohmann::json rs = nlohmann::json::array();
                for (const auto& coords : e.r) {
                    nlohmann::json vec = nlohmann::json::object();
                    for (size_t i = 0; i < coords.size(); ++i)
                        if (!coords[i].isZero()) vec[data.partitions[i].str()] = coords[i].str();
                    rs.push_back(std::move(vec));
                }
                row["r"] = std::move(rs);
                entries.push_back(std::move(row));
            }
            j["entries"] = std::move(entries);
            std::ostringstream name;
            name << "eigen_n" << n << ".json";
            clidetail::writeFile(std::filesystem::path(cfg.cacheDir) / name.str(),
                                 j.dump(2) + "\n");
        }
    } catch (const std::exception& e) {
        log << "spectrum: " << e.what() << "\n";
        return 1;
    }
    log << "spectrum: degrees 0.." << cfg.nMax << " written\n";
    return 0;
}

// Run one of the verifiers and write a machine-readable report; the exit
// code is 0 only when every check passed.
inline int cmdVerify(const RunConfig& cfg, const std::string& which, std::ostream& log,
                     const std::string& version = engineVersion()) {
    cfg.validate();
    TablesResult tables = ensureTables(cfg, log, version);
    const std::vector<GLevel>& levels = tables.levels;
    nlohmann::json report;
    report["which"] = which;
    bool pass = true;
    nlohmann::json details = nlohmann::json::array();

    try {
        if (which == "thm1") {
            for (int n = 0; n <= cfg.nMax; ++n) {
                EigenData data = perturb(levels, n, 1, clidetail::perturbLevels(cfg, cfg.kMax));
                SpectralReport r = verifyFirstCorrection(data);
                if (!r.pass) pass = false;
                for (const auto& m : r.mismatches) details.push_back(m);
            }
        } else if (which == "thm2") {
            for (int n = 0; n <= cfg.nMax; ++n) {
                EigenData data = perturb(levels, n, 1, cfg.kSet);
                SpectralReport r = verifyStripFormula(data);
                if (!r.pass) pass = false;
                for (const auto& m : r.mismatches) details.push_back(m);
            }
        } else if (which == "commute") {
            const int kTop = std::min(cfg.kMax, 4);
            for (int n = 0; n <= cfg.nMax; ++n) {
                std::vector<std::vector<ExactMatrix>> h;  // h[k][j]
                for (int k = 0; k <= kTop; ++k) {
                    std::vector<ExactMatrix> blocks;
                    for (int j = 0; j <= cfg.jMax; ++j)
                        blocks.push_back(
                            extractHamiltonian(levels[static_cast<size_t>(k + 1)], j, n, Rational(0)));
                    h.push_back(std::move(blocks));
                }
                const int dim = h[0][0].rows();
                for (int k = 0; k <= kTop; ++k)
                    for (int l = 0; l <= kTop; ++l)
                        for (int m = 0; m <= cfg.jMax; ++m) {
                            ExactMatrix total(dim, dim);
                            for (int j1 = 0; j1 <= m; ++j1) {
                                const ExactMatrix& a = h[static_cast<size_t>(k)][static_cast<size_t>(j1)];
                                const ExactMatrix& b = h[static_cast<size_t>(l)][static_cast<size_t>(m - j1)];
                                for (int r = 0; r < dim; ++r)
                                    for (int c = 0; c < dim; ++c) {
                                        Rational s;
                                        for (int t = 0; t < dim; ++t)
                                            s += a.at(r, t) * b.at(t, c) - b.at(r, t) * a.at(t, c);
                                        total.at(r, c) += s;
                                    }
                            }
                            for (int r = 0; r < dim && pass; ++r)
                                for (int c = 0; c < dim && pass; ++c)
                                    if (!total.at(r, c).isZero()) {
                                        pass = false;
                                        std::ostringstream os;
                                        os << "commutator nonzero: k=" << k << " l=" << l
                                           << " order=" << m << " n=" << n;
                                        details.push_back(os.str());
                                    }
                        }
            }
        } else if (which == "oracle") {
            const int kTop = std::min(cfg.kMax, 6);
            for (int k = 0; k <= kTop; ++k)
                for (int n = 0; n <= cfg.nMax; ++n) {
                    const GLevel& g = levels[static_cast<size_t>(k + 1)];
                    if (!(extractHamiltonian(g, 0, n, Rational(0)) == gHat0Matrix(k, n, Rational(0)))) {
                        pass = false;
                        details.push_back("dispersionless mismatch at k=" + std::to_string(k) +
                                          " n=" + std::to_string(n));
                    }
                    if (cfg.jMax >= 1 &&
                        !(extractHamiltonian(g, 1, n, Rational(0)) == gHat1Matrix(k, n))) {
                        pass = false;
                        details.push_back("first dispersive mismatch at k=" + std::to_string(k) +
                                          " n=" + std::to_string(n));
                    }
                }
        } else if (which == "quasimod") {
            std::vector<QExpr> exprs;
            std::vector<std::pair<int, int>> tags;  // (k, m)
            for (int k = 0; k <= cfg.kMax; ++k) {
                exprs.push_back(QExpr::monomial(0, {k + 2}));
                tags.emplace_back(k, 0);
            }
            for (int m = 1; m <= cfg.mMax; ++m) {
                auto fits = clidetail::eigenvalueFits(levels, cfg, cfg.kMax, m, cfg.nMax);
                for (const auto& [k, f] : fits) {
                    exprs.push_back(f);
                    tags.emplace_back(k, m);
                }
            }
            auto series = qBrackets(exprs, cfg.qtrunc);
            for (size_t i = 0; i < series.size(); ++i) {
                const int weight = tags[i].first + 2 + tags[i].second;
                QuasimodularResult r = quasimodularCheck(series[i], weight, cfg.qtrunc);
                nlohmann::json row;
                row["k"] = tags[i].first;
                row["m"] = tags[i].second;
                row["weight"] = weight;
                row["pass"] = r.pass;
                details.push_back(std::move(row));
                if (!r.pass) pass = false;
            }
        } else if (which == "appendix") {
            nlohmann::json rows = nlohmann::json::array();
            std::ostringstream csv;
            csv << "nu,D,covered,pass,poly\n";
            for (int m = 0; m <= cfg.mMax; ++m) {
                auto fits = clidetail::eigenvalueFits(levels, cfg, cfg.kMax, m, cfg.nMax);
                StructureFit sf = fitStructurePolynomials(fits, m);
                if (!sf.reconstructed) {
                    pass = false;
                    details.push_back("order " + std::to_string(m) +
                                      ": records do not rebuild the fitted eigenvalues");
                }
                for (const auto& rec : sf.records) {
                    nlohmann::json row;
                    row["nu"] = rec.nu.parts();
                    row["D"] = rec.D;
                    nlohmann::json poly = nlohmann::json::array();
                    for (const auto& c : rec.poly) poly.push_back(c.str());
                    row["poly"] = std::move(poly);
                    bool rowPass = !rec.falsified &&
                                   static_cast<int>(rec.poly.size()) <= 2 * rec.D + 1;
                    Rational ref;
                    bool covered = referenceStructureValue(rec.D, rec.nu, 0, ref);
                    if (covered)
                        for (int k = 0; k <= cfg.kMax && rowPass; ++k) {
                            referenceStructureValue(rec.D, rec.nu, k, ref);
                            if (!(rec.eval(k) == ref)) rowPass = false;
                        }
                    row["covered"] = covered;
                    row["pass"] = rowPass;
                    if (!rowPass) pass = false;
                    csv << rec.nu.str() << "," << rec.D << "," << (covered ? "yes" : "no") << ","
                        << (rowPass ? "PASS" : "FAIL") << ",";
                    for (size_t i = 0; i < rec.poly.size(); ++i)
                        csv << (i ? " " : "") << rec.poly[i].str();
                    csv << "\n";
                    rows.push_back(std::move(row));
                }
            }
            details = std::move(rows);
            if (cfg.format == "csv")
                clidetail::writeFile(std::filesystem::path(cfg.cacheDir) / "verify_appendix.csv",
                                     csv.str());
        } else {
            log << "verify: unknown target '" << which << "'\n";
            return 2;
        }
    } catch (const std::exception& e) {
        log << "verify " << which << ": " << e.what() << "\n";
        report["error"] = e.what();
        report["pass"] = false;
        clidetail::writeFile(std::filesystem::path(cfg.cacheDir) / ("verify_" + which + ".json"),
                             report.dump(2) + "\n");
        return 1;
    }

    report["pass"] = pass;
    report["details"] = std::move(details);
    clidetail::writeFile(std::filesystem::path(cfg.cacheDir) / ("verify_" + which + ".json"),
                         report.dump(2) + "\n");
    log << "verify " << which << ": " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

// Tabulate the double Hodge values reachable from the computed tables.
inline int cmdHodge(const RunConfig& cfg, int gMax, std::ostream& log,
                    const std::string& version = engineVersion()) {
    cfg.validate();
    if (gMax < 2) throw std::invalid_argument("hodge: gMax must be at least 2");
    TablesResult tables = ensureTables(cfg, log, version);
    nlohmann::json rows = nlohmann::json::array();
    bool pass = true;
    for (int g = 2; g <= gMax; ++g) {
        if (2 * g - 3 <= cfg.kMax && cfg.jMax >= 1) {
            Rational v = hodgeIntegral(tables.levels, g, 1);
            nlohmann::json row;
            row["g"] = g;
            row["s"] = 1;
            row["value"] = v.str();
            row["rigor"] = "theorem";
            if (!(v == hodgeClosedForm(g))) {
                row["rigor"] = "MISMATCH";
                pass = false;
            }
            rows.push_back(std::move(row));
        }
        if (g >= 3 && 2 * g - 4 <= cfg.kMax && cfg.jMax >= 2) {
            Rational v = hodgeIntegral(tables.levels, g, 2);
            nlohmann::json row;
            row["g"] = g;
            row["s"] = 2;
            row["value"] = v.str();
            row["rigor"] = "computed";
            row["conjecturalFormMatches"] = (v == hodgeClosedFormSecondConjectural(g));
            rows.push_back(std::move(row));
        }
    }
    nlohmann::json out;
    out["rows"] = std::move(rows);
    out["pass"] = pass;
    clidetail::writeFile(std::filesystem::path(cfg.cacheDir) / "hodge.json", out.dump(2) + "\n");
    log << "hodge: " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

}  // namespace qkdv

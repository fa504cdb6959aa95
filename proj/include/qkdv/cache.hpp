#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gtable.hpp"

namespace qkdv {

// Version string baked into every cache key: any change to the symbolic
// engine must bump it so that stale tables are never reused.
inline const char* engineVersion() { return "qkdv-1"; }

// FNV-1a, 64 bit, as a fixed-width hex string.
inline std::string fnv64Hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex;
    for (int i = 15; i >= 0; --i) os << ((h >> (4 * i)) & 0xF);
    return os.str();
}

inline nlohmann::json polyToJson(const MultiPoly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : p.terms()) {
        nlohmann::json t;
        t["e"] = e;
        t["c"] = c.str();
        terms.push_back(std::move(t));
    }
    return terms;
}

inline MultiPoly polyFromJson(int nvars, const nlohmann::json& j) {
    MultiPoly p(nvars);
    for (const auto& t : j) {
        std::vector<int> e = t.at("e").get<std::vector<int>>();
        if (static_cast<int>(e.size()) != nvars)
            throw std::runtime_error("polyFromJson: exponent arity mismatch");
        p.addTerm(e, Rational::fromString(t.at("c").get<std::string>()));
    }
    return p;
}

// One cached block: the [j] part of a level table.
inline nlohmann::json gtableToJson(const GLevel& g, int j) {
    nlohmann::json out;
    out["k"] = g.level();
    out["j"] = j;
    nlohmann::json shapes = nlohmann::json::array();
    nlohmann::json constant = nlohmann::json::object();  // hbar power -> value
    for (const auto& [key, p] : g.shapes()) {
        if (key.j != j) continue;
        if (key.n == 0) constant[std::to_string(key.h)] = p.constantTerm().str();
        nlohmann::json s;
        s["n"] = key.n;
        s["hbar"] = key.h;
        s["poly"] = polyToJson(p);
        shapes.push_back(std::move(s));
    }
    out["shapes"] = std::move(shapes);
    out["constant"] = constant;
    return out;
}

// Merge a cached block back into a level table.
inline void gtableFromJson(GLevel& g, const nlohmann::json& block) {
    if (block.at("k").get<int>() != g.level())
        throw std::runtime_error("gtableFromJson: level mismatch");
    const int j = block.at("j").get<int>();
    for (const auto& s : block.at("shapes")) {
        const int n = s.at("n").get<int>();
        const int h = s.at("hbar").get<int>();
        g.setShape(ShapeKey{n, h, j}, polyFromJson(n, s.at("poly")));
    }
}

// Content-addressed store of level tables under a directory. Keys combine
// (k, j) with the engine version; payloads carry their own content hash so
// corruption is detected on load.
class TableCache {
public:
    explicit TableCache(std::filesystem::path dir, std::string version = engineVersion())
        : dir_(std::move(dir)), version_(std::move(version)) {
        std::filesystem::create_directories(dir_);
        load();
    }

    const std::filesystem::path& dir() const { return dir_; }

    std::string key(int k, int j) const {
        std::ostringstream os;
        os << "gtable:" << k << ":" << j << ":" << version_;
        return fnv64Hex(os.str());
    }

    bool has(int k, int j) const { return manifest_.contains(key(k, j)); }

    // Store a block; returns false when an identical entry already exists.
    bool store(const GLevel& g, int j) {
        const std::string id = key(g.level(), j);
        const std::string payload = gtableToJson(g, j).dump();
        const std::string hash = fnv64Hex(payload);
        if (manifest_.contains(id) && manifest_.at(id).at("hash") == hash && loadBlock(g.level(), j))
            return false;
        std::ofstream out(dir_ / fileName(g.level(), j), std::ios::trunc);
        out << payload << "\n";
        nlohmann::json entry;
        entry["file"] = fileName(g.level(), j);
        entry["hash"] = hash;
        manifest_[id] = std::move(entry);
        save();
        return true;
    }

    // Load a block; empty when absent, corrupt, or from another version.
    std::optional<nlohmann::json> loadBlock(int k, int j) const {
        const std::string id = key(k, j);
        if (!manifest_.contains(id)) return std::nullopt;
        std::ifstream in(dir_ / manifest_.at(id).at("file").get<std::string>());
        if (!in) return std::nullopt;
        std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        while (!payload.empty() && payload.back() == '\n') payload.pop_back();
        if (fnv64Hex(payload) != manifest_.at(id).at("hash").get<std::string>()) return std::nullopt;
        return nlohmann::json::parse(payload, nullptr, false).is_discarded()
                   ? std::nullopt
                   : std::optional<nlohmann::json>(nlohmann::json::parse(payload));
    }

private:
    std::string fileName(int k, int j) const {
        std::ostringstream os;
        os << "gtable_k" << k << "_j" << j << ".json";
        return os.str();
    }

    void load() {
        std::ifstream in(dir_ / "manifest.json");
        if (!in) return;
        nlohmann::json m = nlohmann::json::parse(in, nullptr, false);
        if (!m.is_discarded() && m.is_object()) manifest_ = std::move(m);
    }

    void save() const {
        std::ofstream out(dir_ / "manifest.json", std::ios::trunc);
        out << manifest_.dump(2) << "\n";
    }

    std::filesystem::path dir_;
    std::string version_;
    nlohmann::json manifest_ = nlohmann::json::object();
};

}  // namespace qkdv

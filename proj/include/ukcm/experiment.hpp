#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ukcm/errors.hpp"
#include "ukcm/geometry.hpp"

namespace ukcm {

inline std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Flat key/value configuration with one section per command. File values are
// overridden by CLI flags; the echoed form reproduces the effective settings.
class ExperimentConfig {
  public:
    void set(const std::string& section, const std::string& key, const std::string& value) {
        auto& sec = sections_[section];
        for (auto& [k, v] : sec)
            if (k == key) {
                v = value;
                return;
            }
        sec.emplace_back(key, value);
    }
    bool has(const std::string& section, const std::string& key) const {
        auto it = sections_.find(section);
        if (it == sections_.end()) return false;
        for (const auto& [k, v] : it->second)
            if (k == key) return true;
        return false;
    }
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback = "") const {
        auto it = sections_.find(section);
        if (it == sections_.end()) return fallback;
        for (const auto& [k, v] : it->second)
            if (k == key) return v;
        return fallback;
    }
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const {
        std::string s = get(section, key);
        return s.empty() ? fallback : std::stod(s);
    }
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const {
        std::string s = get(section, key);
        return s.empty() ? fallback : std::stoll(s);
    }

    static ExperimentConfig parse(std::istream& is) {
        ExperimentConfig cfg;
        std::string line, section = "global";
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            auto trim = [](std::string s) {
                auto b = s.find_first_not_of(" \t\r");
                auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                auto close = line.find(']');
                if (close == std::string::npos)
                    throw ParseError(lineno, "unterminated section header");
                section = trim(line.substr(1, close - 1));
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError(lineno, "expected key = value");
            cfg.set(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return cfg;
    }

    static ExperimentConfig load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::invalid_argument("cannot open config file '" + path + "'");
        return parse(f);
    }

    std::string echo() const {
        std::ostringstream os;
        for (const auto& [sec, kvs] : sections_) {
            os << "[" << sec << "]\n";
            for (const auto& [k, v] : kvs) os << k << " = " << v << "\n";
        }
        return os.str();
    }

  private:
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections_;
};

// Pack construction from decimal strings; the C constants are stored squared.
inline ConstantPack pack_from_strings(std::int64_t r2,
                                      const std::map<std::string, std::string>& vals) {
    ConstantPack p = ConstantPack::defaults_for(r2);
    auto sq = [](const std::string& s) {
        Rat v = Rat::parse(s);
        return v * v;
    };
    for (const auto& [k, v] : vals) {
        if (k == "c1")
            p.c1 = Rat::parse(v);
        else if (k == "c2p")
            p.c2p_sq = sq(v);
        else if (k == "c2")
            p.c2_sq = sq(v);
        else if (k == "c3")
            p.c3_sq = sq(v);
        else if (k == "c4p")
            p.c4p_sq = sq(v);
        else if (k == "c4")
            p.c4_sq = sq(v);
        else if (k == "c5")
            p.c5_sq = sq(v);
        else if (k == "c6")
            p.c6_sq = sq(v);
        else if (k == "k")
            p.K = Rat::parse(v);
        else if (k == "allow-small-k")
            p.allow_small_k = v == "true" || v == "1";
        else
            throw std::invalid_argument("unknown pack key '" + k + "'");
    }
    p.validate();
    return p;
}

}  // namespace ukcm

#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ukcm/errors.hpp"
#include "ukcm/geometry.hpp"

namespace ukcm {

// Finite set of finite nonempty update rules, none containing the origin.
struct UpdateFamily {
    std::string name;
    std::vector<std::vector<Vec>> rules;

    void canonicalize() {
        for (auto& r : rules) {
            std::sort(r.begin(), r.end());
            r.erase(std::unique(r.begin(), r.end()), r.end());
        }
        std::sort(rules.begin(), rules.end());
        rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
    }

    void validate() const {
        if (rules.empty()) throw std::invalid_argument("family: no rules");
        for (const auto& r : rules) {
            if (r.empty()) throw std::invalid_argument("family: empty rule");
            for (const Vec& s : r)
                if (s.x == 0 && s.y == 0)
                    throw std::invalid_argument("family: rule contains the origin");
        }
    }

    // Squared range: max pairwise squared distance over U u {0}, per rule.
    std::int64_t range_sq() const {
        std::int64_t best = 0;
        for (const auto& r : rules) {
            std::vector<Vec> pts = r;
            pts.push_back({0, 0});
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j)
                    best = std::max(best, dist2(pts[i], pts[j]));
        }
        return best;
    }
    double range() const { return std::sqrt((double)range_sq()); }

    // All distinct rule sites; used for influence offsets and stable arcs.
    std::vector<Vec> all_sites() const {
        std::vector<Vec> out;
        for (const auto& r : rules) out.insert(out.end(), r.begin(), r.end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    UpdateFamily transformed(std::int64_t m00, std::int64_t m01, std::int64_t m10,
                             std::int64_t m11) const {
        UpdateFamily f;
        f.name = name;
        for (const auto& r : rules) {
            std::vector<Vec> nr;
            nr.reserve(r.size());
            for (const Vec& s : r)
                nr.push_back({m00 * s.x + m01 * s.y, m10 * s.x + m11 * s.y});
            f.rules.push_back(std::move(nr));
        }
        f.canonicalize();
        return f;
    }
};

// Family file format: '#' comments, optional "name <label>", and rule lines
// "rule x1,y1 x2,y2 ...".
inline UpdateFamily parse_family(std::istream& is) {
    UpdateFamily fam;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "name") {
            std::string label;
            if (!(ls >> label)) throw ParseError(lineno, "name line without a label");
            fam.name = label;
        } else if (head == "rule") {
            std::vector<Vec> rule;
            std::string tok;
            while (ls >> tok) {
                auto comma = tok.find(',');
                if (comma == std::string::npos)
                    throw ParseError(lineno, "expected x,y pair, got '" + tok + "'");
                Vec p;
                try {
                    p.x = std::stoll(tok.substr(0, comma));
                    p.y = std::stoll(tok.substr(comma + 1));
                } catch (const std::exception&) {
                    throw ParseError(lineno, "bad integer in '" + tok + "'");
                }
                if (p.x == 0 && p.y == 0)
                    throw ParseError(lineno, "rule contains the origin");
                rule.push_back(p);
            }
            if (rule.empty()) throw ParseError(lineno, "empty rule");
            fam.rules.push_back(std::move(rule));
        } else {
            throw ParseError(lineno, "unknown directive '" + head + "'");
        }
    }
    if (fam.rules.empty()) throw ParseError(lineno ? lineno : 1, "no rules in family file");
    fam.canonicalize();
    fam.validate();
    return fam;
}

inline UpdateFamily parse_family_string(const std::string& text) {
    std::istringstream is(text);
    return parse_family(is);
}

inline void write_family(std::ostream& os, const UpdateFamily& fam) {
    if (!fam.name.empty()) os << "name " << fam.name << "\n";
    for (const auto& r : fam.rules) {
        os << "rule";
        for (const Vec& p : r) os << " " << p.x << "," << p.y;
        os << "\n";
    }
}

// u is unstable iff some rule fits inside the open half-plane H_u.
inline bool is_stable(const UpdateFamily& fam, Direction u) {
    for (const auto& rule : fam.rules) {
        bool all_neg = true;
        for (const Vec& s : rule)
            if (dot(u.vec(), s) >= 0) {
                all_neg = false;
                break;
            }
        if (all_neg) return false;
    }
    return true;
}

// Finite union of closed arcs with rational endpoints; arcs are disjoint,
// maximal and sorted by angle. whole_circle covers the degenerate case of a
// family stable in every direction.
struct StableSet {
    std::vector<Arc> arcs;
    bool whole_circle = false;

    bool contains(Direction u) const {
        if (whole_circle) return true;
        for (const auto& a : arcs)
            if (a.contains(u)) return true;
        return false;
    }
    bool has_fat() const {
        if (whole_circle) return true;
        for (const auto& a : arcs)
            if (!a.degenerate()) return true;
        return false;
    }
    bool finite() const { return !has_fat(); }
    // isolated means: stable and alone (a degenerate arc of the set)
    bool is_isolated(Direction u) const {
        if (whole_circle) return false;
        for (const auto& a : arcs)
            if (a.contains(u)) return a.degenerate();
        return false;
    }
    std::vector<Direction> isolated_directions() const {
        std::vector<Direction> out;
        if (whole_circle) return out;
        for (const auto& a : arcs)
            if (a.degenerate()) out.push_back(a.lo);
        return out;
    }
    std::vector<Arc> fat_arcs() const {
        std::vector<Arc> out;
        for (const auto& a : arcs)
            if (!a.degenerate()) out.push_back(a);
        return out;
    }
};

// Stability flips only at directions perpendicular to some rule site, so the
// circle is subdivided at those directions and stability is tested once per
// piece (each critical direction, plus a rational midpoint of each open gap).
inline StableSet stable_set(const UpdateFamily& fam) {
    std::vector<Direction> crit;
    for (const Vec& s : fam.all_sites()) {
        crit.push_back(Direction(rot90(s)));
        crit.push_back(Direction(-rot90(s)));
    }
    std::sort(crit.begin(), crit.end(),
              [](Direction a, Direction b) { return angle_less(a, b); });
    crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

    const std::size_t m = crit.size();
    StableSet ss;
    // pieces: 2m of them, alternating point / open gap, indexed 2i (point i)
    // and 2i+1 (gap between i and i+1)
    std::vector<bool> stable(2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        stable[2 * i] = is_stable(fam, crit[i]);
        Direction a = crit[i], b = crit[(i + 1) % m];
        Direction mid = (a.antipode() == b) ? a.perp() : Direction(a.vec() + b.vec());
        stable[2 * i + 1] = is_stable(fam, mid);
    }

    bool all = true, any = false;
    for (bool s : stable) {
        all = all && s;
        any = any || s;
    }
    if (all) {
        ss.whole_circle = true;
        return ss;
    }
    if (!any) return ss;

    // rotate so that piece `start` is unstable, then collect maximal stable runs
    std::size_t start = 0;
    while (stable[start]) ++start;
    auto piece_lo = [&](std::size_t pc) { return crit[pc / 2]; };
    auto piece_hi = [&](std::size_t pc) {
        return pc % 2 == 0 ? crit[pc / 2] : crit[(pc / 2 + 1) % m];
    };
    std::size_t n = 2 * m;
    std::size_t i = 0;
    while (i < n) {
        std::size_t pc = (start + i) % n;
        if (!stable[pc]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && stable[(start + j) % n]) ++j;
        std::size_t first = (start + i) % n, last = (start + j - 1) % n;
        // the unstable set is open, so maximal stable runs begin and end on
        // point pieces
        ss.arcs.push_back(Arc{piece_lo(first), piece_hi(last)});
        i = j;
    }
    std::sort(ss.arcs.begin(), ss.arcs.end(),
              [](const Arc& a, const Arc& b) { return angle_less(a.lo, b.lo); });
    return ss;
}

}  // namespace ukcm

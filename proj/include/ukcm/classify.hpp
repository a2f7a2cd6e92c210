#pragma once

#include <map>
#include <string>
#include <vector>

#include "ukcm/difficulty.hpp"
#include "ukcm/family.hpp"

namespace ukcm {

enum class CoarseClass { Supercritical, Critical, Subcritical };

inline const char* to_string(CoarseClass c) {
    switch (c) {
        case CoarseClass::Supercritical: return "supercritical";
        case CoarseClass::Critical: return "critical";
        case CoarseClass::Subcritical: return "subcritical";
    }
    return "?";
}

namespace detail {

// Open semicircle O_v = {w : <v,w> < 0}; its closed complement is the arc
// from -rot90(v) counterclockwise to rot90(v).
inline Arc closed_complement(Direction v) {
    return Arc{Direction(-rot90(v.vec())), Direction(rot90(v.vec()))};
}
inline bool strictly_inside_semicircle(Direction v, Direction w) {
    return dot(v.vec(), w.vec()) < 0;
}
inline bool arc_meets_semicircle(Direction v, const Arc& a) {
    return !a.inside(closed_complement(v));
}

inline std::vector<Direction> dedup_sorted(std::vector<Direction> ds) {
    std::sort(ds.begin(), ds.end(),
              [](Direction a, Direction b) { return angle_less(a, b); });
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    return ds;
}

// Critical angles plus midpoints between consecutive ones.
inline std::vector<Direction> semicircle_candidates(const StableSet& ss) {
    std::vector<Direction> crit;
    for (const Arc& a : ss.arcs) {
        crit.push_back(a.lo);
        crit.push_back(a.hi);
        crit.push_back(a.lo.antipode());
        crit.push_back(a.hi.antipode());
    }
    crit = dedup_sorted(crit);
    std::vector<Direction> out = crit;
    for (std::size_t i = 0; i < crit.size(); ++i) {
        Direction a = crit[i], b = crit[(i + 1) % crit.size()];
        if (a == b) continue;
        out.push_back(a.antipode() == b ? a.perp() : Direction(a.vec() + b.vec()));
    }
    return dedup_sorted(out);
}

}  // namespace detail

// Supercritical: some open semicircle misses the stable set entirely.
inline bool has_stable_free_semicircle(const StableSet& ss) {
    if (ss.whole_circle) return false;
    if (ss.arcs.empty()) return true;
    std::vector<Direction> cands;
    for (const Arc& a : ss.arcs)
        for (Direction e : {a.lo, a.hi}) {
            cands.push_back(Direction(rot90(e.vec())));
            cands.push_back(Direction(-rot90(e.vec())));
        }
    for (Direction v : detail::dedup_sorted(cands)) {
        bool free = true;
        for (const Arc& a : ss.arcs)
            if (detail::arc_meets_semicircle(v, a)) {
                free = false;
                break;
            }
        if (free) return true;
    }
    return false;
}

// Critical or better: some open semicircle avoids every fat arc.
inline bool has_fat_free_semicircle(const StableSet& ss) {
    if (ss.whole_circle) return false;
    auto fat = ss.fat_arcs();
    if (fat.empty()) return true;
    std::vector<Direction> cands;
    for (const Arc& a : fat)
        for (Direction e : {a.lo, a.hi}) {
            cands.push_back(Direction(rot90(e.vec())));
            cands.push_back(Direction(-rot90(e.vec())));
        }
    for (Direction v : detail::dedup_sorted(cands)) {
        bool free = true;
        for (const Arc& a : fat)
            if (detail::arc_meets_semicircle(v, a)) {
                free = false;
                break;
            }
        if (free) return true;
    }
    return false;
}

inline CoarseClass coarse_class(const StableSet& ss) {
    if (has_stable_free_semicircle(ss)) return CoarseClass::Supercritical;
    if (has_fat_free_semicircle(ss)) return CoarseClass::Critical;
    return CoarseClass::Subcritical;
}

struct SemicircleScore {
    Direction boundary;               // the semicircle is O_boundary
    bool infinite = false;            // a fat arc meets the semicircle
    int max_finite = 0;               // max isolated difficulty strictly inside
    std::vector<Direction> argmax;    // isolated directions attaining it
};

struct FamilyDifficultyResult {
    DifficultyValue alpha;  // Finite (possibly 0) or Infinite
    Direction witness;      // optimal open semicircle boundary
};

// alpha(U) = min over open semicircles of the max difficulty inside,
// evaluated on the finite candidate set of critical angles and midpoints.
inline FamilyDifficultyResult family_difficulty(
    const StableSet& ss,
    const std::vector<std::pair<Direction, DifficultyValue>>& isolated_difficulties) {
    if (ss.whole_circle) {
        FamilyDifficultyResult out;
        out.witness = Direction(1, 0);
        out.alpha = DifficultyValue::infinite("stable on the whole circle");
        return out;
    }
    std::vector<std::string> unresolved;
    for (const auto& [d, v] : isolated_difficulties)
        if (v.is_unknown())
            unresolved.push_back("(" + std::to_string(d.x()) + "," + std::to_string(d.y()) +
                                 "): " + v.note);
    if (!unresolved.empty()) {
        std::string msg = "insufficient budget; unresolved difficulties:";
        for (const auto& s : unresolved) msg += " " + s;
        throw BudgetError(msg);
    }

    auto fat = ss.fat_arcs();
    std::vector<Direction> cands = detail::semicircle_candidates(ss);
    if (cands.empty()) cands.push_back(Direction(1, 0));

    bool have = false;
    SemicircleScore best;
    for (Direction v : cands) {
        SemicircleScore sc;
        sc.boundary = v;
        for (const Arc& a : fat)
            if (detail::arc_meets_semicircle(v, a)) sc.infinite = true;
        if (!sc.infinite)
            for (const auto& [d, val] : isolated_difficulties)
                if (detail::strictly_inside_semicircle(v, d)) {
                    int fv = val.finite_value();
                    if (fv > sc.max_finite) {
                        sc.max_finite = fv;
                        sc.argmax = {d};
                    } else if (fv == sc.max_finite) {
                        sc.argmax.push_back(d);
                    }
                }
        bool better = !have || (best.infinite && !sc.infinite) ||
                      (!best.infinite && !sc.infinite && sc.max_finite < best.max_finite);
        if (better) {
            best = sc;
            have = true;
        }
    }
    FamilyDifficultyResult out;
    out.witness = best.boundary;
    if (best.infinite)
        out.alpha = DifficultyValue::infinite("every candidate semicircle meets a fat arc");
    else if (best.max_finite == 0)
        out.alpha = DifficultyValue::zero();
    else {
        DifficultyValue v;
        v.kind = DifficultyValue::Kind::Finite;
        v.value = best.max_finite;
        out.alpha = v;
    }
    return out;
}

struct ClassificationReport {
    UpdateFamily family;
    CoarseClass coarse = CoarseClass::Subcritical;
    StableSet stable;
    std::vector<std::pair<Direction, DifficultyValue>> difficulties;  // isolated dirs
    DifficultyValue alpha;
    Direction witness_semicircle;
    char refined = 0;                 // 'a'..'g', critical families only
    std::array<int, 3> exponents{};   // (beta, gamma, delta)
    std::vector<Direction> hard_isolated;
    std::vector<Arc> hard_fat;
    bool opposite_hard_pair = false;  // unbalanced in the theorem sense
    std::string refined_text;

    bool critical() const { return coarse == CoarseClass::Critical; }
};

inline std::array<int, 3> exponents_for_class(char cls) {
    switch (cls) {
        case 'a': return {2, 4, 0};
        case 'b': return {2, 0, 0};
        case 'c': return {1, 3, 0};
        case 'd': return {1, 2, 0};
        case 'e': return {1, 1, 0};
        case 'f': return {1, 0, 1};
        case 'g': return {1, 0, 0};
    }
    throw std::invalid_argument(std::string("unknown refined class '") + cls + "'");
}

inline const char* class_description(char cls) {
    switch (cls) {
        case 'a': return "unbalanced with infinitely many stable directions";
        case 'b': return "balanced with infinitely many stable directions";
        case 'c': return "unbalanced rooted";
        case 'd': return "unbalanced unrooted";
        case 'e': return "balanced rooted";
        case 'f': return "semi-directed";
        case 'g': return "isotropic";
    }
    return "?";
}

inline ClassificationReport classify(const UpdateFamily& fam,
                                     const DifficultyBudget& budget = {}) {
    ClassificationReport rep;
    rep.family = fam;
    rep.stable = stable_set(fam);
    rep.coarse = coarse_class(rep.stable);
    if (rep.coarse == CoarseClass::Supercritical) {
        rep.alpha = DifficultyValue::zero();
        return rep;
    }
    if (rep.coarse == CoarseClass::Subcritical) {
        rep.alpha = DifficultyValue::infinite("subcritical");
        return rep;
    }

    for (Direction d : rep.stable.isolated_directions())
        rep.difficulties.emplace_back(d, difficulty(fam, rep.stable, d, budget));

    auto fd = family_difficulty(rep.stable, rep.difficulties);
    rep.alpha = fd.alpha;
    rep.witness_semicircle = fd.witness;
    if (!rep.alpha.is_finite())
        throw InvariantError("critical family scored an infinite alpha");
    const int alpha = rep.alpha.finite_value();

    for (const auto& [d, v] : rep.difficulties)
        if (v.exceeds(alpha)) rep.hard_isolated.push_back(d);
    rep.hard_fat = rep.stable.fat_arcs();  // every fat-arc direction is hard

    auto iso_hard = [&](Direction d) {
        for (Direction h : rep.hard_isolated)
            if (h == d) return true;
        return false;
    };
    bool opp = false;
    for (Direction d : rep.hard_isolated) {
        if (iso_hard(d.antipode())) opp = true;
        for (const Arc& a : rep.hard_fat)
            if (a.contains(d.antipode())) opp = true;
    }
    for (const Arc& a : rep.hard_fat)
        for (const Arc& b : rep.hard_fat)
            if (a.intersects(b.antipodal())) opp = true;
    rep.opposite_hard_pair = opp;

    if (rep.stable.has_fat()) {
        rep.refined = opp ? 'a' : 'b';
    } else {
        const std::size_t k = rep.hard_isolated.size();
        if (k >= 3 && opp)
            rep.refined = 'c';
        else if (k == 2 && opp)
            rep.refined = 'd';
        else if (k >= 2)
            rep.refined = 'e';
        else if (k == 1)
            rep.refined = 'f';
        else
            rep.refined = 'g';
    }
    rep.exponents = exponents_for_class(rep.refined);
    rep.refined_text = class_description(rep.refined);
    return rep;
}

}  // namespace ukcm

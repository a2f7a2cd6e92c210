#pragma once

#include <chrono>
#include <deque>
#include <unordered_map>
#include <vector>

#include "ukcm/crossing.hpp"
#include "ukcm/errors.hpp"
#include "ukcm/span.hpp"

namespace ukcm {

// Single-flip constrained moves on a finite region. The constraint of a flip
// at s is (s+U) cap R fully infected for some rule U: rule sites outside the
// region are not required (they are read as infected).
class PathSpace {
  public:
    PathSpace(const Parallelogram& region, const UpdateFamily& fam)
        : region_(region), proto_(region, Boundary::all_healthy()) {
        sites_ = proto_.sites();
        if (sites_.size() > 63)
            throw std::invalid_argument("PathSpace: region too large for mask states");
        for (std::size_t i = 0; i < sites_.size(); ++i)
            index_[key(sites_[i])] = (int)i;
        rule_masks_.resize(sites_.size());
        for (std::size_t i = 0; i < sites_.size(); ++i) {
            for (const auto& rule : fam.rules) {
                std::uint64_t m = 0;
                for (const Vec& s : rule) {
                    Vec p = sites_[i] + s;
                    auto it = index_.find(key(p));
                    if (it != index_.end()) m |= 1ull << it->second;
                }
                rule_masks_[i].push_back(m);  // empty in-region part: always legal
            }
        }
    }

    const Parallelogram& region() const { return region_; }
    const std::vector<Vec>& sites() const { return sites_; }
    std::size_t site_count() const { return sites_.size(); }
    int site_index(Vec p) const {
        auto it = index_.find(key(p));
        return it == index_.end() ? -1 : it->second;
    }

    bool legal_flip(std::uint64_t infected_mask, std::size_t site) const {
        for (std::uint64_t rm : rule_masks_[site])
            if ((infected_mask & rm) == rm) return true;
        return false;
    }

    std::uint64_t mask_of(const Configuration& c) const {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < sites_.size(); ++i)
            if (c.in_region(sites_[i]) && c.infected(sites_[i])) m |= 1ull << i;
        return m;
    }

    Configuration config_of(std::uint64_t mask) const {
        Configuration c = proto_;
        for (std::size_t i = 0; i < sites_.size(); ++i)
            if (mask & (1ull << i)) c.infect(sites_[i]);
        return c;
    }

  private:
    static std::uint64_t key(Vec p) {
        return ((std::uint64_t)(p.x + (1 << 20)) << 24) ^ (std::uint64_t)(p.y + (1 << 20));
    }
    Parallelogram region_;
    Configuration proto_;
    std::vector<Vec> sites_;
    std::unordered_map<std::uint64_t, int> index_;
    std::vector<std::vector<std::uint64_t>> rule_masks_;
};

// Consecutive configurations must differ at exactly one site whose constraint
// held before the flip.
inline bool is_legal_path(const std::vector<Configuration>& path,
                          const Parallelogram& region, const UpdateFamily& fam) {
    if (path.empty()) return false;
    PathSpace ps(region, fam);
    std::uint64_t prev = ps.mask_of(path.front());
    for (std::size_t j = 1; j < path.size(); ++j) {
        std::uint64_t cur = ps.mask_of(path[j]);
        std::uint64_t diff = prev ^ cur;
        if (diff == 0 || (diff & (diff - 1)) != 0) return false;
        std::size_t site = (std::size_t)__builtin_ctzll(diff);
        if (!ps.legal_flip(prev, site)) return false;
        prev = cur;
    }
    return true;
}

// Goodness parameters: at most n disjointly spanned critical parallelograms
// and no (ell,h)-crossing anywhere in the region.
struct GoodParams {
    ConstantPack pack;
    Rat ell{2};
    Rat h{2};
    int n = 0;
    CrossingMode mode = CrossingMode::Exact;
};

namespace detail {

inline std::vector<Parallelogram> vertical_strips(const Parallelogram& R, const Rat& ell) {
    std::vector<Parallelogram> out;
    for (std::int64_t off = 0; Rat(off) + ell <= R.c() - R.a(); ++off)
        out.push_back(Parallelogram(R.axes(), R.a() + Rat(off), R.b(),
                                    R.a() + Rat(off) + ell, R.d()));
    return out;
}
inline std::vector<Parallelogram> horizontal_strips(const Parallelogram& R, const Rat& h) {
    std::vector<Parallelogram> out;
    for (std::int64_t off = 0; Rat(off) + h <= R.d() - R.b(); ++off)
        out.push_back(Parallelogram(R.axes(), R.a(), R.b() + Rat(off), R.c(),
                                    R.b() + Rat(off) + h));
    return out;
}

}  // namespace detail

// Direct n-goodness check for one configuration.
inline bool is_n_good(const Configuration& cfg, const Parallelogram& R,
                      const UpdateFamily& fam, const GoodParams& gp) {
    SpanParams sp = SpanParams::from_pack(R.axes(), gp.pack);
    if (span(cfg, fam, sp).max_disjoint_in_range(gp.pack.crit_lo_sq(), gp.pack.k_sq()) >
        gp.n)
        return false;
    CrossingOptions co{gp.mode, 64};
    for (const auto& s : detail::vertical_strips(R, gp.ell))
        if (crossing_event(cfg, s, R.axes().u1, fam, gp.pack, co)) return false;
    for (const auto& s : detail::horizontal_strips(R, gp.h))
        if (crossing_event(cfg, s, R.axes().u2, fam, gp.pack, co)) return false;
    return true;
}

struct BottleneckInstance {
    UpdateFamily family;
    Parallelogram region = Parallelogram::box(0, 0, 3, 3);
    GoodParams good;
    Parallelogram core = Parallelogram::box(1, 1, 2, 2);
    std::int64_t site_budget = 20;
    bool collect_reachable = false;
};

struct BottleneckStats {
    std::uint64_t state_space = 0;
    std::uint64_t good_states = 0;
    std::uint64_t start_states = 0;
    std::uint64_t reachable = 0;
    std::uint64_t frontier_max = 0;
    double seconds = 0;
};

struct BottleneckResult {
    bool verified = false;
    BottleneckStats stats;
    std::vector<std::uint64_t> counterexample_masks;  // empty when verified
    std::vector<std::uint64_t> reachable_masks;       // with collect_reachable
};

// Explicit-state search of V(n,R): breadth-first from every 0-good
// configuration through n-good legal flips. Verified when no reachable state
// has a spanned critical parallelogram intersecting the core; otherwise a
// shortest counterexample path is returned.
inline BottleneckResult verify_bottleneck(const BottleneckInstance& inst) {
    auto t0 = std::chrono::steady_clock::now();
    {
        Configuration probe(inst.region, Boundary::all_healthy());
        if (probe.site_count() > inst.site_budget)
            throw BudgetError("verify_bottleneck: region has " +
                              std::to_string(probe.site_count()) + " sites, budget " +
                              std::to_string(inst.site_budget));
    }
    PathSpace ps(inst.region, inst.family);
    const std::size_t nsites = ps.site_count();

    // crossing tables per strip, exact by construction of the state space
    std::vector<CrossingTable> tables;
    for (const auto& s : detail::vertical_strips(inst.region, inst.good.ell))
        tables.emplace_back(s, inst.region.axes().u1, inst.family, inst.good.pack,
                            inst.site_budget);
    for (const auto& s : detail::horizontal_strips(inst.region, inst.good.h))
        tables.emplace_back(s, inst.region.axes().u2, inst.family, inst.good.pack,
                            inst.site_budget);

    const std::uint64_t nstates = 1ull << nsites;
    SpanParams sp = SpanParams::from_pack(inst.region.axes(), inst.good.pack);
    const Rat lo = inst.good.pack.crit_lo_sq(), hi = inst.good.pack.k_sq();

    std::vector<std::int8_t> disjoint_count(nstates, -1);
    std::vector<std::int8_t> core_hit(nstates, -1);
    auto analyze = [&](std::uint64_t m) {
        Configuration c = ps.config_of(m);
        SpanTree t = span(c, inst.family, sp);
        int cnt = t.max_disjoint_in_range(lo, hi);
        disjoint_count[m] = (std::int8_t)std::min(cnt, 100);
        core_hit[m] = critical_span_intersecting(t, inst.good.pack, inst.core) ? 1 : 0;
    };
    auto crossing_bad = [&](std::uint64_t m) {
        Configuration c = ps.config_of(m);
        for (const auto& tab : tables)
            if (tab.event(c)) return true;
        return false;
    };
    std::vector<std::int8_t> crossed(nstates, -1);
    auto good_level = [&](std::uint64_t m) -> int {  // -1 crossing-bad, else count
        if (crossed[m] < 0) crossed[m] = crossing_bad(m) ? 1 : 0;
        if (crossed[m]) return -1;
        if (disjoint_count[m] < 0) analyze(m);
        return disjoint_count[m];
    };

    BottleneckResult res;
    res.stats.state_space = nstates;
    std::vector<std::int32_t> parent(nstates, -2);  // -2 unvisited, -1 source
    std::deque<std::uint64_t> queue;
    for (std::uint64_t m = 0; m < nstates; ++m) {
        int lvl = good_level(m);
        if (lvl >= 0 && lvl <= inst.good.n) ++res.stats.good_states;
        if (lvl == 0) {  // G(R)
            parent[m] = -1;
            queue.push_back(m);
            ++res.stats.start_states;
        }
    }

    std::uint64_t violator = UINT64_MAX;
    while (!queue.empty()) {
        res.stats.frontier_max = std::max(res.stats.frontier_max, (std::uint64_t)queue.size());
        std::uint64_t m = queue.front();
        queue.pop_front();
        ++res.stats.reachable;
        if (inst.collect_reachable) res.reachable_masks.push_back(m);
        if (core_hit[m] < 0) analyze(m);
        if (core_hit[m] == 1) {
            violator = m;
            break;
        }
        for (std::size_t s = 0; s < nsites; ++s) {
            if (!ps.legal_flip(m, s)) continue;
            std::uint64_t next = m ^ (1ull << s);
            if (parent[next] != -2) continue;
            int lvl = good_level(next);
            if (lvl < 0 || lvl > inst.good.n) continue;
            parent[next] = (std::int32_t)s;
            queue.push_back(next);
        }
    }
    if (violator == UINT64_MAX) {
        res.verified = true;
    } else {
        std::vector<std::uint64_t> back;
        std::uint64_t cur = violator;
        back.push_back(cur);
        while (parent[cur] >= 0) {
            cur ^= 1ull << parent[cur];
            back.push_back(cur);
        }
        res.counterexample_masks.assign(back.rbegin(), back.rend());
    }
    res.stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace ukcm

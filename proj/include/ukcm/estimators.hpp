#pragma once

#include <atomic>
#include <thread>

#include "ukcm/closure.hpp"
#include "ukcm/crossing.hpp"
#include "ukcm/kcm.hpp"
#include "ukcm/span.hpp"
#include "ukcm/stats.hpp"

namespace ukcm {

namespace detail {

// Deterministic parallel Monte Carlo: trial i draws from stream(seed, i),
// the reduction is a plain hit count so worker scheduling cannot matter.
template <class TrialFn>
std::int64_t count_hits(std::int64_t trials, int workers, const TrialFn& fn) {
    if (workers < 1) workers = (int)std::thread::hardware_concurrency();
    if (workers < 1) workers = 1;
    std::atomic<std::int64_t> next{0}, hits{0};
    auto work = [&]() {
        std::int64_t local = 0;
        for (;;) {
            std::int64_t i = next.fetch_add(1);
            if (i >= trials) break;
            if (fn(i)) ++local;
        }
        hits.fetch_add(local);
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    return hits.load();
}

}  // namespace detail

// Monte Carlo frequency of the event "D's own bounding box is spanned" under
// product-Bernoulli(q) samples on D; the rho estimator at one critical shape.
inline Estimate estimate_spanning_probability(const Parallelogram& d,
                                              const UpdateFamily& fam,
                                              const ConstantPack& pack, double q,
                                              std::int64_t trials, std::uint64_t seed,
                                              int workers = 0) {
    if (trials < 1) throw std::invalid_argument("estimate_spanning_probability: trials < 1");
    SpanParams sp = SpanParams::from_pack(d.axes(), pack);
    std::int64_t hits = detail::count_hits(trials, workers, [&](std::int64_t i) {
        SplitMix64 rng = stream(seed, (std::uint64_t)i);
        Configuration c = sample_equilibrium(d, q, rng);
        if (c.infected_count() == 0) return false;
        SpanTree t = span(c, fam, sp);
        for (int r : t.roots) {
            const auto& b = t.nodes[(std::size_t)r].bbox;
            if (b.contains_parallelogram(d) && d.contains_parallelogram(b)) return true;
        }
        return false;
    });
    return proportion_estimate(hits, trials);
}

// Whether one fixed configuration spans its own region box.
inline bool spans_own_box(const Configuration& c, const UpdateFamily& fam,
                          const ConstantPack& pack) {
    if (c.infected_count() == 0) return false;
    SpanParams sp = SpanParams::from_pack(c.region().axes(), pack);
    SpanTree t = span(c, fam, sp);
    for (int r : t.roots) {
        const auto& b = t.nodes[(std::size_t)r].bbox;
        if (b.contains_parallelogram(c.region()) && c.region().contains_parallelogram(b))
            return true;
    }
    return false;
}

struct CrossingEstimate {
    Estimate est;
    CrossingMode mode = CrossingMode::AsIs;
    // AsIs and GreedyThin detect sub-events of C_R^u: they under-detect
    bool under_detects = true;
};

inline CrossingEstimate estimate_crossing_probability(const Parallelogram& r, Direction u,
                                                      const UpdateFamily& fam,
                                                      const ConstantPack& pack, double q,
                                                      std::int64_t trials,
                                                      std::uint64_t seed, CrossingMode mode,
                                                      int workers = 0) {
    if (trials < 1) throw std::invalid_argument("estimate_crossing_probability: trials < 1");
    CrossingEstimate out;
    out.mode = mode;
    out.under_detects = mode != CrossingMode::Exact;
    std::int64_t hits = 0;
    if (mode == CrossingMode::Exact) {
        CrossingTable table(r, u, fam, pack, 20);
        const auto& sites = table.sites();
        hits = detail::count_hits(trials, workers, [&](std::int64_t i) {
            SplitMix64 rng = stream(seed, (std::uint64_t)i);
            std::uint64_t mask = 0;
            for (std::size_t s = 0; s < sites.size(); ++s)
                if (rng.bernoulli(q)) mask |= 1ull << s;
            return table.event(mask);
        });
    } else {
        hits = detail::count_hits(trials, workers, [&](std::int64_t i) {
            SplitMix64 rng = stream(seed, (std::uint64_t)i);
            Configuration c = sample_equilibrium(r, q, rng);
            return crossing_event(c, r, u, fam, pack, {mode, 24});
        });
    }
    out.est = proportion_estimate(hits, trials);
    return out;
}

// Monte Carlo frequency of "the origin is locally infectable" under mu.
inline Estimate estimate_local_infectable_probability(const UpdateFamily& fam,
                                                      const AxisPair& axes,
                                                      const ConstantPack& pack, double q,
                                                      std::int64_t trials,
                                                      std::uint64_t seed, int workers = 0) {
    Rat two_k = Rat(2) * pack.K;
    Parallelogram window(axes, -two_k, -two_k, two_k, two_k);
    ClosureEngine engine(fam);
    std::int64_t hits = detail::count_hits(trials, workers, [&](std::int64_t i) {
        SplitMix64 rng = stream(seed, (std::uint64_t)i);
        Configuration c = sample_equilibrium(window, q, rng);
        return engine.closure_infects(c, {0, 0});
    });
    return proportion_estimate(hits, trials);
}

}  // namespace ukcm

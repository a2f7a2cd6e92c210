#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "ukcm/closure.hpp"
#include "ukcm/config.hpp"
#include "ukcm/family.hpp"
#include "ukcm/rng.hpp"
#include "ukcm/stats.hpp"

namespace ukcm {

enum class StopRule { OriginInfected, FixedHorizon, EventPredicate };

struct SimParams {
    UpdateFamily family;
    double q = 0.1;
    Parallelogram region = Parallelogram::box(-16, -16, 15, 15);
    Boundary boundary;
    double max_time = 1e3;
    std::uint64_t seed = 1;
    std::int64_t trial_count = 1;
    StopRule stop = StopRule::FixedHorizon;
    std::vector<double> snapshot_times;
    bool record_events = false;
    int workers = 0;  // 0 = hardware concurrency

    void validate() const {
        if (!(q > 0.0 && q < 1.0) && stop != StopRule::FixedHorizon) {
            // q in {0,1} still allowed for sampling paths; dynamics wants (0,1)
        }
        if (!(max_time > 0)) throw std::invalid_argument("SimParams: max_time <= 0");
        if (trial_count < 1) throw std::invalid_argument("SimParams: trial_count < 1");
    }
};

struct SimEvent {
    double time;
    Vec site;
    int new_value;  // 0 = infected, 1 = healthy
};

struct Trajectory {
    double tau0 = 0;
    bool tau0_censored = true;  // censored at max_time unless the origin got infected
    std::int64_t rings = 0;
    std::int64_t applied = 0;
    std::vector<SimEvent> events;  // only with record_events
    std::vector<Configuration> snapshots;
    Configuration final_state;
};

// Called on every clock ring; `applied` tells whether the constraint held and
// the site was resampled. Returning true stops the run (EventPredicate).
using RingObserver = std::function<bool(double t, Vec site, bool applied, int new_value)>;

inline Configuration sample_equilibrium(const Parallelogram& region, double q,
                                        SplitMix64& rng,
                                        Boundary boundary = Boundary{}) {
    Configuration c(region, std::move(boundary));
    for (const Vec& p : c.sites())
        if (rng.bernoulli(q)) c.infect(p);
    return c;
}

inline Configuration sample_equilibrium(const Parallelogram& region, double q,
                                        std::uint64_t seed, std::uint64_t trial = 0) {
    SplitMix64 rng = stream(seed, 2 * trial);
    return sample_equilibrium(region, q, rng);
}

// Event-driven dynamics: one exponential interarrival stream at rate |region|
// with a uniform ring site, equivalent in law to independent rate-1 clocks.
// At a ring the site resamples to Bernoulli(1-q) iff some rule translate is
// fully infected in the pre-ring configuration.
inline Trajectory simulate(const SimParams& params, const Configuration& initial,
                           SplitMix64 rng, const RingObserver* observer = nullptr) {
    params.validate();
    Trajectory out;
    out.final_state = initial;
    const std::vector<Vec>& sites = initial.sites();
    const double n = (double)sites.size();
    const bool track_origin = initial.in_region({0, 0});

    // padded byte grid: 1 = healthy, 0 = infected; out-of-region cells carry
    // the boundary convention and never change, so the constraint check is a
    // handful of byte loads at fixed offsets
    const std::int64_t margin =
        (std::int64_t)std::ceil(params.family.range()) + 1;
    const std::int64_t gx0 = initial.bbox_x0() - margin;
    const std::int64_t gy0 = initial.bbox_y0() - margin;
    const std::int64_t gw = initial.bbox_w() + 2 * margin;
    const std::int64_t gh = initial.bbox_h() + 2 * margin;
    std::vector<std::uint8_t> grid((std::size_t)(gw * gh), 1);
    auto gidx = [&](Vec p) { return (std::size_t)((p.y - gy0) * gw + (p.x - gx0)); };
    for (std::int64_t y = gy0; y < gy0 + gh; ++y)
        for (std::int64_t x = gx0; x < gx0 + gw; ++x) {
            Vec p{x, y};
            grid[gidx(p)] = initial.in_region(p)
                                ? (initial.infected(p) ? 0 : 1)
                                : (initial.boundary().infected_outside(p) ? 0 : 1);
        }
    std::vector<std::size_t> site_idx(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) site_idx[i] = gidx(sites[i]);

    // flat rules as index deltas
    std::vector<std::ptrdiff_t> deltas;
    std::vector<std::pair<std::size_t, std::size_t>> rules;
    for (const auto& r : params.family.rules) {
        std::size_t b = deltas.size();
        for (const Vec& s : r) deltas.push_back(s.y * gw + s.x);
        rules.emplace_back(b, deltas.size());
    }

    auto materialize = [&]() {
        Configuration c = initial;
        for (const Vec& p : sites) c.set_state(p, grid[gidx(p)] == 1);
        return c;
    };

    double t = 0;
    bool origin_done = false;
    const std::size_t origin_idx = track_origin ? gidx({0, 0}) : 0;
    if (track_origin && grid[origin_idx] == 0) {
        out.tau0 = 0;
        out.tau0_censored = false;
        origin_done = true;
        if (params.stop == StopRule::OriginInfected) return out;
    }
    std::size_t next_snap = 0;
    auto take_snaps = [&](double now) {
        while (next_snap < params.snapshot_times.size() &&
               params.snapshot_times[next_snap] <= now) {
            out.snapshots.push_back(materialize());
            ++next_snap;
        }
    };

    const bool pending_snaps = !params.snapshot_times.empty();
    const bool fast = !params.record_events && !pending_snaps && observer == nullptr;
    if (fast) {
        // rejection-free path: only sites whose constraint currently holds can
        // fire, and rings at such sites form a Poisson stream of rate |A|.
        // Identical in law to the naive loop; out.rings counts active rings.
        auto satisfied = [&](std::size_t pos) {
            for (const auto& [b, e] : rules) {
                bool all = true;
                for (std::size_t i = b; i < e; ++i)
                    if (grid[pos + (std::size_t)deltas[i]]) {
                        all = false;
                        break;
                    }
                if (all) return true;
            }
            return false;
        };
        // influence deltas: flipping pos can change the constraint at
        // pos - delta for every rule-site delta
        std::vector<std::ptrdiff_t> influence;
        for (const Vec& s : params.family.all_sites())
            influence.push_back(-(s.y * gw + s.x));

        std::vector<std::int32_t> slot((std::size_t)(gw * gh), -1);
        std::vector<std::size_t> active;  // grid positions
        std::vector<Vec> active_site;
        active.reserve(sites.size());
        for (std::size_t k = 0; k < sites.size(); ++k) {
            std::size_t pos = site_idx[k];
            if (satisfied(pos)) {
                slot[pos] = (std::int32_t)active.size();
                active.push_back(pos);
                active_site.push_back(sites[k]);
            }
        }
        std::vector<std::uint8_t> in_region_flag((std::size_t)(gw * gh), 0);
        std::vector<Vec> site_of((std::size_t)(gw * gh));
        for (std::size_t k = 0; k < sites.size(); ++k) {
            in_region_flag[site_idx[k]] = 1;
            site_of[site_idx[k]] = sites[k];
        }
        auto refresh = [&](std::size_t pos) {
            if (!in_region_flag[pos]) return;
            bool want = satisfied(pos);
            std::int32_t s = slot[pos];
            if (want && s < 0) {
                slot[pos] = (std::int32_t)active.size();
                active.push_back(pos);
                active_site.push_back(site_of[pos]);
            } else if (!want && s >= 0) {
                std::size_t last = active.size() - 1;
                active[(std::size_t)s] = active[last];
                active_site[(std::size_t)s] = active_site[last];
                slot[active[(std::size_t)s]] = s;
                active.pop_back();
                active_site.pop_back();
                slot[pos] = -1;
            }
        };

        double tt = 0;
        for (;;) {
            if (active.empty()) {
                if (!origin_done) {
                    out.tau0 = params.max_time;
                    out.tau0_censored = true;
                }
                break;
            }
            tt += rng.exponential((double)active.size());
            if (tt > params.max_time) {
                if (!origin_done) {
                    out.tau0 = params.max_time;
                    out.tau0_censored = true;
                }
                break;
            }
            ++out.rings;
            std::size_t a = (std::size_t)rng.below((std::uint64_t)active.size());
            std::size_t pos = active[a];
            int newv = rng.bernoulli(1.0 - params.q) ? 1 : 0;
            ++out.applied;
            if ((std::uint8_t)newv != grid[pos]) {
                grid[pos] = (std::uint8_t)newv;
                for (std::ptrdiff_t d : influence)
                    refresh((std::size_t)((std::ptrdiff_t)pos + d));
                if (track_origin && !origin_done && pos == origin_idx && newv == 0) {
                    out.tau0 = tt;
                    out.tau0_censored = false;
                    origin_done = true;
                    if (params.stop == StopRule::OriginInfected) break;
                }
            }
        }
        out.final_state = materialize();
        return out;
    }

    for (;;) {
        t += rng.exponential(n);
        if (t > params.max_time) {
            if (pending_snaps) take_snaps(params.max_time);
            if (!origin_done) {
                out.tau0 = params.max_time;
                out.tau0_censored = true;
            }
            break;
        }
        if (pending_snaps) take_snaps(t);
        ++out.rings;
        std::size_t k = (std::size_t)rng.below((std::uint64_t)sites.size());
        std::size_t pos = site_idx[k];
        bool ok = false;
        for (const auto& [b, e] : rules) {
            bool all = true;
            for (std::size_t i = b; i < e; ++i)
                if (grid[pos + (std::size_t)deltas[i]]) {
                    all = false;
                    break;
                }
            if (all) {
                ok = true;
                break;
            }
        }
        int newv = 1;
        if (ok) {
            newv = rng.bernoulli(1.0 - params.q) ? 1 : 0;
            grid[pos] = (std::uint8_t)newv;
            ++out.applied;
            if (params.record_events) out.events.push_back({t, sites[k], newv});
            if (track_origin && !origin_done && pos == origin_idx && newv == 0) {
                out.tau0 = t;
                out.tau0_censored = false;
                origin_done = true;
                if (params.stop == StopRule::OriginInfected) break;
            }
        }
        if (observer && (*observer)(t, sites[k], ok, newv)) break;
    }
    out.final_state = materialize();
    return out;
}

struct Tau0Estimate {
    double mean = 0;    // arithmetic mean of uncensored samples (lower bound
                        // for the true mean whenever censor_fraction > 0)
    double median = 0;  // over all samples, censored counted at max_time
    double censor_fraction = 0;
    double zero_fraction = 0;
    double geo_ci_lo = 0;  // 95% normal CI on log tau0 over positive
    double geo_ci_hi = 0;  // uncensored samples, exponentiated
    double geo_mean = 0;
    std::int64_t trials = 0;
    std::int64_t uncensored = 0;
    bool usable = false;  // false when every trial censored
    std::vector<double> samples;  // tau0 per trial, censored at max_time
    std::vector<bool> censored;
};

// Independent trials from the equilibrium measure; trial streams are derived
// from (seed, trial index) so results do not depend on scheduling.
inline Tau0Estimate estimate_tau0(const SimParams& params) {
    params.validate();
    SimParams p = params;
    p.stop = StopRule::OriginInfected;
    const std::int64_t trials = params.trial_count;
    std::vector<double> tau(trials);
    std::vector<char> cens(trials);

    int workers = params.workers > 0 ? params.workers
                                     : (int)std::thread::hardware_concurrency();
    if (workers < 1) workers = 1;
    std::atomic<std::int64_t> next{0};
    auto work = [&]() {
        for (;;) {
            std::int64_t i = next.fetch_add(1);
            if (i >= trials) break;
            SplitMix64 init_rng = stream(p.seed, 2 * (std::uint64_t)i);
            SplitMix64 dyn_rng = stream(p.seed, 2 * (std::uint64_t)i + 1);
            Configuration start = sample_equilibrium(p.region, p.q, init_rng);
            Trajectory tr = simulate(p, start, dyn_rng);
            tau[(std::size_t)i] = tr.tau0;
            cens[(std::size_t)i] = tr.tau0_censored ? 1 : 0;
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    Tau0Estimate est;
    est.trials = trials;
    est.samples.assign(tau.begin(), tau.end());
    est.censored.resize((std::size_t)trials);
    std::vector<double> unc, logpos;
    std::int64_t zeros = 0, censored_n = 0;
    for (std::int64_t i = 0; i < trials; ++i) {
        est.censored[(std::size_t)i] = cens[(std::size_t)i] != 0;
        if (cens[(std::size_t)i]) {
            ++censored_n;
            continue;
        }
        unc.push_back(tau[(std::size_t)i]);
        if (tau[(std::size_t)i] == 0)
            ++zeros;
        else
            logpos.push_back(std::log(tau[(std::size_t)i]));
    }
    est.uncensored = (std::int64_t)unc.size();
    est.censor_fraction = (double)censored_n / (double)trials;
    est.zero_fraction = (double)zeros / (double)trials;
    est.usable = !unc.empty();
    est.mean = unc.empty() ? 0 : mean_of(unc);
    est.median = median_of(est.samples);
    if (!logpos.empty()) {
        double m = mean_of(logpos);
        double s = sample_sd(logpos) / std::sqrt((double)logpos.size());
        est.geo_mean = std::exp(m);
        est.geo_ci_lo = std::exp(m - 1.959963984540054 * s);
        est.geo_ci_hi = std::exp(m + 1.959963984540054 * s);
    }
    return est;
}

}  // namespace ukcm

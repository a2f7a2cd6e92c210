#pragma once

#include <deque>
#include <vector>

#include "ukcm/config.hpp"
#include "ukcm/family.hpp"

namespace ukcm {

// Worklist bootstrap closure. A healthy site is re-examined only when a site
// of one of its rule translates becomes infected; the initial examination set
// is the influence of the initial infections plus, for infected boundary
// conventions, the in-region sites whose rules can reach outside infections.
class ClosureEngine {
  public:
    explicit ClosureEngine(const UpdateFamily& fam) : fam_(&fam) {
        for (const Vec& s : fam.all_sites()) influence_.push_back(-s);
        range_sq_ = fam.range_sq();
    }

    const UpdateFamily& family() const { return *fam_; }

    void close_in_place(Configuration& c) const {
        std::vector<Vec> sink;
        close_collect(c, sink);
    }

    // Closes in place and appends the newly infected sites to `newly`.
    void close_collect(Configuration& c, std::vector<Vec>& newly) const {
        std::vector<Vec> seeds = c.infected_sites();
        std::deque<Vec> work;
        auto push_influence = [&](Vec z) {
            for (const Vec& d : influence_) {
                Vec x = z + d;
                if (c.in_region(x) && !c.infected(x)) work.push_back(x);
            }
        };
        for (const Vec& z : seeds) push_influence(z);
        if (c.boundary().kind != BoundaryKind::AllHealthy) seed_boundary(c, work);
        while (!work.empty()) {
            Vec x = work.front();
            work.pop_front();
            if (c.infected(x)) continue;
            if (rule_satisfied(c, x)) {
                c.infect(x);
                newly.push_back(x);
                push_influence(x);
            }
        }
    }

    Configuration closure(const Configuration& c) const {
        Configuration out = c;
        close_in_place(out);
        return out;
    }

    // Does the closure infect the target? Early exit when it does.
    bool closure_infects(const Configuration& c, Vec target) const {
        if (c.in_region(target) && c.infected(target)) return true;
        Configuration work = c;
        std::vector<Vec> seeds = work.infected_sites();
        std::deque<Vec> queue;
        auto push_influence = [&](Vec z) {
            for (const Vec& d : influence_) {
                Vec x = z + d;
                if (work.in_region(x) && !work.infected(x)) queue.push_back(x);
            }
        };
        for (const Vec& z : seeds) push_influence(z);
        if (work.boundary().kind != BoundaryKind::AllHealthy) seed_boundary(work, queue);
        while (!queue.empty()) {
            Vec x = queue.front();
            queue.pop_front();
            if (work.infected(x)) continue;
            if (rule_satisfied(work, x)) {
                if (x == target) return true;
                work.infect(x);
                push_influence(x);
            }
        }
        return false;
    }

    bool rule_satisfied(const Configuration& c, Vec x) const {
        for (const auto& rule : fam_->rules) {
            bool ok = true;
            for (const Vec& s : rule)
                if (!c.infected_ext(x + s)) {
                    ok = false;
                    break;
                }
            if (ok) return true;
        }
        return false;
    }

  private:
    void seed_boundary(const Configuration& c, std::deque<Vec>& work) const {
        // any healthy in-region site within family range of an outside
        // infection needs one initial look
        for (const Vec& x : c.sites()) {
            if (c.infected(x)) continue;
            bool near = false;
            for (const Vec& d : influence_) {
                Vec z = x - d;  // z = x + rule site
                if (!c.in_region(z) && c.boundary().infected_outside(z)) {
                    near = true;
                    break;
                }
            }
            if (near) work.push_back(x);
        }
    }

    const UpdateFamily* fam_;
    std::vector<Vec> influence_;
    std::int64_t range_sq_ = 1;
};

inline Configuration closure(const Configuration& c, const UpdateFamily& fam) {
    return ClosureEngine(fam).closure(c);
}

// s is locally infectable iff s lies in the closure of the infections within
// its window s + R(-2K,-2K;2K,2K), computed with all-healthy outside.
inline bool is_locally_infectable(const Configuration& eta, const UpdateFamily& fam,
                                  const AxisPair& axes, const Rat& K, Vec s) {
    Rat two_k = Rat(2) * K;
    Parallelogram window =
        Parallelogram(axes, -two_k, -two_k, two_k, two_k).translated(s);
    Configuration local(window, Boundary::all_healthy());
    for (const Vec& p : local.sites())
        if (eta.infected_ext(p)) local.infect(p);
    return ClosureEngine(fam).closure_infects(local, s);
}

}  // namespace ukcm

#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ukcm/closure.hpp"
#include "ukcm/errors.hpp"
#include "ukcm/span.hpp"

namespace ukcm {

enum class CrossingMode { Exact, AsIs, GreedyThin };

inline const char* to_string(CrossingMode m) {
    switch (m) {
        case CrossingMode::Exact: return "exact";
        case CrossingMode::AsIs: return "as-is";
        case CrossingMode::GreedyThin: return "greedy-thin";
    }
    return "?";
}

struct CrossingOptions {
    CrossingMode mode = CrossingMode::AsIs;
    std::int64_t exact_site_budget = 24;
};

namespace detail {

// Shared geometry for crossing checks on one strip: the strip R with the
// infected half-plane pushed against its u-side face, an enlarged work
// region so connected sets may leave R laterally, and per-site flags for
// half-plane adjacency and far-face contact.
class CrossingFrame {
  public:
    CrossingFrame(const Parallelogram& R, Direction u, const UpdateFamily& fam,
                  const ConstantPack& pack)
        : R_(R), fam_(&fam), pack_(&pack), engine_(fam) {
        if (u == R.axes().u1)
            side_ = 1;
        else if (u == R.axes().u2)
            side_ = 2;
        else
            throw std::invalid_argument("crossing: direction is not a strip axis");
        double margin = pack.c2p() + fam.range() + 2.0;
        auto ext = [&](Direction ax) {
            return (std::int64_t)std::ceil(margin * std::sqrt((double)norm2(ax.vec()))) + 1;
        };
        std::int64_t m3 = ext(R.axes().u3()), m4 = ext(R.axes().u4());
        // the half-plane face stays put, every other face moves out
        Parallelogram work =
            side_ == 1 ? Parallelogram(R.axes(), R.a() - Rat(m3), R.b() - Rat(m4), R.c(),
                                       R.d() + Rat(m4))
                       : Parallelogram(R.axes(), R.a() - Rat(m3), R.b() - Rat(m4),
                                       R.c() + Rat(m3), R.d());
        hp_ = side_ == 1 ? HalfPlane{R.axes().u1, -R.c(), false}
                         : HalfPlane{R.axes().u2, -R.d(), false};
        scratch_ = Configuration(work, Boundary::infected_half_plane(hp_));
        disk_ = disk_offsets(pack.c2p_sq);
        for (const Vec& s : scratch_.sites())
            if (R.contains(s)) strip_sites_.push_back(s);
    }

    const std::vector<Vec>& strip_sites() const { return strip_sites_; }
    const Parallelogram& strip() const { return R_; }

    bool far_face(Vec s) const {
        return side_ == 1 ? R_.coord3(s) <= R_.a() : R_.coord4(s) <= R_.b();
    }

    // Is there a strongly connected set of [H u (R cap eta)] touching both
    // the half-plane and the far face? `infections` must lie in R.
    bool crossed(const std::vector<Vec>& infections) {
        for (const Vec& p : infections) scratch_.infect(p);
        std::vector<Vec> grown;
        engine_.close_collect(scratch_, grown);
        std::vector<Vec> sites = infections;
        sites.insert(sites.end(), grown.begin(), grown.end());
        std::sort(sites.begin(), sites.end());

        bool result = false;
        if (!sites.empty()) {
            DisjointSet ds(sites.size() + 1);
            const std::size_t hp_node = sites.size();
            for (std::size_t i = 0; i < sites.size(); ++i) {
                for (const Vec& d : disk_) {
                    Vec q = sites[i] + d;
                    auto it = std::lower_bound(sites.begin(), sites.end(), q);
                    if (it != sites.end() && *it == q)
                        ds.unite(i, (std::size_t)(it - sites.begin()));
                    if (hp_.contains(q)) ds.unite(i, hp_node);
                }
            }
            std::size_t hp_root = ds.find(hp_node);
            for (std::size_t i = 0; i < sites.size() && !result; ++i)
                if (far_face(sites[i]) && ds.find(i) == hp_root) result = true;
        }
        for (const Vec& s : sites) scratch_.heal(s);
        return result;
    }

  private:
    using DisjointSet = ukcm::detail::DisjointSet;

    Parallelogram R_;
    const UpdateFamily* fam_;
    const ConstantPack* pack_;
    ClosureEngine engine_;
    int side_;
    HalfPlane hp_;
    Configuration scratch_;
    std::vector<Vec> disk_;
    std::vector<Vec> strip_sites_;
};

inline std::vector<Vec> infections_in(const Configuration& eta, const Parallelogram& R) {
    std::vector<Vec> out;
    for (const Vec& p : eta.sites())
        if (eta.infected(p) && R.contains(p)) out.push_back(p);
    return out;
}

}  // namespace detail

// R is u-crossed for eta when the closure of the infected half-plane plus the
// infections of R contains a strongly connected set joining the half-plane to
// the opposite face.
inline bool is_u_crossed(const Configuration& eta, const Parallelogram& R, Direction u,
                         const UpdateFamily& fam, const ConstantPack& pack) {
    detail::CrossingFrame frame(R, u, fam, pack);
    return frame.crossed(detail::infections_in(eta, R));
}

namespace detail {

inline bool no_critical_span(const std::vector<Vec>& infections, const Parallelogram& R,
                             const UpdateFamily& fam, const ConstantPack& pack) {
    if (infections.empty()) return true;
    Configuration sub = Configuration::from_infections(R, infections);
    return !has_spanned_critical(span(sub, fam, SpanParams::from_pack(R.axes(), pack)),
                                 pack);
}

// C_R^u condition for one fixed sub-configuration.
inline bool crossing_condition(CrossingFrame& frame, const std::vector<Vec>& infections,
                               const UpdateFamily& fam, const ConstantPack& pack) {
    return frame.crossed(infections) &&
           no_critical_span(infections, frame.strip(), fam, pack);
}

}  // namespace detail

// The event C_R^u. Exact searches all sub-configurations eta' >= eta (subsets
// of eta's infections in R); AsIs tests eta itself (a sub-event: it
// under-detects C_R^u); GreedyThin strips critical-span seeds first.
inline bool crossing_event(const Configuration& eta, const Parallelogram& R, Direction u,
                           const UpdateFamily& fam, const ConstantPack& pack,
                           CrossingOptions opt = {}) {
    detail::CrossingFrame frame(R, u, fam, pack);
    std::vector<Vec> inf = detail::infections_in(eta, R);
    switch (opt.mode) {
        case CrossingMode::AsIs:
            return detail::crossing_condition(frame, inf, fam, pack);
        case CrossingMode::GreedyThin: {
            std::vector<Vec> cur = inf;
            for (;;) {
                if (cur.empty()) break;
                Configuration sub = Configuration::from_infections(R, cur);
                auto tree = span(sub, fam, SpanParams::from_pack(R.axes(), pack));
                auto crit = tree.nodes_in_diameter_range(pack.crit_lo_sq(), pack.k_sq());
                if (crit.empty()) break;
                std::vector<Vec> drop;
                for (int id : crit)
                    for (int s : tree.seeds_of(id))
                        drop.push_back(tree.leaf_sites[(std::size_t)s]);
                std::sort(drop.begin(), drop.end());
                std::vector<Vec> next;
                for (const Vec& p : cur)
                    if (!std::binary_search(drop.begin(), drop.end(), p)) next.push_back(p);
                if (next.size() == cur.size()) break;
                cur.swap(next);
            }
            return detail::crossing_condition(frame, cur, fam, pack);
        }
        case CrossingMode::Exact: {
            std::int64_t sites = (std::int64_t)frame.strip_sites().size();
            if (sites > opt.exact_site_budget)
                throw BudgetError("crossing Exact mode: strip has " +
                                  std::to_string(sites) + " sites, budget " +
                                  std::to_string(opt.exact_site_budget) +
                                  "; fall back to modes as-is or greedy-thin");
            const std::size_t k = inf.size();
            if (k > 30) throw BudgetError("crossing Exact mode: too many infections");
            for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
                std::vector<Vec> sub;
                for (std::size_t i = 0; i < k; ++i)
                    if (mask & (1ull << i)) sub.push_back(inf[i]);
                if (detail::crossing_condition(frame, sub, fam, pack)) return true;
            }
            return false;
        }
    }
    return false;
}

// Precomputed C_R^u answers for every configuration of a small strip: the
// per-configuration condition is tabulated, then an OR over sub-configurations
// (subset transform) turns it into the exact existential event.
class CrossingTable {
  public:
    CrossingTable(const Parallelogram& R, Direction u, const UpdateFamily& fam,
                  const ConstantPack& pack, std::int64_t site_budget = 20)
        : frame_(R, u, fam, pack) {
        sites_ = frame_.strip_sites();
        if ((std::int64_t)sites_.size() > site_budget)
            throw BudgetError("crossing table: strip exceeds site budget");
        const std::size_t n = sites_.size();
        for (std::size_t i = 0; i < n; ++i) index_[key(sites_[i])] = i;
        table_.assign(1ull << n, 0);
        std::vector<Vec> inf;
        for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
            inf.clear();
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1ull << i)) inf.push_back(sites_[i]);
            table_[mask] = detail::crossing_condition(frame_, inf, fam, pack) ? 1 : 0;
        }
        // subset OR: after this, table_[m] == exists submask with condition
        for (std::size_t b = 0; b < n; ++b)
            for (std::uint64_t m = 0; m < (1ull << n); ++m)
                if (m & (1ull << b)) table_[m] |= table_[m ^ (1ull << b)];
    }

    const std::vector<Vec>& sites() const { return sites_; }

    std::uint64_t mask_of(const Configuration& eta) const {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < sites_.size(); ++i)
            if (eta.in_region(sites_[i]) && eta.infected(sites_[i])) m |= 1ull << i;
        return m;
    }

    bool event(std::uint64_t mask) const { return table_[mask] != 0; }
    bool event(const Configuration& eta) const { return event(mask_of(eta)); }

  private:
    static std::uint64_t key(Vec p) {
        return ((std::uint64_t)(p.x + (1 << 20)) << 24) ^ (std::uint64_t)(p.y + (1 << 20));
    }
    detail::CrossingFrame frame_;
    std::vector<Vec> sites_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    std::vector<std::uint8_t> table_;
};

}  // namespace ukcm

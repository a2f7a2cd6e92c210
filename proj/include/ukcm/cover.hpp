#pragma once

#include <optional>
#include <vector>

#include "ukcm/closure.hpp"
#include "ukcm/errors.hpp"
#include "ukcm/geometry.hpp"
#include "ukcm/rng.hpp"

namespace ukcm {

struct CoverParams {
    std::vector<Direction> face_set;  // T0
    bool modified = false;            // use C2'/C4' in place of C2/C4
    std::int64_t crumb_candidate_budget = 200000;
    bool cluster_on_unknown_crumb = false;  // else exhausted search throws

    static CoverParams axis_faces() {
        CoverParams cp;
        cp.face_set = {Direction(1, 0), Direction(0, 1), Direction(-1, 0),
                       Direction(0, -1)};
        return cp;
    }

    void validate() const {
        if (face_set.size() == 3) {
            // origin strictly inside the convex hull of the three directions
            for (std::size_t i = 0; i < 3; ++i) {
                Vec a = face_set[i].vec(), b = face_set[(i + 1) % 3].vec();
                if (cross(a, b) <= 0)
                    throw std::invalid_argument(
                        "cover: 3-direction face set must wind positively around 0");
            }
        } else if (face_set.size() == 4) {
            bool pairs = face_set[0] == face_set[2].antipode() &&
                         face_set[1] == face_set[3].antipode();
            if (!pairs)
                throw std::invalid_argument(
                    "cover: 4-direction face set must be two opposite pairs in order");
            if (cross(face_set[0].vec(), face_set[1].vec()) == 0)
                throw std::invalid_argument("cover: collinear face pairs");
        } else {
            throw std::invalid_argument("cover: face set must have 3 or 4 directions");
        }
    }
};

struct Cluster {
    std::vector<Vec> sites;
};

struct CoverResult {
    std::vector<Droplet> droplets;                 // pairwise disjoint output
    std::vector<std::vector<int>> provenance;      // cluster ids per output droplet
    std::vector<Cluster> clusters;
    std::vector<std::vector<Vec>> crumbs;          // components absorbed as crumbs
    std::vector<int> unknown_crumb_components;     // forced to clusters under budget
    std::vector<Droplet> merge_history;            // all droplets ever formed
};

namespace detail {

// Is kappa generated by alpha-1 extra infections? Exhaustive search over
// candidate sets within the paper's window around the component.
inline std::optional<bool> crumb_test(const std::vector<Vec>& kappa,
                                      const UpdateFamily& fam, const ConstantPack& pack,
                                      int alpha, std::int64_t budget) {
    if (alpha <= 1) return false;  // |P| = 0 and [empty] is empty
    const std::int64_t w =
        (std::int64_t)std::ceil(pack.c3() + fam.range() * (double)alpha) + 1;
    std::int64_t x0 = kappa[0].x, x1 = kappa[0].x, y0 = kappa[0].y, y1 = kappa[0].y;
    for (const Vec& p : kappa) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    std::vector<Vec> window;
    for (std::int64_t x = x0 - w; x <= x1 + w; ++x)
        for (std::int64_t y = y0 - w; y <= y1 + w; ++y) {
            std::int64_t d2 = INT64_MAX;
            for (const Vec& p : kappa) d2 = std::min(d2, dist2(p, Vec{x, y}));
            if (d2 <= w * w) window.push_back({x, y});
        }
    const int k = alpha - 1;
    // closure box padded enough for any within-window growth to register
    std::int64_t pad = (std::int64_t)std::ceil(pack.c3() + 2.0 * fam.range()) + 2;
    Parallelogram box = Parallelogram::box(x0 - w - pad, y0 - w - pad, x1 + w + pad,
                                           y1 + w + pad);
    ClosureEngine engine(fam);
    std::vector<std::size_t> idx((std::size_t)k, 0);
    std::int64_t examined = 0;
    // combinations of k window points
    std::vector<std::size_t> c((std::size_t)k);
    for (std::size_t i = 0; i < (std::size_t)k; ++i) c[i] = i;
    if (window.size() < (std::size_t)k) return false;
    for (;;) {
        if (++examined > budget) return std::nullopt;
        Configuration cfg(box, Boundary::all_healthy());
        for (std::size_t i = 0; i < (std::size_t)k; ++i) cfg.infect(window[c[i]]);
        engine.close_in_place(cfg);
        bool covers = true;
        for (const Vec& p : kappa)
            if (!cfg.infected(p)) {
                covers = false;
                break;
            }
        if (covers) return true;
        // next combination
        std::size_t i = (std::size_t)k;
        while (i > 0) {
            --i;
            if (c[i] != i + window.size() - (std::size_t)k) {
                ++c[i];
                for (std::size_t j = i + 1; j < (std::size_t)k; ++j) c[j] = c[j - 1] + 1;
                break;
            }
            if (i == 0) return false;
        }
    }
}

// Greedy canonical partition of a component into clusters: each cluster is
// grown from the smallest unassigned site and stays within diameter C3; at
// termination no unassigned neighbour fits, matching the maximality clause.
inline std::vector<Cluster> cluster_partition(std::vector<Vec> kappa, const Rat& gamma_sq,
                                              const Rat& c3_sq) {
    std::sort(kappa.begin(), kappa.end());
    std::vector<bool> used(kappa.size(), false);
    std::vector<Cluster> out;
    for (std::size_t start = 0; start < kappa.size(); ++start) {
        if (used[start]) continue;
        Cluster cl;
        cl.sites.push_back(kappa[start]);
        used[start] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t j = 0; j < kappa.size(); ++j) {
                if (used[j]) continue;
                bool adjacent = false;
                for (const Vec& s : cl.sites)
                    if (Rat(dist2(s, kappa[j])) <= gamma_sq) {
                        adjacent = true;
                        break;
                    }
                if (!adjacent) continue;
                bool fits = true;
                for (const Vec& s : cl.sites)
                    if (Rat(dist2(s, kappa[j])) > c3_sq) {
                        fits = false;
                        break;
                    }
                if (fits) {
                    cl.sites.push_back(kappa[j]);
                    used[j] = true;
                    grew = true;
                }
            }
        }
        std::sort(cl.sites.begin(), cl.sites.end());
        out.push_back(std::move(cl));
    }
    return out;
}

// Smallest T0-droplet containing the C4-neighbourhood of the cluster, then
// inflated to the C4' minimum-diameter convention.
inline Droplet q_droplet(const Cluster& cl, const CoverParams& cp,
                         const ConstantPack& pack) {
    const Rat& pad_sq = cp.modified ? pack.c4p_sq : pack.c4_sq;
    std::vector<Rat> offsets;
    for (const Direction& v : cp.face_set) {
        std::int64_t m = dot(v.vec(), cl.sites[0]);
        for (const Vec& s : cl.sites) m = std::max(m, dot(v.vec(), s));
        std::int64_t pad = ceil_sqrt(pad_sq * Rat(norm2(v.vec())));
        offsets.push_back(Rat(m + pad));
    }
    Droplet d(cp.face_set, offsets);
    while (d.diameter_sq() < pack.c4p_sq) d.inflate(Rat(1));
    return d;
}

}  // namespace detail

// The covering algorithm: gamma-components split into crumbs (ignored) and
// clusters; clusters seed droplets Q(C); intersecting droplets merge until
// pairwise disjoint. The output does not depend on the merge order.
inline CoverResult cover(const std::vector<Vec>& z, const UpdateFamily& fam,
                         const ConstantPack& pack, const CoverParams& cp, int alpha,
                         MergeOrder order = MergeOrder::Canonical,
                         std::uint64_t order_seed = 0) {
    cp.validate();
    CoverResult res;
    const Rat& gamma_sq = cp.modified ? pack.c2p_sq : pack.c2_sq;
    auto comps = gamma_components(z, gamma_sq);
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
        auto is_crumb =
            detail::crumb_test(comps[ci], fam, pack, alpha, cp.crumb_candidate_budget);
        if (!is_crumb.has_value()) {
            if (!cp.cluster_on_unknown_crumb)
                throw BudgetError(
                    "cover: crumb search budget exhausted; rerun with a larger budget "
                    "or force cluster treatment");
            res.unknown_crumb_components.push_back((int)ci);
            is_crumb = false;
        }
        if (*is_crumb) {
            res.crumbs.push_back(comps[ci]);
            continue;
        }
        for (auto& cl : detail::cluster_partition(comps[ci], gamma_sq, pack.c3_sq))
            res.clusters.push_back(std::move(cl));
    }

    struct Entry {
        Droplet d;
        std::vector<int> clusters;
    };
    std::vector<Entry> active;
    for (std::size_t i = 0; i < res.clusters.size(); ++i) {
        Entry e{detail::q_droplet(res.clusters[i], cp, pack), {(int)i}};
        res.merge_history.push_back(e.d);
        active.push_back(std::move(e));
    }
    SplitMix64 rng = stream(order_seed, 17);
    for (;;) {
        std::vector<std::pair<std::size_t, std::size_t>> hits;
        for (std::size_t i = 0; i < active.size(); ++i)
            for (std::size_t j = i + 1; j < active.size(); ++j)
                if (active[i].d.intersects(active[j].d)) hits.push_back({i, j});
        if (hits.empty()) break;
        auto [i, j] = order == MergeOrder::Random
                          ? hits[(std::size_t)rng.below(hits.size())]
                          : hits.front();
        Entry merged{active[i].d.join(active[j].d), active[i].clusters};
        merged.clusters.insert(merged.clusters.end(), active[j].clusters.begin(),
                               active[j].clusters.end());
        std::sort(merged.clusters.begin(), merged.clusters.end());
        res.merge_history.push_back(merged.d);
        active.erase(active.begin() + (std::ptrdiff_t)j);
        active.erase(active.begin() + (std::ptrdiff_t)i);
        active.push_back(std::move(merged));
    }
    // canonical output order: by cluster provenance
    std::sort(active.begin(), active.end(),
              [](const Entry& a, const Entry& b) { return a.clusters < b.clusters; });
    for (auto& e : active) {
        res.droplets.push_back(std::move(e.d));
        res.provenance.push_back(std::move(e.clusters));
    }
    return res;
}

// D is covered by Z iff the covering algorithm on Z cap D outputs a droplet
// containing D.
inline bool covered_check(const Droplet& d, const std::vector<Vec>& z,
                          const UpdateFamily& fam, const ConstantPack& pack,
                          const CoverParams& cp, int alpha) {
    std::vector<Vec> inside;
    for (const Vec& p : z)
        if (d.contains(p)) inside.push_back(p);
    auto res = cover(inside, fam, pack, cp, alpha);
    for (const auto& out : res.droplets)
        if (out.contains_droplet(d)) return true;
    return false;
}

}  // namespace ukcm

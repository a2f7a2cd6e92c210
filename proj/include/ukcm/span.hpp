#pragma once

#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "ukcm/closure.hpp"
#include "ukcm/config.hpp"
#include "ukcm/errors.hpp"
#include "ukcm/family.hpp"
#include "ukcm/rng.hpp"

namespace ukcm {

struct SpanParams {
    AxisPair axes;
    Rat c2p_sq;  // squared strong-connectivity radius

    static SpanParams from_pack(const AxisPair& axes, const ConstantPack& pack) {
        return SpanParams{axes, pack.c2p_sq};
    }
};

// Merge forest of the spanning algorithm: leaves are single infections, a
// binary node records the merge of two components whose closures came within
// the strong-connectivity radius. Node geometry covers the closure of the
// node's seed set within the region.
struct SpanNode {
    int left = -1, right = -1;  // children, -1 on leaves
    int parent = -1;
    int leaf_site = -1;  // index into leaf_sites for leaves
    Parallelogram bbox;
    Rat diam_sq{0};
    std::int64_t closure_size = 0;
};

struct SpanTree {
    std::vector<Vec> leaf_sites;
    std::vector<SpanNode> nodes;  // leaves first, merges appended in order
    std::vector<int> roots;

    bool is_leaf(int id) const { return nodes[(std::size_t)id].left < 0; }

    std::vector<int> seeds_of(int id) const {
        std::vector<int> out;
        std::vector<int> stack = {id};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            const SpanNode& n = nodes[(std::size_t)v];
            if (n.left < 0)
                out.push_back(n.leaf_site);
            else {
                stack.push_back(n.left);
                stack.push_back(n.right);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // leaf-site partition induced by the roots, sorted canonically
    std::vector<std::vector<Vec>> root_partition() const {
        std::vector<std::vector<Vec>> parts;
        for (int r : roots) {
            std::vector<Vec> sites;
            for (int s : seeds_of(r)) sites.push_back(leaf_sites[(std::size_t)s]);
            std::sort(sites.begin(), sites.end());
            parts.push_back(std::move(sites));
        }
        std::sort(parts.begin(), parts.end(),
                  [](const auto& a, const auto& b) { return a[0] < b[0]; });
        return parts;
    }

    std::vector<int> nodes_in_diameter_range(const Rat& dmin_sq, const Rat& dmax_sq) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].diam_sq >= dmin_sq && nodes[i].diam_sq <= dmax_sq)
                out.push_back((int)i);
        return out;
    }

    // Maximum number of range nodes with pairwise disjoint seed sets: an
    // antichain of the forest, computed bottom-up.
    int max_disjoint_in_range(const Rat& dmin_sq, const Rat& dmax_sq) const {
        std::vector<int> best(nodes.size(), 0);
        for (std::size_t i = 0; i < nodes.size(); ++i) {  // children precede parents
            const SpanNode& n = nodes[i];
            int from_children = n.left < 0 ? 0
                                           : best[(std::size_t)n.left] +
                                                 best[(std::size_t)n.right];
            int own = (n.diam_sq >= dmin_sq && n.diam_sq <= dmax_sq) ? 1 : 0;
            best[i] = std::max(own, from_children);
        }
        int total = 0;
        for (int r : roots) total += best[(std::size_t)r];
        return total;
    }
};

namespace detail {

class SpanBuilder {
  public:
    SpanBuilder(const Configuration& cfg, const UpdateFamily& fam, const SpanParams& sp,
                MergeOrder order, std::uint64_t order_seed)
        : engine_(fam),
          sp_(sp),
          order_(order),
          rng_(stream(order_seed, 0)),
          scratch_(cfg.region(), cfg.boundary()) {
        cell_ = std::max<std::int64_t>(1, ceil_sqrt(sp.c2p_sq));
        tree_.leaf_sites = cfg.infected_sites();
    }

    SpanTree build() {
        const std::size_t n = tree_.leaf_sites.size();
        for (std::size_t i = 0; i < n; ++i) make_leaf((int)i);
        // initialize the candidate pair set from leaf neighborhoods
        for (std::size_t i = 0; i < n; ++i)
            for (const Vec& s : comp_sites_[(std::size_t)i]) add_pairs_for_site((int)i, s);
        while (!pairs_.empty()) merge_step();
        for (std::size_t i = 0; i < tree_.nodes.size(); ++i)
            if (alive_[i]) tree_.roots.push_back((int)i);
        return std::move(tree_);
    }

  private:
    struct CellKey {
        std::int64_t cx, cy;
        bool operator<(const CellKey& o) const {
            return cx != o.cx ? cx < o.cx : cy < o.cy;
        }
    };
    CellKey key_of(Vec p) const {
        auto fd = [](std::int64_t a, std::int64_t b) {
            std::int64_t q = a / b;
            if (a % b != 0 && ((a < 0) != (b < 0))) --q;
            return q;
        };
        return {fd(p.x, cell_), fd(p.y, cell_)};
    }

    int resolve(int id) const {
        while (merged_into_[(std::size_t)id] >= 0) id = merged_into_[(std::size_t)id];
        return id;
    }

    void make_leaf(int leaf_idx) {
        Vec z = tree_.leaf_sites[(std::size_t)leaf_idx];
        scratch_.infect(z);
        std::vector<Vec> grown;
        engine_.close_collect(scratch_, grown);
        std::vector<Vec> sites = grown;
        sites.push_back(z);
        for (const Vec& s : sites) scratch_.heal(s);

        SpanNode node;
        node.leaf_site = leaf_idx;
        node.bbox = bounding_parallelogram(sites, sp_.axes);
        node.diam_sq = node.bbox.diameter_sq();
        node.closure_size = (std::int64_t)sites.size();
        int id = (int)tree_.nodes.size();
        tree_.nodes.push_back(node);
        comp_sites_.push_back(sites);
        alive_.push_back(true);
        merged_into_.push_back(-1);
        for (const Vec& s : sites) grid_[key_of(s)].push_back({s, id});
    }

    void add_pairs_for_site(int id, Vec s) {
        CellKey k = key_of(s);
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = grid_.find({k.cx + dx, k.cy + dy});
                if (it == grid_.end()) continue;
                for (const auto& [q, qid_raw] : it->second) {
                    int qid = resolve(qid_raw);
                    if (qid == id || !alive_[(std::size_t)qid]) continue;
                    if (Rat(dist2(s, q)) <= sp_.c2p_sq)
                        pairs_.insert({std::min(id, qid), std::max(id, qid)});
                }
            }
    }

    void merge_step() {
        auto it = pairs_.begin();
        if (order_ == MergeOrder::Random && pairs_.size() > 1) {
            std::advance(it, (std::ptrdiff_t)rng_.below(pairs_.size()));
        }
        auto [a, b] = *it;
        pairs_.erase(it);
        if (!alive_[(std::size_t)a] || !alive_[(std::size_t)b]) return;

        // closure of the union, seeded from both closed components
        for (const Vec& s : comp_sites_[(std::size_t)a]) scratch_.infect(s);
        for (const Vec& s : comp_sites_[(std::size_t)b]) scratch_.infect(s);
        std::vector<Vec> grown;
        engine_.close_collect(scratch_, grown);
        std::vector<Vec> sites = comp_sites_[(std::size_t)a];
        sites.insert(sites.end(), comp_sites_[(std::size_t)b].begin(),
                     comp_sites_[(std::size_t)b].end());
        sites.insert(sites.end(), grown.begin(), grown.end());
        std::sort(sites.begin(), sites.end());
        sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
        for (const Vec& s : sites) scratch_.heal(s);

        SpanNode node;
        node.left = a;
        node.right = b;
        node.bbox = bounding_parallelogram(sites, sp_.axes);
        node.diam_sq = node.bbox.diameter_sq();
        node.closure_size = (std::int64_t)sites.size();
        int id = (int)tree_.nodes.size();
        tree_.nodes.push_back(node);
        tree_.nodes[(std::size_t)a].parent = id;
        tree_.nodes[(std::size_t)b].parent = id;
        alive_[(std::size_t)a] = alive_[(std::size_t)b] = false;
        alive_.push_back(true);
        merged_into_.push_back(-1);
        merged_into_[(std::size_t)a] = merged_into_[(std::size_t)b] = id;
        comp_sites_.push_back(sites);
        comp_sites_[(std::size_t)a].clear();
        comp_sites_[(std::size_t)a].shrink_to_fit();
        comp_sites_[(std::size_t)b].clear();
        comp_sites_[(std::size_t)b].shrink_to_fit();

        // carry over surviving candidate pairs, then look for new neighbours
        // reachable through the growth sites
        std::set<std::pair<int, int>> keep;
        for (const auto& [x, y] : pairs_) {
            int rx = resolve(x), ry = resolve(y);
            if (rx == ry) continue;
            if (!alive_[(std::size_t)rx] || !alive_[(std::size_t)ry]) continue;
            keep.insert({std::min(rx, ry), std::max(rx, ry)});
        }
        pairs_.swap(keep);
        // adjacency through previously existing sites is already carried
        // over; only growth can create new neighbours
        for (const Vec& s : grown) grid_[key_of(s)].push_back({s, id});
        for (const Vec& s : grown) add_pairs_for_site(id, s);
    }

    ClosureEngine engine_;
    SpanParams sp_;
    MergeOrder order_;
    SplitMix64 rng_;
    Configuration scratch_;
    std::int64_t cell_ = 1;
    SpanTree tree_;
    std::vector<std::vector<Vec>> comp_sites_;
    std::vector<bool> alive_;
    std::vector<int> merged_into_;
    std::map<CellKey, std::vector<std::pair<Vec, int>>> grid_;
    std::set<std::pair<int, int>> pairs_;
};

}  // namespace detail

inline SpanTree span(const Configuration& cfg, const UpdateFamily& fam,
                     const SpanParams& sp, MergeOrder order = MergeOrder::Canonical,
                     std::uint64_t order_seed = 0) {
    detail::SpanBuilder b(cfg, fam, sp, order, order_seed);
    return b.build();
}

// Bounding parallelograms of all merge-tree nodes with diameter in
// [dmin, dmax] (bounds given squared).
inline std::vector<Parallelogram> spanned_scan(const Configuration& cfg,
                                               const UpdateFamily& fam,
                                               const SpanParams& sp, const Rat& dmin_sq,
                                               const Rat& dmax_sq) {
    if (dmin_sq > dmax_sq || dmax_sq.sign() < 0)
        throw std::invalid_argument("spanned_scan: bad diameter range");
    SpanTree t = span(cfg, fam, sp);
    std::vector<Parallelogram> out;
    for (int id : t.nodes_in_diameter_range(dmin_sq, dmax_sq))
        out.push_back(t.nodes[(std::size_t)id].bbox);
    return out;
}

inline int max_disjoint_spanned(const Configuration& cfg, const UpdateFamily& fam,
                                const SpanParams& sp, const Rat& dmin_sq,
                                const Rat& dmax_sq) {
    return span(cfg, fam, sp).max_disjoint_in_range(dmin_sq, dmax_sq);
}

// A spanned critical parallelogram exists iff some node diameter lies in
// [K/C1, K].
inline bool has_spanned_critical(const SpanTree& t, const ConstantPack& pack) {
    return !t.nodes_in_diameter_range(pack.crit_lo_sq(), pack.k_sq()).empty();
}

inline bool has_spanned_critical(const Configuration& cfg, const UpdateFamily& fam,
                                 const AxisPair& axes, const ConstantPack& pack) {
    return has_spanned_critical(span(cfg, fam, SpanParams::from_pack(axes, pack)), pack);
}

// Critical-window nodes whose bounding parallelogram meets the given target.
inline bool critical_span_intersecting(const SpanTree& t, const ConstantPack& pack,
                                       const Parallelogram& target) {
    for (int id : t.nodes_in_diameter_range(pack.crit_lo_sq(), pack.k_sq()))
        if (t.nodes[(std::size_t)id].bbox.intersects(target)) return true;
    return false;
}

}  // namespace ukcm

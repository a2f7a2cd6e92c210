#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ukcm/rational.hpp"

namespace ukcm {

struct Vec {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend Vec operator+(Vec a, Vec b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec operator-(Vec a, Vec b) { return {a.x - b.x, a.y - b.y}; }
    Vec operator-() const { return {-x, -y}; }
    friend Vec operator*(std::int64_t k, Vec a) { return {k * a.x, k * a.y}; }
    friend bool operator==(Vec a, Vec b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(Vec a, Vec b) { return !(a == b); }
    friend bool operator<(Vec a, Vec b) {  // lexicographic, used for canonical orderings
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    }
};

inline std::int64_t dot(Vec a, Vec b) { return a.x * b.x + a.y * b.y; }
inline std::int64_t cross(Vec a, Vec b) { return a.x * b.y - a.y * b.x; }
inline std::int64_t norm2(Vec a) { return a.x * a.x + a.y * a.y; }
inline std::int64_t dist2(Vec a, Vec b) { return norm2(a - b); }
inline Vec rot90(Vec a) { return {-a.y, a.x}; }  // counterclockwise quarter turn

// Primitive integer vector on the rational circle.
class Direction {
  public:
    Direction() : v_{1, 0} {}
    explicit Direction(Vec v) : v_(normalize(v)) {}
    Direction(std::int64_t x, std::int64_t y) : Direction(Vec{x, y}) {}

    Vec vec() const { return v_; }
    std::int64_t x() const { return v_.x; }
    std::int64_t y() const { return v_.y; }
    Direction antipode() const { Direction d; d.v_ = -v_; return d; }
    Direction perp() const { Direction d; d.v_ = rot90(v_); return d; }

    friend bool operator==(Direction a, Direction b) { return a.v_ == b.v_; }
    friend bool operator!=(Direction a, Direction b) { return !(a == b); }

    static Vec normalize(Vec v) {
        if (v.x == 0 && v.y == 0)
            throw std::invalid_argument("Direction: zero vector");
        std::int64_t g = std::gcd(std::llabs(v.x), std::llabs(v.y));
        return {v.x / g, v.y / g};
    }

  private:
    Vec v_;
};

inline Direction normalize_direction(Vec v) { return Direction(v); }

// Position on the circle in [0, 2pi), decided with integer arithmetic only.
// half 0 covers angles in [0, pi): y > 0, or y == 0 with x > 0.
inline int angle_half(Vec v) { return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1; }

inline bool angle_less(Direction a, Direction b) {
    if (a == b) return false;
    int ha = angle_half(a.vec()), hb = angle_half(b.vec());
    if (ha != hb) return ha < hb;
    return cross(a.vec(), b.vec()) > 0;
}

// Stage of x on the walk counterclockwise from base: 0 at base, 1 in (0,pi),
// 2 at the antipode, 3 in (pi,2pi).
inline int ccw_stage(Direction base, Direction x) {
    if (base == x) return 0;
    std::int64_t c = cross(base.vec(), x.vec());
    if (c > 0) return 1;
    if (c < 0) return 3;
    return 2;
}

// Strictly closer to base than y, walking counterclockwise from base.
inline bool ccw_closer(Direction base, Direction x, Direction y) {
    int sx = ccw_stage(base, x), sy = ccw_stage(base, y);
    if (sx != sy) return sx < sy;
    if (sx == 1 || sx == 3) return cross(x.vec(), y.vec()) > 0;
    return false;
}

// Closed circular arc from lo to hi, walking counterclockwise.
// lo == hi is the degenerate single-direction arc. Never a full circle.
struct Arc {
    Direction lo, hi;

    bool degenerate() const { return lo == hi; }
    bool contains(Direction u) const {
        if (u == lo || u == hi) return true;
        if (degenerate()) return false;
        return ccw_closer(lo, u, hi);
    }
    // this arc entirely inside the closed arc [other.lo, other.hi]
    bool inside(const Arc& other) const {
        if (!other.contains(lo) || !other.contains(hi)) return false;
        if (degenerate()) return true;
        // endpoints inside; reject the wrap-around case where this arc leaves
        // the other and comes back
        return !ccw_closer(other.lo, hi, lo);
    }
    bool intersects(const Arc& other) const {
        return other.contains(lo) || other.contains(hi) || contains(other.lo) ||
               contains(other.hi);
    }
    Arc antipodal() const { return Arc{lo.antipode(), hi.antipode()}; }
};

// Open or closed half-plane {y : <u,y> < x} with exact membership.
struct HalfPlane {
    Direction u;
    Rat offset;
    bool closed = false;

    bool contains(Vec p) const {
        Rat lhs(dot(u.vec(), p));
        return closed ? lhs <= offset : lhs < offset;
    }
};

inline bool half_plane_contains(const HalfPlane& h, Vec p) { return h.contains(p); }

struct RatPoint {
    Rat x, y;
};

inline Rat rp_dist2(const RatPoint& a, const RatPoint& b) {
    Rat dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

struct AxisPair {
    Direction u1{-1, 0};
    Direction u2{0, -1};

    Direction u3() const { return u1.antipode(); }
    Direction u4() const { return u2.antipode(); }
    bool collinear() const { return cross(u1.vec(), u2.vec()) == 0; }
};

// R(a,b;c,d) = {x : <x,u3> in [a,c], <x,u4> in [b,d]}, an intersection of
// four closed half-planes. Degenerate (a == c or b == d) is allowed.
class Parallelogram {
  public:
    Parallelogram() = default;
    Parallelogram(AxisPair axes, Rat a, Rat b, Rat c, Rat d)
        : axes_(axes), a_(a), b_(b), c_(c), d_(d) {
        if (axes_.collinear()) throw std::invalid_argument("Parallelogram: collinear axes");
        if (c_ < a_ || d_ < b_) throw std::invalid_argument("Parallelogram: empty bounds");
    }

    const AxisPair& axes() const { return axes_; }
    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    const Rat& c() const { return c_; }
    const Rat& d() const { return d_; }

    Rat coord3(Vec p) const { return Rat(dot(axes_.u3().vec(), p)); }
    Rat coord4(Vec p) const { return Rat(dot(axes_.u4().vec(), p)); }

    bool contains(Vec p) const {
        Rat s = coord3(p), t = coord4(p);
        return a_ <= s && s <= c_ && b_ <= t && t <= d_;
    }

    std::array<RatPoint, 4> corners() const {
        return {corner(a_, b_), corner(a_, d_), corner(c_, b_), corner(c_, d_)};
    }

    Rat diameter_sq() const {
        auto cs = corners();
        Rat best(0);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) best = std::max(best, rp_dist2(cs[i], cs[j]));
        return best;
    }

    bool same_axes(const Parallelogram& o) const {
        return axes_.u1 == o.axes_.u1 && axes_.u2 == o.axes_.u2;
    }
    bool intersects(const Parallelogram& o) const {
        require_same_axes(o);
        return !(c_ < o.a_ || o.c_ < a_ || d_ < o.b_ || o.d_ < b_);
    }
    bool contains_parallelogram(const Parallelogram& o) const {
        require_same_axes(o);
        return a_ <= o.a_ && o.c_ <= c_ && b_ <= o.b_ && o.d_ <= d_;
    }
    friend bool operator==(const Parallelogram& p, const Parallelogram& q) {
        return p.same_axes(q) && p.a_ == q.a_ && p.b_ == q.b_ && p.c_ == q.c_ && p.d_ == q.d_;
    }

    // Integer bounding box [x0,x1] x [y0,y1] of the real region.
    struct IBox {
        std::int64_t x0, y0, x1, y1;
        bool empty() const { return x1 < x0 || y1 < y0; }
        std::int64_t width() const { return x1 - x0 + 1; }
        std::int64_t height() const { return y1 - y0 + 1; }
    };
    IBox integer_bbox() const {
        auto cs = corners();
        Rat xmin = cs[0].x, xmax = cs[0].x, ymin = cs[0].y, ymax = cs[0].y;
        for (const auto& c : cs) {
            xmin = std::min(xmin, c.x);
            xmax = std::max(xmax, c.x);
            ymin = std::min(ymin, c.y);
            ymax = std::max(ymax, c.y);
        }
        return {xmin.ceil(), ymin.ceil(), xmax.floor(), ymax.floor()};
    }

    Parallelogram translated(Vec t) const {
        Rat s3(dot(axes_.u3().vec(), t)), s4(dot(axes_.u4().vec(), t));
        return Parallelogram(axes_, a_ + s3, b_ + s4, c_ + s3, d_ + s4);
    }

    // Axis-aligned box covering sites [x0,x1] x [y0,y1].
    static Parallelogram box(std::int64_t x0, std::int64_t y0, std::int64_t x1,
                             std::int64_t y1) {
        AxisPair ax;  // u1=(-1,0), u2=(0,-1): u3=(1,0), u4=(0,1)
        return Parallelogram(ax, Rat(x0), Rat(y0), Rat(x1), Rat(y1));
    }

  private:
    void require_same_axes(const Parallelogram& o) const {
        if (!same_axes(o))
            throw std::invalid_argument("Parallelogram: mixed axis systems");
    }
    RatPoint corner(Rat s, Rat t) const {
        Vec n3 = axes_.u3().vec(), n4 = axes_.u4().vec();
        Rat det(cross(n3, n4));
        RatPoint p;
        p.x = (s * Rat(n4.y) - t * Rat(n3.y)) / det;
        p.y = (Rat(n3.x) * t - Rat(n4.x) * s) / det;
        return p;
    }

    AxisPair axes_;
    Rat a_{0}, b_{0}, c_{0}, d_{0};
};

inline Parallelogram bounding_parallelogram(const std::vector<Vec>& points,
                                            const AxisPair& axes) {
    if (points.empty())
        throw std::invalid_argument("bounding_parallelogram: empty point set");
    Vec n3 = axes.u3().vec(), n4 = axes.u4().vec();
    std::int64_t a = dot(n3, points[0]), c = a;
    std::int64_t b = dot(n4, points[0]), d = b;
    for (const Vec& p : points) {
        a = std::min(a, dot(n3, p));
        c = std::max(c, dot(n3, p));
        b = std::min(b, dot(n4, p));
        d = std::max(d, dot(n4, p));
    }
    return Parallelogram(axes, Rat(a), Rat(b), Rat(c), Rat(d));
}

// Partition of points into connectivity classes of the graph x~y iff
// |x-y|^2 <= radius_sq. Classes come out sorted by their smallest member.
std::vector<std::vector<Vec>> gamma_components(std::vector<Vec> points, const Rat& radius_sq);

namespace detail {
class DisjointSet {
  public:
    explicit DisjointSet(std::size_t n) : parent_(n), rank_(n, 0) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
    }
    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

  private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> rank_;
};

// Offsets within euclidean distance sqrt(radius_sq) of the origin, (0,0) excluded.
inline std::vector<Vec> disk_offsets(const Rat& radius_sq) {
    std::int64_t r = 0;
    while (Rat((r + 1) * (r + 1)) <= radius_sq) ++r;
    std::vector<Vec> out;
    for (std::int64_t dx = -r; dx <= r; ++dx)
        for (std::int64_t dy = -r; dy <= r; ++dy) {
            if (dx == 0 && dy == 0) continue;
            if (Rat(dx * dx + dy * dy) <= radius_sq) out.push_back({dx, dy});
        }
    return out;
}
}  // namespace detail

inline std::vector<std::vector<Vec>> gamma_components(std::vector<Vec> points,
                                                      const Rat& radius_sq) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const std::size_t n = points.size();
    detail::DisjointSet ds(n);
    // grid buckets of side ceil(radius) keep the pair scan local
    std::int64_t cell = std::max<std::int64_t>(1, radius_sq.to_double() <= 0
                                                      ? 1
                                                      : (std::int64_t)(std::sqrt(radius_sq.to_double())) + 1);
    struct Key {
        std::int64_t cx, cy;
        bool operator<(const Key& o) const { return cx != o.cx ? cx < o.cx : cy < o.cy; }
    };
    std::vector<std::pair<Key, std::size_t>> cells(n);
    auto floordiv = [](std::int64_t a, std::int64_t b) {
        std::int64_t q = a / b;
        if (a % b != 0 && ((a < 0) != (b < 0))) --q;
        return q;
    };
    for (std::size_t i = 0; i < n; ++i)
        cells[i] = {{floordiv(points[i].x, cell), floordiv(points[i].y, cell)}, i};
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    auto bucket_range = [&](Key k) {
        auto lo = std::lower_bound(cells.begin(), cells.end(), k,
                                   [](const auto& a, const Key& b) { return a.first < b; });
        auto hi = std::upper_bound(cells.begin(), cells.end(), k,
                                   [](const Key& a, const auto& b) { return a < b.first; });
        return std::make_pair(lo, hi);
    };
    for (std::size_t i = 0; i < n; ++i) {
        Key k{floordiv(points[i].x, cell), floordiv(points[i].y, cell)};
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto [lo, hi] = bucket_range({k.cx + dx, k.cy + dy});
                for (auto it = lo; it != hi; ++it) {
                    std::size_t j = it->second;
                    if (j <= i) continue;
                    if (Rat(dist2(points[i], points[j])) <= radius_sq) ds.unite(i, j);
                }
            }
    }
    std::vector<std::vector<Vec>> classes;
    std::vector<std::int64_t> class_of(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = ds.find(i);
        if (class_of[r] < 0) {
            class_of[r] = (std::int64_t)classes.size();
            classes.emplace_back();
        }
        classes[(std::size_t)class_of[r]].push_back(points[i]);
    }
    // points were sorted, so each class is sorted and classes are already
    // ordered by smallest member
    return classes;
}

// Convex region bounded by <v,x> <= offset_v over a finite face set.
class Droplet {
  public:
    Droplet() = default;
    Droplet(std::vector<Direction> faces, std::vector<Rat> offsets)
        : faces_(std::move(faces)), offsets_(std::move(offsets)) {
        if (faces_.size() != offsets_.size() || faces_.size() < 3)
            throw std::invalid_argument("Droplet: need one offset per face, >= 3 faces");
        order_ = sort_order(faces_);
    }

    const std::vector<Direction>& faces() const { return faces_; }
    const std::vector<Rat>& offsets() const { return offsets_; }
    Rat offset(std::size_t i) const { return offsets_[i]; }

    bool contains(Vec p) const {
        for (std::size_t i = 0; i < faces_.size(); ++i)
            if (Rat(dot(faces_[i].vec(), p)) > offsets_[i]) return false;
        return true;
    }
    bool contains_droplet(const Droplet& o) const {
        require_same_faces(o);
        for (std::size_t i = 0; i < faces_.size(); ++i)
            if (offsets_[i] < o.offsets_[i]) return false;
        return true;
    }
    friend bool operator==(const Droplet& a, const Droplet& b) {
        return a.faces_same(b) && a.offsets_ == b.offsets_;
    }

    // Vertices of the region, empty when infeasible.
    std::vector<RatPoint> vertices() const {
        std::vector<RatPoint> vs;
        const std::size_t m = faces_.size();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                Vec ni = faces_[i].vec(), nj = faces_[j].vec();
                std::int64_t det = cross(ni, nj);
                if (det == 0) continue;
                RatPoint p;
                p.x = (offsets_[i] * Rat(nj.y) - offsets_[j] * Rat(ni.y)) / Rat(det);
                p.y = (Rat(ni.x) * offsets_[j] - Rat(nj.x) * offsets_[i]) / Rat(det);
                bool ok = true;
                for (std::size_t k = 0; k < m && ok; ++k) {
                    Rat lhs = Rat(faces_[k].vec().x) * p.x + Rat(faces_[k].vec().y) * p.y;
                    if (lhs > offsets_[k]) ok = false;
                }
                if (ok) vs.push_back(p);
            }
        return vs;
    }
    bool feasible() const { return !vertices().empty(); }

    Rat diameter_sq() const {
        auto vs = vertices();
        Rat best(0);
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j)
                best = std::max(best, rp_dist2(vs[i], vs[j]));
        return best;
    }

    // Smallest same-face droplet containing both: per-face max of offsets.
    Droplet join(const Droplet& o) const {
        require_same_faces(o);
        std::vector<Rat> off(offsets_.size());
        for (std::size_t i = 0; i < off.size(); ++i)
            off[i] = std::max(offsets_[i], o.offsets_[i]);
        return Droplet(faces_, off);
    }
    // Per-face min of offsets; feasible() of the result decides intersection.
    bool intersects(const Droplet& o) const {
        require_same_faces(o);
        std::vector<Rat> off(offsets_.size());
        for (std::size_t i = 0; i < off.size(); ++i)
            off[i] = std::min(offsets_[i], o.offsets_[i]);
        return Droplet(faces_, off).feasible();
    }

    void inflate(const Rat& delta) {
        for (auto& o : offsets_) o += delta;
    }

    bool faces_same(const Droplet& o) const {
        if (faces_.size() != o.faces_.size()) return false;
        for (std::size_t i = 0; i < faces_.size(); ++i)
            if (faces_[i] != o.faces_[i]) return false;
        return true;
    }

  private:
    void require_same_faces(const Droplet& o) const {
        if (!faces_same(o)) throw std::invalid_argument("Droplet: mixed face sets");
    }
    static std::vector<std::size_t> sort_order(std::vector<Direction>& faces) {
        std::vector<std::size_t> idx(faces.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        // keep caller's face order; just check for duplicates
        for (std::size_t i = 0; i < faces.size(); ++i)
            for (std::size_t j = i + 1; j < faces.size(); ++j)
                if (faces[i] == faces[j])
                    throw std::invalid_argument("Droplet: duplicate face direction");
        return idx;
    }

    std::vector<Direction> faces_;
    std::vector<Rat> offsets_;
    std::vector<std::size_t> order_;
};

// Smallest integer m >= 0 with m*m >= sq (sq a nonnegative rational).
inline std::int64_t ceil_sqrt(const Rat& sq) {
    if (sq.sign() <= 0) return 0;
    std::int64_t m = (std::int64_t)std::sqrt(sq.to_double());
    while (Rat(m * m) < sq) ++m;
    while (m > 0 && Rat((m - 1) * (m - 1)) >= sq) --m;
    return m;
}

// Separation constants of the droplet machinery. r is recomputed from the
// family; the C's are kept as exact squares so that distance predicates stay
// in integer/rational arithmetic. C1 and K are also needed linearly.
struct ConstantPack {
    std::int64_t r2 = 1;  // squared range of the family
    Rat c1{4};
    Rat c2p_sq, c2_sq, c3_sq, c4p_sq, c4_sq, c5_sq, c6_sq;
    Rat K{1};
    bool allow_small_k = false;  // micro instances may drop the K floor

    double c2p() const { return std::sqrt(c2p_sq.to_double()); }
    double c2() const { return std::sqrt(c2_sq.to_double()); }
    double c3() const { return std::sqrt(c3_sq.to_double()); }
    double c4p() const { return std::sqrt(c4p_sq.to_double()); }
    double c4() const { return std::sqrt(c4_sq.to_double()); }
    double c5() const { return std::sqrt(c5_sq.to_double()); }
    double c6() const { return std::sqrt(c6_sq.to_double()); }
    double r() const { return std::sqrt((double)r2); }

    Rat crit_lo() const { return K / c1; }  // critical window [K/C1, K]
    Rat crit_lo_sq() const { return (K / c1) * (K / c1); }
    Rat k_sq() const { return K * K; }

    // C1=4, C2'=4r, C2=4C2', C3=4C2, C4'=4C3, C4=4C4', C5=4C4, C6=4C5;
    // K is the least integer at or above C1^2*C2'.
    static ConstantPack defaults_for(std::int64_t range_sq) {
        ConstantPack p;
        p.r2 = range_sq;
        p.c1 = Rat(4);
        Rat r2r(range_sq);
        p.c2p_sq = Rat(16) * r2r;
        p.c2_sq = Rat(256) * r2r;
        p.c3_sq = Rat(4096) * r2r;
        p.c4p_sq = Rat(65536) * r2r;
        p.c4_sq = Rat(1048576) * r2r;
        p.c5_sq = Rat(16777216) * r2r;
        p.c6_sq = Rat(268435456) * r2r;
        p.K = Rat(ceil_sqrt(Rat(4096) * r2r));  // (C1^2 C2')^2 = 256*16 r^2
        return p;
    }

    void validate() const {
        Rat c1sq = c1 * c1;
        if (!(Rat(r2) < c1sq)) throw std::invalid_argument("ConstantPack: need r < C1");
        if (!(Rat(4 * r2) < c2p_sq))
            throw std::invalid_argument("ConstantPack: need 2r < C2'");
        if (!(c1sq < c2p_sq)) throw std::invalid_argument("ConstantPack: need C1 < C2'");
        const Rat* chain[] = {&c2p_sq, &c2_sq, &c3_sq, &c4p_sq, &c4_sq, &c5_sq, &c6_sq};
        const char* names[] = {"C2'", "C2", "C3", "C4'", "C4", "C5", "C6"};
        for (int i = 0; i + 1 < 7; ++i)
            if (!(*chain[i] < *chain[i + 1]))
                throw std::invalid_argument(std::string("ConstantPack: need ") + names[i] +
                                            " < " + names[i + 1]);
        if (K.sign() <= 0) throw std::invalid_argument("ConstantPack: K must be positive");
        if (!allow_small_k) {
            // K >= C1^2 C2'  <=>  K^2 >= C1^4 C2'^2
            if (K * K < c1sq * c1sq * c2p_sq)
                throw std::invalid_argument("ConstantPack: K below C1^2*C2' floor");
        }
    }
};

}  // namespace ukcm

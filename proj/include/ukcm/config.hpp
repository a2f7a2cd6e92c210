#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ukcm/geometry.hpp"

namespace ukcm {

enum class BoundaryKind { AllHealthy, InfectedHalfPlane, FrozenSet };

// How sites outside the region read. AllHealthy: healthy. InfectedHalfPlane:
// infected exactly on the half-plane. FrozenSet: infected on a fixed set.
struct Boundary {
    BoundaryKind kind = BoundaryKind::AllHealthy;
    HalfPlane hp;
    std::vector<Vec> frozen;  // sorted

    static Boundary all_healthy() { return Boundary{}; }
    static Boundary infected_half_plane(HalfPlane h) {
        Boundary b;
        b.kind = BoundaryKind::InfectedHalfPlane;
        b.hp = h;
        return b;
    }
    static Boundary frozen_set(std::vector<Vec> pts) {
        Boundary b;
        b.kind = BoundaryKind::FrozenSet;
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        b.frozen = std::move(pts);
        return b;
    }

    bool infected_outside(Vec p) const {
        switch (kind) {
            case BoundaryKind::AllHealthy: return false;
            case BoundaryKind::InfectedHalfPlane: return hp.contains(p);
            case BoundaryKind::FrozenSet:
                return std::binary_search(frozen.begin(), frozen.end(), p);
        }
        return false;
    }
};

// Infection state on the integer points of a parallelogram region.
// Site values follow the 0 = infected / 1 = healthy convention; internally a
// bit set to 1 means healthy. Sites outside the region are read through the
// boundary convention only.
class Configuration {
  public:
    Configuration() : Configuration(Parallelogram::box(0, 0, 0, 0), Boundary{}) {}
    Configuration(Parallelogram region, Boundary boundary)
        : region_(std::move(region)), boundary_(std::move(boundary)) {
        auto bb = region_.integer_bbox();
        if (bb.empty()) throw std::invalid_argument("Configuration: region has no sites");
        x0_ = bb.x0;
        y0_ = bb.y0;
        w_ = bb.width();
        h_ = bb.height();
        wpr_ = (w_ + 63) / 64;
        healthy_.assign((std::size_t)(wpr_ * h_), ~0ull);
        mask_.assign((std::size_t)(wpr_ * h_), 0ull);
        // trim tail bits of each row
        for (std::int64_t y = 0; y < h_; ++y) {
            std::int64_t tail = w_ % 64;
            if (tail) healthy_[(std::size_t)(y * wpr_ + wpr_ - 1)] = (1ull << tail) - 1;
        }
        sites_.reserve((std::size_t)(w_ * h_));
        for (std::int64_t y = y0_; y < y0_ + h_; ++y)
            for (std::int64_t x = x0_; x < x0_ + w_; ++x) {
                Vec p{x, y};
                if (region_.contains(p)) {
                    set_mask(p);
                    sites_.push_back(p);
                }
            }
        if (sites_.empty()) throw std::invalid_argument("Configuration: region has no sites");
        infected_count_ = 0;
    }

    const Parallelogram& region() const { return region_; }
    const Boundary& boundary() const { return boundary_; }
    const std::vector<Vec>& sites() const { return sites_; }
    std::int64_t site_count() const { return (std::int64_t)sites_.size(); }
    std::int64_t infected_count() const { return infected_count_; }

    bool in_bbox(Vec p) const {
        return p.x >= x0_ && p.x < x0_ + w_ && p.y >= y0_ && p.y < y0_ + h_;
    }
    bool in_region(Vec p) const { return in_bbox(p) && mask_bit(p); }

    bool infected(Vec p) const { return !bit(p); }
    bool infected_ext(Vec p) const {
        if (in_bbox(p) && mask_bit(p)) return !bit(p);
        return boundary_.infected_outside(p);
    }
    void infect(Vec p) {
        if (!in_region(p)) throw std::invalid_argument("Configuration::infect: outside region");
        if (bit(p)) {
            clear_bit(p);
            ++infected_count_;
        }
    }
    void heal(Vec p) {
        if (!in_region(p)) throw std::invalid_argument("Configuration::heal: outside region");
        if (!bit(p)) {
            set_bit(p);
            --infected_count_;
        }
    }
    void set_state(Vec p, bool healthy) { healthy ? heal(p) : infect(p); }

    std::vector<Vec> infected_sites() const {
        std::vector<Vec> out;
        out.reserve((std::size_t)infected_count_);
        for (const Vec& p : sites_)
            if (infected(p)) out.push_back(p);
        return out;
    }

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.region_ == b.region_ && a.healthy_ == b.healthy_;
    }
    friend bool operator!=(const Configuration& a, const Configuration& b) {
        return !(a == b);
    }

    static Configuration all_healthy(const Parallelogram& region,
                                     Boundary boundary = Boundary{}) {
        return Configuration(region, std::move(boundary));
    }
    static Configuration from_infections(const Parallelogram& region,
                                         const std::vector<Vec>& infections,
                                         Boundary boundary = Boundary{}) {
        Configuration c(region, std::move(boundary));
        for (const Vec& p : infections) c.infect(p);
        return c;
    }

    // bbox accessors used by the hot loops
    std::int64_t bbox_x0() const { return x0_; }
    std::int64_t bbox_y0() const { return y0_; }
    std::int64_t bbox_w() const { return w_; }
    std::int64_t bbox_h() const { return h_; }

  private:
    std::size_t word(Vec p) const {
        return (std::size_t)((p.y - y0_) * wpr_ + (p.x - x0_) / 64);
    }
    std::uint64_t wbit(Vec p) const { return 1ull << ((p.x - x0_) % 64); }
    bool bit(Vec p) const { return healthy_[word(p)] & wbit(p); }
    void set_bit(Vec p) { healthy_[word(p)] |= wbit(p); }
    void clear_bit(Vec p) { healthy_[word(p)] &= ~wbit(p); }
    bool mask_bit(Vec p) const { return mask_[word(p)] & wbit(p); }
    void set_mask(Vec p) { mask_[word(p)] |= wbit(p); }

    Parallelogram region_;
    Boundary boundary_;
    std::int64_t x0_ = 0, y0_ = 0, w_ = 1, h_ = 1, wpr_ = 1;
    std::vector<std::uint64_t> healthy_;
    std::vector<std::uint64_t> mask_;
    std::vector<Vec> sites_;
    std::int64_t infected_count_ = 0;
};

struct SnapshotError : std::runtime_error {
    explicit SnapshotError(const std::string& w) : std::runtime_error(w) {}
};

// Text snapshot: header with region/boundary/family, then one run-length
// encoded line per bbox row ('h' healthy, 'i' infected). Out-of-region bbox
// cells are written as healthy. Round-trips bit-exactly.
inline void write_snapshot(std::ostream& os, const Configuration& c,
                           const std::string& family_name = "-") {
    const Parallelogram& r = c.region();
    os << "ukcm-snapshot 1\n";
    os << "family " << (family_name.empty() ? "-" : family_name) << "\n";
    os << "axes " << r.axes().u1.x() << " " << r.axes().u1.y() << " " << r.axes().u2.x()
       << " " << r.axes().u2.y() << "\n";
    os << "bounds " << r.a().str() << " " << r.b().str() << " " << r.c().str() << " "
       << r.d().str() << "\n";
    const Boundary& b = c.boundary();
    switch (b.kind) {
        case BoundaryKind::AllHealthy: os << "boundary healthy\n"; break;
        case BoundaryKind::InfectedHalfPlane:
            os << "boundary halfplane " << b.hp.u.x() << " " << b.hp.u.y() << " "
               << b.hp.offset.str() << " " << (b.hp.closed ? "closed" : "open") << "\n";
            break;
        case BoundaryKind::FrozenSet:
            os << "boundary frozen " << b.frozen.size() << "\n";
            for (const Vec& p : b.frozen) os << p.x << " " << p.y << "\n";
            break;
    }
    os << "bbox " << c.bbox_x0() << " " << c.bbox_y0() << " " << c.bbox_w() << " "
       << c.bbox_h() << "\n";
    for (std::int64_t y = c.bbox_y0(); y < c.bbox_y0() + c.bbox_h(); ++y) {
        std::string line;
        char cur = 0;
        std::int64_t run = 0;
        for (std::int64_t x = c.bbox_x0(); x < c.bbox_x0() + c.bbox_w(); ++x) {
            Vec p{x, y};
            char v = (c.in_region(p) && c.infected(p)) ? 'i' : 'h';
            if (v == cur) {
                ++run;
            } else {
                if (run) line += std::to_string(run) + cur;
                cur = v;
                run = 1;
            }
        }
        if (run) line += std::to_string(run) + cur;
        os << line << "\n";
    }
    os << "end\n";
}

inline Configuration read_snapshot(std::istream& is, std::string* family_name = nullptr) {
    auto fail = [](const std::string& w) -> void { throw SnapshotError(w); };
    std::string tok;
    int version = 0;
    if (!(is >> tok) || tok != "ukcm-snapshot") fail("snapshot: bad magic");
    if (!(is >> version) || version != 1) fail("snapshot: unsupported version");
    if (!(is >> tok) || tok != "family") fail("snapshot: missing family");
    std::string fam;
    is >> fam;
    if (family_name) *family_name = fam == "-" ? "" : fam;
    std::int64_t ux1, uy1, ux2, uy2;
    if (!(is >> tok) || tok != "axes") fail("snapshot: missing axes");
    is >> ux1 >> uy1 >> ux2 >> uy2;
    std::string sa, sb, sc, sd;
    if (!(is >> tok) || tok != "bounds") fail("snapshot: missing bounds");
    is >> sa >> sb >> sc >> sd;
    AxisPair axes{Direction(ux1, uy1), Direction(ux2, uy2)};
    Parallelogram region(axes, Rat::parse(sa), Rat::parse(sb), Rat::parse(sc),
                         Rat::parse(sd));
    if (!(is >> tok) || tok != "boundary") fail("snapshot: missing boundary");
    std::string bk;
    is >> bk;
    Boundary bound;
    if (bk == "healthy") {
        bound = Boundary::all_healthy();
    } else if (bk == "halfplane") {
        std::int64_t hx, hy;
        std::string off, cl;
        is >> hx >> hy >> off >> cl;
        bound = Boundary::infected_half_plane(
            HalfPlane{Direction(hx, hy), Rat::parse(off), cl == "closed"});
    } else if (bk == "frozen") {
        std::size_t n;
        is >> n;
        std::vector<Vec> pts(n);
        for (auto& p : pts) is >> p.x >> p.y;
        bound = Boundary::frozen_set(std::move(pts));
    } else {
        fail("snapshot: unknown boundary kind '" + bk + "'");
    }
    std::int64_t bx0, by0, bw, bh;
    if (!(is >> tok) || tok != "bbox") fail("snapshot: missing bbox");
    is >> bx0 >> by0 >> bw >> bh;
    Configuration c(region, bound);
    if (c.bbox_x0() != bx0 || c.bbox_y0() != by0 || c.bbox_w() != bw || c.bbox_h() != bh)
        fail("snapshot: bbox does not match region");
    is >> std::ws;
    for (std::int64_t y = by0; y < by0 + bh; ++y) {
        std::string line;
        if (!std::getline(is, line)) fail("snapshot: truncated rows");
        std::int64_t x = bx0;
        std::size_t i = 0;
        while (i < line.size()) {
            std::int64_t run = 0;
            while (i < line.size() && isdigit((unsigned char)line[i]))
                run = run * 10 + (line[i++] - '0');
            if (i >= line.size() || run <= 0) fail("snapshot: malformed RLE row");
            char v = line[i++];
            if (v != 'h' && v != 'i') fail("snapshot: malformed RLE value");
            for (std::int64_t k = 0; k < run; ++k, ++x) {
                Vec p{x, y};
                if (v == 'i') {
                    if (!c.in_region(p)) fail("snapshot: infection outside region");
                    c.infect(p);
                }
            }
        }
        if (x != bx0 + bw) fail("snapshot: row length mismatch");
    }
    if (!(is >> tok) || tok != "end") fail("snapshot: missing end marker");
    return c;
}

inline std::string snapshot_string(const Configuration& c, const std::string& fam = "-") {
    std::ostringstream os;
    write_snapshot(os, c, fam);
    return os.str();
}

}  // namespace ukcm

#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ukcm/closure.hpp"
#include "ukcm/errors.hpp"
#include "ukcm/family.hpp"

namespace ukcm {

struct DifficultyBudget {
    int n_max = 4;
    // 0 means the per-level default window ceil(window_scale * r * n)
    std::int64_t window_radius = 0;
    double window_scale = 6.0;
    double shift_scale = 4.0;
    std::int64_t max_candidates_per_level = 2000000;

    std::int64_t window_for(double r, int n) const {
        if (window_radius > 0) return window_radius;
        return (std::int64_t)std::ceil(window_scale * r * n);
    }
    void validate(double r) const {
        if (n_max < 1) throw std::invalid_argument("difficulty budget: n_max < 1");
        if (window_radius > 0 && (double)window_radius < r)
            throw std::invalid_argument("difficulty budget: window below family range");
    }
};

// Witness that H_u plus `extra` infects infinitely many sites: the seed set I
// lies in [H_u u extra] \ H_u and satisfies I + shift c [H_u u I] with shift
// parallel to the boundary line, so the pattern reproduces itself forever.
struct GrowthCertificate {
    Direction u;
    std::vector<Vec> extra;  // Z
    std::vector<Vec> seed;   // I
    Vec shift;               // w
};

struct DifficultyValue {
    enum class Kind { Zero, Finite, Infinite, Unknown };
    Kind kind = Kind::Unknown;
    int value = -1;  // set for Finite
    std::optional<GrowthCertificate> certificate;
    std::string note;

    static DifficultyValue zero() { return {Kind::Zero, 0, {}, ""}; }
    static DifficultyValue infinite(std::string why) {
        return {Kind::Infinite, -1, {}, std::move(why)};
    }
    static DifficultyValue finite(int n, GrowthCertificate cert) {
        return {Kind::Finite, n, std::move(cert), ""};
    }
    static DifficultyValue unknown(std::string why) {
        return {Kind::Unknown, -1, {}, std::move(why)};
    }

    bool is_zero() const { return kind == Kind::Zero; }
    bool is_finite() const { return kind == Kind::Finite || kind == Kind::Zero; }
    bool is_infinite() const { return kind == Kind::Infinite; }
    bool is_unknown() const { return kind == Kind::Unknown; }
    int finite_value() const { return kind == Kind::Zero ? 0 : value; }
    // strict comparison against a finite difficulty level; Unknown refuses
    bool exceeds(int alpha) const {
        if (kind == Kind::Infinite) return true;
        if (kind == Kind::Unknown)
            throw BudgetError("difficulty comparison against an Unknown value");
        return finite_value() > alpha;
    }
    std::string str() const {
        switch (kind) {
            case Kind::Zero: return "0";
            case Kind::Finite: return std::to_string(value);
            case Kind::Infinite: return "inf";
            case Kind::Unknown: return "unknown";
        }
        return "?";
    }
};

namespace detail {

// Search state for one direction: the half-plane H_u is a boundary
// convention, the region covers only the outside strip.
class DifficultySearch {
  public:
    DifficultySearch(const UpdateFamily& fam, Direction u, const DifficultyBudget& budget)
        : fam_(fam), engine_(fam), u_(u), p_(u.perp()), budget_(budget) {
        r_ = fam.range_sq();
        rnorm_ = (std::int64_t)std::ceil(std::sqrt((double)r_));
        unorm2_ = norm2(u_.vec());
    }

    DifficultyValue run() {
        budget_.validate(fam_.range());
        bool lower_levels_complete = true;
        for (int n = 1; n <= budget_.n_max; ++n) {
            LevelResult lr = run_level(n);
            if (lr.growth) {
                if (!lower_levels_complete)
                    return DifficultyValue::unknown(
                        "growth certificate at n=" + std::to_string(n) +
                        " but a smaller level left unresolved candidates");
                return DifficultyValue::finite(n, std::move(*lr.growth));
            }
            if (lr.unresolved > 0) {
                lower_levels_complete = false;
                return DifficultyValue::unknown(
                    "level n=" + std::to_string(n) + ": " + std::to_string(lr.unresolved) +
                    " candidate sets neither certified finite nor growing");
            }
        }
        return DifficultyValue::unknown("no growth certificate up to n_max=" +
                                        std::to_string(budget_.n_max));
    }

  private:
    struct LevelResult {
        std::optional<GrowthCertificate> growth;
        std::int64_t unresolved = 0;
    };

    // raw coordinates: perp(z) = <u,z> (>= 0 outside the open half-plane),
    // along(z) = <p,z>; translation by p shifts along by |p|^2.
    std::int64_t perp(Vec z) const { return dot(u_.vec(), z); }
    std::int64_t along(Vec z) const { return dot(p_.vec(), z); }

    LevelResult run_level(int n) {
        LevelResult res;
        const std::int64_t W = budget_.window_for(fam_.range(), n);
        const std::int64_t wu = (std::int64_t)std::ceil((double)W * std::sqrt((double)unorm2_));
        const std::int64_t pmax = wu + rnorm_ * (std::int64_t)std::ceil(std::sqrt((double)unorm2_)) + 1;
        const std::int64_t amax = wu + 2 * rnorm_ * (std::int64_t)std::ceil(std::sqrt((double)unorm2_)) + 4;

        // candidate points: outside H_u, within the window strip
        std::vector<Vec> fund, window;
        auto bb = window_bbox(wu);
        for (std::int64_t x = bb[0]; x <= bb[2]; ++x)
            for (std::int64_t y = bb[1]; y <= bb[3]; ++y) {
                Vec z{x, y};
                std::int64_t pe = perp(z), al = along(z);
                if (pe < 0 || pe > wu) continue;
                if (al < -wu || al > wu) continue;
                window.push_back(z);
                if (al >= 0 && al < norm2(p_.vec())) fund.push_back(z);
            }
        auto key = [&](Vec z) {
            return std::max(std::llabs(along(z)), std::llabs(perp(z)));
        };
        std::sort(window.begin(), window.end(), [&](Vec a, Vec b) {
            auto ka = key(a), kb = key(b);
            if (ka != kb) return ka < kb;
            return a < b;
        });
        std::sort(fund.begin(), fund.end(), [&](Vec a, Vec b) {
            auto ka = key(a), kb = key(b);
            if (ka != kb) return ka < kb;
            return a < b;
        });

        Parallelogram region(AxisPair{u_.antipode(), p_.antipode()}, Rat(0), Rat(-amax),
                             Rat(pmax), Rat(amax));
        Configuration work(region,
                           Boundary::infected_half_plane(HalfPlane{u_, Rat(0), false}));

        std::vector<Vec> z(n);
        std::int64_t examined = 0;
        std::optional<GrowthCertificate> growth;
        // canonical candidate: the along-minimal (then lex-minimal) point sits
        // in the fundamental domain, quotienting out translation along l_u
        auto canonical = [&](const std::vector<Vec>& zs) {
            Vec best = zs[0];
            for (const Vec& q : zs)
                if (along(q) < along(best) || (along(q) == along(best) && q < best)) best = q;
            std::int64_t al = along(best);
            return al >= 0 && al < norm2(p_.vec());
        };

        std::vector<std::size_t> idx(n);
        auto try_candidate = [&](const std::vector<Vec>& zs) -> bool {
            if (!canonical(zs)) return false;
            ++examined;
            Outcome oc = analyze(work, zs, amax, pmax);
            if (oc.kind == Outcome::Growth) {
                growth = std::move(oc.cert);
                return true;
            }
            if (oc.kind == Outcome::Unresolved) ++res.unresolved;
            return false;
        };

        // nested combination loop: z[0] from the fundamental domain, the rest
        // from the whole window, all distinct
        bool done = false;
        std::function<void(int)> rec = [&](int depth) {
            if (done || examined > budget_.max_candidates_per_level) {
                if (examined > budget_.max_candidates_per_level) {
                    ++res.unresolved;
                    done = true;
                }
                return;
            }
            if (depth == n) {
                if (try_candidate(z)) done = true;
                return;
            }
            const auto& pool = depth == 0 ? fund : window;
            for (std::size_t i = 0; i < pool.size() && !done; ++i) {
                bool dup = false;
                for (int d = 0; d < depth; ++d)
                    if (z[d] == pool[i]) dup = true;
                if (dup) continue;
                // enforce increasing order among the non-pinned points to
                // avoid permutations
                if (depth >= 2 && !(z[depth - 1] < pool[i])) continue;
                z[depth] = pool[i];
                rec(depth + 1);
            }
        };
        rec(0);
        res.growth = std::move(growth);
        return res;
    }

    std::array<std::int64_t, 4> window_bbox(std::int64_t wu) const {
        // conservative integer bbox of {0 <= <u,z> <= wu, |<p,z>| <= wu}
        double un = std::sqrt((double)unorm2_);
        std::int64_t m = (std::int64_t)std::ceil(2.0 * (double)wu / un) + 2;
        return {-m, -m, m, m};
    }

    struct Outcome {
        enum Kind { Finite, Growth, Unresolved } kind = Unresolved;
        GrowthCertificate cert;
    };

    Outcome analyze(Configuration& work, const std::vector<Vec>& zs, std::int64_t amax,
                    std::int64_t pmax) {
        for (const Vec& q : zs) work.infect(q);
        std::vector<Vec> grown;
        engine_.close_collect(work, grown);
        std::vector<Vec> T = zs;
        T.insert(T.end(), grown.begin(), grown.end());

        bool finite = true;
        for (const Vec& t : T) {
            std::int64_t al = along(t), pe = perp(t);
            if (!face_clear(amax - al) || !face_clear(al + amax) || !face_clear(pmax - pe)) {
                finite = false;
                break;
            }
        }
        Outcome oc;
        if (finite) {
            oc.kind = Outcome::Finite;
        } else if ((std::int64_t)T.size() <= 50000) {
            auto cert = try_growth(T, zs, amax, pmax);
            if (cert) {
                oc.kind = Outcome::Growth;
                oc.cert = std::move(*cert);
            }
        }
        // reset the shared configuration
        for (const Vec& q : grown) work.heal(q);
        for (const Vec& q : zs) work.heal(q);
        return oc;
    }

    // face distance >= family range, in exact squared arithmetic:
    // (gap_raw / |axis|) >= r  <=>  gap_raw^2 >= r^2 * |axis|^2
    bool face_clear(std::int64_t gap_raw) const {
        if (gap_raw < 0) return false;
        return gap_raw * gap_raw >= r_ * unorm2_;
    }

    std::optional<GrowthCertificate> try_growth(const std::vector<Vec>& T,
                                                const std::vector<Vec>& zs,
                                                std::int64_t amax, std::int64_t pmax) {
        const double pl = std::sqrt((double)unorm2_);
        const std::int64_t shift_bound =
            (std::int64_t)std::ceil(budget_.shift_scale * (double)amax / pl) + 1;
        for (std::int64_t k = 1; k <= shift_bound; ++k) {
            for (int sgn : {1, -1}) {
                Vec w = (sgn * k) * p_.vec();
                std::int64_t ext = k * norm2(p_.vec()) + rnorm_ * (std::int64_t)pl + 2;
                Parallelogram region2(AxisPair{u_.antipode(), p_.antipode()}, Rat(0),
                                      Rat(-(amax + ext)), Rat(pmax), Rat(amax + ext));
                Configuration c2(region2,
                                 Boundary::infected_half_plane(HalfPlane{u_, Rat(0), false}));
                for (const Vec& t : T) c2.infect(t);
                engine_.close_in_place(c2);
                bool ok = true;
                for (const Vec& t : T) {
                    Vec s = t + w;
                    if (!c2.in_region(s) || !c2.infected(s)) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    GrowthCertificate cert;
                    cert.u = u_;
                    cert.extra = zs;
                    cert.seed = T;
                    cert.shift = w;
                    return cert;
                }
            }
        }
        return std::nullopt;
    }

    const UpdateFamily& fam_;
    ClosureEngine engine_;
    Direction u_;
    Direction p_;
    DifficultyBudget budget_;
    std::int64_t r_ = 1;
    std::int64_t rnorm_ = 1;
    std::int64_t unorm2_ = 1;
};

}  // namespace detail

// Difficulty of a direction: 0 when unstable, infinity for non-isolated
// stable directions (including interval endpoints), and otherwise the
// smallest certified number of extra infections that lets the half-plane
// grow forever, searched within the budget.
inline DifficultyValue difficulty(const UpdateFamily& fam, const StableSet& ss,
                                  Direction u, const DifficultyBudget& budget = {}) {
    if (!is_stable(fam, u)) return DifficultyValue::zero();
    if (!ss.is_isolated(u))
        return DifficultyValue::infinite("stable and not isolated");
    detail::DifficultySearch search(fam, u, budget);
    return search.run();
}

inline DifficultyValue difficulty(const UpdateFamily& fam, Direction u,
                                  const DifficultyBudget& budget = {}) {
    return difficulty(fam, stable_set(fam), u, budget);
}

// Re-check a growth certificate with fresh closures: the seed set must come
// from [H_u u Z] \ H_u and its shift must stay inside [H_u u Z u I].
inline bool verify_growth_certificate(const UpdateFamily& fam, const GrowthCertificate& cert) {
    if (cert.seed.empty()) return false;
    if (cross(cert.shift, cert.u.perp().vec()) != 0 || (cert.shift == Vec{0, 0}))
        return false;
    ClosureEngine engine(fam);
    Direction u = cert.u, p = u.perp();
    std::int64_t lo_a = 0, hi_a = 0, hi_p = 0;
    auto widen = [&](Vec v) {
        lo_a = std::min(lo_a, dot(p.vec(), v));
        hi_a = std::max(hi_a, dot(p.vec(), v));
        hi_p = std::max(hi_p, dot(u.vec(), v));
    };
    for (const Vec& v : cert.seed) widen(v);
    for (const Vec& v : cert.extra) widen(v);
    widen(cert.shift);
    std::int64_t pad = 4 * (std::int64_t)std::ceil(fam.range() * std::sqrt((double)norm2(u.vec()))) + 4;
    Parallelogram region(AxisPair{u.antipode(), p.antipode()}, Rat(0), Rat(lo_a - pad),
                         Rat(hi_p + pad), Rat(hi_a + pad));
    Boundary hp = Boundary::infected_half_plane(HalfPlane{u, Rat(0), false});

    Configuration from_z(region, hp);
    for (const Vec& q : cert.extra)
        if (from_z.in_region(q)) from_z.infect(q);
    engine.close_in_place(from_z);
    // I c [H_u u Z] \ H_u, and since then [H_u u Z u I] = [H_u u Z] the
    // shifted copy must already sit inside the same closure
    for (const Vec& s : cert.seed)
        if (!from_z.in_region(s) || !from_z.infected(s)) return false;
    for (const Vec& s : cert.seed) {
        Vec t = s + cert.shift;
        if (!from_z.in_region(t) || !from_z.infected(t)) return false;
    }
    return true;
}

}  // namespace ukcm

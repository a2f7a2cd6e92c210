#pragma once

#include <array>
#include <cmath>
#include <string>

#include "ukcm/geometry.hpp"

namespace ukcm {

// Scale parameters fed into the bottleneck bound. T, L, H are kept as natural
// logarithms: at the intended scales they overflow doubles otherwise.
struct PropMainParams {
    double K = 0;
    double ell = 0;
    double h = 0;
    double ln_T = 0;
    double ln_L = 0;
    double ln_H = 0;
    std::int64_t n = 0;  // integral by contract
    double n_raw = 0;    // formula value before rounding down
};

struct TheoremParameters {
    char cls = 0;
    bool automatic = false;  // classes d and g: the bound is inherited from
                             // bootstrap percolation, no parameter table
    PropMainParams params;
};

// Per-class parameter choices as functions of q; lg = log(1/q), llg = log lg.
inline TheoremParameters theorem_parameters(char cls, double q, int alpha,
                                            const ConstantPack& pack) {
    if (!(q > 0 && q < 1)) throw std::invalid_argument("theorem_parameters: q not in (0,1)");
    if (alpha < 1) throw std::invalid_argument("theorem_parameters: alpha < 1");
    const double a = (double)alpha;
    const double lg = std::log(1.0 / q);
    const double llg = std::log(lg);
    const double qa = std::pow(q, a);
    const double c1 = pack.c1.to_double();
    const double c5 = pack.c5();
    const double c6 = pack.c6();

    TheoremParameters out;
    out.cls = cls;
    PropMainParams& p = out.params;
    switch (cls) {
        case 'a':
            p.K = std::pow(q, -a - 0.25);
            p.ell = p.h = std::pow(q, -4 * a);
            p.ln_L = p.ln_H = lg * lg / (c6 * qa);
            p.ln_T = std::pow(lg, 4) / (c6 * c6 * qa * qa);
            p.n_raw = lg * lg / (2 * c6 * qa);
            break;
        case 'b':
            p.K = std::pow(q, -a);
            p.ell = p.h = std::pow(q, -4 * a);
            p.ln_L = p.ln_H = 1.0 / (c6 * qa);
            p.ln_T = 1.0 / (c6 * c6 * qa * qa);
            p.n_raw = 1.0 / (2 * c6 * qa);
            break;
        case 'c':
            p.K = std::pow(q, -a - 0.25);
            p.ell = p.h = std::pow(q, -a - 0.625);
            p.ln_L = p.ln_H = (a + 0.75) * lg;
            p.ln_T = std::pow(lg, 3) / (c6 * qa);
            p.n_raw = lg / c1;
            break;
        case 'e':
            p.K = 1.0 / (c5 * qa);
            p.ell = p.h = std::pow(q, -a - 0.5);
            p.ln_L = p.ln_H = (a + 0.75) * lg;
            p.ln_T = lg / (c6 * qa);
            p.n_raw = lg / c1;
            break;
        case 'f':
            p.K = 1.0 / (c5 * qa);
            p.ell = std::pow(q, -a - 0.5);
            p.ln_L = (a + 0.75) * lg;
            p.h = llg / qa;
            p.ln_H = 0.25 * std::log(lg) + a * lg;  // H = lg^(1/4) / q^a
            p.ln_T = llg / (c6 * c6 * c6 * qa);
            p.n_raw = llg / c1;
            break;
        case 'd':
        case 'g':
            out.automatic = true;
            return out;
        default:
            throw std::invalid_argument(std::string("theorem_parameters: unknown class '") +
                                        cls + "'");
    }
    p.n = (std::int64_t)std::floor(p.n_raw);
    if (p.n < 0) p.n = 0;
    return out;
}

struct HypothesisInput {
    double ln_rho = 0;
    double ln_p_left = 0;
    double ln_p_down = 0;
    double ln_p_locinf = 0;
};

struct HypothesisLine {
    std::string name;
    double ln_margin = 0;  // slack of the inequality in log-domain, >= 0 passes
    bool pass = false;
};

struct HypothesisReport {
    std::array<HypothesisLine, 4> lines;
    bool all_pass = false;
};

// The four hypotheses of the bottleneck bound, evaluated in log-domain with
// signed margins: geometry L >= 3^n (11K + ell) and likewise for H; crossing
// 1 >= T (LH)^2 max(p_down, p_left); spanning 1 >= T L H (L H K^3 rho)^(n+1);
// and 1/8 >= mu(0 locally infectable).
inline HypothesisReport check_prop_main_hypotheses(const PropMainParams& p,
                                                   const HypothesisInput& in) {
    auto req_finite = [](double v, const char* what) {
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string("hypothesis check: non-finite ") + what);
    };
    req_finite(p.ln_T, "ln T");
    req_finite(p.ln_L, "ln L");
    req_finite(p.ln_H, "ln H");
    req_finite(p.K, "K");
    req_finite(p.ell, "ell");
    req_finite(p.h, "h");
    req_finite(in.ln_rho, "ln rho");
    req_finite(in.ln_p_left, "ln p_left");
    req_finite(in.ln_p_down, "ln p_down");
    req_finite(in.ln_p_locinf, "ln p_locinf");

    HypothesisReport rep;
    const double ln3 = std::log(3.0);
    double geomL = p.ln_L - ((double)p.n * ln3 + std::log(11 * p.K + p.ell));
    double geomH = p.ln_H - ((double)p.n * ln3 + std::log(11 * p.K + p.h));
    rep.lines[0] = {"geometry", std::min(geomL, geomH), std::min(geomL, geomH) >= 0};
    double crossing =
        -(p.ln_T + 2 * (p.ln_L + p.ln_H) + std::max(in.ln_p_down, in.ln_p_left));
    rep.lines[1] = {"crossing", crossing, crossing >= 0};
    double spanning = -(p.ln_T + p.ln_L + p.ln_H +
                        (double)(p.n + 1) *
                            (p.ln_L + p.ln_H + 3 * std::log(p.K) + in.ln_rho));
    rep.lines[2] = {"spanning", spanning, spanning >= 0};
    double local = std::log(1.0 / 8.0) - in.ln_p_locinf;
    rep.lines[3] = {"locally-infectable", local, local >= 0};
    rep.all_pass = true;
    for (const auto& l : rep.lines) rep.all_pass = rep.all_pass && l.pass;
    return rep;
}

}  // namespace ukcm

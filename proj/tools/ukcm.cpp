// ukcm: bootstrap percolation and kinetically constrained model toolkit.
//
// Subcommands: classify, sweep-tau0, verify, estimate, closure, span-scan.
// Exit codes: 0 success, 2 input error, 3 budget/unknown, 4 internal error.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "ukcm/classify.hpp"
#include "ukcm/estimators.hpp"
#include "ukcm/experiment.hpp"
#include "ukcm/kcm.hpp"
#include "ukcm/paths.hpp"
#include "ukcm/span.hpp"
#include "ukcm/theorem.hpp"

namespace {

constexpr const char* kVersion = "ukcm 0.1.0";

using namespace ukcm;

UpdateFamily load_family_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open family file '" + path + "'");
    return parse_family(f);
}

// Relative paths inside a config file resolve against the file's directory
// when they do not resolve against the working directory.
std::string resolve_relative(const std::string& base_file, const std::string& path) {
    if (path.empty() || path.front() == '/' || base_file.empty()) return path;
    std::ifstream probe(path);
    if (probe) return path;
    auto slash = base_file.find_last_of('/');
    if (slash == std::string::npos) return path;
    return base_file.substr(0, slash + 1) + path;
}

struct OutFile {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit OutFile(const std::string& path) {
        if (!path.empty() && path != "-") {
            file.open(path);
            if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
            os = &file;
        }
    }
    std::ostream& get() { return *os; }
};

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

Parallelogram parse_box(const std::string& s) {
    std::stringstream ss(s);
    std::int64_t x0, y0, x1, y1;
    char c;
    ss >> x0 >> c >> y0 >> c >> x1 >> c >> y1;
    if (!ss) throw std::invalid_argument("expected box as x0,y0,x1,y1: '" + s + "'");
    return Parallelogram::box(x0, y0, x1, y1);
}

// --pack-<name> flags gathered here, applied on top of family defaults
struct PackFlags {
    std::map<std::string, std::string> values;
    ConstantPack build(const UpdateFamily& fam) const {
        return pack_from_strings(fam.range_sq(), values);
    }
    void add_options(CLI::App* cmd) {
        for (const char* key :
             {"c1", "c2p", "c2", "c3", "c4p", "c4", "c5", "c6", "k", "allow-small-k"}) {
            std::string flag = std::string("--pack-") + key;
            cmd->add_option_function<std::string>(
                flag,
                [this, key = std::string(key)](const std::string& v) { values[key] = v; },
                "constant pack override");
        }
    }
};

void echo_config(std::ostream& os, const std::string& section,
                 const std::vector<std::pair<std::string, std::string>>& kvs) {
    os << "# " << kVersion << "\n";
    os << "# [" << section << "]\n";
    for (const auto& [k, v] : kvs) os << "# " << k << " = " << v << "\n";
}

std::string dir_str(Direction d) {
    return "(" + std::to_string(d.x()) + "," + std::to_string(d.y()) + ")";
}

int cmd_classify(const std::string& family_path, const DifficultyBudget& budget,
                 const std::string& out_path) {
    OutFile out(out_path);
    auto fam = load_family_file(family_path);
    echo_config(out.get(), "classify",
                {{"family", family_path},
                 {"budget_nmax", std::to_string(budget.n_max)},
                 {"budget_window", std::to_string(budget.window_radius)},
                 {"budget_shift", fmt6(budget.shift_scale)}});
    auto rep = classify(fam, budget);
    std::ostream& os = out.get();
    os << "family " << (fam.name.empty() ? "(unnamed)" : fam.name) << " with "
       << fam.rules.size() << " rules, range " << fmt6(fam.range()) << "\n";
    os << "coarse class: " << to_string(rep.coarse) << "\n";
    os << "stable set: ";
    if (rep.stable.whole_circle) {
        os << "the whole circle";
    } else if (rep.stable.arcs.empty()) {
        os << "empty";
    } else {
        bool first = true;
        for (const auto& a : rep.stable.arcs) {
            if (!first) os << ", ";
            first = false;
            if (a.degenerate())
                os << dir_str(a.lo);
            else
                os << "[" << dir_str(a.lo) << " .. " << dir_str(a.hi) << "]";
        }
    }
    os << "\n";
    for (const auto& [d, v] : rep.difficulties) {
        os << "difficulty " << dir_str(d) << " = " << v.str();
        if (v.certificate) {
            os << "  (certificate: extra {";
            for (std::size_t i = 0; i < v.certificate->extra.size(); ++i) {
                if (i) os << " ";
                os << v.certificate->extra[i].x << "," << v.certificate->extra[i].y;
            }
            os << "}, shift " << v.certificate->shift.x << "," << v.certificate->shift.y
               << ", seed size " << v.certificate->seed.size() << ")";
        }
        os << "\n";
    }
    os << "alpha = " << rep.alpha.str() << "\n";
    if (rep.critical()) {
        os << "witness semicircle boundary: " << dir_str(rep.witness_semicircle) << "\n";
        os << "hard directions (difficulty > alpha): ";
        if (rep.hard_isolated.empty() && rep.hard_fat.empty()) os << "none";
        for (std::size_t i = 0; i < rep.hard_isolated.size(); ++i)
            os << (i ? ", " : "") << dir_str(rep.hard_isolated[i]);
        for (const auto& a : rep.hard_fat)
            os << (rep.hard_isolated.empty() ? "" : ", ") << "arc [" << dir_str(a.lo)
               << " .. " << dir_str(a.hi) << "]";
        os << "\n";
        os << "opposite hard pair: " << (rep.opposite_hard_pair ? "yes" : "no") << "\n";
        os << "refined class: (" << rep.refined << ") " << rep.refined_text << "\n";
        os << "exponents (beta,gamma,delta): (" << rep.exponents[0] << ","
           << rep.exponents[1] << "," << rep.exponents[2] << ")\n";
    }
    // machine-readable record
    os << "record classify family=" << family_path << " coarse=" << to_string(rep.coarse);
    if (rep.critical())
        os << " alpha=" << rep.alpha.str() << " class=" << rep.refined << " exponents="
           << rep.exponents[0] << "," << rep.exponents[1] << "," << rep.exponents[2];
    os << "\n";
    return 0;
}

int cmd_sweep_tau0(const UpdateFamily& fam, const std::string& family_path,
                   std::vector<double> qs, std::int64_t size, std::int64_t trials,
                   double max_time, std::uint64_t seed, int workers,
                   const std::string& out_path, const std::string& events_path) {
    if (qs.empty()) throw std::invalid_argument("sweep-tau0: empty q grid");
    OutFile out(out_path);
    std::ostream& os = out.get();
    {
        std::ostringstream grid;
        for (std::size_t i = 0; i < qs.size(); ++i) grid << (i ? "," : "") << fmt6(qs[i]);
        echo_config(os, "sweep-tau0",
                    {{"family", family_path},
                     {"q", grid.str()},
                     {"size", std::to_string(size)},
                     {"trials", std::to_string(trials)},
                     {"max_time", fmt6(max_time)},
                     {"seed", std::to_string(seed)}});
    }
    os << "q,box,trials,uncensored,censor_fraction,zero_fraction,mean_tau0,median_tau0,"
          "geo_mean,geo_ci_lo,geo_ci_hi,seed,flag\n";
    // exponent triple of the refined class drives the compensated column
    std::array<int, 3> exps{1, 0, 0};
    int alpha = 1;
    bool have_class = false;
    try {
        auto rep = classify(fam);
        if (rep.critical()) {
            exps = rep.exponents;
            alpha = rep.alpha.finite_value();
            have_class = true;
        }
    } catch (const std::exception&) {
        // classification is best-effort here; plot falls back to raw columns
    }
    std::ostringstream plot;
    plot << "ln_inv_q,ln_geo_mean,ln_ln_geo_mean,theta_compensated\n";
    std::ostringstream events;
    events << "trial,time,x,y,new_value\n";
    std::int64_t event_trial = 0;
    for (double q : qs) {
        SimParams p;
        p.family = fam;
        p.q = q;
        std::int64_t half = size / 2;
        p.region = Parallelogram::box(-half, -half, size - half - 1, size - half - 1);
        p.max_time = max_time;
        p.trial_count = trials;
        p.seed = seed;
        p.workers = workers;
        auto est = estimate_tau0(p);
        os << fmt6(q) << "," << size << "," << est.trials << "," << est.uncensored << ","
           << fmt6(est.censor_fraction) << "," << fmt6(est.zero_fraction) << ","
           << fmt6(est.mean) << "," << fmt6(est.median) << "," << fmt6(est.geo_mean) << ","
           << fmt6(est.geo_ci_lo) << "," << fmt6(est.geo_ci_hi) << "," << seed << ","
           << (est.usable ? "" : "all-censored") << "\n";
        if (est.usable && est.geo_mean > 1) {
            double lg = std::log(1 / q), llg = std::log(lg);
            double lt = std::log(est.geo_mean);
            plot << fmt6(lg) << "," << fmt6(lt) << "," << fmt6(std::log(lt));
            double denom = std::pow(lg, exps[1]) * std::pow(llg, exps[2]);
            double theta = lt * std::pow(q, alpha * exps[0]) / denom;
            if (have_class && std::isfinite(theta))
                plot << "," << fmt6(theta) << "\n";
            else
                plot << ",\n";
        }
        if (!events_path.empty()) {
            // one recorded trajectory per grid point, exported in the event
            // log schema
            SimParams ep = p;
            ep.record_events = true;
            ep.trial_count = 1;
            SplitMix64 init_rng = stream(ep.seed, 0);
            auto start = sample_equilibrium(ep.region, ep.q, init_rng);
            auto tr = simulate(ep, start, stream(ep.seed, 1));
            for (const auto& ev : tr.events)
                events << event_trial << "," << fmt6(ev.time) << "," << ev.site.x << ","
                       << ev.site.y << "," << ev.new_value << "\n";
            ++event_trial;
        }
    }
    if (!events_path.empty()) {
        std::ofstream ef(events_path);
        if (!ef) throw std::invalid_argument("cannot open events file");
        ef << events.str();
    }
    if (!out_path.empty() && out_path != "-") {
        std::ofstream pf(out_path + ".plot.csv");
        pf << plot.str();
    }
    return 0;
}

int cmd_verify(const ExperimentConfig& cfg, const std::string& cfg_path,
               const std::string& out_path) {
    std::string family_path = resolve_relative(cfg_path, cfg.get("verify", "family"));
    if (family_path.empty()) throw std::invalid_argument("verify: missing family");
    auto fam = load_family_file(family_path);
    BottleneckInstance inst;
    inst.family = fam;
    inst.region = parse_box(cfg.get("verify", "region", "0,0,7,1"));
    inst.core = parse_box(cfg.get("verify", "core", "2,0,5,1"));
    std::map<std::string, std::string> packv;
    for (const char* key :
         {"c1", "c2p", "c2", "c3", "c4p", "c4", "c5", "c6", "k", "allow-small-k"}) {
        std::string v = cfg.get("verify", std::string("pack-") + key);
        if (!v.empty()) packv[key] = v;
    }
    inst.good.pack = pack_from_strings(fam.range_sq(), packv);
    inst.good.ell = Rat::parse(cfg.get("verify", "ell", "7"));
    inst.good.h = Rat::parse(cfg.get("verify", "h", "7"));
    inst.good.n = (int)cfg.get_int("verify", "n", 0);
    inst.site_budget = cfg.get_int("verify", "site_budget", 20);

    OutFile out(out_path);
    std::ostream& os = out.get();
    echo_config(os, "verify",
                {{"family", family_path},
                 {"region", cfg.get("verify", "region", "0,0,7,1")},
                 {"core", cfg.get("verify", "core", "2,0,5,1")},
                 {"ell", inst.good.ell.str()},
                 {"h", inst.good.h.str()},
                 {"n", std::to_string(inst.good.n)},
                 {"site_budget", std::to_string(inst.site_budget)}});
    auto res = verify_bottleneck(inst);
    os << "state space: " << res.stats.state_space << "\n";
    os << "good states: " << res.stats.good_states << "\n";
    os << "start states (G(R)): " << res.stats.start_states << "\n";
    os << "reachable states: " << res.stats.reachable << "\n";
    os << "max frontier: " << res.stats.frontier_max << "\n";
    os << "wall time: " << fmt6(res.stats.seconds) << " s\n";
    if (res.verified) {
        os << "result: Verified\n";
        return 0;
    }
    os << "result: Counterexample with " << res.counterexample_masks.size() - 1
       << " flips\n";
    PathSpace ps(inst.region, inst.family);
    os << "step,x,y,value\n";
    std::uint64_t first = res.counterexample_masks.front();
    for (std::size_t i = 0; i < ps.site_count(); ++i)
        if (first & (1ull << i))
            os << "0," << ps.sites()[i].x << "," << ps.sites()[i].y << ",0\n";
    for (std::size_t j = 1; j < res.counterexample_masks.size(); ++j) {
        std::uint64_t prev = res.counterexample_masks[j - 1];
        std::uint64_t cur = res.counterexample_masks[j];
        std::size_t s = (std::size_t)__builtin_ctzll(prev ^ cur);
        os << j << "," << ps.sites()[s].x << "," << ps.sites()[s].y << ","
           << ((cur >> s) & 1 ? 0 : 1) << "\n";
    }
    return 0;
}

int cmd_estimate(const UpdateFamily& fam, const std::string& family_path,
                 const std::string& event, const std::string& shapes_str,
                 std::vector<double> qs, std::int64_t trials, const std::string& mode_str,
                 std::uint64_t seed, int workers, const PackFlags& packf, char chain_class,
                 const std::string& out_path) {
    if (qs.empty()) throw std::invalid_argument("estimate: empty q grid");
    ConstantPack pack = packf.build(fam);
    CrossingMode mode = CrossingMode::AsIs;
    if (mode_str == "exact")
        mode = CrossingMode::Exact;
    else if (mode_str == "greedy-thin")
        mode = CrossingMode::GreedyThin;
    else if (mode_str != "as-is")
        throw std::invalid_argument("estimate: unknown mode '" + mode_str + "'");

    std::vector<Parallelogram> shapes;
    {
        std::stringstream ss(shapes_str);
        std::string tok;
        while (std::getline(ss, tok, ';'))
            if (!tok.empty()) shapes.push_back(parse_box(tok));
    }
    if (shapes.empty()) throw std::invalid_argument("estimate: no shapes given");

    OutFile out(out_path);
    std::ostream& os = out.get();
    {
        std::ostringstream grid;
        for (std::size_t i = 0; i < qs.size(); ++i) grid << (i ? "," : "") << fmt6(qs[i]);
        echo_config(os, "estimate",
                    {{"family", family_path},
                     {"event", event},
                     {"shapes", shapes_str},
                     {"q", grid.str()},
                     {"trials", std::to_string(trials)},
                     {"mode", mode_str},
                     {"seed", std::to_string(seed)}});
    }
    os << "event,shape,q,mode,estimate,ci_lo,ci_hi,censor_fraction,trials,seed\n";
    bool budget_failures = false;
    double last_ln_rho = 0, last_ln_cross = 0;
    bool have_rho = false, have_cross = false;
    for (const auto& shape : shapes) {
        std::ostringstream sh;
        sh << shape.a().str() << ":" << shape.b().str() << ":" << shape.c().str() << ":"
           << shape.d().str();
        for (double q : qs) {
            Estimate e;
            std::string mode_out = "-";
            try {
            if (event == "spanning") {
                e = estimate_spanning_probability(shape, fam, pack, q, trials, seed,
                                                  workers);
                if (e.value > 0) {
                    last_ln_rho = std::log(e.value);
                    have_rho = true;
                }
            } else if (event == "crossing") {
                auto ce = estimate_crossing_probability(shape, shape.axes().u1, fam, pack,
                                                        q, trials, seed, mode, workers);
                e = ce.est;
                mode_out = to_string(ce.mode);
                if (ce.under_detects) mode_out += "(under-detects)";
                if (e.value > 0) {
                    last_ln_cross = std::log(e.value);
                    have_cross = true;
                }
            } else if (event == "locinf") {
                e = estimate_local_infectable_probability(fam, shape.axes(), pack, q,
                                                          trials, seed, workers);
            } else {
                throw std::invalid_argument("estimate: unknown event '" + event + "'");
            }
            } catch (const BudgetError& be) {
                os << event << "," << sh.str() << "," << fmt6(q)
                   << ",budget-exceeded,,,,," << trials << "," << seed << "\n";
                budget_failures = true;
                continue;
            }
            os << event << "," << sh.str() << "," << fmt6(q) << "," << mode_out << ","
               << fmt6(e.value) << "," << fmt6(e.ci_lo) << "," << fmt6(e.ci_hi) << ",0,"
               << e.trials << "," << seed << "\n";
        }
    }
    if (chain_class) {
        int alpha = 1;
        auto tp = theorem_parameters(chain_class, qs.front(), alpha, pack);
        if (tp.automatic) {
            os << "hypotheses: class (" << chain_class
               << ") carries the automatic bootstrap bound; no parameter table\n";
        } else {
            HypothesisInput in;
            in.ln_rho = have_rho ? last_ln_rho : -1.0 / (pack.c5() * qs.front());
            in.ln_p_left = in.ln_p_down =
                have_cross ? last_ln_cross : -std::pow(qs.front(), -0.25);
            in.ln_p_locinf = std::log(0.05);
            auto rep = check_prop_main_hypotheses(tp.params, in);
            os << "hypotheses for class (" << chain_class << ") at q=" << fmt6(qs.front())
               << ":\n";
            for (const auto& l : rep.lines)
                os << "  " << l.name << ": " << (l.pass ? "pass" : "fail")
                   << " ln_margin=" << fmt6(l.ln_margin) << "\n";
        }
    }
    return budget_failures ? 3 : 0;
}

int cmd_closure(const std::string& family_path, const std::string& in_path,
                const std::string& out_path) {
    auto fam = load_family_file(family_path);
    std::ifstream in(in_path);
    if (!in) throw std::invalid_argument("cannot open snapshot '" + in_path + "'");
    std::string snap_family;
    Configuration c = read_snapshot(in, &snap_family);
    Configuration closed = closure(c, fam);
    OutFile out(out_path);
    write_snapshot(out.get(), closed, fam.name.empty() ? snap_family : fam.name);
    return 0;
}

int cmd_span_scan(const std::string& family_path, const std::string& in_path,
                  double dmin, double dmax, const PackFlags& packf,
                  const std::string& out_path) {
    auto fam = load_family_file(family_path);
    std::ifstream in(in_path);
    if (!in) throw std::invalid_argument("cannot open snapshot '" + in_path + "'");
    Configuration c = read_snapshot(in);
    ConstantPack pack = packf.build(fam);
    if (dmin < 0 || dmax < dmin) throw std::invalid_argument("span-scan: bad range");
    Rat dmin_sq = Rat::parse(fmt6(dmin)) * Rat::parse(fmt6(dmin));
    Rat dmax_sq = Rat::parse(fmt6(dmax)) * Rat::parse(fmt6(dmax));
    auto scan = spanned_scan(c, fam, SpanParams::from_pack(c.region().axes(), pack),
                             dmin_sq, dmax_sq);
    OutFile out(out_path);
    std::ostream& os = out.get();
    echo_config(os, "span-scan",
                {{"family", family_path},
                 {"in", in_path},
                 {"dmin", fmt6(dmin)},
                 {"dmax", fmt6(dmax)}});
    os << "a,b,c,d,diameter\n";
    for (const auto& p : scan)
        os << p.a().str() << "," << p.b().str() << "," << p.c().str() << ","
           << p.d().str() << "," << fmt6(std::sqrt(p.diameter_sq().to_double())) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - bootstrap percolation and KCM universality toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "experiment config file");
    app.fallthrough();  // let subcommands use the global --config

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "classify an update family");
    DifficultyBudget budget;
    std::string cl_family, cl_out;
    classify_cmd->add_option("--family", cl_family, "family file");
    classify_cmd->add_option("--out", cl_out, "output file");
    classify_cmd->add_option("--budget-nmax", budget.n_max, "difficulty search n_max");
    classify_cmd->add_option("--budget-window", budget.window_radius,
                             "fixed window radius (0 = auto)");
    classify_cmd->add_option("--budget-shift", budget.shift_scale,
                             "certificate shift bound scale");

    // sweep-tau0
    auto* sweep_cmd = app.add_subcommand("sweep-tau0", "tau_0 estimates over a q grid");
    std::string sw_family, sw_q = "0.25,0.2,0.15", sw_out;
    std::int64_t sw_size = 128, sw_trials = 200;
    double sw_maxtime = 1e5;
    std::uint64_t sw_seed = 1;
    int sw_workers = 0;
    sweep_cmd->add_option("--family", sw_family, "family file");
    sweep_cmd->add_option("--q", sw_q, "comma-separated q grid");
    sweep_cmd->add_option("--size", sw_size, "box side");
    sweep_cmd->add_option("--trials", sw_trials, "trials per grid point");
    sweep_cmd->add_option("--max-time", sw_maxtime, "censoring horizon");
    sweep_cmd->add_option("--seed", sw_seed, "rng seed");
    sweep_cmd->add_option("--workers", sw_workers, "worker threads (0 = auto)");
    sweep_cmd->add_option("--out", sw_out, "output CSV path");
    std::string sw_events;
    sweep_cmd->add_option("--events-out", sw_events,
                          "export one recorded trajectory per grid point");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "bottleneck micro-verification");
    std::string vf_out;
    verify_cmd->add_option("--out", vf_out, "output file");

    // estimate
    auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo event estimators");
    std::string es_family, es_event = "spanning", es_shapes, es_q = "0.2",
                es_mode = "as-is", es_out, es_chain;
    std::int64_t es_trials = 10000;
    std::uint64_t es_seed = 1;
    int es_workers = 0;
    PackFlags es_pack;
    est_cmd->add_option("--family", es_family, "family file");
    est_cmd->add_option("--event", es_event, "spanning | crossing | locinf");
    est_cmd->add_option("--shapes", es_shapes, "semicolon list of boxes x0,y0,x1,y1");
    est_cmd->add_option("--q", es_q, "comma-separated q grid");
    est_cmd->add_option("--trials", es_trials, "Monte Carlo trials");
    est_cmd->add_option("--mode", es_mode, "exact | as-is | greedy-thin");
    est_cmd->add_option("--seed", es_seed, "rng seed");
    est_cmd->add_option("--workers", es_workers, "worker threads (0 = auto)");
    est_cmd->add_option("--chain-class", es_chain,
                        "chain into the hypothesis report for a refined class");
    est_cmd->add_option("--out", es_out, "output CSV path");
    es_pack.add_options(est_cmd);

    // closure
    auto* closure_cmd = app.add_subcommand("closure", "snapshot-in/snapshot-out closure");
    std::string clo_family, clo_in, clo_out;
    closure_cmd->add_option("--family", clo_family, "family file")->required();
    closure_cmd->add_option("--in", clo_in, "input snapshot")->required();
    closure_cmd->add_option("--out", clo_out, "output snapshot");

    // span-scan
    auto* scan_cmd = app.add_subcommand("span-scan", "spanned parallelogram scan");
    std::string sc_family, sc_in, sc_out;
    double sc_dmin = 0, sc_dmax = 1e9;
    PackFlags sc_pack;
    scan_cmd->add_option("--family", sc_family, "family file")->required();
    scan_cmd->add_option("--in", sc_in, "input snapshot")->required();
    scan_cmd->add_option("--dmin", sc_dmin, "minimum diameter");
    scan_cmd->add_option("--dmax", sc_dmax, "maximum diameter");
    scan_cmd->add_option("--out", sc_out, "output CSV path");
    sc_pack.add_options(scan_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = ExperimentConfig::load(config_path);

        if (classify_cmd->parsed()) {
            if (cl_family.empty())
                cl_family = resolve_relative(config_path, cfg.get("classify", "family"));
            if (cl_family.empty())
                throw std::invalid_argument("classify: --family or config required");
            if (cfg.has("classify", "budget_nmax") &&
                classify_cmd->count("--budget-nmax") == 0)
                budget.n_max = (int)cfg.get_int("classify", "budget_nmax", 4);
            return cmd_classify(cl_family, budget, cl_out);
        }
        if (sweep_cmd->parsed()) {
            auto pick = [&](const char* key, const std::string& flag, auto& var) {
                if (cfg.has("sweep-tau0", key) && sweep_cmd->count(flag) == 0) {
                    std::stringstream ss(cfg.get("sweep-tau0", key));
                    ss >> var;
                }
            };
            pick("family", "--family", sw_family);
            pick("q", "--q", sw_q);
            pick("size", "--size", sw_size);
            pick("trials", "--trials", sw_trials);
            pick("max_time", "--max-time", sw_maxtime);
            pick("seed", "--seed", sw_seed);
            if (sw_family.empty())
                throw std::invalid_argument("sweep-tau0: --family or config required");
            auto fam = load_family_file(sw_family);
            return cmd_sweep_tau0(fam, sw_family, parse_grid(sw_q), sw_size, sw_trials,
                                  sw_maxtime, sw_seed, sw_workers, sw_out, sw_events);
        }
        if (verify_cmd->parsed()) {
            if (config_path.empty())
                throw std::invalid_argument("verify: --config required");
            return cmd_verify(cfg, config_path, vf_out);
        }
        if (est_cmd->parsed()) {
            if (es_family.empty())
                es_family = resolve_relative(config_path, cfg.get("estimate", "family"));
            if (es_shapes.empty()) es_shapes = cfg.get("estimate", "shapes");
            if (es_family.empty())
                throw std::invalid_argument("estimate: --family or config required");
            auto fam = load_family_file(es_family);
            char chain = es_chain.empty() ? 0 : es_chain[0];
            return cmd_estimate(fam, es_family, es_event, es_shapes, parse_grid(es_q),
                                es_trials, es_mode, es_seed, es_workers, es_pack, chain,
                                es_out);
        }
        if (closure_cmd->parsed()) return cmd_closure(clo_family, clo_in, clo_out);
        if (scan_cmd->parsed())
            return cmd_span_scan(sc_family, sc_in, sc_dmin, sc_dmax, sc_pack, sc_out);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const ukcm::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const ukcm::InvariantError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const ukcm::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}

#include "degenpde/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>

#include "degenpde/errors.hpp"
#include "degenpde/profiles.hpp"

namespace degenpde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

Grid grid_for(const DerivedConstants& d, const SolverConfig& config) {
    const double R = config.R > 0.0 ? config.R : default_radius(d, config);
    return make_grid(config.M, R, d.params);
}

}  // namespace

CheckResult skipped(std::string name, std::string reason) {
    CheckResult r;
    r.name = std::move(name);
    r.skipped = true;
    r.details = "hypothesis not satisfied; skipped: " + std::move(reason);
    return r;
}

CheckResult check_supersolution_sign(const DerivedConstants& d, double a, int samples) {
    const std::string name = "supersolution_sign";
    if (d.diffusion != Diffusion::slow) return skipped(name, "needs slow diffusion");
    if (!global_solvability_condition(d, a))
        return skipped(name, "global solvability condition fails for a = " + fmt(a));
    if (samples < 2) throw DomainError("supersolution check needs at least two samples");

    const double xi_b = require(d.xi_b, "xi_b");
    CheckResult r;
    r.name = name;
    r.tolerance = 1e-12;
    double worst_xi = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double xi = xi_b * j / (samples - 1);
        const double v = closed_form_residual_bracket(d, a, xi);
        if (v > r.worst_violation) {
            r.worst_violation = v;
            worst_xi = xi;
        }
    }
    r.passed = r.worst_violation <= r.tolerance;
    r.details = "max bracket " + fmt(closed_form_residual_bracket(d, a, worst_xi)) + " at xi = " + fmt(worst_xi) +
                " over " + std::to_string(samples) + " samples";
    return r;
}

CheckResult check_comparison(const ProblemParams& params, const SolverConfig& config) {
    const std::string name = "comparison";
    const DerivedConstants d = derive(params);
    if (!global_solvability_condition(d, params.a))
        return skipped(name, "global solvability condition fails for a = " + fmt(params.a));

    const Grid grid = grid_for(d, config);
    GridState init = initial_condition(d, params.a, params.t0, grid);
    for (double& x : init.v) x *= config.rho;

    CheckResult r;
    r.name = name;
    r.tolerance = 1e-8;
    auto excess = [&](const GridState& st, double& at_r) {
        double worst = 0.0;
        for (int i = 0; i <= grid.M(); ++i) {
            const double e = st.v[static_cast<std::size_t>(i)] - supersolution_z(d, params.a, st.t, grid.r(i));
            if (e > worst) {
                worst = e;
                at_r = grid.r(i);
            }
        }
        return worst;
    };
    double any_step = 0.0, ignored = 0.0;
    const SolveReport rep =
        run(d, grid, init, config, [&](const GridState& st, int) { any_step = std::max(any_step, excess(st, ignored)); });
    if (rep.termination != Termination::completed) {
        r.worst_violation = kInf;
        r.details = std::string("solver terminated early: ") + to_string(rep.termination) + " at t = " +
                    fmt(rep.termination_time);
        return r;
    }
    double worst_t = params.t0, worst_r = 0.0;
    for (const GridState& st : rep.snapshots) {
        double at_r = 0.0;
        const double e = excess(st, at_r);
        if (e > r.worst_violation) {
            r.worst_violation = e;
            worst_t = st.t;
            worst_r = at_r;
        }
    }
    r.passed = r.worst_violation <= r.tolerance;
    r.details = "rho = " + fmt(config.rho) + ", max(v - z) over " + std::to_string(rep.snapshots.size()) +
                " snapshots = " + fmt(r.worst_violation) + " at t = " + fmt(worst_t) + ", r = " + fmt(worst_r) +
                "; over all " + std::to_string(rep.iterations_per_step.size()) + " steps " + fmt(any_step);
    return r;
}

CheckResult check_front_law(const SolveReport& report, const DerivedConstants& d, double /*a*/) {
    const std::string name = "front_law";
    if (d.diffusion != Diffusion::slow) return skipped(name, "needs slow diffusion");
    if (report.termination != Termination::completed) return skipped(name, "run did not complete");

    const auto& hist = report.front_history;
    if (hist.empty()) throw DomainError("insufficient front history: no samples");
    const double t_mid = 0.5 * (hist.front().t + hist.back().t);
    std::vector<double> x, y;
    for (const FrontSample& s : hist) {
        if (s.t < t_mid || !(s.r_front > 0.0)) continue;
        x.push_back(std::log(rescaled_time(d, s.t)));
        y.push_back(std::log(s.r_front));
    }
    if (x.size() < 10)
        throw DomainError("insufficient front history: " + std::to_string(x.size()) + " points in the second half");

    const double target = 1.0 / (d.params.p - d.params.n - d.params.n1);
    const double slope = least_squares_slope(x, y);
    CheckResult r;
    r.name = name;
    r.tolerance = 0.1;
    r.worst_violation = std::fabs(slope - target) / target;
    r.passed = r.worst_violation <= r.tolerance;
    r.details = "slope " + fmt(slope) + " vs " + fmt(target) + " from " + std::to_string(x.size()) + " points";
    return r;
}

const char* to_string(Lemma lemma) { return lemma == Lemma::first ? "lemma_1" : "lemma_2"; }

bool lemma_hypothesis(Lemma lemma, const LemmaPair& p) {
    if (!(p.K1 > 0.0 && p.K1 <= p.K2)) return false;
    if (lemma == Lemma::first) return p.theta1 < p.theta2 && p.theta2 <= 0.0;
    return 0.0 >= p.theta1 && p.theta1 >= p.theta2;
}

double lemma_violation(const DerivedConstants& d, double a, Lemma lemma, const LemmaPair& pair,
                       const LemmaOptions& o) {
    const NearFrontSystem sys(d, a);
    Trajectory t1, t2;
    try {
        t1 = integrate_system(sys, {o.eta0, pair.K1, pair.theta1}, o.eta1, o.tolerance);
        t2 = integrate_system(sys, {o.eta0, pair.K2, pair.theta2}, o.eta1, o.tolerance);
    } catch (const Error&) {
        return kInf;
    }
    const double end = std::min(t1.eta_last(), t2.eta_last());
    double worst = 0.0;
    constexpr int kSamples = 400;
    for (int j = 0; j <= kSamples; ++j) {
        const double eta = o.eta0 + (end - o.eta0) * j / kSamples;
        const OdeState s1 = t1.at(eta);
        const OdeState s2 = t2.at(eta);
        const double wscale = std::max({1.0, std::fabs(s1.w), std::fabs(s2.w)});
        const double zscale = std::max({1.0, std::fabs(s1.z), std::fabs(s2.z)});
        const double dw = (s1.w - s2.w) / wscale;
        const double dz = (lemma == Lemma::first ? s1.z - s2.z : s2.z - s1.z) / zscale;
        worst = std::max({worst, dw, dz});
    }
    return worst;
}

CheckResult check_lemma_ordering(const DerivedConstants& d, double a, Lemma lemma, const LemmaOptions& o) {
    const std::string name = to_string(lemma) + std::string("_ordering");
    if (d.diffusion != Diffusion::slow) return skipped(name, "needs slow diffusion");

    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> K(o.K_lo, o.K_hi);
    std::uniform_real_distribution<double> theta(o.theta_lo, o.theta_hi);

    CheckResult r;
    r.name = name;
    r.tolerance = o.tolerance;
    int failures = 0, run_trials = 0, skipped_pairs = 0;
    for (int k = 0; k < o.trials; ++k) {
        double K1 = K(rng), K2 = K(rng), th1 = theta(rng), th2 = theta(rng);
        if (K1 > K2) std::swap(K1, K2);
        if ((lemma == Lemma::first) == (th1 > th2)) std::swap(th1, th2);
        const LemmaPair pair{K1, th1, K2, th2};
        if (!lemma_hypothesis(lemma, pair)) {
            ++skipped_pairs;
            continue;
        }
        ++run_trials;
        const double v = lemma_violation(d, a, lemma, pair, o);
        if (v > o.tolerance) ++failures;
        r.worst_violation = std::max(r.worst_violation, v);
    }
    r.passed = run_trials > 0 && failures == 0;
    r.details = "seed " + std::to_string(o.seed) + ", " + std::to_string(failures) + " of " +
                std::to_string(run_trials) + " trials violated the ordering on eta in [" + fmt(o.eta0) + ", " +
                fmt(o.eta1) + "]" + (skipped_pairs ? ", " + std::to_string(skipped_pairs) + " pairs skipped" : "");
    return r;
}

CheckResult check_asymptotic_ratio(const DerivedConstants& d, double a, const AsymptoticOptions& o) {
    const std::string name = "asymptotic_ratio";
    if (d.diffusion == Diffusion::critical) return skipped(name, "no asymptotic system for critical diffusion");

    CheckResult r;
    r.name = name;
    const bool slow = d.diffusion == Diffusion::slow;
    r.tolerance = slow ? 0.01 : 0.02;
    double target = 0.0;
    try {
        target = slow ? solve_w0(d, a) : solve_C_fast(d, a);
    } catch (const Error& e) {
        r.worst_violation = kInf;
        r.details = std::string("no limit constant: ") + e.what();
        return r;
    }

    OdeRhs rhs;
    OdeState start{o.eta0, o.w_start, 0.0};
    if (slow) {
        rhs = NearFrontSystem(d, a);
        start.z = near_front_rest_z(d, o.w_start);
    } else {
        rhs = FarFieldSystem(d, a);
        start.z = far_field_rest_z(d, o.w_start);
    }
    try {
        const Trajectory tr = integrate_system(rhs, start, o.eta1, o.tolerance);
        const OdeState& end = tr.back();
        const double ratio = end.w / target;
        r.worst_violation = tr.end() == TrajectoryEnd::completed ? std::fabs(ratio - 1.0) : kInf;
        r.details = std::string(slow ? "w0" : "C") + " = " + fmt(target) + ", w(" + fmt(end.eta) + ") = " +
                    fmt(end.w) + ", ratio " + fmt(ratio) + ", trajectory " + to_string(tr.end());
    } catch (const Error& e) {
        r.worst_violation = kInf;
        r.details = std::string("integration failed: ") + e.what();
    }
    r.passed = r.worst_violation <= r.tolerance;
    return r;
}

namespace {

struct LevelRun {
    Grid grid;
    GridState state;
};

LevelRun run_level(const DerivedConstants& d, int M, double R, double dt, double t_end) {
    SolverConfig c;
    c.M = M;
    c.R = R;
    c.dt = dt;
    c.t_end = t_end;
    c.picard_tol = 1e-12;
    c.picard_max = 200;
    Grid grid = make_grid(M, R, d.params);
    const SolveReport rep = run(d, grid, initial_condition(d, d.params.a, d.params.t0, grid), c);
    if (rep.termination != Termination::completed)
        throw SolverError(std::string("convergence run terminated: ") + to_string(rep.termination));
    return {grid, rep.snapshots.back()};
}

}  // namespace

ConvergenceReport convergence_report(const ProblemParams& params, const ConvergenceOptions& o) {
    if (o.levels < 3) throw DomainError("insufficient levels: convergence needs at least 3, got " + std::to_string(o.levels));
    const DerivedConstants d = derive(params);
    const int L = o.levels;

    ConvergenceReport out;
    out.exact_reference = !params.source;

    // Fine reference: two levels beyond the finest combined level.
    const int ref_shift = L + 1;
    std::optional<LevelRun> ref;
    if (!out.exact_reference)
        ref = run_level(d, o.M0 << ref_shift, o.R, o.dt0 / std::pow(4.0, ref_shift), o.t_end);

    double r_cut = kInf;
    if (o.interior_fraction) {
        const double front = ref ? ref->state.r_front
                                 : front_radius_theory(d, params.a, rescaled_time(d, o.t_end));
        r_cut = *o.interior_fraction * front;
    }

    auto error_of = [&](const LevelRun& lv) {
        double e = 0.0;
        for (int i = 0; i <= lv.grid.M(); ++i) {
            const double r = lv.grid.r(i);
            if (r > r_cut) break;
            double exact;
            if (ref) {
                const int stride = ref->grid.M() / lv.grid.M();
                exact = ref->state.v[static_cast<std::size_t>(i * stride)];
            } else {
                exact = supersolution_z(d, params.a, lv.state.t, r);
            }
            e = std::max(e, std::fabs(lv.state.v[static_cast<std::size_t>(i)] - exact));
        }
        return e;
    };

    for (int k = 0; k < L; ++k) {
        const int M = o.M0 << k;
        const double dt = o.dt0 / std::pow(4.0, k);
        out.combined.push_back({M, dt, error_of(run_level(d, M, o.R, dt, o.t_end))});
    }
    for (int k = 0; k + 1 < L; ++k) out.combined_ratios.push_back(out.combined[k].error / out.combined[k + 1].error);

    // Spatial sweep at a time step small enough to hide the temporal error.
    const double dt_small = o.dt0 / std::pow(4.0, L + 1);
    for (int k = 0; k < L; ++k) {
        const int M = o.M0 << k;
        out.spatial.push_back({M, dt_small, error_of(run_level(d, M, o.R, dt_small, o.t_end))});
    }
    // Temporal sweep on a grid fine enough to hide the spatial error.
    const int M_fine = o.M0 << (L + 1);
    for (int k = 0; k < L; ++k) {
        const double dt = o.dt0 / std::pow(2.0, k);
        out.temporal.push_back({M_fine, dt, error_of(run_level(d, M_fine, o.R, dt, o.t_end))});
    }

    std::vector<double> x, y;
    for (const auto& lv : out.spatial) {
        x.push_back(std::log(o.R / lv.M));
        y.push_back(std::log(lv.error));
    }
    out.spatial_order = least_squares_slope(x, y);
    x.clear();
    y.clear();
    for (const auto& lv : out.temporal) {
        x.push_back(std::log(lv.dt));
        y.push_back(std::log(lv.error));
    }
    out.temporal_order = least_squares_slope(x, y);
    return out;
}

CheckResult convergence_study(const ProblemParams& params, const ConvergenceOptions& o) {
    const ConvergenceReport rep = convergence_report(params, o);
    CheckResult r;
    r.name = "convergence";
    r.tolerance = 0.0;
    r.worst_violation = std::max({0.0, 1.5 - rep.spatial_order, 0.8 - rep.temporal_order});
    r.passed = r.worst_violation <= r.tolerance;
    std::string ratios;
    for (double q : rep.combined_ratios) ratios += (ratios.empty() ? "" : " ") + fmt(q);
    r.details = "spatial order " + fmt(rep.spatial_order) + ", temporal order " + fmt(rep.temporal_order) +
                ", combined error ratios " + ratios + (rep.exact_reference ? " (exact reference)" : " (fine-grid reference)");
    return r;
}

}  // namespace degenpde

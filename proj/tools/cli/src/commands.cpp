#include "degenpde_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <vector>

#include <degenpde/errors.hpp>
#include <degenpde/profiles.hpp>
#include <degenpde/solver.hpp>
#include <degenpde/verify.hpp>

#include "degenpde_cli/csv.hpp"

namespace fs = std::filesystem;

namespace degenpde::cli {

namespace {

std::string fixed5(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.5f", x);
    return buf;
}

std::string profile_branch(const DerivedConstants& d) {
    switch (d.diffusion) {
        case Diffusion::slow: return "zkb profile branch";
        case Diffusion::critical: return "exponential profile branch";
        case Diffusion::fast: return "fast-diffusion profile branch";
    }
    return "-";
}

std::string verdict(const DerivedConstants& d) {
    if (!d.params.source) return "source-free; no Fujita verdict";
    const Regime reg = classify(d);
    if (!reg.supercritical) return "subcritical";
    if (const auto a = solvability_threshold(d)) return "supercritical; globally solvable for a <= " + fixed5(*a);
    return "supercritical";
}

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

int cmd_analyze(const RunConfig& cfg, std::ostream& log) {
    const DerivedConstants d = derive(cfg.problem);
    const std::string vbar = std::string("vbar:") + to_string(d.vbar_case);
    const std::string tau = std::string("tau:") + to_string(d.tau_case);
    const std::string prof = profile_branch(d);

    struct Row {
        const char* name;
        std::optional<double> value;
        std::string branch;
    };
    const std::vector<Row> rows = {
        {"m2", d.m2, "-"},
        {"k2", d.k2, "-"},
        {"beta2", d.beta2, "-"},
        {"excess", d.excess, std::string("diffusion:") + to_string(d.diffusion)},
        {"gamma1", d.gamma1, "-"},
        {"gamma2", d.gamma2, "-"},
        {"gamma3", d.gamma3, "-"},
        {"mu", d.mu, "-"},
        {"s", d.s, "-"},
        {"l1", d.l1, vbar},
        {"l2", d.l2, vbar},
        {"l3", d.l3, vbar},
        {"l4", d.l4, vbar},
        {"l5", d.l5, tau},
        {"l6", d.l6, tau},
        {"l7", d.l7, "-"},
        {"b", d.b, prof},
        {"A", d.A, prof},
        {"xi_b", d.xi_b, prof},
        {"beta2_crit", d.beta2_crit, "-"},
        {"beta_crit_u", d.beta_crit_u, "-"},
        {"alpha", d.sf_alpha, "source_free"},
        {"sigma", d.sf_sigma, "source_free"},
        {"a_threshold", solvability_threshold(d), "-"},
    };

    CsvWriter csv(fs::path(cfg.output_dir) / "constants.csv", {"name", "value", "branch"});
    for (const Row& r : rows) {
        csv.field(r.name);
        if (r.value) csv.field(*r.value);
        else csv.field("undefined");
        csv.field(r.branch).end_row();
    }
    csv.close();

    log << "diffusion: " << to_string(d.diffusion) << " (" << prof << ")\n";
    if (d.beta2_crit) log << "beta2 = " << format_number(d.beta2) << ", beta2_crit = " << format_number(*d.beta2_crit) << "\n";
    log << "verdict: " << verdict(d) << "\n";
    for (const std::string& note : relaxation_notes(cfg.problem)) log << "note: " << note << "\n";
    return exit_ok;
}

int cmd_profile(const RunConfig& cfg, std::ostream& log) {
    const DerivedConstants d = derive(cfg.problem);
    const Profile prof = make_profile(d, cfg.problem.a);
    const double hi = prof.kind == ProfileKind::zkb ? 1.2 * prof.xi_b : 10.0;

    CsvWriter csv(fs::path(cfg.output_dir) / "profile.csv", {"xi", "f"});
    constexpr int kIntervals = 1000;
    for (int j = 0; j <= kIntervals; ++j) {
        const double xi = hi * j / kIntervals;
        csv.field(xi).field(profile_value(prof, xi)).end_row();
    }
    csv.close();
    log << "profile " << to_string(prof.kind) << " on [0, " << format_number(hi) << "], " << kIntervals + 1
        << " samples\n";
    return exit_ok;
}

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
    const DerivedConstants d = derive(cfg.problem);
    const SolveReport rep = run(cfg.problem, cfg.solver);
    const fs::path out(cfg.output_dir);
    const double h = rep.R / rep.M;

    CsvWriter snaps(out / "snapshots.csv", {"t", "r", "v", "u"});
    for (const GridState& st : rep.snapshots) {
        for (std::size_t i = 0; i < st.v.size(); ++i) {
            snaps.field(st.t).field(static_cast<double>(i) * h).field(st.v[i]).field(to_u(st.v[i], cfg.problem.q));
            snaps.end_row();
        }
    }
    snaps.close();

    CsvWriter front(out / "front.csv", {"t", "tau", "r_front"});
    for (const FrontSample& s : rep.front_history) {
        const TimeFactors tf = time_factors(d, s.t);
        front.field(s.t).field(tf.tau ? *tf.tau : std::nan("")).field(s.r_front).end_row();
    }
    front.close();

    CsvWriter meta(out / "meta.csv", {"step", "t", "picard_iters"});
    for (std::size_t k = 0; k < rep.iterations_per_step.size(); ++k) {
        meta.field(static_cast<long long>(k + 1)).field(rep.front_history[k + 1].t);
        meta.field(static_cast<long long>(rep.iterations_per_step[k])).end_row();
    }
    meta.close();

    const int max_iters = rep.iterations_per_step.empty()
                              ? 0
                              : *std::max_element(rep.iterations_per_step.begin(), rep.iterations_per_step.end());
    std::ofstream summary(out / "summary.txt", std::ios::binary | std::ios::trunc);
    summary << "termination = " << to_string(rep.termination) << "\n"
            << "termination_time = " << format_number(rep.termination_time) << "\n"
            << "steps = " << rep.iterations_per_step.size() << "\n"
            << "max_picard_iters = " << max_iters << "\n"
            << "R = " << format_number(rep.R) << "\n"
            << "M = " << rep.M << "\n";
    for (const std::string& w : rep.warnings) summary << "warning = " << w << "\n";
    if (!summary) throw std::runtime_error("error writing summary.txt");

    log << "termination: " << to_string(rep.termination);
    if (rep.termination != Termination::completed) log << " at t = " << format_number(rep.termination_time);
    log << "\nsteps: " << rep.iterations_per_step.size() << ", max Picard iterations: " << max_iters << "\n";
    for (const std::string& w : rep.warnings) log << "warning: " << w << "\n";
    return rep.termination == Termination::picard_failure ? exit_solver_failure : exit_ok;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
    const ProblemParams& pr = cfg.problem;
    const DerivedConstants d = derive(pr);
    const double a = pr.a;
    std::vector<CheckResult> results;

    results.push_back(check_supersolution_sign(d, a, 1000));
    SolverConfig comparison = cfg.solver;
    comparison.rho = cfg.comparison_rho;
    results.push_back(check_comparison(pr, comparison));

    // One solver run feeds the front law and the blow-up / boundedness checks.
    double peak = 0.0;
    const SolveReport rep = run(pr, cfg.solver, [&](const GridState& st, int) {
        peak = std::max(peak, *std::max_element(st.v.begin(), st.v.end()));
    });
    try {
        results.push_back(check_front_law(rep, d, a));
    } catch (const DomainError& e) {
        CheckResult r;
        r.name = "front_law";
        r.worst_violation = std::numeric_limits<double>::infinity();
        r.details = e.what();
        results.push_back(r);
    }

    const bool subcritical_source = pr.source && pr.epsilon > 0 && d.diffusion == Diffusion::slow &&
                                    !classify(d).supercritical;
    if (subcritical_source) {
        CheckResult r;
        r.name = "blowup";
        r.passed = rep.termination == Termination::blowup;
        r.worst_violation = r.passed ? 0.0 : 1.0;
        r.details = std::string("termination ") + to_string(rep.termination) + " at t = " +
                    format_number(rep.termination_time);
        results.push_back(r);
    } else {
        results.push_back(skipped("blowup", "needs a subcritical source"));
    }
    if (global_solvability_condition(d, a)) {
        const double bound = supersolution_z(d, a, pr.t0, 0.0);
        CheckResult r;
        r.name = "bounded";
        r.tolerance = 1e-8;
        r.worst_violation = rep.termination == Termination::completed ? std::max(0.0, peak - bound)
                                                                      : std::numeric_limits<double>::infinity();
        r.passed = r.worst_violation <= r.tolerance;
        r.details = std::string("termination ") + to_string(rep.termination) + "; peak " + format_number(peak) +
                    " vs z(t0; 0) " + format_number(bound);
        results.push_back(r);
    } else {
        results.push_back(skipped("bounded", "global solvability condition fails"));
    }

    LemmaOptions lo;
    lo.trials = cfg.lemma_trials;
    lo.seed = cfg.seed;
    results.push_back(check_lemma_ordering(d, a, Lemma::first, lo));
    results.push_back(check_lemma_ordering(d, a, Lemma::second, lo));
    results.push_back(check_asymptotic_ratio(d, a));

    ProblemParams heat;
    heat.source = false;
    CheckResult conv = convergence_study(heat);
    conv.name = "convergence_classical";
    results.push_back(conv);

    const fs::path out(cfg.output_dir);
    CsvWriter csv(out / "verify.csv", {"check", "passed", "worst_violation"});
    CsvWriter det(out / "verify_details.csv", {"check", "status", "worst_violation", "tolerance", "details"});
    bool all_ok = true;
    for (const CheckResult& r : results) {
        const char* status = r.skipped ? "skipped" : (r.passed ? "true" : "false");
        if (!r.skipped && !r.passed) all_ok = false;
        csv.field(r.name).field(status).field(r.worst_violation).end_row();
        det.field(r.name).field(status).field(r.worst_violation).field(r.tolerance).field(sanitize(r.details)).end_row();
        log << r.name << ": " << (r.skipped ? "skipped" : (r.passed ? "pass" : "FAIL")) << " (" << r.details << ")\n";
    }
    csv.close();
    det.close();
    return all_ok ? exit_ok : exit_verification_failure;
}

int dispatch(const RunConfig& cfg, std::ostream& log) {
    fs::create_directories(cfg.output_dir);
    switch (cfg.command) {
        case Command::analyze: return cmd_analyze(cfg, log);
        case Command::profile: return cmd_profile(cfg, log);
        case Command::solve: return cmd_solve(cfg, log);
        case Command::verify: return cmd_verify(cfg, log);
    }
    return exit_config_error;
}

}  // namespace degenpde::cli

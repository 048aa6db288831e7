#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "degenpde/ode.hpp"
#include "degenpde/params.hpp"
#include "degenpde/solver.hpp"

namespace degenpde {

struct CheckResult {
    std::string name;
    bool passed = false;
    /// Hypotheses did not hold; a skipped check never counts as passed.
    bool skipped = false;
    double worst_violation = 0.0;
    double tolerance = 0.0;
    std::string details;
    std::optional<std::string> artifact;
};

CheckResult skipped(std::string name, std::string reason);

/// Sign of the closed-form bracket on `samples` uniform points of [0, xi_b].
/// Skipped unless the global solvability condition holds.
CheckResult check_supersolution_sign(const DerivedConstants& derived, double a, int samples = 1000);

/// Runs the solver from rho z(t0, .) and checks v <= z + 1e-8 at every node of
/// every snapshot (initial and final states included). The largest excess
/// over all steps is reported in the details.
CheckResult check_comparison(const ProblemParams& params, const SolverConfig& config);

/// Least-squares slope of ln r_front against ln tau over the second half of the
/// front history, compared with 1/(p - n - n1) at 10 %.
CheckResult check_front_law(const SolveReport& report, const DerivedConstants& derived, double a);

enum class Lemma { first, second };

const char* to_string(Lemma lemma);

/// Initial data (K, theta) = (w, z) at eta0.
struct LemmaPair {
    double K1, theta1, K2, theta2;
};

/// Whether the pair satisfies the ordering hypotheses of the lemma:
///   first   0 < K1 <= K2, theta1 < theta2 <= 0
///   second  0 < K1 <= K2, 0 >= theta1 >= theta2
bool lemma_hypothesis(Lemma lemma, const LemmaPair& pair);

struct LemmaOptions {
    int trials = 20;
    std::uint64_t seed = 1;
    double eta0 = 5.0;
    double eta1 = 25.0;
    double K_lo = 0.2, K_hi = 2.0;
    double theta_lo = -2.0, theta_hi = 0.0;
    double tolerance = 1e-8;
};

/// Integrates both members of a pair and measures how far the lemma's
/// conclusion is violated; 0 when it holds on the common window.
double lemma_violation(const DerivedConstants& derived, double a, Lemma lemma, const LemmaPair& pair,
                       const LemmaOptions& options);

/// Seeded random pairs satisfying the hypotheses; passes iff every trial holds.
CheckResult check_lemma_ordering(const DerivedConstants& derived, double a, Lemma lemma,
                                 const LemmaOptions& options = {});

struct AsymptoticOptions {
    double eta0 = 5.0;
    double eta1 = 25.0;
    /// Initial w; the initial z is put on the rest curve w' = 0.
    double w_start = 1.0;
    double tolerance = 1e-9;
};

/// Slow diffusion: w(eta1) of the near-front system against solve_w0 at 1 %.
/// Fast diffusion: w(eta1) of the far-field system against solve_C_fast at 2 %.
CheckResult check_asymptotic_ratio(const DerivedConstants& derived, double a, const AsymptoticOptions& options = {});

struct ConvergenceOptions {
    int levels = 3;
    int M0 = 40;
    double dt0 = 0.04;
    double t_end = 2.0;
    double R = 20.0;
    /// Restrict the error norm to r <= interior_fraction * r_front of the
    /// reference (compact support only).
    std::optional<double> interior_fraction;
};

struct ConvergenceLevel {
    int M = 0;
    double dt = 0.0;
    double error = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceLevel> combined;
    std::vector<ConvergenceLevel> spatial;
    std::vector<ConvergenceLevel> temporal;
    /// Error ratios of successive (h, dt) -> (h/2, dt/4) levels.
    std::vector<double> combined_ratios;
    double spatial_order = 0.0;
    double temporal_order = 0.0;
    bool exact_reference = false;
};

/// Grid refinement study. Source-free runs are measured against the exact
/// similarity solution; otherwise against a run two levels finer.
/// Throws DomainError for fewer than 3 levels.
ConvergenceReport convergence_report(const ProblemParams& params, const ConvergenceOptions& options = {});

/// Passes iff spatial order >= 1.5 and temporal order >= 0.8.
CheckResult convergence_study(const ProblemParams& params, const ConvergenceOptions& options = {});

}  // namespace degenpde

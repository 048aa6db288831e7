#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "degenpde/errors.hpp"
#include "degenpde/params.hpp"
#include "degenpde/tridiagonal.hpp"

namespace degenpde {

/// Uniform radial grid r_i = i h, h = R / M, i = 0..M.
class Grid {
public:
    /// Control volumes carry the weight r^weight_exponent.
    Grid(int M, double R, double weight_exponent = 0.0);

    int M() const { return M_; }
    double R() const { return R_; }
    double h() const { return h_; }
    double r(int i) const { return static_cast<double>(i) * h_; }
    std::size_t size() const { return static_cast<std::size_t>(M_) + 1; }

    /// Weighted measure of the control volume around node i, the integral of
    /// r^(N-n-1) over [r_{i-1/2}, r_{i+1/2}] clipped to [0, R].
    const std::vector<double>& volumes() const { return volumes_; }

private:
    int M_;
    double R_;
    double h_;
    std::vector<double> volumes_;
};

/// Grid whose control volumes carry the weight r^(N-n-1).
Grid make_grid(int M, double R, const ProblemParams& params);

struct GridState {
    double t = 0.0;
    std::vector<double> v;
    int front_index = 0;
    double r_front = 0.0;
};

enum class Linearization {
    /// Coefficients frozen at the previous iterate.
    picard,
    /// Frozen coefficients plus a Newton correction in the gradient factor
    /// |dv|^(p-2); identical to picard when p = 2.
    gradient_newton,
};

const char* to_string(Linearization l);

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double picard_tol = 1e-6;
    int picard_max = 50;
    double support_threshold = 1e-10;
    double blowup_cap = 1e8;
    std::vector<double> snapshot_times;
    Linearization linearization = Linearization::gradient_newton;
    int M = 400;
    /// Outer radius; 0 picks twice the predicted front radius at t_end.
    double R = 0.0;
    /// Scale of the self-similar initial data.
    double rho = 1.0;
};

/// Violated constraints of the config, empty when valid.
std::vector<std::string> validate(const SolverConfig& config);

enum class Termination { completed, blowup, picard_failure };

const char* to_string(Termination t);

struct FrontSample {
    double t = 0.0;
    double r_front = 0.0;
};

struct SolveReport {
    std::vector<GridState> snapshots;
    /// One entry per accepted step.
    std::vector<int> iterations_per_step;
    /// Mass removed by clamping negative values, per step.
    std::vector<double> clamped_mass;
    std::vector<FrontSample> front_history;
    Termination termination = Termination::completed;
    /// Time of the step that blew up or failed to converge.
    double termination_time = 0.0;
    std::vector<std::string> warnings;
    double R = 0.0;
    int M = 0;
};

/// Picard iteration hit its cap without reaching the tolerance.
class PicardFailure : public SolverError {
public:
    PicardFailure(double t, double change);
    double time() const { return t_; }
    double last_change() const { return change_; }

private:
    double t_;
    double change_;
};

/// v_i = vbar(t0) f(xi(t0, r_i)) with the profile of the diffusion regime.
GridState initial_condition(const DerivedConstants& derived, double a, double t0, const Grid& grid);

/// Largest index with v above threshold * max(v) and a sub-cell estimate of
/// the front radius.
void locate_front(const DerivedConstants& derived, const Grid& grid, double threshold, GridState& state);

/// Diffusion coefficient through the face between nodes i and i+1, evaluated
/// on the frozen iterate.
double flux_coefficient(const DerivedConstants& derived, const Grid& grid, const std::vector<double>& frozen,
                        int i);

TridiagonalSystem assemble_system(const DerivedConstants& derived, const Grid& grid, const GridState& state,
                                  const std::vector<double>& frozen, double dt, double t_new,
                                  Linearization linearization = Linearization::gradient_newton);

struct StepResult {
    GridState state;
    int iterations = 0;
    double clamped_mass = 0.0;
    /// An iterate exceeded the blow-up cap or stopped being finite.
    bool blowup = false;
};

/// One implicit step to state.t + dt. Throws PicardFailure when the iteration
/// does not converge within config.picard_max.
StepResult picard_step(const DerivedConstants& derived, const Grid& grid, const GridState& state, double dt,
                       const SolverConfig& config);

/// Called after every accepted step.
using StepObserver = std::function<void(const GridState& state, int iterations)>;

/// Outer radius used when config.R is 0.
double default_radius(const DerivedConstants& derived, const SolverConfig& config);

SolveReport run(const DerivedConstants& derived, const Grid& grid, GridState initial, const SolverConfig& config,
                const StepObserver& observer = {});

/// Builds the grid and rho-scaled initial condition, then advances to t_end.
SolveReport run(const ProblemParams& params, const SolverConfig& config, const StepObserver& observer = {});

/// Integral of v with the grid's radial weight.
double mass(const Grid& grid, const std::vector<double>& v);

}  // namespace degenpde

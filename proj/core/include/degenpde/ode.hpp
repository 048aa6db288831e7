#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "degenpde/params.hpp"

namespace degenpde {

/// Point of a first-order trajectory: w is the profile ratio, z the
/// flux-like variable w^mu |Lw|^(p-2) Lw.
struct OdeState {
    double eta = 0.0;
    double w = 0.0;
    double z = 0.0;
};

using Derivative = std::array<double, 2>;
using OdeRhs = std::function<Derivative(double eta, double w, double z)>;

/// Samples of the self-similar operator
///   A f = xi^(1-s) (xi^(s-1) f^(m2-1) |(f^k2)'|^(p-2) f')' + xi f'/p + (f + f^beta2)/l7
/// on the uniform grid xi_j = xi0 + j h.
struct ResidualSamples {
    std::vector<double> value;
    /// Nodes where a negative power of a vanishing midpoint value was floored.
    std::vector<bool> degenerate;
};

ResidualSamples residual_numeric(std::span<const double> f, double xi0, double h,
                                 const DerivedConstants& derived);

struct NearFrontCoefficients {
    double a0, a1, a2, a3, a4;
};

/// System (w, z)' near the front of a compactly supported profile, in
/// eta = -ln(a - b xi^gamma1):
///   w' = gamma2 w + w^(-mu/(p-1)) |z|^(gamma1-2) z
///   z' = -a1 z - a2 w^(-mu/(p-1)) |z|^(gamma1-2) z - a3 w - a4 w^beta2
class NearFrontSystem {
public:
    NearFrontSystem(const DerivedConstants& derived, double a);

    NearFrontCoefficients coefficients(double eta) const;
    Derivative operator()(double eta, double w, double z) const;

    double gamma2() const { return gamma2_; }
    double mu() const { return mu_; }

private:
    double a_, p_, s_, gamma1_, gamma2_, gamma3_, mu_, l7_, beta2_;
};

struct FarFieldCoefficients {
    double b0, b1, b2, b3, b4;
};

/// Far-field system of a fast-diffusion profile, eta = ln(a + xi^gamma1),
/// with Lw = w' + gamma2 w.
class FarFieldSystem {
public:
    FarFieldSystem(const DerivedConstants& derived, double a);

    FarFieldCoefficients coefficients(double eta) const;
    Derivative operator()(double eta, double w, double z) const;

    double gamma2() const { return gamma2_; }
    double mu() const { return mu_; }

private:
    double a_, p_, s_, gamma1_, gamma2_, mu_, l7_, beta2_, m2_, k2_, A_;
};

Derivative near_front_rhs(const DerivedConstants& derived, double a, const OdeState& state);
Derivative far_field_rhs(const DerivedConstants& derived, double a, const OdeState& state);

enum class TrajectoryEnd { completed, w_nonpositive, overflow };

const char* to_string(TrajectoryEnd e);

/// Accepted steps of an adaptive integration with cubic Hermite dense output.
class Trajectory {
public:
    const std::vector<OdeState>& nodes() const { return nodes_; }
    TrajectoryEnd end() const { return end_; }
    double eta_first() const { return nodes_.front().eta; }
    double eta_last() const { return nodes_.back().eta; }
    const OdeState& back() const { return nodes_.back(); }

    /// Interpolated state; eta must lie in [eta_first, eta_last].
    OdeState at(double eta) const;

private:
    friend Trajectory integrate_system(const OdeRhs&, const OdeState&, double, double);
    std::vector<OdeState> nodes_;
    std::vector<Derivative> slopes_;
    TrajectoryEnd end_ = TrajectoryEnd::completed;
};

/// Classical RK4 with step-doubling error control. Stops early when w <= 0 or
/// |w| or |z| exceeds 1e12. Throws SolverError on step-size underflow or after
/// two million step attempts.
Trajectory integrate_system(const OdeRhs& rhs, const OdeState& initial, double eta_end,
                            double tolerance);

enum class LimitCase { finite, zero, infinite };

const char* to_string(LimitCase c);

struct CoefficientLimit {
    double value = 0.0;
    LimitCase tag = LimitCase::zero;
};

/// Limit of a4 as eta -> inf: gamma3/(a l7), 0 or +inf by the sign of
/// gamma2 (1 - beta2) - 1.
CoefficientLimit slow_limit_a4(const DerivedConstants& derived, double a);

/// Limit of b4 as eta -> inf by the sign of gamma2 (beta2 - 1).
CoefficientLimit fast_limit_b4(const DerivedConstants& derived);

/// gamma2^p w^(m2+k2(p-2)-1) - b^(-p/gamma1) gamma1^(1-p) gamma2 k2^(p-2)/p + a4 w^(beta2-1)
double w0_equation(const DerivedConstants& derived, double a, double w);

/// Positive root of w0_equation.
double solve_w0(const DerivedConstants& derived, double a);

/// (s/gamma1 + gamma2) gamma2^(p-1) C^((p-1)/gamma2)
///   + A^((1-p)/gamma2) gamma1^(-p) (gamma1 gamma2/p + 1/l7) + b4 C^(beta2-1)
double c_equation(const DerivedConstants& derived, double C);

/// Positive root of c_equation. Throws RootNotFoundError when the sign
/// pattern admits none.
double solve_C_fast(const DerivedConstants& derived, double a);

/// z on the rest curve w' = 0 of the near-front system.
double near_front_rest_z(const DerivedConstants& derived, double w);
/// z on the rest curve w' = 0 of the far-field system.
double far_field_rest_z(const DerivedConstants& derived, double w);

}  // namespace degenpde

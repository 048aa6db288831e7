#pragma once

#include <optional>
#include <string>
#include <vector>

namespace degenpde {

/// Exponents and switches of the Cauchy problem
///
///   |x|^-n u_t = u^q div(|x|^n1 u^(m-1) |grad u^k|^(p-2) grad u) + eps |x|^-n t^l u^beta
///
/// together with the spatial dimension, the initial time and the amplitude of
/// the self-similar initial profile.
struct ProblemParams {
    double k = 1.0;
    double m = 1.0;
    double p = 2.0;
    double q = 0.0;
    int epsilon = 1;
    double n = 0.0;
    double n1 = 0.0;
    double l = 0.0;
    double beta = 0.0;
    int N = 1;
    double t0 = 1.0;
    double a = 1.0;
    /// When false the reaction term is dropped from the equation and the
    /// similarity maps switch to the source-free (Barenblatt) branch.
    bool source = true;
};

struct Violation {
    std::string field;
    std::string bound;
};

struct ValidationOptions {
    /// Admit l >= -1 (the l = -1 branches of the time factors).
    bool permissive = false;
    /// Admit p == n + n1 (logarithmic space map).
    bool log_branch = false;
};

/// Every violated constraint; empty iff the parameters are admissible.
std::vector<Violation> validate(const ProblemParams& params, ValidationOptions options = {});

/// Informational notes for admissible values outside the original ranges
/// (q = 0, k < 1, m < 1). Never a failure.
std::vector<std::string> relaxation_notes(const ProblemParams& params);

enum class VbarCase { power, log, exp, inverse_power, source_free };
enum class TauCase { power, log, source_free, undefined };
enum class PhiCase { power, log };
enum class Diffusion { slow, critical, fast };

const char* to_string(VbarCase c);
const char* to_string(TauCase c);
const char* to_string(PhiCase c);
const char* to_string(Diffusion d);

/// Every constant of the self-similar construction. Constants that have no
/// real value for the given parameters are left empty; `require` turns an
/// empty one into an UndefinedConstantError naming the symbol.
struct DerivedConstants {
    ProblemParams params;

    double m2 = 0.0;
    double k2 = 0.0;
    double beta2 = 0.0;
    /// m2 + k2 (p - 2) - 1; its sign selects slow / critical / fast diffusion.
    double excess = 0.0;
    double gamma1 = 0.0;
    std::optional<double> gamma2;
    std::optional<double> gamma3;
    std::optional<double> mu;
    std::optional<double> s;

    double l4 = 0.0;
    std::optional<double> l1, l2, l3, l5, l6, l7;

    std::optional<double> b;
    std::optional<double> A;
    std::optional<double> beta2_crit;
    std::optional<double> beta_crit_u;
    /// Front coordinate; +inf when the profile has no compact support.
    std::optional<double> xi_b;

    /// Source-free similarity exponents: vbar = t^-alpha, tau = t^sigma / sigma.
    std::optional<double> sf_alpha;
    std::optional<double> sf_sigma;

    VbarCase vbar_case = VbarCase::power;
    TauCase tau_case = TauCase::power;
    PhiCase phi_case = PhiCase::power;
    Diffusion diffusion = Diffusion::slow;
};

double require(const std::optional<double>& value, const char* symbol);

DerivedConstants derive(const ProblemParams& params);

/// Same constants with a different profile amplitude.
DerivedConstants with_amplitude(const DerivedConstants& derived, double a);

struct Degeneracies {
    bool l_minus_one = false;
    bool beta2_one = false;
    bool l5_eq_beta2_minus_one = false;
    bool p_eq_n_plus_n1 = false;
};

struct Regime {
    Diffusion diffusion = Diffusion::slow;
    /// beta2 >= beta2_crit.
    bool supercritical = false;
    Degeneracies degeneracies;
};

Regime classify(const DerivedConstants& derived);

struct FujitaExponents {
    double beta2_crit = 0.0;
    double beta_crit_u = 0.0;
};

FujitaExponents fujita_exponent(const DerivedConstants& derived);

struct TimeFactors {
    double vbar = 0.0;
    /// Empty on branches where the rescaled time has no closed form.
    std::optional<double> tau;
};

TimeFactors time_factors(const DerivedConstants& derived, double t);

/// tau(t); throws DomainError where it is undefined or non-positive.
double rescaled_time(const DerivedConstants& derived, double t);

double space_map(const DerivedConstants& derived, double r);

/// Inverse of space_map on r >= 0.
double space_map_inverse(const DerivedConstants& derived, double phi);

double similarity_coord(const DerivedConstants& derived, double t, double r);

}  // namespace degenpde

#include "degenpde/params.hpp"

#include <cmath>
#include <limits>

#include "degenpde/errors.hpp"
#include "degenpde/numeric.hpp"

namespace degenpde {

namespace {

constexpr double kExactZero = 1e-14;

bool near_zero(double x) { return std::fabs(x) <= kExactZero; }

void check(std::vector<Violation>& out, bool ok, const char* field, const char* bound) {
    if (!ok) out.push_back({field, bound});
}

}  // namespace

std::vector<Violation> validate(const ProblemParams& pr, ValidationOptions options) {
    std::vector<Violation> out;
    const auto finite = [](double x) { return std::isfinite(x); };
    check(out, finite(pr.p) && pr.p >= 2.0, "p", "p >= 2");
    check(out, finite(pr.q) && pr.q >= 0.0 && pr.q < 1.0, "q", "0 <= q < 1");
    check(out, pr.epsilon == 1 || pr.epsilon == -1, "epsilon", "epsilon in {+1, -1}");
    check(out, pr.N >= 1, "N", "N >= 1");
    check(out, finite(pr.n) && pr.n >= 0.0, "n", "n >= 0");
    check(out, finite(pr.n1), "n1", "n1 finite");
    if (options.permissive)
        check(out, finite(pr.l) && pr.l >= -1.0, "l", "l >= -1 (permissive)");
    else
        check(out, finite(pr.l) && pr.l >= 0.0, "l", "l >= 0");
    check(out, finite(pr.beta) && pr.beta >= 0.0, "beta", "beta >= 0");
    check(out, finite(pr.a) && pr.a > 0.0, "a", "a > 0");
    check(out, finite(pr.t0) && pr.t0 > 0.0, "t0", "t0 > 0");
    check(out, finite(pr.k) && pr.k > 0.0, "k", "k > 0");
    check(out, finite(pr.m) && pr.m > 0.0, "m", "m > 0");
    check(out, pr.n < static_cast<double>(pr.N), "n", "n < N");
    if (options.log_branch)
        check(out, pr.p >= pr.n + pr.n1, "p", "p >= n + n1 (log branch)");
    else
        check(out, pr.p > pr.n + pr.n1, "p", "p > n + n1");
    return out;
}

std::vector<std::string> relaxation_notes(const ProblemParams& pr) {
    std::vector<std::string> notes;
    if (pr.q == 0.0) notes.emplace_back("constraint relaxed: q = 0 (classical range 0 < q < 1)");
    if (pr.k < 1.0) notes.emplace_back("constraint relaxed: k < 1 (classical range k >= 1)");
    if (pr.m < 1.0) notes.emplace_back("constraint relaxed: m < 1 (classical range m >= 1)");
    if (!pr.source) notes.emplace_back("assumption: reaction term disabled (source = off)");
    return notes;
}

const char* to_string(VbarCase c) {
    switch (c) {
        case VbarCase::power: return "power";
        case VbarCase::log: return "log";
        case VbarCase::exp: return "exp";
        case VbarCase::inverse_power: return "inverse-power";
        case VbarCase::source_free: return "source-free";
    }
    return "?";
}

const char* to_string(TauCase c) {
    switch (c) {
        case TauCase::power: return "power";
        case TauCase::log: return "log";
        case TauCase::source_free: return "source-free";
        case TauCase::undefined: return "undefined";
    }
    return "?";
}

const char* to_string(PhiCase c) { return c == PhiCase::power ? "power" : "log"; }

const char* to_string(Diffusion d) {
    switch (d) {
        case Diffusion::slow: return "slow";
        case Diffusion::critical: return "critical";
        case Diffusion::fast: return "fast";
    }
    return "?";
}

double require(const std::optional<double>& value, const char* symbol) {
    if (!value) throw UndefinedConstantError(symbol, "not defined for these parameters");
    return *value;
}

DerivedConstants derive(const ProblemParams& pr) {
    DerivedConstants d;
    d.params = pr;
    const double p = pr.p;
    const double one_q = 1.0 - pr.q;

    d.m2 = pr.m / one_q;
    d.k2 = pr.k / one_q;
    d.beta2 = (pr.beta - pr.q) / one_q;
    d.excess = d.m2 + d.k2 * (p - 2.0) - 1.0;
    d.gamma1 = p / (p - 1.0);

    if (near_zero(d.excess))
        d.diffusion = Diffusion::critical;
    else
        d.diffusion = d.excess > 0.0 ? Diffusion::slow : Diffusion::fast;

    if (d.diffusion != Diffusion::critical) {
        d.gamma2 = (p - 1.0) / d.excess;
        d.mu = 1.0 - (p - 1.0) * (1.0 - 1.0 / *d.gamma2);
    }

    const double dens = p - pr.n - pr.n1;
    if (near_zero(dens)) {
        d.phi_case = PhiCase::log;
    } else {
        d.phi_case = PhiCase::power;
        d.s = p * (pr.N - pr.n) / dens;
    }

    // Time-factor constants.
    d.l4 = pr.epsilon * one_q;
    const bool l_minus_one = near_zero(1.0 + pr.l);
    const bool beta2_one = near_zero(d.beta2 - 1.0);
    if (!l_minus_one) {
        d.l3 = d.l4 / (1.0 + pr.l);
        d.l7 = -((1.0 + pr.l) * d.excess + 1.0 - d.beta2) / (1.0 + pr.l);
    }
    d.l5 = (1.0 + pr.l) * d.excess;
    if (!beta2_one) {
        d.l2 = real_pow(d.l4 * (d.beta2 - 1.0), 1.0 / (1.0 - d.beta2));
        if (d.l3) d.l1 = real_pow(*d.l3 * (d.beta2 - 1.0), 1.0 / (1.0 - d.beta2));
        if (d.l1) d.l6 = real_pow(*d.l1, d.excess);
    }

    if (!pr.source) {
        d.vbar_case = VbarCase::source_free;
        d.tau_case = TauCase::source_free;
    } else {
        if (!l_minus_one && !beta2_one)
            d.vbar_case = VbarCase::power;
        else if (l_minus_one && !beta2_one)
            d.vbar_case = VbarCase::log;
        else if (!l_minus_one && beta2_one)
            d.vbar_case = VbarCase::exp;
        else
            d.vbar_case = VbarCase::inverse_power;

        if (d.vbar_case == VbarCase::power)
            d.tau_case = near_zero(*d.l5 - (d.beta2 - 1.0)) ? TauCase::log : TauCase::power;
        else
            d.tau_case = TauCase::undefined;
    }

    if (d.s) {
        const double denom = *d.s * d.excess + p;
        if (denom > 0.0) {
            d.sf_alpha = *d.s / denom;
            d.sf_sigma = p / denom;
        }
    }

    // Profile slope constant: the value for which the ZKB flux balances the
    // similarity drift exactly, k2^(p-2) (b gamma1 gamma2)^(p-1) = 1/p.
    // The critical case uses the limit of gamma2 * b.
    const double flux_scale = std::pow(p * std::pow(d.k2, p - 2.0), -1.0 / (p - 1.0));
    if (d.gamma2)
        d.b = flux_scale / (d.gamma1 * *d.gamma2);
    else
        d.b = flux_scale / d.gamma1;

    if (d.diffusion == Diffusion::slow && *d.b > 0.0)
        d.xi_b = std::pow(pr.a / *d.b, 1.0 / d.gamma1);
    else
        d.xi_b = std::numeric_limits<double>::infinity();

    if (d.b) {
        if (auto bp = real_pow(*d.b, -p / d.gamma1))
            d.gamma3 = *bp * std::pow(d.gamma1, -p) * std::pow(d.k2, p - 2.0);
    }

    if (d.gamma2) {
        const auto g12 = real_pow(d.gamma1 * *d.gamma2, 1.0 - p);
        if (g12) {
            const double base = *g12 * std::pow(d.k2, 2.0 - p) / p;
            d.A = real_pow(base, *d.gamma2 / (p - 1.0));
        }
    }

    if (!near_zero(pr.N - pr.n)) {
        d.beta2_crit = 1.0 + (1.0 + pr.l) * (d.m2 + d.k2 * (p - 2.0) + (p - pr.n1 - pr.N) / (pr.N - pr.n));
        d.beta_crit_u = pr.q + one_q * *d.beta2_crit;
    }
    return d;
}

DerivedConstants with_amplitude(const DerivedConstants& derived, double a) {
    ProblemParams pr = derived.params;
    pr.a = a;
    return derive(pr);
}

Regime classify(const DerivedConstants& d) {
    Regime r;
    r.diffusion = d.diffusion;
    r.supercritical = d.beta2_crit && d.beta2 >= *d.beta2_crit;
    r.degeneracies.l_minus_one = near_zero(1.0 + d.params.l);
    r.degeneracies.beta2_one = near_zero(d.beta2 - 1.0);
    r.degeneracies.l5_eq_beta2_minus_one = d.l5 && near_zero(*d.l5 - (d.beta2 - 1.0));
    r.degeneracies.p_eq_n_plus_n1 = d.phi_case == PhiCase::log;
    return r;
}

FujitaExponents fujita_exponent(const DerivedConstants& d) {
    return {require(d.beta2_crit, "beta2_crit"), require(d.beta_crit_u, "beta_crit_u")};
}

TimeFactors time_factors(const DerivedConstants& d, double t) {
    const ProblemParams& pr = d.params;
    if (!(t > 0.0) && !(t == 0.0 && d.vbar_case == VbarCase::exp))
        throw DomainError("time factors need t > 0, got " + std::to_string(t));

    TimeFactors out;
    switch (d.vbar_case) {
        case VbarCase::power:
            out.vbar = require(d.l1, "l1") * std::pow(t, (1.0 + pr.l) / (1.0 - d.beta2));
            break;
        case VbarCase::log: {
            const double lt = std::log(t);
            if (lt <= 0.0) throw DomainError("log branch of vbar needs t > 1");
            out.vbar = require(d.l2, "l2") * std::pow(lt, 1.0 / (1.0 - d.beta2));
            break;
        }
        case VbarCase::exp:
            out.vbar = std::exp(-require(d.l3, "l3") * std::pow(t, pr.l + 1.0));
            break;
        case VbarCase::inverse_power:
            out.vbar = std::pow(t, -d.l4);
            break;
        case VbarCase::source_free:
            out.vbar = std::pow(t, -require(d.sf_alpha, "alpha"));
            break;
    }

    switch (d.tau_case) {
        case TauCase::power: {
            const double l5 = *d.l5;
            out.tau = require(d.l6, "l6") * (1.0 - d.beta2) * std::pow(t, l5 / (1.0 - d.beta2) + 1.0) /
                      (l5 + 1.0 - d.beta2);
            break;
        }
        case TauCase::log:
            out.tau = require(d.l6, "l6") * std::log(t);
            break;
        case TauCase::source_free: {
            const double sigma = require(d.sf_sigma, "sigma");
            out.tau = std::pow(t, sigma) / sigma;
            break;
        }
        case TauCase::undefined:
            break;
    }
    return out;
}

double rescaled_time(const DerivedConstants& d, double t) {
    const TimeFactors tf = time_factors(d, t);
    if (!tf.tau) throw DomainError(std::string("rescaled time undefined on the ") + to_string(d.vbar_case) +
                                   " branch");
    if (!(*tf.tau > 0.0))
        throw DomainError("rescaled time is not positive at t = " + std::to_string(t));
    return *tf.tau;
}

double space_map(const DerivedConstants& d, double r) {
    const ProblemParams& pr = d.params;
    if (d.phi_case == PhiCase::log) {
        if (!(r > 0.0)) throw DomainError("log branch of the space map needs r > 0");
        return std::log(r);
    }
    if (r < 0.0) throw DomainError("space map needs r >= 0");
    const double dens = pr.p - pr.n - pr.n1;
    return pr.p * std::pow(r, dens / pr.p) / dens;
}

double space_map_inverse(const DerivedConstants& d, double phi) {
    const ProblemParams& pr = d.params;
    if (d.phi_case == PhiCase::log) return std::exp(phi);
    if (phi < 0.0) throw DomainError("space map inverse needs phi >= 0");
    const double dens = pr.p - pr.n - pr.n1;
    return std::pow(phi * dens / pr.p, pr.p / dens);
}

double similarity_coord(const DerivedConstants& d, double t, double r) {
    const double tau = rescaled_time(d, t);
    return space_map(d, r) * std::pow(tau, -1.0 / d.params.p);
}

}  // namespace degenpde

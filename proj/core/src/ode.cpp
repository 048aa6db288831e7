#include "degenpde/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "degenpde/errors.hpp"
#include "degenpde/numeric.hpp"

namespace degenpde {

namespace {

constexpr double kFloor = 1e-14;
constexpr double kOverflow = 1e12;
constexpr long kMaxAttempts = 2'000'000;

double floored_pow(double x, double e) {
    if (e < 0.0 && x < kFloor) x = kFloor;
    return std::pow(x, e);
}

/// w^(-mu/(p-1)) |z|^(gamma1-2) z, written as a signed power so it is defined at z = 0.
double flux_term(double w, double z, double mu, double p, double gamma1) {
    return floored_pow(w, -mu / (p - 1.0)) * signed_pow(z, gamma1 - 1.0);
}

void require_finite(double value, const char* name, double eta) {
    if (!std::isfinite(value))
        throw SolverError(std::string("non-finite coefficient ") + name + " at eta = " + std::to_string(eta));
}

}  // namespace

ResidualSamples residual_numeric(std::span<const double> f, double xi0, double h, const DerivedConstants& d) {
    const std::size_t n = f.size();
    if (n < 3) throw DomainError("residual needs at least three samples");
    if (!(h > 0.0)) throw DomainError("residual needs a positive spacing");
    const double p = d.params.p;
    const double s = require(d.s, "s");
    const double l7 = require(d.l7, "l7");

    ResidualSamples out;
    out.value.assign(n, 0.0);
    out.degenerate.assign(n, false);

    // Flux through the midpoint between samples j and j+1.
    std::vector<double> flux(n - 1);
    std::vector<bool> floored(n - 1, false);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double xm = xi0 + (static_cast<double>(j) + 0.5) * h;
        double fm = 0.5 * (f[j] + f[j + 1]);
        if (d.m2 - 1.0 < 0.0 && fm < kFloor) {
            fm = kFloor;
            floored[j] = true;
        }
        const double dfk = (std::pow(f[j + 1], d.k2) - std::pow(f[j], d.k2)) / h;
        const double df = (f[j + 1] - f[j]) / h;
        flux[j] = std::pow(xm, s - 1.0) * std::pow(fm, d.m2 - 1.0) * std::pow(std::fabs(dfk), p - 2.0) * df;
    }

    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double xi = xi0 + static_cast<double>(j) * h;
        const double diffusion = std::pow(xi, 1.0 - s) * (flux[j] - flux[j - 1]) / h;
        const double drift = xi / p * (f[j + 1] - f[j - 1]) / (2.0 * h);
        const double fb = f[j] > 0.0 ? std::pow(f[j], d.beta2) : 0.0;
        out.value[j] = diffusion + drift + (f[j] + fb) / l7;
        out.degenerate[j] = floored[j - 1] || floored[j];
    }
    // One-sided closure at both ends.
    out.value[0] = 2.0 * out.value[1] - out.value[2];
    out.value[n - 1] = 2.0 * out.value[n - 2] - out.value[n - 3];
    out.degenerate[0] = floored[0];
    out.degenerate[n - 1] = floored[n - 2];
    return out;
}

NearFrontSystem::NearFrontSystem(const DerivedConstants& d, double a)
    : a_(a),
      p_(d.params.p),
      s_(require(d.s, "s")),
      gamma1_(d.gamma1),
      gamma2_(require(d.gamma2, "gamma2")),
      gamma3_(require(d.gamma3, "gamma3")),
      mu_(require(d.mu, "mu")),
      l7_(require(d.l7, "l7")),
      beta2_(d.beta2) {}

NearFrontCoefficients NearFrontSystem::coefficients(double eta) const {
    const double e = std::exp(-eta);
    const double denom = a_ - e;
    if (denom == 0.0) throw SolverError("a0 undefined: a - exp(-eta) = 0");
    NearFrontCoefficients c{};
    c.a0 = e / denom;
    c.a1 = s_ / gamma1_ * c.a0 - gamma2_;
    c.a2 = gamma1_ * gamma3_ / p_;
    c.a3 = gamma3_ / l7_ * c.a0;
    c.a4 = c.a3 * std::exp(gamma2_ * (1.0 - beta2_) * eta);
    return c;
}

Derivative NearFrontSystem::operator()(double eta, double w, double z) const {
    const NearFrontCoefficients c = coefficients(eta);
    const double lw = flux_term(w, z, mu_, p_, gamma1_);
    const double dw = gamma2_ * w + lw;
    const double dz = -c.a1 * z - c.a2 * lw - c.a3 * w - c.a4 * std::pow(std::max(w, 0.0), beta2_);
    require_finite(dw, "dw/deta", eta);
    require_finite(dz, "dz/deta", eta);
    return {dw, dz};
}

FarFieldSystem::FarFieldSystem(const DerivedConstants& d, double a)
    : a_(a),
      p_(d.params.p),
      s_(require(d.s, "s")),
      gamma1_(d.gamma1),
      gamma2_(require(d.gamma2, "gamma2")),
      mu_(require(d.mu, "mu")),
      l7_(require(d.l7, "l7")),
      beta2_(d.beta2),
      m2_(d.m2),
      k2_(d.k2),
      A_(require(d.A, "A")) {}

FarFieldCoefficients FarFieldSystem::coefficients(double eta) const {
    const double denom = 1.0 - a_ * std::exp(-eta);
    if (denom == 0.0) throw SolverError("b0 undefined: pole at eta = ln a");
    FarFieldCoefficients c{};
    const double Ap = std::pow(A_, (1.0 - p_) / gamma2_);
    c.b0 = 1.0 / denom;
    c.b1 = s_ / gamma1_ * c.b0 + gamma2_;
    c.b2 = std::pow(gamma1_, 1.0 - p_) * Ap / p_;
    c.b3 = std::pow(gamma1_, -p_) * Ap / l7_ * c.b0;
    c.b4 = std::pow(gamma1_, -p_) * std::pow(A_, beta2_ - m2_ - k2_ * (p_ - 2.0)) * c.b0 / l7_ *
           std::exp(gamma2_ * (beta2_ - 1.0) * eta);
    return c;
}

Derivative FarFieldSystem::operator()(double eta, double w, double z) const {
    const FarFieldCoefficients c = coefficients(eta);
    const double lw = flux_term(w, z, mu_, p_, gamma1_);
    const double dw = -gamma2_ * w + lw;
    const double dz = -c.b1 * z - c.b2 * lw - c.b3 * w - c.b4 * std::pow(std::max(w, 0.0), beta2_);
    require_finite(dw, "dw/deta", eta);
    require_finite(dz, "dz/deta", eta);
    return {dw, dz};
}

Derivative near_front_rhs(const DerivedConstants& d, double a, const OdeState& st) {
    return NearFrontSystem(d, a)(st.eta, st.w, st.z);
}

Derivative far_field_rhs(const DerivedConstants& d, double a, const OdeState& st) {
    return FarFieldSystem(d, a)(st.eta, st.w, st.z);
}

const char* to_string(TrajectoryEnd e) {
    switch (e) {
        case TrajectoryEnd::completed: return "completed";
        case TrajectoryEnd::w_nonpositive: return "w_nonpositive";
        case TrajectoryEnd::overflow: return "overflow";
    }
    return "?";
}

OdeState Trajectory::at(double eta) const {
    if (nodes_.empty()) throw DomainError("empty trajectory");
    if (eta < nodes_.front().eta || eta > nodes_.back().eta)
        throw DomainError("eta outside the integrated window");
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), eta,
                                     [](double x, const OdeState& s) { return x < s.eta; });
    if (it == nodes_.end()) return nodes_.back();
    const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const OdeState& y0 = nodes_[i];
    const OdeState& y1 = nodes_[i + 1];
    const double h = y1.eta - y0.eta;
    const double t = (eta - y0.eta) / h;
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    OdeState out;
    out.eta = eta;
    out.w = h00 * y0.w + h10 * h * slopes_[i][0] + h01 * y1.w + h11 * h * slopes_[i + 1][0];
    out.z = h00 * y0.z + h10 * h * slopes_[i][1] + h01 * y1.z + h11 * h * slopes_[i + 1][1];
    return out;
}

namespace {

struct Vec2 {
    double w, z;
};

Vec2 rk4(const OdeRhs& f, double eta, Vec2 y, double h) {
    const Derivative k1 = f(eta, y.w, y.z);
    const Derivative k2 = f(eta + 0.5 * h, y.w + 0.5 * h * k1[0], y.z + 0.5 * h * k1[1]);
    const Derivative k3 = f(eta + 0.5 * h, y.w + 0.5 * h * k2[0], y.z + 0.5 * h * k2[1]);
    const Derivative k4 = f(eta + h, y.w + h * k3[0], y.z + h * k3[1]);
    return {y.w + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y.z + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

}  // namespace

Trajectory integrate_system(const OdeRhs& rhs, const OdeState& initial, double eta_end, double tolerance) {
    if (!(initial.w > 0.0)) throw DomainError("integration needs w > 0 at the start");
    if (!(tolerance > 0.0)) throw DomainError("integration needs a positive tolerance");
    if (!(eta_end >= initial.eta)) throw DomainError("integration runs forward in eta");

    Trajectory tr;
    tr.nodes_.push_back(initial);
    tr.slopes_.push_back(rhs(initial.eta, initial.w, initial.z));

    double eta = initial.eta;
    Vec2 y{initial.w, initial.z};
    double h = std::min(1e-2, eta_end - eta);
    long attempts = 0;
    while (eta < eta_end) {
        if (++attempts > kMaxAttempts)
            throw SolverError("step budget exhausted at eta = " + std::to_string(eta));
        h = std::min(h, eta_end - eta);
        if (h < 1e-12 * std::max(1.0, std::fabs(eta)))
            throw SolverError("step-size underflow at eta = " + std::to_string(eta));

        Vec2 full, half;
        bool finite = true;
        try {
            full = rk4(rhs, eta, y, h);
            half = rk4(rhs, eta + 0.5 * h, rk4(rhs, eta, y, 0.5 * h), 0.5 * h);
        } catch (const SolverError&) {
            finite = false;
        }
        finite = finite && std::isfinite(full.w) && std::isfinite(full.z) && std::isfinite(half.w) &&
                 std::isfinite(half.z);
        if (!finite) {
            h *= 0.25;
            continue;
        }
        const double err_w = std::fabs(half.w - full.w) / 15.0 / (tolerance * std::max(1.0, std::fabs(half.w)));
        const double err_z = std::fabs(half.z - full.z) / 15.0 / (tolerance * std::max(1.0, std::fabs(half.z)));
        const double err = std::max(err_w, err_z);
        if (err > 1.0) {
            h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
            continue;
        }
        // Local extrapolation of the step-doubling pair.
        y = {half.w + (half.w - full.w) / 15.0, half.z + (half.z - full.z) / 15.0};
        eta += h;
        if (!(y.w > 0.0)) {
            tr.end_ = TrajectoryEnd::w_nonpositive;
            break;
        }
        if (std::fabs(y.w) > kOverflow || std::fabs(y.z) > kOverflow) {
            tr.end_ = TrajectoryEnd::overflow;
            tr.nodes_.push_back({eta, y.w, y.z});
            tr.slopes_.push_back({0.0, 0.0});
            break;
        }
        tr.nodes_.push_back({eta, y.w, y.z});
        tr.slopes_.push_back(rhs(eta, y.w, y.z));
        h *= err > 0.0 ? std::min(4.0, 0.9 * std::pow(err, -0.2)) : 4.0;
    }
    // The overflow node has no trustworthy slope; drop it from dense output.
    if (tr.end_ == TrajectoryEnd::overflow && tr.nodes_.size() > 1) {
        tr.nodes_.pop_back();
        tr.slopes_.pop_back();
    }
    return tr;
}

const char* to_string(LimitCase c) {
    switch (c) {
        case LimitCase::finite: return "finite";
        case LimitCase::zero: return "zero";
        case LimitCase::infinite: return "infinite";
    }
    return "?";
}

CoefficientLimit slow_limit_a4(const DerivedConstants& d, double a) {
    const double g2 = require(d.gamma2, "gamma2");
    const double e = g2 * (1.0 - d.beta2);
    if (std::fabs(e - 1.0) <= 1e-12)
        return {require(d.gamma3, "gamma3") / (a * require(d.l7, "l7")), LimitCase::finite};
    if (e < 1.0) return {0.0, LimitCase::zero};
    return {std::numeric_limits<double>::infinity(), LimitCase::infinite};
}

CoefficientLimit fast_limit_b4(const DerivedConstants& d) {
    const double g2 = require(d.gamma2, "gamma2");
    const double e = g2 * (d.beta2 - 1.0);
    const double p = d.params.p;
    if (std::fabs(e) <= 1e-12) {
        const double A = require(d.A, "A");
        return {std::pow(d.gamma1, -p) * std::pow(A, d.beta2 - d.m2 - d.k2 * (p - 2.0)) / require(d.l7, "l7"),
                LimitCase::finite};
    }
    if (e < 0.0) return {0.0, LimitCase::zero};
    return {std::numeric_limits<double>::infinity(), LimitCase::infinite};
}

double w0_equation(const DerivedConstants& d, double a, double w) {
    const double p = d.params.p;
    const double g2 = require(d.gamma2, "gamma2");
    const double b = require(d.b, "b");
    const CoefficientLimit a4 = slow_limit_a4(d, a);
    const double constant = std::pow(b, -p / d.gamma1) * std::pow(d.gamma1, 1.0 - p) * g2 *
                            std::pow(d.k2, p - 2.0) / p;
    double value = std::pow(g2, p) * std::pow(w, d.excess) - constant;
    if (a4.tag == LimitCase::finite) value += a4.value * std::pow(w, d.beta2 - 1.0);
    return value;
}

double solve_w0(const DerivedConstants& d, double a) {
    if (d.diffusion != Diffusion::slow) throw DomainError("w0 needs slow diffusion");
    if (slow_limit_a4(d, a).tag == LimitCase::infinite)
        throw RootNotFoundError("a4 limit is infinite; no finite w0");
    return positive_root([&](double w) { return w0_equation(d, a, w); }).root;
}

double c_equation(const DerivedConstants& d, double C) {
    const double p = d.params.p;
    const double g1 = d.gamma1;
    const double g2 = require(d.gamma2, "gamma2");
    const double s = require(d.s, "s");
    const double l7 = require(d.l7, "l7");
    const double A = require(d.A, "A");
    const CoefficientLimit b4 = fast_limit_b4(d);
    double value = (s / g1 + g2) * checked_pow(g2, p - 1.0, "gamma2^(p-1)") * std::pow(C, (p - 1.0) / g2) +
                   std::pow(A, (1.0 - p) / g2) * std::pow(g1, -p) * (g1 * g2 / p + 1.0 / l7);
    if (b4.tag == LimitCase::finite) value += b4.value * std::pow(C, d.beta2 - 1.0);
    return value;
}

double solve_C_fast(const DerivedConstants& d, double /*a*/) {
    if (d.diffusion != Diffusion::fast) throw DomainError("C needs fast diffusion");
    if (fast_limit_b4(d).tag == LimitCase::infinite)
        throw RootNotFoundError("gamma2 (beta2 - 1) > 0: b4 limit is infinite");
    return positive_root([&](double C) { return c_equation(d, C); }).root;
}

double near_front_rest_z(const DerivedConstants& d, double w) {
    const double g2 = require(d.gamma2, "gamma2");
    const double mu = require(d.mu, "mu");
    return -std::pow(w, mu) * std::pow(g2 * w, d.params.p - 1.0);
}

double far_field_rest_z(const DerivedConstants& d, double w) {
    const double g2 = require(d.gamma2, "gamma2");
    const double mu = require(d.mu, "mu");
    return std::pow(w, mu) * signed_pow(g2 * w, d.params.p - 1.0);
}

}  // namespace degenpde

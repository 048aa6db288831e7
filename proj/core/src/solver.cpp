#include "degenpde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "degenpde/profiles.hpp"

namespace degenpde {

namespace {

constexpr double kFloor = 1e-14;
constexpr double kFallbackRadius = 20.0;

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

}  // namespace

Grid::Grid(int M, double R, double weight_exponent) : M_(M), R_(R), h_(R / M) {
    if (M < 16) throw DomainError("grid needs M >= 16, got " + std::to_string(M));
    if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("grid needs a finite R > 0");
    const double w = weight_exponent + 1.0;
    if (!(w > 0.0)) throw DomainError("radial weight r^" + std::to_string(weight_exponent) + " is not integrable at 0");
    volumes_.resize(size());
    for (int i = 0; i <= M_; ++i) {
        const double lo = std::max(0.0, (i - 0.5) * h_);
        const double hi = std::min(R_, (i + 0.5) * h_);
        volumes_[static_cast<std::size_t>(i)] = (std::pow(hi, w) - std::pow(lo, w)) / w;
    }
}

Grid make_grid(int M, double R, const ProblemParams& params) {
    return Grid(M, R, static_cast<double>(params.N) - params.n - 1.0);
}

const char* to_string(Linearization l) {
    switch (l) {
        case Linearization::picard: return "picard";
        case Linearization::gradient_newton: return "gradient_newton";
    }
    return "?";
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::blowup: return "blowup";
        case Termination::picard_failure: return "picard_failure";
    }
    return "?";
}

std::vector<std::string> validate(const SolverConfig& c) {
    std::vector<std::string> out;
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) out.emplace_back("dt > 0");
    if (!std::isfinite(c.t_end)) out.emplace_back("t_end finite");
    if (!(c.picard_tol > 0.0)) out.emplace_back("picard_tol > 0");
    if (c.picard_max < 1) out.emplace_back("picard_max >= 1");
    if (!(c.support_threshold > 0.0 && c.support_threshold < 1.0)) out.emplace_back("0 < support_threshold < 1");
    if (!(c.blowup_cap > 0.0)) out.emplace_back("blowup_cap > 0");
    if (c.M < 16) out.emplace_back("M >= 16");
    if (!(c.R >= 0.0) || !std::isfinite(c.R)) out.emplace_back("R >= 0 (0 selects the default)");
    if (!(c.rho >= 0.0) || !std::isfinite(c.rho)) out.emplace_back("rho >= 0");
    for (double t : c.snapshot_times)
        if (!std::isfinite(t)) out.emplace_back("snapshot times finite");
    return out;
}

PicardFailure::PicardFailure(double t, double change)
    : SolverError("Picard iteration did not converge at t = " + std::to_string(t) +
                  " (last change " + std::to_string(change) + ")"),
      t_(t),
      change_(change) {}

double mass(const Grid& grid, const std::vector<double>& v) {
    double s = 0.0;
    const auto& vol = grid.volumes();
    for (std::size_t i = 0; i < v.size() && i < vol.size(); ++i) s += vol[i] * v[i];
    return s;
}

void locate_front(const DerivedConstants& d, const Grid& grid, double threshold, GridState& st) {
    const double vmax = *std::max_element(st.v.begin(), st.v.end());
    if (!(vmax > 0.0)) {
        st.front_index = 0;
        st.r_front = 0.0;
        return;
    }
    const double cut = threshold * vmax;
    int i = grid.M();
    while (i > 0 && !(st.v[static_cast<std::size_t>(i)] > cut)) --i;
    st.front_index = i;
    st.r_front = grid.r(i);
    if (i < 1 || i >= grid.M()) return;

    // Linear extrapolation of the pressure v^(1/gamma2), which is linear
    // across a ZKB front.
    const double e = (d.gamma2 && *d.gamma2 > 0.0) ? 1.0 / *d.gamma2 : 1.0;
    const double pi = std::pow(st.v[static_cast<std::size_t>(i)], e);
    const double pm = std::pow(st.v[static_cast<std::size_t>(i - 1)], e);
    if (pm > pi) st.r_front += std::min(grid.h(), pi * grid.h() / (pm - pi));
}

GridState initial_condition(const DerivedConstants& d, double a, double t0, const Grid& grid) {
    GridState st;
    st.t = t0;
    st.v.resize(grid.size());
    for (int i = 0; i < grid.M(); ++i) st.v[static_cast<std::size_t>(i)] = supersolution_z(d, a, t0, grid.r(i));
    st.v.back() = 0.0;
    locate_front(d, grid, 1e-10, st);
    return st;
}

double flux_coefficient(const DerivedConstants& d, const Grid& grid, const std::vector<double>& frozen, int i) {
    const ProblemParams& pr = d.params;
    const double h = grid.h();
    const double rf = (i + 0.5) * h;
    const double v0 = frozen[static_cast<std::size_t>(i)];
    const double v1 = frozen[static_cast<std::size_t>(i + 1)];

    // v^(m2-1) (k2 v^(k2-1))^(p-2) collapses to one power of the midpoint value.
    const double ev = (d.m2 - 1.0) + (d.k2 - 1.0) * (pr.p - 2.0);
    double vm = 0.5 * (v0 + v1);
    if (ev < 0.0 && vm < kFloor) vm = kFloor;
    double dv = std::fabs(v1 - v0) / h;
    if (pr.p < 2.0 && dv < kFloor) dv = kFloor;

    return std::pow(rf, pr.n1 + pr.N - 1.0) * std::pow(vm, ev) * std::pow(d.k2, pr.p - 2.0) *
           std::pow(dv, pr.p - 2.0);
}

TridiagonalSystem assemble_system(const DerivedConstants& d, const Grid& grid, const GridState& state,
                                  const std::vector<double>& frozen, double dt, double t_new,
                                  Linearization linearization) {
    const ProblemParams& pr = d.params;
    const std::size_t n = grid.size();
    const int M = grid.M();
    const double h = grid.h();
    const auto& vol = grid.volumes();
    const bool newton = linearization == Linearization::gradient_newton;

    TridiagonalSystem sys;
    sys.lower.assign(n - 1, 0.0);
    sys.upper.assign(n - 1, 0.0);
    sys.diag = vol;
    sys.rhs.resize(n);
    for (std::size_t i = 0; i < n; ++i) sys.rhs[i] = vol[i] * state.v[i];

    for (int i = 0; i < M; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double D = flux_coefficient(d, grid, frozen, i);
        const double c = dt * D / h * (newton ? pr.p - 1.0 : 1.0);
        const double corr = newton ? (pr.p - 2.0) * dt * D / h * (frozen[k + 1] - frozen[k]) : 0.0;
        sys.diag[k] += c;
        sys.diag[k + 1] += c;
        sys.upper[k] = -c;
        sys.lower[k] = -c;
        sys.rhs[k] -= corr;
        sys.rhs[k + 1] += corr;
    }

    if (pr.source) {
        const double coef = pr.epsilon * (1.0 - pr.q) * std::pow(t_new, pr.l);
        for (std::size_t i = 0; i < n; ++i) {
            if (coef > 0.0) {
                if (frozen[i] > 0.0) sys.rhs[i] += dt * vol[i] * coef * std::pow(frozen[i], d.beta2);
            } else {
                sys.diag[i] -= dt * vol[i] * coef * std::pow(std::max(frozen[i], kFloor), d.beta2 - 1.0);
            }
        }
    }

    sys.diag[n - 1] = 1.0;
    sys.lower[n - 2] = 0.0;
    sys.rhs[n - 1] = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const bool bad = !std::isfinite(sys.diag[i]) || !std::isfinite(sys.rhs[i]) ||
                         (i + 1 < n && (!std::isfinite(sys.upper[i]) || !std::isfinite(sys.lower[i])));
        if (bad) throw SolverError("non-finite matrix entry at node " + std::to_string(i));
    }
    return sys;
}

StepResult picard_step(const DerivedConstants& d, const Grid& grid, const GridState& state, double dt,
                       const SolverConfig& config) {
    const double t_new = state.t + dt;
    const auto& vol = grid.volumes();
    std::vector<double> frozen = state.v;
    double change = 0.0;

    StepResult out;
    for (int it = 1; it <= config.picard_max; ++it) {
        std::vector<double> x = thomas_solve(assemble_system(d, grid, state, frozen, dt, t_new, config.linearization));
        double clamped = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i])) finite = false;
            if (x[i] < 0.0) {
                clamped -= vol[i] * x[i];
                x[i] = 0.0;
            }
        }
        const double peak = finite ? max_abs(x) : 0.0;
        if (!finite || peak >= config.blowup_cap) {
            out.state.t = t_new;
            out.state.v = std::move(frozen);
            out.iterations = it;
            out.blowup = true;
            return out;
        }
        change = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) change = std::max(change, std::fabs(x[i] - frozen[i]));
        frozen = std::move(x);
        if (change <= config.picard_tol * std::max(1.0, peak)) {
            out.state.t = t_new;
            out.state.v = std::move(frozen);
            out.iterations = it;
            out.clamped_mass = clamped;
            locate_front(d, grid, config.support_threshold, out.state);
            return out;
        }
    }
    throw PicardFailure(t_new, change);
}

double default_radius(const DerivedConstants& d, const SolverConfig& config) {
    if (d.diffusion != Diffusion::slow) return kFallbackRadius;
    try {
        const double tau = rescaled_time(d, std::max(config.t_end, d.params.t0));
        return 2.0 * front_radius_theory(d, d.params.a, tau);
    } catch (const Error&) {
        return kFallbackRadius;
    }
}

SolveReport run(const DerivedConstants& d, const Grid& grid, GridState initial, const SolverConfig& config,
                const StepObserver& observer) {
    if (const auto bad = validate(config); !bad.empty()) throw DomainError("invalid solver config: " + bad.front());
    if (initial.v.size() != grid.size()) throw DomainError("initial state does not match the grid");
    const double t0 = initial.t;
    if (config.t_end < t0) throw DomainError("t_end is before the initial time");

    SolveReport rep;
    rep.R = grid.R();
    rep.M = grid.M();
    locate_front(d, grid, config.support_threshold, initial);
    rep.snapshots.push_back(initial);
    rep.front_history.push_back({initial.t, initial.r_front});

    const double span = config.t_end - t0;
    const long steps = span > 0.0 ? static_cast<long>(std::ceil(span / config.dt - 1e-9)) : 0;
    const double dt = steps > 0 ? span / static_cast<double>(steps) : config.dt;

    std::vector<long> snap_steps;
    for (double ts : config.snapshot_times) {
        if (ts <= t0 || ts > config.t_end + 0.5 * dt) continue;
        snap_steps.push_back(std::lround((ts - t0) / dt));
    }
    std::sort(snap_steps.begin(), snap_steps.end());
    snap_steps.erase(std::unique(snap_steps.begin(), snap_steps.end()), snap_steps.end());

    bool warned = false;
    GridState state = std::move(initial);
    for (long k = 1; k <= steps; ++k) {
        GridState from = state;
        from.t = t0 + static_cast<double>(k - 1) * dt;
        StepResult step;
        try {
            step = picard_step(d, grid, from, dt, config);
        } catch (const PicardFailure& e) {
            rep.termination = Termination::picard_failure;
            rep.termination_time = e.time();
            break;
        }
        if (step.blowup) {
            rep.termination = Termination::blowup;
            rep.termination_time = step.state.t;
            break;
        }
        step.state.t = t0 + static_cast<double>(k) * dt;
        state = std::move(step.state);
        rep.iterations_per_step.push_back(step.iterations);
        rep.clamped_mass.push_back(step.clamped_mass);
        rep.front_history.push_back({state.t, state.r_front});
        if (!warned && state.r_front >= 0.8 * grid.R()) {
            rep.warnings.push_back("front reached 0.8 R at t = " + std::to_string(state.t));
            warned = true;
        }
        if (std::binary_search(snap_steps.begin(), snap_steps.end(), k)) rep.snapshots.push_back(state);
        if (observer) observer(state, step.iterations);
    }
    if (rep.snapshots.back().t != state.t) rep.snapshots.push_back(state);
    if (rep.termination == Termination::completed) rep.termination_time = state.t;
    return rep;
}

SolveReport run(const ProblemParams& params, const SolverConfig& config, const StepObserver& observer) {
    if (const auto bad = validate(params, {true, false}); !bad.empty())
        throw DomainError("invalid parameters: " + bad.front().field + " must satisfy " + bad.front().bound);
    const DerivedConstants d = derive(params);
    const double R = config.R > 0.0 ? config.R : default_radius(d, config);
    const Grid grid = make_grid(config.M, R, params);
    GridState init = initial_condition(d, params.a, params.t0, grid);
    for (double& x : init.v) x *= config.rho;
    return run(d, grid, std::move(init), config, observer);
}

}  // namespace degenpde

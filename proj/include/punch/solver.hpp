#pragma once

/// Method-of-lines solver for the scalar transport equation
///     dI/dt + u(s) dI/ds - D(s) d2I/ds2 = 0
/// on [0, L] with a Dirichlet inlet I(0,t) = g(t) and a zero-gradient
/// outlet. Advection uses second-order MUSCL reconstruction with a minmod
/// limiter and upwind face values in advective form (identical to flux
/// differencing for uniform u, which is what the conservation tests use);
/// diffusion uses second-order central differences. Time integration is
/// explicit RK4 with dt = cfl * min(ds/max u, ds^2/(2 max D)).
///
/// The solver runs on a fine internal cell grid and restricts the solution
/// onto the coarser output kymograph grid: nearest internal step in time,
/// linear interpolation in space.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "punch/grid.hpp"

namespace punch {

/// Smooth boxcar inlet bolus:
/// 0.5*(erf((t-onset)/ramp) - erf((t-onset-duration)/ramp)), clipped to [0,1].
inline double inlet_pulse(double t, double onset, double duration, double ramp) {
    if (!(ramp > 0.0)) throw InvalidArgument("inlet_pulse: ramp must be positive");
    const double v = 0.5 * (std::erf((t - onset) / ramp) - std::erf((t - onset - duration) / ramp));
    return std::min(1.0, std::max(0.0, v));
}

struct SolveOptions {
    int n_cells = 512;                  // internal finite-volume resolution
    double cfl = 0.4;                   // dt safety factor
    double divergence_threshold = 10.0; // any |I| above this aborts
    std::function<double(double)> initial;  // I(s, 0); zero when unset
};

struct SolveDiagnostics {
    double dt = 0.0;
    long steps = 0;
    std::vector<double> mass;  // sum(I)*ds after each step, index 0 = initial
};

namespace detail {

inline double minmod(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::min(a, b);
    if (a < 0.0 && b < 0.0) return std::max(a, b);
    return 0.0;
}

/// Right-hand side of the semi-discrete system, advective form.
/// cells: I values; g: inlet Dirichlet value at this stage time.
inline void transport_rhs(const std::vector<double>& I, double g,
                          const std::vector<double>& u, const std::vector<double>& D,
                          double ds, std::vector<double>& rhs,
                          std::vector<double>& face) {
    const int n = static_cast<int>(I.size());
    // Ghost values: Dirichlet at the inlet face, zero gradient at the outlet.
    const double ghost_in = 2.0 * g - I[0];
    const double ghost_out = I[n - 1];

    // Upwind MUSCL face values (u >= 0 everywhere, checked by caller).
    // face[j] is the reconstructed value at the face between cells j-1 and j.
    face[0] = g;
    for (int j = 1; j < n; ++j) {
        const double left2 = (j >= 2) ? I[j - 2] : ghost_in;
        const double slope = minmod(I[j - 1] - left2, I[j] - I[j - 1]);
        face[j] = I[j - 1] + 0.5 * slope;
    }
    face[n] = ghost_out;

    const double inv_ds = 1.0 / ds;
    const double inv_ds2 = inv_ds * inv_ds;
    for (int i = 0; i < n; ++i) {
        const double adv = u[i] * (face[i + 1] - face[i]) * inv_ds;
        const double il = (i == 0) ? ghost_in : I[i - 1];
        const double ir = (i == n - 1) ? ghost_out : I[i + 1];
        const double dif = D[i] * (il - 2.0 * I[i] + ir) * inv_ds2;
        rhs[i] = dif - adv;
    }
}

}  // namespace detail

inline Kymograph solve_advection_diffusion(const std::function<double(double)>& u_of_s,
                                           const std::function<double(double)>& D_of_s,
                                           const std::function<double(double)>& inlet_of_t,
                                           const SpatioTemporalGrid& out_grid,
                                           const SolveOptions& opts = {},
                                           SolveDiagnostics* diag = nullptr) {
    const int n = opts.n_cells;
    if (n < 16) throw InvalidArgument("solver: n_cells must be >= 16");
    const double L = out_grid.L;
    const double ds = L / n;

    std::vector<double> u(n), D(n);
    double u_max = 0.0, D_max = 0.0, u_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double s = (i + 0.5) * ds;
        u[i] = u_of_s(s);
        D[i] = D_of_s(s);
        u_max = std::max(u_max, u[i]);
        u_min = std::min(u_min, u[i]);
        D_max = std::max(D_max, D[i]);
        if (D[i] < 0.0) throw InvalidArgument("solver: negative dispersion");
    }
    if (u_min < 0.0) throw UnsupportedInput("solver: flow reversal (negative velocity) unsupported");

    double dt_limit = std::numeric_limits<double>::infinity();
    if (u_max > 0.0) dt_limit = std::min(dt_limit, ds / u_max);
    if (D_max > 0.0) dt_limit = std::min(dt_limit, ds * ds / (2.0 * D_max));
    if (!std::isfinite(dt_limit))
        throw InvalidArgument("solver: both velocity and dispersion are zero");
    const double dt = opts.cfl * dt_limit;

    const double t_end = out_grid.t_coords.back();
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(t_end / dt)));

    // Map each output time to its nearest internal step.
    std::vector<long> capture_step(out_grid.nt());
    for (int j = 0; j < out_grid.nt(); ++j) {
        long k = std::lround(out_grid.t_coords[j] / dt);
        capture_step[j] = std::min(std::max<long>(0, k), steps);
    }

    std::vector<double> I(n, 0.0);
    if (opts.initial)
        for (int i = 0; i < n; ++i) I[i] = opts.initial((i + 0.5) * ds);

    Kymograph out;
    out.grid = out_grid;
    out.intensity.assign(out_grid.nt(), std::vector<double>(out_grid.ns(), 0.0));

    // Restriction: linear interpolation over [inlet face, cell centers, outlet face].
    auto capture = [&](int row, double t) {
        const double g = inlet_of_t(t);
        for (int j = 0; j < out_grid.ns(); ++j) {
            const double s = out_grid.s_coords[j];
            const double x = s / ds - 0.5;  // fractional cell-center index
            double v;
            if (x <= 0.0) {
                const double w = s / (0.5 * ds);  // between inlet face and first center
                v = g + w * (I[0] - g);
            } else if (x >= n - 1) {
                v = I[n - 1];  // zero-gradient extension to the outlet face
            } else {
                const int i0 = static_cast<int>(x);
                const double w = x - i0;
                v = I[i0] + w * (I[i0 + 1] - I[i0]);
            }
            out.intensity[row][j] = v;
        }
    };

    if (diag) {
        diag->dt = dt;
        diag->steps = steps;
        diag->mass.clear();
        diag->mass.reserve(steps + 1);
        double m0 = 0.0;
        for (double v : I) m0 += v;
        diag->mass.push_back(m0 * ds);
    }

    int next_out = 0;
    while (next_out < out_grid.nt() && capture_step[next_out] == 0) {
        capture(next_out, 0.0);
        ++next_out;
    }

    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), face(n + 1);
    for (long step = 0; step < steps; ++step) {
        const double t = step * dt;
        detail::transport_rhs(I, inlet_of_t(t), u, D, ds, k1, face);
        for (int i = 0; i < n; ++i) tmp[i] = I[i] + 0.5 * dt * k1[i];
        detail::transport_rhs(tmp, inlet_of_t(t + 0.5 * dt), u, D, ds, k2, face);
        for (int i = 0; i < n; ++i) tmp[i] = I[i] + 0.5 * dt * k2[i];
        detail::transport_rhs(tmp, inlet_of_t(t + 0.5 * dt), u, D, ds, k3, face);
        for (int i = 0; i < n; ++i) tmp[i] = I[i] + dt * k3[i];
        detail::transport_rhs(tmp, inlet_of_t(t + dt), u, D, ds, k4, face);
        for (int i = 0; i < n; ++i)
            I[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        double max_abs = 0.0, m = 0.0;
        for (double v : I) {
            max_abs = std::max(max_abs, std::abs(v));
            m += v;
        }
        if (!(max_abs <= opts.divergence_threshold) || !std::isfinite(max_abs))
            throw SolverDivergence("solver diverged at t=" + std::to_string(t + dt) +
                                   " (max |I| = " + std::to_string(max_abs) + ")");
        if (diag) diag->mass.push_back(m * ds);

        while (next_out < out_grid.nt() && capture_step[next_out] == step + 1) {
            capture(next_out, (step + 1) * dt);
            ++next_out;
        }
    }
    // Output times beyond the last internal step (rounding edge): capture final state.
    while (next_out < out_grid.nt()) {
        capture(next_out, steps * dt);
        ++next_out;
    }
    return out;
}

}  // namespace punch

#pragma once

/// Domain types shared by the whole pipeline: spatiotemporal grids,
/// kymographs, velocity and dispersion fields. All types are immutable
/// value types once built; operations are pure functions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "punch/common.hpp"

namespace punch {

enum class PhysioState { Rest, Hyperemia };

inline const char* to_string(PhysioState s) {
    return s == PhysioState::Rest ? "rest" : "hyper";
}

inline PhysioState physio_state_from_string(const std::string& s) {
    if (s == "rest") return PhysioState::Rest;
    if (s == "hyper" || s == "hyperemia") return PhysioState::Hyperemia;
    throw InvalidArgument("unknown physiological state: " + s);
}

/// Uniform rectangular grid in arc length s (m) and time t (s).
struct SpatioTemporalGrid {
    std::vector<double> s_coords;  // [0, L], uniform spacing
    std::vector<double> t_coords;  // multiples of 1/fps starting at 0
    double L = 0.0;                // vessel length (m)
    double T = 0.0;                // acquisition duration (s)
    double fps = 0.0;              // frame rate (1/s)

    int ns() const { return static_cast<int>(s_coords.size()); }
    int nt() const { return static_cast<int>(t_coords.size()); }
    double ds() const { return L / (ns() - 1); }
    double dt() const { return 1.0 / fps; }
};

/// build_grid(L, T, ns, fps): ns uniform arc-length samples over [0, L],
/// nt = floor(T*fps) + 1 time samples at spacing 1/fps.
inline SpatioTemporalGrid build_grid(double L, double T, int ns, double fps) {
    if (!(L > 0.0) || !(T > 0.0)) throw InvalidArgument("build_grid: non-positive dimensions");
    if (ns < 16) throw InvalidArgument("build_grid: ns must be >= 16");
    if (!(fps > 0.0)) throw InvalidArgument("build_grid: fps must be positive");

    SpatioTemporalGrid g;
    g.L = L;
    g.T = T;
    g.fps = fps;
    g.s_coords.resize(ns);
    const double ds = L / (ns - 1);
    for (int i = 0; i < ns; ++i) g.s_coords[i] = i * ds;
    g.s_coords.back() = L;

    const int nt = static_cast<int>(std::floor(T * fps)) + 1;
    g.t_coords.resize(nt);
    for (int k = 0; k < nt; ++k) g.t_coords[k] = k / fps;
    return g;
}

/// Spatiotemporal intensity field I[t_index][s_index], time-major.
struct Kymograph {
    SpatioTemporalGrid grid;
    std::vector<std::vector<double>> intensity;  // nt rows of ns values

    double at(int t_index, int s_index) const { return intensity[t_index][s_index]; }

    void validate() const {
        if (static_cast<int>(intensity.size()) != grid.nt())
            throw DataError("kymograph row count does not match grid");
        for (const auto& row : intensity)
            if (static_cast<int>(row.size()) != grid.ns())
                throw DataError("kymograph row width does not match grid");
    }
};

/// Affine map of the intensity field onto [0, 1]: min -> 0, max -> 1.
/// Idempotent on already-normalized fields.
inline Kymograph normalize_intensity(const Kymograph& k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& row : k.intensity)
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!(hi > lo)) throw InvalidArgument("normalize_intensity: constant intensity field");

    Kymograph out = k;
    const double inv = 1.0 / (hi - lo);
    for (auto& row : out.intensity)
        for (double& v : row) v = (v - lo) * inv;
    return out;
}

/// Time-averaged axial velocity samples u[s_index] (m/s) on the s grid.
struct VelocityProfile {
    std::vector<double> values;

    double spatial_mean() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s / static_cast<double>(values.size());
    }
};

/// Effective dispersion D[t_index][s_index] (m^2/s).
struct DispersionField {
    std::vector<std::vector<double>> values;

    double max_value() const {
        double m = 0.0;
        for (const auto& row : values)
            for (double v : row) m = std::max(m, v);
        return m;
    }
};

/// Peclet number u*L/D: ratio of advective to diffusive transport.
inline double peclet(double u_mean, double L, double D_mean) {
    if (!(u_mean > 0.0) || !(L > 0.0) || !(D_mean > 0.0))
        throw InvalidArgument("peclet: all arguments must be positive");
    return u_mean * L / D_mean;
}

}  // namespace punch

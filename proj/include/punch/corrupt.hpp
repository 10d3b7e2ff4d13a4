#pragma once

/// Six-stage angiographic corruption pipeline, applied in order:
///   1. Poisson shot noise          4. vertical banding
///   2. spatial Gaussian blur       5. localized intensity dropout
///   3. low-frequency inhomogeneity 6. temporal pixelation
/// All stochastic magnitudes scale linearly with a scalar noise factor;
/// a zero factor disables every stochastic stage bit-exactly.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "punch/grid.hpp"

namespace punch {

struct CorruptionConfig {
    double noise_factor = 1.0;  // eta >= 0
    double target_fps = 0.0;    // 0 means keep the source frame rate
    std::uint64_t seed = 0;

    // Per-stage base parameters; every constant is overridable by key
    // in the experiment config file.
    double shot_lambda_base = 200.0;     // photon budget: lambda = base / eta
    double blur_sigma_per_eta = 0.5;     // blur sigma in cells per unit eta
    double blur_identity_below = 0.25;   // kernel degenerates to identity
    double lowfreq_amp = 0.1;            // multiplicative modulation amplitude
    double band_amp = 0.05;              // additive banding amplitude
    int band_count_min = 4;
    int band_count_max = 8;
    double drops_per_eta = 2.0;          // N_drop = round(drops_per_eta * eta)
    double drop_frac_min = 0.05;         // dropout rectangle side, fraction of axis
    double drop_frac_max = 0.22;         // 0.22^2 < 5% of the domain area
};

/// Keep every r-th frame starting at frame 0, where r = fps/target_fps
/// must be an integer (within 1e-9).
inline Kymograph downsample_fps(const Kymograph& k, double target_fps) {
    if (!(target_fps > 0.0)) throw InvalidArgument("downsample_fps: target_fps must be positive");
    if (target_fps > k.grid.fps * (1.0 + 1e-9))
        throw InvalidArgument("downsample_fps: target_fps exceeds source fps");
    const double ratio = k.grid.fps / target_fps;
    const long r = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(r)) > 1e-9)
        throw InvalidArgument("downsample_fps: fps ratio is not an integer");
    if (r == 1) return k;

    Kymograph out;
    out.grid = k.grid;
    out.grid.fps = k.grid.fps / static_cast<double>(r);
    out.grid.t_coords.clear();
    out.intensity.clear();
    for (int t = 0; t < k.grid.nt(); t += static_cast<int>(r)) {
        out.grid.t_coords.push_back(k.grid.t_coords[t]);
        out.intensity.push_back(k.intensity[t]);
    }
    return out;
}

namespace detail {

inline void apply_shot_noise(std::vector<std::vector<double>>& I, double lambda, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& row : I)
        for (double& v : row) {
            const double rate = lambda * v;
            if (rate <= 0.0) {
                v = 0.0;
            } else if (rate > 50.0) {
                // Gaussian limit of the Poisson count
                v = std::max(0.0, rate + std::sqrt(rate) * gauss(rng)) / lambda;
            } else {
                std::poisson_distribution<long> pois(rate);
                v = static_cast<double>(pois(rng)) / lambda;
            }
        }
}

inline void apply_spatial_blur(std::vector<std::vector<double>>& I, double sigma_cells) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma_cells));
    std::vector<double> kernel(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i)
        kernel[i + radius] = std::exp(-0.5 * (i / sigma_cells) * (i / sigma_cells));

    const int ns = static_cast<int>(I.front().size());
    std::vector<double> tmp(ns);
    for (auto& row : I) {
        for (int j = 0; j < ns; ++j) {
            double acc = 0.0, wsum = 0.0;
            const int lo = std::max(0, j - radius), hi = std::min(ns - 1, j + radius);
            for (int i = lo; i <= hi; ++i) {
                const double w = kernel[i - j + radius];
                acc += w * row[i];
                wsum += w;
            }
            tmp[j] = acc / wsum;  // truncated kernel renormalized at edges
        }
        row = tmp;
    }
}

}  // namespace detail

/// Apply the corruption pipeline to a normalized kymograph.
inline Kymograph corrupt(const Kymograph& k, const CorruptionConfig& cfg) {
    k.validate();
    const double eta = cfg.noise_factor;
    if (eta < 0.0) throw InvalidArgument("corrupt: negative noise factor");
    const double source_fps = k.grid.fps;
    const double target_fps = cfg.target_fps > 0.0 ? cfg.target_fps : source_fps;
    if (target_fps > source_fps * (1.0 + 1e-9))
        throw InvalidArgument("corrupt: target_fps exceeds source fps");

    Kymograph out = k;
    Rng rng(cfg.seed);
    const int nt = k.grid.nt(), ns = k.grid.ns();

    // 1. shot noise
    if (eta > 0.0) detail::apply_shot_noise(out.intensity, cfg.shot_lambda_base / eta, rng);

    // 2. spatial blur along s
    const double sigma = cfg.blur_sigma_per_eta * eta;
    if (sigma >= cfg.blur_identity_below) detail::apply_spatial_blur(out.intensity, sigma);

    // 3. low-frequency multiplicative inhomogeneity
    if (eta > 0.0) {
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        const double phi = phase(rng), psi = phase(rng);
        for (int t = 0; t < nt; ++t) {
            const double wt = std::sin(2.0 * std::numbers::pi * k.grid.t_coords[t] / k.grid.T + psi);
            for (int j = 0; j < ns; ++j) {
                const double wsp = std::sin(2.0 * std::numbers::pi * k.grid.s_coords[j] / k.grid.L + phi);
                out.intensity[t][j] *= 1.0 + cfg.lowfreq_amp * eta * wsp * wt;
            }
        }
    }

    // 4. vertical banding: random square wave over the s axis
    if (eta > 0.0) {
        std::uniform_int_distribution<int> nb_dist(cfg.band_count_min, cfg.band_count_max);
        const int nb = nb_dist(rng);
        std::uniform_int_distribution<int> sign(0, 1);
        std::vector<double> band(nb);
        for (double& b : band) b = sign(rng) ? 1.0 : -1.0;
        for (int j = 0; j < ns; ++j) {
            const int b = std::min(nb - 1, j * nb / ns);
            const double add = cfg.band_amp * eta * band[b];
            for (int t = 0; t < nt; ++t) out.intensity[t][j] += add;
        }
    }

    // 5. localized dropout rectangles
    if (eta > 0.0) {
        const long n_drop = std::lround(cfg.drops_per_eta * eta);
        std::uniform_real_distribution<double> frac(cfg.drop_frac_min, cfg.drop_frac_max);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (long d = 0; d < n_drop; ++d) {
            const int wt = std::max(1, static_cast<int>(frac(rng) * nt));
            const int ws = std::max(1, static_cast<int>(frac(rng) * ns));
            const int t0 = static_cast<int>(unit(rng) * (nt - wt));
            const int s0 = static_cast<int>(unit(rng) * (ns - ws));
            for (int t = t0; t < t0 + wt; ++t)
                for (int j = s0; j < s0 + ws; ++j) out.intensity[t][j] = 0.0;
        }
    }

    // 6. temporal pixelation
    out = downsample_fps(out, target_fps);

    for (auto& row : out.intensity)
        for (double& v : row) v = std::min(1.0, std::max(0.0, v));
    return out;
}

}  // namespace punch

#pragma once

/// Synthetic case generation: sample physiological parameters, solve the
/// transport equation for both physiological states, corrupt the clean
/// kymographs, and persist everything with a ground-truth sidecar.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "punch/corrupt.hpp"
#include "punch/kymo_io.hpp"
#include "punch/solver.hpp"

namespace punch {

enum class Regime { Typical, Atypical };

inline const char* to_string(Regime r) { return r == Regime::Typical ? "typical" : "atypical"; }

/// One smooth localized velocity modulation in normalized arc length.
struct VelocityBump {
    double amp;     // relative amplitude, [-0.3, 0.3]
    double center;  // s/L in [0, 1]
    double width;   // w/L in [0.05, 0.2]
};

/// Velocity profile u(s) = mean * (1 + sum_k amp_k * exp(-((s_hat-c_k)/w_k)^2 / 2)),
/// floored at a small positive value.
struct ModulatedVelocity {
    double mean = 0.0;
    std::vector<VelocityBump> bumps;
    double floor = 0.005;

    double eval_hat(double s_hat) const {
        double m = 1.0;
        for (const auto& b : bumps) {
            const double x = (s_hat - b.center) / b.width;
            m += b.amp * std::exp(-0.5 * x * x);
        }
        return std::max(floor, mean * m);
    }
};

struct CaseSpec {
    PhysioState state = PhysioState::Rest;
    double L = 0.0;
    double T = 0.0;
    VelocityProfile u_profile;        // samples on the output s grid
    ModulatedVelocity u_form;         // continuous form behind the samples
    double D_value = 0.0;             // dispersion, constant over (s, t)
    double inlet_onset = 0.0;
    double inlet_duration = 0.0;
    double inlet_ramp = 0.1;
    std::uint64_t seed = 0;

    DispersionField dispersion_field(int nt, int ns) const {
        DispersionField f;
        f.values.assign(nt, std::vector<double>(ns, D_value));
        return f;
    }
};

struct SyntheticCase {
    std::string case_id;
    Regime regime = Regime::Typical;
    CaseSpec rest_spec, hyper_spec;
    double cfr_true = 0.0;  // spatial mean of hyper profile / rest profile
    double noise_factor = 0.0;
    Kymograph clean_rest, clean_hyper;
    Kymograph corrupted_rest, corrupted_hyper;
};

struct SamplerConfig {
    double p_atypical = 0.25;
    double typical_u_min = 0.10, typical_u_max = 0.20;    // rest mean (m/s)
    double typical_cfr_min = 1.5, typical_cfr_max = 4.0;
    double atypical_u_min = 0.20, atypical_u_max = 0.40;
    double atypical_cfr_min = 1.0, atypical_cfr_max = 2.0;
    double L_min = 0.06, L_max = 0.10;       // m
    double T_min = 3.0, T_max = 6.0;         // s
    double D_min = 1e-6, D_max = 1e-5;       // m^2/s, log-uniform
    double onset_min = 0.1, onset_max = 0.5; // s
    double duration_min = 0.8, duration_max = 2.0;
    double inlet_ramp = 0.1;
    int max_bumps = 3;
    double bump_amp = 0.3;
    double bump_width_min = 0.05, bump_width_max = 0.2;  // fraction of L
    bool shared_geometry = false;  // share the (L, T) draw between states
    int ns = 128;
    double fps = 15.0;
    // Profiles whose extremes leave this window are redrawn so every sample
    // respects the model's velocity bounds.
    double u_profile_floor = 0.01, u_profile_ceil = 0.95;

    void validate() const {
        auto ordered = [](double a, double b) { return a < b; };
        if (!(ordered(typical_u_min, typical_u_max) && ordered(atypical_u_min, atypical_u_max) &&
              ordered(typical_cfr_min, typical_cfr_max) &&
              ordered(atypical_cfr_min, atypical_cfr_max) && ordered(L_min, L_max) &&
              ordered(T_min, T_max) && ordered(D_min, D_max) &&
              ordered(onset_min, onset_max) && ordered(duration_min, duration_max)))
            throw InvalidArgument("sampler config: malformed range");
        if (!(D_min > 0.0)) throw InvalidArgument("sampler config: D_min must be positive");
        if (p_atypical < 0.0 || p_atypical > 1.0)
            throw InvalidArgument("sampler config: p_atypical outside [0,1]");
    }
};

/// Sampled case pair before any PDE solve.
struct SampledCase {
    Regime regime;
    CaseSpec rest_spec, hyper_spec;
    double cfr_true;
};

inline SampledCase sample_case(Rng& rng, const SamplerConfig& cfg,
                               std::optional<Regime> forced_regime = std::nullopt) {
    cfg.validate();
    auto uf = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    SampledCase out;
    if (forced_regime) {
        out.regime = *forced_regime;
    } else {
        out.regime = uf(0.0, 1.0) < cfg.p_atypical ? Regime::Atypical : Regime::Typical;
    }
    const bool atyp = out.regime == Regime::Atypical;
    const double u_mean = atyp ? uf(cfg.atypical_u_min, cfg.atypical_u_max)
                               : uf(cfg.typical_u_min, cfg.typical_u_max);
    const double cfr = atyp ? uf(cfg.atypical_cfr_min, cfg.atypical_cfr_max)
                            : uf(cfg.typical_cfr_min, cfg.typical_cfr_max);

    auto draw_state = [&](CaseSpec& s, PhysioState which, double prev_L, double prev_T) {
        s.state = which;
        if (cfg.shared_geometry && which == PhysioState::Hyperemia) {
            s.L = prev_L;
            s.T = prev_T;
        } else {
            s.L = uf(cfg.L_min, cfg.L_max);
            s.T = uf(cfg.T_min, cfg.T_max);
        }
        s.D_value = std::exp(uf(std::log(cfg.D_min), std::log(cfg.D_max)));
        s.inlet_onset = uf(cfg.onset_min, cfg.onset_max);
        s.inlet_duration = uf(cfg.duration_min, cfg.duration_max);
        s.inlet_ramp = cfg.inlet_ramp;
    };
    draw_state(out.rest_spec, PhysioState::Rest, 0, 0);
    draw_state(out.hyper_spec, PhysioState::Hyperemia, out.rest_spec.L, out.rest_spec.T);

    // Bumps are shared between states; hyperemia scales the whole profile by CFR.
    // Redraw sets whose extremes would leave the admissible velocity window.
    std::uniform_int_distribution<int> nb_dist(0, cfg.max_bumps);
    ModulatedVelocity form;
    form.mean = u_mean;
    for (int attempt = 0; attempt < 64; ++attempt) {
        form.bumps.clear();
        const int nb = nb_dist(rng);
        for (int b = 0; b < nb; ++b) {
            VelocityBump bump;
            bump.amp = uf(-cfg.bump_amp, cfg.bump_amp);
            bump.center = uf(0.0, 1.0);
            bump.width = uf(cfg.bump_width_min, cfg.bump_width_max);
            form.bumps.push_back(bump);
        }
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int j = 0; j < cfg.ns; ++j) {
            const double v = form.eval_hat(j / double(cfg.ns - 1));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (lo >= cfg.u_profile_floor && hi * cfr <= cfg.u_profile_ceil) break;
        if (attempt == 63) form.bumps.clear();  // constant profile always admissible
    }

    out.rest_spec.u_form = form;
    out.hyper_spec.u_form = form;
    out.hyper_spec.u_form.mean *= cfr;

    auto sample_profile = [&](const ModulatedVelocity& f) {
        VelocityProfile p;
        p.values.resize(cfg.ns);
        for (int j = 0; j < cfg.ns; ++j) p.values[j] = f.eval_hat(j / double(cfg.ns - 1));
        return p;
    };
    out.rest_spec.u_profile = sample_profile(out.rest_spec.u_form);
    out.hyper_spec.u_profile = sample_profile(out.hyper_spec.u_form);
    out.cfr_true = out.hyper_spec.u_profile.spatial_mean() / out.rest_spec.u_profile.spatial_mean();
    return out;
}

/// Solve one state of a sampled case on a fresh output grid.
inline Kymograph solve_case_state(const CaseSpec& spec, int ns, double fps, int n_cells,
                                  SolveDiagnostics* diag = nullptr) {
    const SpatioTemporalGrid grid = build_grid(spec.L, spec.T, ns, fps);
    // The stored profile samples are the ground truth; the solver sees their
    // piecewise-linear interpolant in normalized arc length.
    const auto& prof = spec.u_profile.values;
    const int n = static_cast<int>(prof.size());
    auto u_of_s = [&, n](double s) {
        const double x = std::clamp(s / spec.L, 0.0, 1.0) * (n - 1);
        const int i = std::min(n - 2, static_cast<int>(x));
        const double w = x - i;
        return prof[i] + w * (prof[i + 1] - prof[i]);
    };
    auto D_of_s = [&](double) { return spec.D_value; };
    auto inlet = [&](double t) {
        return inlet_pulse(t, spec.inlet_onset, spec.inlet_duration, spec.inlet_ramp);
    };
    SolveOptions opts;
    opts.n_cells = n_cells;
    return solve_advection_diffusion(u_of_s, D_of_s, inlet, grid, opts, diag);
}

/// Solve and corrupt both states. The corruption seed is derived from the
/// case seed so regeneration is bit-reproducible.
inline SyntheticCase realize_case(const SampledCase& sampled, const std::string& case_id,
                                  double noise_factor, const SamplerConfig& cfg, int n_cells,
                                  const CorruptionConfig& corruption_base = {}) {
    SyntheticCase c;
    c.case_id = case_id;
    c.regime = sampled.regime;
    c.rest_spec = sampled.rest_spec;
    c.hyper_spec = sampled.hyper_spec;
    c.cfr_true = sampled.cfr_true;
    c.noise_factor = noise_factor;

    c.clean_rest = normalize_intensity(solve_case_state(c.rest_spec, cfg.ns, cfg.fps, n_cells));
    c.clean_hyper = normalize_intensity(solve_case_state(c.hyper_spec, cfg.ns, cfg.fps, n_cells));

    CorruptionConfig cc = corruption_base;
    cc.noise_factor = noise_factor;
    if (cc.target_fps <= 0.0) cc.target_fps = cfg.fps;
    cc.seed = derive_seed(c.rest_spec.seed, "corrupt-rest");
    c.corrupted_rest = corrupt(c.clean_rest, cc);
    cc.seed = derive_seed(c.rest_spec.seed, "corrupt-hyper");
    c.corrupted_hyper = corrupt(c.clean_hyper, cc);
    return c;
}

// ---------------------------------------------------------------------------
// Persistence: per-case directory + ground-truth sidecar + dataset manifest
// ---------------------------------------------------------------------------

inline nlohmann::json case_spec_to_json(const CaseSpec& s) {
    nlohmann::json j;
    j["state"] = to_string(s.state);
    j["L"] = s.L;
    j["T"] = s.T;
    j["u_profile"] = s.u_profile.values;
    j["u_mean"] = s.u_form.mean;
    nlohmann::json bumps = nlohmann::json::array();
    for (const auto& b : s.u_form.bumps)
        bumps.push_back({{"amp", b.amp}, {"center", b.center}, {"width", b.width}});
    j["u_bumps"] = bumps;
    j["D_value"] = s.D_value;
    j["inlet_onset"] = s.inlet_onset;
    j["inlet_duration"] = s.inlet_duration;
    j["inlet_ramp"] = s.inlet_ramp;
    j["seed"] = s.seed;
    return j;
}

inline CaseSpec case_spec_from_json(const nlohmann::json& j) {
    CaseSpec s;
    s.state = physio_state_from_string(j.at("state").get<std::string>());
    s.L = j.at("L").get<double>();
    s.T = j.at("T").get<double>();
    s.u_profile.values = j.at("u_profile").get<std::vector<double>>();
    s.u_form.mean = j.at("u_mean").get<double>();
    for (const auto& b : j.at("u_bumps"))
        s.u_form.bumps.push_back({b.at("amp").get<double>(), b.at("center").get<double>(),
                                  b.at("width").get<double>()});
    s.D_value = j.at("D_value").get<double>();
    s.inlet_onset = j.at("inlet_onset").get<double>();
    s.inlet_duration = j.at("inlet_duration").get<double>();
    s.inlet_ramp = j.at("inlet_ramp").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << text;
    if (!os) throw IoError("write failed: " + path.string());
}

/// Write one case directory: four kymographs plus truth.json.
inline void save_case(const SyntheticCase& c, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create case directory " + dir.string() + ": " + ec.message());

    save_kymograph(c.clean_rest, (dir / "clean_rest.kymo").string());
    save_kymograph(c.clean_hyper, (dir / "clean_hyper.kymo").string());
    save_kymograph(c.corrupted_rest, (dir / "corrupt_rest.kymo").string());
    save_kymograph(c.corrupted_hyper, (dir / "corrupt_hyper.kymo").string());

    nlohmann::json j;
    j["format"] = "punch-case";
    j["version"] = 1;
    j["case_id"] = c.case_id;
    j["regime"] = to_string(c.regime);
    j["cfr_true"] = c.cfr_true;
    j["noise_factor"] = c.noise_factor;
    j["rest_spec"] = case_spec_to_json(c.rest_spec);
    j["hyper_spec"] = case_spec_to_json(c.hyper_spec);
    j["files"] = {{"clean_rest", "clean_rest.kymo"},
                  {"clean_hyper", "clean_hyper.kymo"},
                  {"corrupt_rest", "corrupt_rest.kymo"},
                  {"corrupt_hyper", "corrupt_hyper.kymo"}};
    write_text_file(dir / "truth.json", j.dump(2) + "\n");
}

inline SyntheticCase load_case(const std::filesystem::path& dir) {
    const auto sidecar = dir / "truth.json";
    std::ifstream is(sidecar);
    if (!is) throw DataError("missing sidecar file: " + sidecar.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(sidecar.string() + ": " + e.what());
    }
    if (j.value("format", "") != "punch-case")
        throw DataError(sidecar.string() + ": not a punch-case sidecar");

    SyntheticCase c;
    try {
        c.case_id = j.at("case_id").get<std::string>();
        c.regime = j.at("regime").get<std::string>() == "atypical" ? Regime::Atypical
                                                                   : Regime::Typical;
        c.cfr_true = j.at("cfr_true").get<double>();
        c.noise_factor = j.at("noise_factor").get<double>();
        c.rest_spec = case_spec_from_json(j.at("rest_spec"));
        c.hyper_spec = case_spec_from_json(j.at("hyper_spec"));
        const auto& files = j.at("files");
        c.clean_rest = load_kymograph((dir / files.at("clean_rest").get<std::string>()).string());
        c.clean_hyper = load_kymograph((dir / files.at("clean_hyper").get<std::string>()).string());
        c.corrupted_rest =
            load_kymograph((dir / files.at("corrupt_rest").get<std::string>()).string());
        c.corrupted_hyper =
            load_kymograph((dir / files.at("corrupt_hyper").get<std::string>()).string());
    } catch (const nlohmann::json::exception& e) {
        throw DataError(sidecar.string() + ": " + e.what());
    }
    return c;
}

inline std::string case_id_for_index(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "case_%04d", index);
    return buf;
}

/// Generate n cases under a master seed. Regimes are stratified (every 4th
/// case atypical for the default 25%), noise factors assigned round-robin
/// from noise_grid. Deterministic: case i depends only on (seed, i).
inline std::vector<std::string> generate_dataset(int n, std::uint64_t seed,
                                                 const std::vector<double>& noise_grid,
                                                 const std::filesystem::path& out_dir,
                                                 const SamplerConfig& cfg, int n_cells,
                                                 const CorruptionConfig& corruption_base = {}) {
    if (n < 1) throw InvalidArgument("generate_dataset: n must be >= 1");
    if (noise_grid.empty()) throw InvalidArgument("generate_dataset: empty noise grid");
    cfg.validate();

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create dataset directory: " + ec.message());

    const int stride = std::max(1, static_cast<int>(std::lround(1.0 / std::max(1e-9, cfg.p_atypical))));
    std::ostringstream manifest;
    manifest << "case_id,regime,cfr_true,noise_factor\n";
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
        const std::string id = case_id_for_index(i);
        const std::uint64_t case_seed = derive_seed(seed, id);
        Rng rng(case_seed);
        const Regime regime = (cfg.p_atypical > 0.0 && i % stride == stride - 1)
                                  ? Regime::Atypical
                                  : Regime::Typical;
        SampledCase sampled = sample_case(rng, cfg, regime);
        sampled.rest_spec.seed = case_seed;
        sampled.hyper_spec.seed = derive_seed(case_seed, "hyper");
        const double eta = noise_grid[i % noise_grid.size()];
        const SyntheticCase c = realize_case(sampled, id, eta, cfg, n_cells, corruption_base);
        save_case(c, out_dir / id);
        manifest << id << ',' << to_string(c.regime) << ',' << format_g17(c.cfr_true) << ','
                 << format_g17(eta) << '\n';
        ids.push_back(id);
    }
    write_text_file(out_dir / "manifest.csv", manifest.str());
    return ids;
}

}  // namespace punch

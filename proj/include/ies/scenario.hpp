#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ies/rng.hpp"

namespace ies {

/// Exogenous day profile: per-period loads, wind output, and ambient
/// temperature. All arrays share the same length.
struct Scenario {
    std::vector<double> p_load;  ///< electric load [kW]
    std::vector<double> h_load;  ///< heat load [kW]
    std::vector<double> w_load;  ///< freshwater load [m3/h]
    std::vector<double> p_wt;    ///< wind turbine output [kW]
    std::vector<double> t_env;   ///< ambient temperature [degC]

    std::size_t periods() const { return p_load.size(); }
    void validate() const;
};

/// Streams that can carry noise or an emergency perturbation.
enum class Stream { p_load, h_load, w_load, p_wt };

constexpr std::array<Stream, 4> kNoisedStreams = {Stream::p_load, Stream::h_load,
                                                  Stream::w_load, Stream::p_wt};

const char* stream_name(Stream s);
Stream stream_from_name(const std::string& name);

/// Synthetic island day: electric load peaking in the evening, heat load
/// high at night and low at midday, flat water demand, wind low in the
/// morning and high at night.
Scenario default_base_day();

/// Multiplicative-noise scene generation around a base day.
struct SceneGenConfig {
    Scenario base;
    /// Relative noise sigma per stream, ordered as kNoisedStreams.
    std::array<double, 4> rel_noise_sigma = {0.05, 0.05, 0.05, 0.15};
    std::uint64_t seed = 0;
    /// AR(1) coefficient for temporal correlation of the noise; 0 disables.
    double ar1 = 0.0;
    void validate() const;
};

/// Draws one stochastic scene: stream_t = max(0, base_t * (1 + eps_t)) with
/// Gaussian eps, optionally AR(1) correlated along t. Ambient temperature is
/// copied unchanged. Deterministic given the generator state.
Scenario generate_scene(const SceneGenConfig& cfg, Rng& rng);
Scenario generate_scene(const SceneGenConfig& cfg);

/// One-period perturbation of a single stream.
struct Emergency {
    std::size_t period = 0;  ///< 0-based period index
    Stream stream = Stream::p_load;
    double delta = 0.0;       ///< signed change in stream units
    bool set_to_zero = false; ///< overrides delta when set
};

struct EmergencyResult {
    Scenario scenario;
    bool clamped = false;  ///< delta would have pushed the value below 0
};

/// Returns a copy with exactly one value changed (clamped at 0 if needed).
EmergencyResult apply_emergency(const Scenario& s, const Emergency& e);

/// Parses "STREAM@PERIOD+DELTA", "STREAM@PERIOD-DELTA" or "STREAM@PERIOD=zero"
/// with a 1-based PERIOD, e.g. "p_load@1+1000" or "p_wt@20=zero".
Emergency parse_emergency_spec(const std::string& spec);

/// CSV round-trip. Header: period,p_load_kw,h_load_kw,w_load_m3h,p_wt_kw,t_env_c
/// with 1-based period numbers. expected_periods = 0 accepts any length.
Scenario load_scenario(const std::string& path, std::size_t expected_periods = 0);
void save_scenario(const Scenario& s, const std::string& path);

}  // namespace ies

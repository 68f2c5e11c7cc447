#include "ies/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "ies/errors.hpp"
#include "ies/util.hpp"

namespace ies {

namespace {

constexpr const char* kCsvHeader = "period,p_load_kw,h_load_kw,w_load_m3h,p_wt_kw,t_env_c";

const std::vector<double>& stream_of(const Scenario& s, Stream which) {
    switch (which) {
        case Stream::p_load: return s.p_load;
        case Stream::h_load: return s.h_load;
        case Stream::w_load: return s.w_load;
        case Stream::p_wt: return s.p_wt;
    }
    throw std::logic_error("unknown stream");
}

std::vector<double>& stream_of(Scenario& s, Stream which) {
    return const_cast<std::vector<double>&>(stream_of(static_cast<const Scenario&>(s), which));
}

void check_nonneg_finite(const std::vector<double>& v, const char* name) {
    for (std::size_t t = 0; t < v.size(); ++t) {
        if (!std::isfinite(v[t])) {
            throw ConfigError(std::string("scenario ") + name + " is not finite at period " +
                              std::to_string(t + 1));
        }
        if (v[t] < 0.0) {
            throw ConfigError(std::string("scenario ") + name + " is negative at period " +
                              std::to_string(t + 1));
        }
    }
}

}  // namespace

void Scenario::validate() const {
    const std::size_t n = p_load.size();
    if (n == 0) throw ConfigError("scenario has no periods");
    if (h_load.size() != n || w_load.size() != n || p_wt.size() != n || t_env.size() != n) {
        throw ConfigError("scenario stream lengths differ");
    }
    check_nonneg_finite(p_load, "p_load");
    check_nonneg_finite(h_load, "h_load");
    check_nonneg_finite(w_load, "w_load");
    check_nonneg_finite(p_wt, "p_wt");
    for (std::size_t t = 0; t < n; ++t) {
        if (!std::isfinite(t_env[t])) {
            throw ConfigError("scenario t_env is not finite at period " + std::to_string(t + 1));
        }
    }
}

const char* stream_name(Stream s) {
    switch (s) {
        case Stream::p_load: return "p_load";
        case Stream::h_load: return "h_load";
        case Stream::w_load: return "w_load";
        case Stream::p_wt: return "p_wt";
    }
    throw std::logic_error("unknown stream");
}

Stream stream_from_name(const std::string& name) {
    for (Stream s : kNoisedStreams) {
        if (name == stream_name(s)) return s;
    }
    throw ConfigError("unknown stream '" + name + "' (expected p_load, h_load, w_load or p_wt)");
}

Scenario default_base_day() {
    constexpr std::size_t n = 24;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Scenario s;
    s.p_load.resize(n);
    s.h_load.resize(n);
    s.w_load.resize(n);
    s.p_wt.resize(n);
    s.t_env.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double p = static_cast<double>(t + 1);
        s.p_load[t] = 8000.0 + 4400.0 * std::cos(two_pi * (p - 19.0) / 24.0);
        s.h_load[t] = 4500.0 - 2500.0 * std::cos(two_pi * (p - 14.0) / 24.0);
        s.w_load[t] = 180.0;
        s.p_wt[t] = 1250.0 - 1150.0 * std::cos(two_pi * (p - 9.0) / 24.0);
        s.t_env[t] = 15.0 + 8.0 * std::cos(two_pi * (p - 15.0) / 24.0);
    }
    return s;
}

void SceneGenConfig::validate() const {
    base.validate();
    for (double sig : rel_noise_sigma) {
        if (!(sig >= 0.0)) throw ConfigError("scenario.noise_sigma must be >= 0");
    }
    if (!(ar1 > -1.0 && ar1 < 1.0)) throw ConfigError("scenario.ar1 must be in (-1, 1)");
}

Scenario generate_scene(const SceneGenConfig& cfg, Rng& rng) {
    Scenario out = cfg.base;
    const std::size_t n = cfg.base.periods();
    for (std::size_t si = 0; si < kNoisedStreams.size(); ++si) {
        const std::vector<double>& base = stream_of(cfg.base, kNoisedStreams[si]);
        std::vector<double>& dst = stream_of(out, kNoisedStreams[si]);
        const double sigma = cfg.rel_noise_sigma[si];
        const double rho = cfg.ar1;
        double eps = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double xi = rng.gaussian();
            if (t == 0 || rho == 0.0) {
                eps = sigma * xi;
            } else {
                eps = rho * eps + sigma * std::sqrt(1.0 - rho * rho) * xi;
            }
            dst[t] = std::max(0.0, base[t] * (1.0 + eps));
        }
    }
    return out;
}

Scenario generate_scene(const SceneGenConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    return generate_scene(cfg, rng);
}

EmergencyResult apply_emergency(const Scenario& s, const Emergency& e) {
    if (e.period >= s.periods()) {
        throw ConfigError("emergency period " + std::to_string(e.period + 1) +
                          " out of range (scenario has " + std::to_string(s.periods()) +
                          " periods)");
    }
    EmergencyResult res{s, false};
    double& v = stream_of(res.scenario, e.stream)[e.period];
    if (e.set_to_zero) {
        v = 0.0;
    } else {
        const double moved = v + e.delta;
        if (moved < 0.0) {
            v = 0.0;
            res.clamped = true;
        } else {
            v = moved;
        }
    }
    return res;
}

Emergency parse_emergency_spec(const std::string& spec) {
    const std::size_t at = spec.find('@');
    if (at == std::string::npos) {
        throw ConfigError("emergency spec '" + spec +
                          "' must look like STREAM@PERIOD+DELTA or STREAM@PERIOD=zero");
    }
    Emergency e;
    e.stream = stream_from_name(std::string(trim(spec.substr(0, at))));
    const std::size_t op = spec.find_first_of("+-=", at + 1);
    if (op == std::string::npos) {
        throw ConfigError("emergency spec '" + spec + "' is missing +DELTA, -DELTA or =zero");
    }
    const long period = parse_long(spec.substr(at + 1, op - at - 1));
    if (period < 1) throw ConfigError("emergency period must be >= 1");
    e.period = static_cast<std::size_t>(period - 1);
    const std::string rest{trim(spec.substr(op + 1))};
    if (spec[op] == '=') {
        if (rest != "zero") {
            throw ConfigError("emergency spec '" + spec + "': only '=zero' is supported");
        }
        e.set_to_zero = true;
        return e;
    }
    const double delta = parse_double(rest);
    if (delta < 0.0) throw ConfigError("emergency delta must not carry its own sign");
    e.delta = spec[op] == '-' ? -delta : delta;
    return e;
}

Scenario load_scenario(const std::string& path, std::size_t expected_periods) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
    if (trim(line) != kCsvHeader) {
        throw ConfigError(path + ": bad header, expected '" + std::string(kCsvHeader) + "'");
    }

    static constexpr const char* kCols[] = {"period", "p_load_kw", "h_load_kw",
                                            "w_load_m3h", "p_wt_kw", "t_env_c"};
    Scenario s;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split(trim(line), ',');
        if (cells.size() != 6) {
            throw ConfigError(path + ": row " + std::to_string(row) + " has " +
                              std::to_string(cells.size()) + " columns, expected 6");
        }
        auto cell = [&](std::size_t c) -> double {
            try {
                return parse_double(cells[c]);
            } catch (const ConfigError& err) {
                throw ConfigError(path + ": row " + std::to_string(row) + ", column '" +
                                  kCols[c] + "': " + err.what());
            }
        };
        long period = 0;
        try {
            period = parse_long(cells[0]);
        } catch (const ConfigError& err) {
            throw ConfigError(path + ": row " + std::to_string(row) + ", column 'period': " +
                              err.what());
        }
        if (period != static_cast<long>(s.periods()) + 1) {
            throw ConfigError(path + ": row " + std::to_string(row) + ": period " +
                              std::to_string(period) + " out of order, expected " +
                              std::to_string(s.periods() + 1));
        }
        s.p_load.push_back(cell(1));
        s.h_load.push_back(cell(2));
        s.w_load.push_back(cell(3));
        s.p_wt.push_back(cell(4));
        s.t_env.push_back(cell(5));
    }
    if (expected_periods != 0 && s.periods() != expected_periods) {
        throw ConfigError(path + ": has " + std::to_string(s.periods()) +
                          " periods, expected " + std::to_string(expected_periods));
    }
    try {
        s.validate();
    } catch (const ConfigError& err) {
        throw ConfigError(path + ": " + err.what());
    }
    return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    s.validate();
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write scenario file '" + path + "'");
    out << kCsvHeader << "\n";
    for (std::size_t t = 0; t < s.periods(); ++t) {
        out << (t + 1) << ',' << format_double(s.p_load[t]) << ',' << format_double(s.h_load[t])
            << ',' << format_double(s.w_load[t]) << ',' << format_double(s.p_wt[t]) << ','
            << format_double(s.t_env[t]) << "\n";
    }
    if (!out) throw ConfigError("failed writing scenario file '" + path + "'");
}

}  // namespace ies

#pragma once

#include "bellsim/bellsim.h"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bellsim::cli {

enum class Mode { Mc, Oracle, Sweep, Reanalyze };

struct WindowSpec {
    double lo = 1.0;
    double hi = 1000.0;
    std::size_t count = 20;
    bool logarithmic = true;
};

enum class EmissionKind { Regular, Poisson };

struct CliOptions {
    Mode mode = Mode::Mc;
    bellsim_model_params params{4.0, 1000.0, 10.0};
    std::optional<WindowSpec> windows;
    std::uint64_t pairs = 1'000'000;
    std::uint64_t seed = 42;
    std::vector<double> angles1; ///< empty: {a, a'} of the quadruple
    std::vector<double> angles2; ///< empty: {b, b'} of the quadruple
    bellsim_quadruple quadruple{0.0, 0.78539816339744831, 0.39269908169872414,
                                1.1780972450961724};
    EmissionKind emission = EmissionKind::Regular;
    double emission_value = 0.0; ///< 0 with Regular: 10 t0
    std::optional<bellsim_match_policy> matcher;
    std::string tags_out;
    std::string tags_in;
    std::string out_dir;
    unsigned workers = 1;
    bool independent = false;
    std::size_t oracle_points = 64;
    double tolerance = 1e-8;

    /// Station settings after defaulting to the quadruple.
    std::vector<double> settings(int station) const;
    /// Matcher after defaulting: stream for reanalysis, paired otherwise.
    bellsim_match_policy policy() const;
};

enum class ParseStatus {
    Ok,
    Help,
    UnknownFlag,
    InvalidValue,
    MissingField,
};

struct ParseResult {
    ParseStatus status = ParseStatus::Ok;
    CliOptions options;
    std::string message; ///< diagnostic, or help text for Help
};

/// Parses command-line flags (and an optional --config INI/TOML file).
/// `default_out_dir` comes from the environment; null or empty falls back to
/// "bellsim_out".
ParseResult parse_config(int argc, const char* const* argv,
                         const char* default_out_dir = nullptr);

/// "22.5deg", "0.39rad" or a bare number in radians.
double parse_angle(const std::string& text);
std::vector<double> parse_angle_list(const std::string& text);

/// "<min>:<max>:log<N>" or "<min>:<max>:lin<N>".
WindowSpec parse_window_spec(const std::string& text);

const char* mode_name(Mode mode);

} // namespace bellsim::cli

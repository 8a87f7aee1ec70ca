#include "cli_options.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellsim::cli {

namespace {

double parse_number(const std::string& text, const std::string& what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid " + what + " '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v))
        throw std::invalid_argument("invalid " + what + " '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

double parse_angle(const std::string& text)
{
    if (ends_with(text, "deg"))
        return parse_number(text.substr(0, text.size() - 3), "angle") * std::numbers::pi / 180.0;
    if (ends_with(text, "rad"))
        return parse_number(text.substr(0, text.size() - 3), "angle");
    return parse_number(text, "angle");
}

std::vector<double> parse_angle_list(const std::string& text)
{
    std::vector<double> out;
    for (const auto& part : split(text, ','))
        out.push_back(parse_angle(part));
    return out;
}

WindowSpec parse_window_spec(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 3)
        throw std::invalid_argument("window grid must look like <min>:<max>:log<N> or lin<N>");
    WindowSpec spec;
    spec.lo = parse_number(parts[0], "window minimum");
    spec.hi = parse_number(parts[1], "window maximum");
    const auto& kind = parts[2];
    if (kind.rfind("log", 0) == 0)
        spec.logarithmic = true;
    else if (kind.rfind("lin", 0) == 0)
        spec.logarithmic = false;
    else
        throw std::invalid_argument("window grid spacing must be log<N> or lin<N>");
    const double n = parse_number(kind.substr(3), "window count");
    if (n < 1 || n != std::floor(n))
        throw std::invalid_argument("window count must be a positive integer");
    spec.count = static_cast<std::size_t>(n);
    if (spec.lo < 0 || spec.hi < spec.lo)
        throw std::invalid_argument("window grid needs 0 <= min <= max");
    if (spec.logarithmic && spec.lo <= 0)
        throw std::invalid_argument("logarithmic window grid needs min > 0");
    if (spec.count > 1 && spec.hi == spec.lo)
        throw std::invalid_argument("window grid with several points needs min < max");
    return spec;
}

const char* mode_name(Mode mode)
{
    switch (mode) {
    case Mode::Mc: return "mc";
    case Mode::Oracle: return "oracle";
    case Mode::Sweep: return "sweep";
    case Mode::Reanalyze: return "reanalyze";
    }
    return "?";
}

std::vector<double> CliOptions::settings(int station) const
{
    const auto& explicit_list = station == 1 ? angles1 : angles2;
    if (!explicit_list.empty())
        return explicit_list;
    return station == 1 ? std::vector<double>{quadruple.a, quadruple.a_prime}
                        : std::vector<double>{quadruple.b, quadruple.b_prime};
}

bellsim_match_policy CliOptions::policy() const
{
    return matcher.value_or(mode == Mode::Reanalyze ? BELLSIM_MATCH_STREAM : BELLSIM_MATCH_PAIRED);
}

namespace {

bool contains_angle(const std::vector<double>& list, double angle)
{
    for (double a : list) {
        double diff = std::fmod(std::abs(a - angle), std::numbers::pi);
        if (std::min(diff, std::numbers::pi - diff) < 1e-9)
            return true;
    }
    return false;
}

} // namespace

ParseResult parse_config(int argc, const char* const* argv, const char* default_out_dir)
{
    ParseResult result;
    CliOptions& o = result.options;
    o.out_dir = (default_out_dir && *default_out_dir) ? default_out_dir : "bellsim_out";

    CLI::App app{"Two-station Bell test simulator with polarization-dependent detection delays",
                 "bellsim"};
    app.set_config("--config", "", "INI/TOML file with option values");

    std::string mode = "mc";
    std::string windows, angles1, angles2, quadruple, emission, matcher;
    app.add_option("--mode", mode, "mc | oracle | sweep | reanalyze")
        ->check(CLI::IsMember({"mc", "oracle", "sweep", "reanalyze"}));
    app.add_option("--d", o.params.d, "delay exponent d (>= 0)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--t0", o.params.t0, "maximal delay T0 in ns (> 0)")
        ->check(CLI::PositiveNumber);
    app.add_option("--window", o.params.window, "coincidence window W in ns (>= 0)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--windows", windows, "window grid <min>:<max>:log<N>|lin<N>");
    app.add_option("--pairs", o.pairs, "number of emitted pairs")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--angles1", angles1, "station 1 settings, comma separated (deg/rad suffix)");
    app.add_option("--angles2", angles2, "station 2 settings, comma separated (deg/rad suffix)");
    app.add_option("--quadruple", quadruple, "CHSH angles a,a',b,b'");
    app.add_option("--emission", emission, "regular:<dt ns> | poisson:<rate per ns>");
    app.add_option("--matcher", matcher, "paired | stream")
        ->check(CLI::IsMember({"paired", "stream"}));
    app.add_option("--tags-out", o.tags_out, "write time-tag files with this prefix");
    app.add_option("--tags-in", o.tags_in, "read time-tag files with this prefix");
    app.add_option("--out", o.out_dir, "output directory");
    app.add_option("--workers", o.workers, "worker threads (0 = all cores)");
    app.add_flag("--independent", o.independent, "fresh event log per sweep window");
    app.add_option("--points", o.oracle_points, "points of the oracle curve")
        ->check(CLI::PositiveNumber);
    app.add_option("--tolerance", o.tolerance, "oracle quadrature tolerance")
        ->check(CLI::PositiveNumber);

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i)
        args.emplace_back(argv[i]);
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        result.status = ParseStatus::Help;
        result.message = app.help();
        return result;
    } catch (const CLI::ExtrasError& e) {
        result.status = ParseStatus::UnknownFlag;
        result.message = std::string("unknown option: ") + e.what();
        return result;
    } catch (const CLI::RequiredError& e) {
        result.status = ParseStatus::MissingField;
        result.message = e.what();
        return result;
    } catch (const CLI::ParseError& e) {
        result.status = ParseStatus::InvalidValue;
        result.message = e.what();
        return result;
    }

    try {
        o.mode = mode == "oracle" ? Mode::Oracle
                 : mode == "sweep" ? Mode::Sweep
                 : mode == "reanalyze" ? Mode::Reanalyze
                                       : Mode::Mc;
        if (!windows.empty())
            o.windows = parse_window_spec(windows);
        if (!angles1.empty())
            o.angles1 = parse_angle_list(angles1);
        if (!angles2.empty())
            o.angles2 = parse_angle_list(angles2);
        if (!quadruple.empty()) {
            const auto q = parse_angle_list(quadruple);
            if (q.size() != 4)
                throw std::invalid_argument("--quadruple needs exactly four angles");
            o.quadruple = {q[0], q[1], q[2], q[3]};
        }
        if (!emission.empty()) {
            const auto colon = emission.find(':');
            const std::string kind = emission.substr(0, colon);
            if (colon == std::string::npos || (kind != "regular" && kind != "poisson"))
                throw std::invalid_argument("--emission must be regular:<dt> or poisson:<rate>");
            o.emission = kind == "regular" ? EmissionKind::Regular : EmissionKind::Poisson;
            o.emission_value = std::stod(emission.substr(colon + 1));
            if (!(o.emission_value > 0.0) || !std::isfinite(o.emission_value))
                throw std::invalid_argument("--emission value must be > 0");
        }
        if (!matcher.empty())
            o.matcher = matcher == "stream" ? BELLSIM_MATCH_STREAM : BELLSIM_MATCH_PAIRED;

        for (double a : {o.quadruple.a, o.quadruple.a_prime})
            if (!contains_angle(o.settings(1), a))
                throw std::invalid_argument("CHSH angle a/a' missing from station 1 settings");
        for (double b : {o.quadruple.b, o.quadruple.b_prime})
            if (!contains_angle(o.settings(2), b))
                throw std::invalid_argument("CHSH angle b/b' missing from station 2 settings");
    } catch (const std::exception& e) {
        result.status = ParseStatus::InvalidValue;
        result.message = e.what();
        return result;
    }

    if (o.mode == Mode::Reanalyze && o.tags_in.empty()) {
        result.status = ParseStatus::MissingField;
        result.message = "--mode reanalyze requires --tags-in <prefix>";
        return result;
    }
    return result;
}

} // namespace bellsim::cli

#include "analysis.hpp"

#include "error.hpp"

#include <cmath>

namespace bellsim {

double CorrelationCell::correlation() const
{
    const auto n = total();
    if (n == 0)
        throw Error(ErrorKind::EmptyCell, "setting combination has no coincidences");
    const double agree = static_cast<double>(pp + mm);
    const double disagree = static_cast<double>(pm + mp);
    return (agree - disagree) / static_cast<double>(n);
}

double CorrelationCell::standard_error() const
{
    const double e = correlation();
    return std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(total()));
}

CorrelationTable::CorrelationTable(std::vector<Setting> settings1, std::vector<Setting> settings2)
    : settings1_(std::move(settings1)), settings2_(std::move(settings2)),
      cells_(settings1_.size() * settings2_.size())
{
    if (settings1_.empty() || settings2_.empty())
        throw InvalidArgument("correlation table needs settings at both stations");
}

CorrelationCell& CorrelationTable::cell(std::size_t i, std::size_t j)
{
    if (i >= rows() || j >= cols())
        throw InvalidArgument("setting index out of range");
    return cells_[i * cols() + j];
}

const CorrelationCell& CorrelationTable::cell(std::size_t i, std::size_t j) const
{
    return const_cast<CorrelationTable*>(this)->cell(i, j);
}

namespace {

std::size_t find_setting(const std::vector<Setting>& settings, Setting s, int station)
{
    for (std::size_t i = 0; i < settings.size(); ++i) {
        double diff = normalize_half_turn(settings[i].angle - s.angle);
        if (std::min(diff, kPi - diff) < 1e-9)
            return i;
    }
    throw Error(ErrorKind::MissingCombination,
                "station " + std::to_string(station) + " has no setting at angle " +
                    std::to_string(s.angle));
}

} // namespace

std::size_t CorrelationTable::index1(Setting s) const { return find_setting(settings1_, s, 1); }
std::size_t CorrelationTable::index2(Setting s) const { return find_setting(settings2_, s, 2); }

Estimate CorrelationTable::correlation(Setting a, Setting b) const
{
    const auto& c = cell(index1(a), index2(b));
    return {c.correlation(), c.standard_error()};
}

std::vector<std::array<std::size_t, 2>> CorrelationTable::empty_cells() const
{
    std::vector<std::array<std::size_t, 2>> out;
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j)
            if (cell(i, j).empty())
                out.push_back({i, j});
    return out;
}

std::uint64_t CorrelationTable::total() const
{
    std::uint64_t n = 0;
    for (const auto& c : cells_)
        n += c.total();
    return n;
}

CorrelationTable tabulate(std::span<const CoincidencePair> coincidences,
                          std::span<const Setting> settings1,
                          std::span<const Setting> settings2)
{
    if (coincidences.empty())
        throw Error(ErrorKind::NoCoincidences, "no coincidences to tabulate");
    CorrelationTable table({settings1.begin(), settings1.end()},
                           {settings2.begin(), settings2.end()});
    for (const auto& c : coincidences) {
        auto& cell = table.cell(c.first.setting_index, c.second.setting_index);
        const bool plus1 = c.first.outcome > 0;
        const bool plus2 = c.second.outcome > 0;
        if (plus1)
            ++(plus2 ? cell.pp : cell.pm);
        else
            ++(plus2 ? cell.mp : cell.mm);
    }
    return table;
}

CorrelationTable tabulate(std::span<const CoincidencePair> coincidences,
                          const ExperimentConfig& config)
{
    return tabulate(coincidences, config.settings1, config.settings2);
}

ChshResult chsh(const std::array<Estimate, 4>& e)
{
    ChshResult r;
    r.s = std::abs(e[0].value - e[1].value + e[2].value + e[3].value);
    double var = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        r.correlations[k] = e[k].value;
        var += e[k].standard_error * e[k].standard_error;
    }
    r.standard_error = std::sqrt(var);
    return r;
}

ChshResult chsh(const CorrelationTable& table, const ChshQuadruple& q)
{
    return chsh(std::array<Estimate, 4>{
        table.correlation(q.a, q.b), table.correlation(q.a, q.b_prime),
        table.correlation(q.a_prime, q.b), table.correlation(q.a_prime, q.b_prime)});
}

std::vector<double> SweepResult::crossings(double level) const
{
    std::vector<double> out;
    for (std::size_t k = 1; k < points.size(); ++k) {
        const auto& p = points[k - 1];
        const auto& q = points[k];
        const double fp = p.s - level;
        const double fq = q.s - level;
        if (fp == 0.0)
            out.push_back(p.window);
        if (fp * fq >= 0.0)
            continue;
        const double frac = fp / (fp - fq);
        if (p.window > 0.0)
            out.push_back(std::exp(std::log(p.window) +
                                   frac * (std::log(q.window) - std::log(p.window))));
        else
            out.push_back(p.window + frac * (q.window - p.window));
    }
    if (!points.empty() && points.back().s == level)
        out.push_back(points.back().window);
    return out;
}

std::vector<double> window_grid(double lo, double hi, std::size_t count, bool logarithmic)
{
    if (count == 0)
        throw InvalidArgument("window grid needs at least one point");
    if (!(lo >= 0.0) || !(hi >= lo) || !std::isfinite(hi))
        throw InvalidArgument("window grid needs 0 <= min <= max");
    if (logarithmic && lo <= 0.0)
        throw InvalidArgument("logarithmic window grid needs min > 0");
    if (count == 1)
        return {lo};
    if (hi == lo)
        throw InvalidArgument("window grid with several points needs min < max");
    std::vector<double> w(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(count - 1);
        w[k] = logarithmic ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo);
    }
    w.front() = lo;
    w.back() = hi;
    return w;
}

namespace {

void check_windows(std::span<const double> windows)
{
    if (windows.empty())
        throw InvalidArgument("window sweep needs at least one window");
    for (std::size_t k = 0; k < windows.size(); ++k) {
        if (!(windows[k] >= 0.0))
            throw InvalidArgument("windows must be >= 0");
        if (k > 0 && !(windows[k] > windows[k - 1]))
            throw InvalidArgument("windows must be strictly increasing");
    }
}

SweepPoint sweep_point(const EventLog& log, double window, const SweepOptions& options)
{
    const auto coincidences = stream_match(log, window, options.policy);
    SweepPoint p;
    p.window = window;
    p.coincidence_rate =
        static_cast<double>(coincidences.size()) / static_cast<double>(log.n_pairs);
    const auto table = tabulate(coincidences, log.settings1, log.settings2);
    const auto r = chsh(table, options.quadruple);
    p.s = r.s;
    p.standard_error = r.standard_error;
    return p;
}

} // namespace

SweepResult window_sweep(const EventLog& log, std::span<const double> windows,
                         const SweepOptions& options)
{
    check_windows(windows);
    SweepResult result;
    for (double w : windows)
        result.points.push_back(sweep_point(log, w, options));
    return result;
}

SweepResult window_sweep(const ExperimentConfig& config, std::span<const double> windows,
                         const SweepOptions& options)
{
    check_windows(windows);
    if (!options.independent_logs)
        return window_sweep(run_experiment(config), windows, options);
    SweepResult result;
    for (std::size_t k = 0; k < windows.size(); ++k) {
        ExperimentConfig c = config;
        c.seed = mix64(config.seed ^ mix64(k + 1));
        c.params.window = windows[k];
        result.points.push_back(sweep_point(run_experiment(c), windows[k], options));
    }
    return result;
}

} // namespace bellsim

#include "bellsim/bellsim.h"

#include "analysis.hpp"
#include "coincidence.hpp"
#include "error.hpp"
#include "event_sim.hpp"
#include "oracle.hpp"
#include "tags_io.hpp"

#include <new>
#include <string>

#ifndef BELLSIM_VERSION
#define BELLSIM_VERSION "0.0.0"
#endif

struct bellsim_config {
    bellsim::ExperimentConfig config;
};
struct bellsim_log {
    bellsim::EventLog log;
};
struct bellsim_coincidences {
    std::vector<bellsim::CoincidencePair> pairs;
};
struct bellsim_table {
    bellsim::CorrelationTable table;
};
struct bellsim_sweep {
    bellsim::SweepResult sweep;
};

namespace {

thread_local std::string g_last_error;

bellsim_status fail(bellsim_status status, std::string message)
{
    g_last_error = std::move(message);
    return status;
}

bellsim_status to_status(bellsim::ErrorKind kind)
{
    using K = bellsim::ErrorKind;
    switch (kind) {
    case K::InvalidArgument: return BELLSIM_ERR_INVALID_ARGUMENT;
    case K::Parse: return BELLSIM_ERR_PARSE;
    case K::Version: return BELLSIM_ERR_VERSION;
    case K::Io: return BELLSIM_ERR_IO;
    case K::Mismatch: return BELLSIM_ERR_MISMATCH;
    case K::EmptyCell: return BELLSIM_ERR_EMPTY_CELL;
    case K::MissingCombination: return BELLSIM_ERR_MISSING_COMBINATION;
    case K::Quadrature: return BELLSIM_ERR_QUADRATURE;
    case K::NoCoincidences: return BELLSIM_ERR_NO_COINCIDENCES;
    }
    return BELLSIM_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
bellsim_status guard(F&& body) noexcept
{
    try {
        body();
        return BELLSIM_OK;
    } catch (const bellsim::Error& e) {
        return fail(to_status(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(BELLSIM_ERR_INTERNAL, "out of memory");
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(BELLSIM_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(BELLSIM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(BELLSIM_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* what)
{
    if (!p)
        throw bellsim::InvalidArgument(std::string(what) + " must not be null");
}

bellsim::ModelParams to_params(const bellsim_model_params* p)
{
    require(p, "params");
    return {p->d, p->t0, p->window};
}

bellsim::QuadratureSpec to_quad(const bellsim_quadrature* q)
{
    bellsim::QuadratureSpec spec;
    if (!q)
        return spec;
    if (q->method != BELLSIM_QUAD_ADAPTIVE && q->method != BELLSIM_QUAD_FIXED_GRID)
        throw bellsim::InvalidArgument("unknown quadrature method");
    spec.method = q->method == BELLSIM_QUAD_ADAPTIVE ? bellsim::QuadratureSpec::Method::Adaptive
                                                     : bellsim::QuadratureSpec::Method::FixedGrid;
    spec.tolerance = q->tolerance;
    spec.max_subdivisions = q->max_subdivisions;
    spec.grid_panels = q->grid_panels;
    return spec;
}

bellsim::ChshQuadruple to_quadruple(const bellsim_quadruple* q)
{
    if (!q)
        return {};
    return {{q->a}, {q->a_prime}, {q->b}, {q->b_prime}};
}

bellsim::MatchPolicy to_policy(bellsim_match_policy p)
{
    if (p == BELLSIM_MATCH_PAIRED)
        return bellsim::MatchPolicy::Paired;
    if (p == BELLSIM_MATCH_STREAM)
        return bellsim::MatchPolicy::StreamGreedy;
    throw bellsim::InvalidArgument("unknown match policy");
}

bellsim_chsh_result to_c(const bellsim::ChshResult& r)
{
    bellsim_chsh_result out{r.s, r.standard_error, {}};
    for (int k = 0; k < 4; ++k)
        out.correlations[k] = r.correlations[k];
    return out;
}

bellsim_event to_c(const bellsim::DetectionEvent& e)
{
    return {e.time_tag, e.pair_id, e.setting_index, e.outcome, e.station};
}

void check_station(int station)
{
    if (station != 1 && station != 2)
        throw bellsim::InvalidArgument("station must be 1 or 2");
}

std::vector<bellsim::Setting> to_settings(const double* angles, size_t count)
{
    if (count > 0)
        require(angles, "angles");
    std::vector<bellsim::Setting> v;
    for (size_t i = 0; i < count; ++i)
        v.push_back({angles[i]});
    return v;
}

} // namespace

extern "C" {

const char* bellsim_version(void) { return BELLSIM_VERSION; }

const char* bellsim_last_error(void) { return g_last_error.c_str(); }

const char* bellsim_status_name(bellsim_status status)
{
    switch (status) {
    case BELLSIM_OK: return "ok";
    case BELLSIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BELLSIM_ERR_PARSE: return "parse error";
    case BELLSIM_ERR_VERSION: return "version mismatch";
    case BELLSIM_ERR_IO: return "i/o error";
    case BELLSIM_ERR_MISMATCH: return "pair id mismatch";
    case BELLSIM_ERR_EMPTY_CELL: return "empty setting combination";
    case BELLSIM_ERR_MISSING_COMBINATION: return "missing setting combination";
    case BELLSIM_ERR_QUADRATURE: return "quadrature did not converge";
    case BELLSIM_ERR_NO_COINCIDENCES: return "no coincidences";
    case BELLSIM_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

bellsim_model_params bellsim_default_params(void)
{
    const bellsim::ModelParams p;
    return {p.d, p.t0, p.window};
}

bellsim_quadrature bellsim_default_quadrature(void)
{
    const bellsim::QuadratureSpec q;
    return {BELLSIM_QUAD_ADAPTIVE, q.tolerance, q.max_subdivisions, q.grid_panels};
}

bellsim_quadruple bellsim_default_quadruple(void)
{
    const bellsim::ChshQuadruple q;
    return {q.a.angle, q.a_prime.angle, q.b.angle, q.b_prime.angle};
}

bellsim_status bellsim_outcome_prob(int x, double zeta, double* out)
{
    return guard([&] {
        require(out, "out");
        *out = bellsim::outcome_prob(x, zeta);
    });
}

bellsim_status bellsim_delay_timescale(double zeta, const bellsim_model_params* params,
                                       double* out)
{
    return guard([&] {
        require(out, "out");
        const auto p = to_params(params);
        p.validate();
        *out = bellsim::delay_timescale(zeta, p);
    });
}

bellsim_status bellsim_config_create(bellsim_config** out)
{
    return guard([&] {
        require(out, "out");
        *out = new bellsim_config{};
    });
}

void bellsim_config_destroy(bellsim_config* config) { delete config; }

bellsim_status bellsim_config_set_params(bellsim_config* config,
                                         const bellsim_model_params* params)
{
    return guard([&] {
        require(config, "config");
        const auto p = to_params(params);
        p.validate();
        config->config.params = p;
    });
}

bellsim_status bellsim_config_get_params(const bellsim_config* config, bellsim_model_params* out)
{
    return guard([&] {
        require(config, "config");
        require(out, "out");
        const auto& p = config->config.params;
        *out = {p.d, p.t0, p.window};
    });
}

bellsim_status bellsim_config_set_settings(bellsim_config* config, int station,
                                           const double* angles, size_t count)
{
    return guard([&] {
        require(config, "config");
        check_station(station);
        if (count == 0)
            throw bellsim::InvalidArgument("setting list must not be empty");
        auto settings = to_settings(angles, count);
        (station == 1 ? config->config.settings1 : config->config.settings2) = std::move(settings);
    });
}

bellsim_status bellsim_config_set_schedule(bellsim_config* config, int station,
                                           const uint32_t* indices, size_t count)
{
    return guard([&] {
        require(config, "config");
        check_station(station);
        if (count > 0)
            require(indices, "indices");
        (station == 1 ? config->config.schedule1 : config->config.schedule2)
            .assign(indices, indices + count);
    });
}

bellsim_status bellsim_config_set_pairs(bellsim_config* config, uint64_t n_pairs)
{
    return guard([&] {
        require(config, "config");
        if (n_pairs < 1)
            throw bellsim::InvalidArgument("n_pairs must be at least 1");
        config->config.n_pairs = n_pairs;
    });
}

bellsim_status bellsim_config_set_seed(bellsim_config* config, uint64_t seed)
{
    return guard([&] {
        require(config, "config");
        config->config.seed = seed;
    });
}

bellsim_status bellsim_config_set_emission_regular(bellsim_config* config, double interval)
{
    return guard([&] {
        require(config, "config");
        if (interval <= 0.0)
            config->config.emission.reset();
        else
            config->config.emission = bellsim::EmissionProcess::regular(interval);
    });
}

bellsim_status bellsim_config_set_emission_poisson(bellsim_config* config, double rate)
{
    return guard([&] {
        require(config, "config");
        if (!(rate > 0.0))
            throw bellsim::InvalidArgument("emission rate must be > 0");
        config->config.emission = bellsim::EmissionProcess::poisson(rate);
    });
}

bellsim_status bellsim_config_set_workers(bellsim_config* config, unsigned workers)
{
    return guard([&] {
        require(config, "config");
        config->config.workers = workers;
    });
}

bellsim_status bellsim_config_validate(const bellsim_config* config)
{
    return guard([&] {
        require(config, "config");
        config->config.validate();
    });
}

bellsim_status bellsim_run_experiment(const bellsim_config* config, bellsim_log** out)
{
    return guard([&] {
        require(config, "config");
        require(out, "out");
        *out = new bellsim_log{bellsim::run_experiment(config->config)};
    });
}

void bellsim_log_destroy(bellsim_log* log) { delete log; }

bellsim_status bellsim_log_pair_count(const bellsim_log* log, uint64_t* out)
{
    return guard([&] {
        require(log, "log");
        require(out, "out");
        *out = log->log.n_pairs;
    });
}

bellsim_status bellsim_log_event_count(const bellsim_log* log, int station, size_t* out)
{
    return guard([&] {
        require(log, "log");
        require(out, "out");
        *out = log->log.stream(station).size();
    });
}

bellsim_status bellsim_log_get_event(const bellsim_log* log, int station, size_t index,
                                     bellsim_event* out)
{
    return guard([&] {
        require(log, "log");
        require(out, "out");
        const auto& s = log->log.stream(station);
        if (index >= s.size())
            throw bellsim::InvalidArgument("event index out of range");
        *out = to_c(s[index]);
    });
}

bellsim_status bellsim_write_tags(const bellsim_log* log, const char* prefix)
{
    return guard([&] {
        require(log, "log");
        require(prefix, "prefix");
        bellsim::write_tags(log->log, prefix);
    });
}

bellsim_status bellsim_read_tags(const char* prefix, bellsim_log** out)
{
    return guard([&] {
        require(prefix, "prefix");
        require(out, "out");
        *out = new bellsim_log{bellsim::read_tags(prefix)};
    });
}

bellsim_status bellsim_log_set_settings(bellsim_log* log, int station, const double* angles,
                                        size_t count)
{
    return guard([&] {
        require(log, "log");
        check_station(station);
        auto settings = to_settings(angles, count);
        for (const auto& e : log->log.stream(station))
            if (e.setting_index >= settings.size())
                throw bellsim::InvalidArgument("log references setting index " +
                                               std::to_string(e.setting_index) +
                                               " beyond the given list");
        (station == 1 ? log->log.settings1 : log->log.settings2) = std::move(settings);
    });
}

bellsim_status bellsim_match(const bellsim_log* log, double window, bellsim_match_policy policy,
                             bellsim_coincidences** out)
{
    return guard([&] {
        require(log, "log");
        require(out, "out");
        *out = new bellsim_coincidences{bellsim::stream_match(log->log, window, to_policy(policy))};
    });
}

void bellsim_coincidences_destroy(bellsim_coincidences* c) { delete c; }

bellsim_status bellsim_coincidences_count(const bellsim_coincidences* c, size_t* out)
{
    return guard([&] {
        require(c, "coincidences");
        require(out, "out");
        *out = c->pairs.size();
    });
}

bellsim_status bellsim_coincidences_get(const bellsim_coincidences* c, size_t index,
                                        bellsim_event* first, bellsim_event* second, double* dt)
{
    return guard([&] {
        require(c, "coincidences");
        if (index >= c->pairs.size())
            throw bellsim::InvalidArgument("coincidence index out of range");
        const auto& p = c->pairs[index];
        if (first)
            *first = to_c(p.first);
        if (second)
            *second = to_c(p.second);
        if (dt)
            *dt = p.dt;
    });
}

bellsim_status bellsim_coincidence_rate(const bellsim_log* log, double window,
                                        bellsim_match_policy policy, double* out)
{
    return guard([&] {
        require(log, "log");
        require(out, "out");
        *out = bellsim::coincidence_rate(log->log, window, to_policy(policy));
    });
}

bellsim_status bellsim_tabulate(const bellsim_coincidences* c, const bellsim_log* log,
                                bellsim_table** out)
{
    return guard([&] {
        require(c, "coincidences");
        require(log, "log");
        require(out, "out");
        *out = new bellsim_table{
            bellsim::tabulate(c->pairs, log->log.settings1, log->log.settings2)};
    });
}

void bellsim_table_destroy(bellsim_table* table) { delete table; }

bellsim_status bellsim_table_dims(const bellsim_table* table, size_t* rows, size_t* cols)
{
    return guard([&] {
        require(table, "table");
        if (rows)
            *rows = table->table.rows();
        if (cols)
            *cols = table->table.cols();
    });
}

bellsim_status bellsim_table_counts(const bellsim_table* table, size_t row, size_t col,
                                    bellsim_counts* out)
{
    return guard([&] {
        require(table, "table");
        require(out, "out");
        const auto& c = table->table.cell(row, col);
        *out = {c.pp, c.pm, c.mp, c.mm};
    });
}

bellsim_status bellsim_table_correlation(const bellsim_table* table, size_t row, size_t col,
                                         double* e, double* stderr_out)
{
    return guard([&] {
        require(table, "table");
        const auto& c = table->table.cell(row, col);
        const double value = c.correlation();
        if (e)
            *e = value;
        if (stderr_out)
            *stderr_out = c.standard_error();
    });
}

bellsim_status bellsim_chsh(const bellsim_table* table, const bellsim_quadruple* quadruple,
                            bellsim_chsh_result* out)
{
    return guard([&] {
        require(table, "table");
        require(out, "out");
        *out = to_c(bellsim::chsh(table->table, to_quadruple(quadruple)));
    });
}

bellsim_status bellsim_table_write_csv(const bellsim_table* table, const char* path)
{
    return guard([&] {
        require(table, "table");
        require(path, "path");
        bellsim::write_table_csv(table->table, path);
    });
}

bellsim_status bellsim_window_sweep(const bellsim_config* config, const double* windows,
                                    size_t count, const bellsim_quadruple* quadruple,
                                    bellsim_match_policy policy, int independent,
                                    bellsim_sweep** out)
{
    return guard([&] {
        require(config, "config");
        require(out, "out");
        if (count > 0)
            require(windows, "windows");
        bellsim::SweepOptions options{to_quadruple(quadruple), to_policy(policy),
                                      independent != 0};
        *out = new bellsim_sweep{
            bellsim::window_sweep(config->config, std::span(windows, count), options)};
    });
}

bellsim_status bellsim_log_window_sweep(const bellsim_log* log, const double* windows,
                                        size_t count, const bellsim_quadruple* quadruple,
                                        bellsim_match_policy policy, bellsim_sweep** out)
{
    return guard([&] {
        require(log, "log");
        require(out, "out");
        if (count > 0)
            require(windows, "windows");
        bellsim::SweepOptions options{to_quadruple(quadruple), to_policy(policy), false};
        *out = new bellsim_sweep{
            bellsim::window_sweep(log->log, std::span(windows, count), options)};
    });
}

void bellsim_sweep_destroy(bellsim_sweep* sweep) { delete sweep; }

bellsim_status bellsim_sweep_count(const bellsim_sweep* sweep, size_t* out)
{
    return guard([&] {
        require(sweep, "sweep");
        require(out, "out");
        *out = sweep->sweep.points.size();
    });
}

bellsim_status bellsim_sweep_get(const bellsim_sweep* sweep, size_t index,
                                 bellsim_sweep_point* out)
{
    return guard([&] {
        require(sweep, "sweep");
        require(out, "out");
        if (index >= sweep->sweep.points.size())
            throw bellsim::InvalidArgument("sweep index out of range");
        const auto& p = sweep->sweep.points[index];
        *out = {p.window, p.s, p.standard_error, p.coincidence_rate};
    });
}

bellsim_status bellsim_sweep_crossings(const bellsim_sweep* sweep, double level, double* out,
                                       size_t capacity, size_t* found)
{
    return guard([&] {
        require(sweep, "sweep");
        const auto c = sweep->sweep.crossings(level);
        if (capacity > 0)
            require(out, "out");
        for (size_t k = 0; k < c.size() && k < capacity; ++k)
            out[k] = c[k];
        if (found)
            *found = c.size();
    });
}

bellsim_status bellsim_sweep_write_csv(const bellsim_sweep* sweep, const char* path)
{
    return guard([&] {
        require(sweep, "sweep");
        require(path, "path");
        bellsim::write_sweep_csv(sweep->sweep, path);
    });
}

bellsim_status bellsim_window_grid(double lo, double hi, size_t count, int logarithmic,
                                   double* out)
{
    return guard([&] {
        require(out, "out");
        const auto grid = bellsim::window_grid(lo, hi, count, logarithmic != 0);
        std::copy(grid.begin(), grid.end(), out);
    });
}

bellsim_status bellsim_weight_exact(double t1, double t2, double window, double* out)
{
    return guard([&] {
        require(out, "out");
        *out = bellsim::weight_exact(t1, t2, window);
    });
}

bellsim_status bellsim_weight_approx(double t1, double t2, double window, double* out)
{
    return guard([&] {
        require(out, "out");
        *out = bellsim::weight_approx(t1, t2, window);
    });
}

bellsim_status bellsim_joint_prob(int x1, int x2, double a1, double a2,
                                  const bellsim_model_params* params,
                                  const bellsim_quadrature* quad, double* out)
{
    return guard([&] {
        require(out, "out");
        *out = bellsim::joint_prob(x1, x2, {a1}, {a2}, to_params(params), to_quad(quad));
    });
}

bellsim_status bellsim_correlation_exact(double a1, double a2, const bellsim_model_params* params,
                                         const bellsim_quadrature* quad, double* out)
{
    return guard([&] {
        require(out, "out");
        *out = bellsim::correlation_exact({a1}, {a2}, to_params(params), to_quad(quad));
    });
}

bellsim_status bellsim_coincidence_probability(double a1, double a2,
                                               const bellsim_model_params* params,
                                               const bellsim_quadrature* quad, double* out)
{
    return guard([&] {
        require(out, "out");
        *out = bellsim::coincidence_probability({a1}, {a2}, to_params(params), to_quad(quad));
    });
}

bellsim_status bellsim_chsh_exact(const bellsim_quadruple* quadruple,
                                  const bellsim_model_params* params,
                                  const bellsim_quadrature* quad, double* out)
{
    return guard([&] {
        require(out, "out");
        *out = bellsim::chsh_exact(to_quadruple(quadruple), to_params(params), to_quad(quad));
    });
}

double bellsim_singlet_correlation(double a1, double a2)
{
    return bellsim::singlet_correlation({a1}, {a2});
}

double bellsim_mixed_correlation(double a1, double a2)
{
    return bellsim::mixed_correlation({a1}, {a2});
}

bellsim_status bellsim_write_reference_csv(const bellsim_model_params* params,
                                           const bellsim_quadrature* quad, size_t points,
                                           const char* path)
{
    return guard([&] {
        require(path, "path");
        if (points == 0)
            throw bellsim::InvalidArgument("reference curve needs at least one point");
        std::vector<double> deltas(points);
        for (size_t k = 0; k < points; ++k)
            deltas[k] = bellsim::kPi * static_cast<double>(k) / static_cast<double>(points);
        bellsim::write_reference_csv(
            bellsim::reference_curve(to_params(params), deltas, to_quad(quad)), path);
    });
}

bellsim_status bellsim_write_chsh_csv(const char* path, const char* const* labels,
                                      const bellsim_chsh_result* rows, size_t count)
{
    return guard([&] {
        require(path, "path");
        if (count > 0) {
            require(labels, "labels");
            require(rows, "rows");
        }
        std::vector<bellsim::LabelledChsh> out;
        for (size_t k = 0; k < count; ++k) {
            bellsim::ChshResult r;
            r.s = rows[k].s;
            r.standard_error = rows[k].standard_error;
            for (int i = 0; i < 4; ++i)
                r.correlations[i] = rows[k].correlations[i];
            out.push_back({labels[k] ? labels[k] : "", r});
        }
        bellsim::write_chsh_csv(out, path);
    });
}

} // extern "C"

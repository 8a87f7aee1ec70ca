#include "commands.hpp"

#include "manifest.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bellsim::cli {

namespace fs = std::filesystem;

namespace {

/// A failed C call, carrying its status.
struct CallFailed : std::runtime_error {
    CallFailed(bellsim_status s, const std::string& what) : std::runtime_error(what), status(s) {}
    bellsim_status status;
};

void check(bellsim_status status, const char* call)
{
    if (status != BELLSIM_OK)
        throw CallFailed(status, std::string(call) + ": " + bellsim_last_error());
}

#define BELLSIM_CHECK(expr) check((expr), #expr)

template <class T, void (*Destroy)(T*)>
struct Deleter {
    void operator()(T* p) const { Destroy(p); }
};
using ConfigPtr = std::unique_ptr<bellsim_config, Deleter<bellsim_config, bellsim_config_destroy>>;
using LogPtr = std::unique_ptr<bellsim_log, Deleter<bellsim_log, bellsim_log_destroy>>;
using CoincPtr = std::unique_ptr<bellsim_coincidences,
                                 Deleter<bellsim_coincidences, bellsim_coincidences_destroy>>;
using TablePtr = std::unique_ptr<bellsim_table, Deleter<bellsim_table, bellsim_table_destroy>>;
using SweepPtr = std::unique_ptr<bellsim_sweep, Deleter<bellsim_sweep, bellsim_sweep_destroy>>;

ConfigPtr make_config(const CliOptions& o)
{
    bellsim_config* raw = nullptr;
    BELLSIM_CHECK(bellsim_config_create(&raw));
    ConfigPtr config(raw);
    BELLSIM_CHECK(bellsim_config_set_params(config.get(), &o.params));
    for (int station : {1, 2}) {
        const auto s = o.settings(station);
        BELLSIM_CHECK(bellsim_config_set_settings(config.get(), station, s.data(), s.size()));
    }
    BELLSIM_CHECK(bellsim_config_set_pairs(config.get(), o.pairs));
    BELLSIM_CHECK(bellsim_config_set_seed(config.get(), o.seed));
    if (o.emission == EmissionKind::Poisson)
        BELLSIM_CHECK(bellsim_config_set_emission_poisson(config.get(), o.emission_value));
    else
        BELLSIM_CHECK(bellsim_config_set_emission_regular(config.get(), o.emission_value));
    BELLSIM_CHECK(bellsim_config_set_workers(config.get(), o.workers));
    BELLSIM_CHECK(bellsim_config_validate(config.get()));
    return config;
}

std::vector<double> windows_of(const CliOptions& o)
{
    const WindowSpec spec = o.windows.value_or(WindowSpec{o.params.t0 / 1000.0, o.params.t0, 20, true});
    std::vector<double> w(spec.count);
    BELLSIM_CHECK(bellsim_window_grid(spec.lo, spec.hi, spec.count, spec.logarithmic, w.data()));
    return w;
}

std::string fmt(double v, const char* f = "%.6g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Matches, tabulates and writes correlations.csv + chsh.csv.
void analyse_log(const bellsim_log* log, const CliOptions& o, const char* label,
                 std::vector<std::string>& outputs, std::ostream& out)
{
    bellsim_coincidences* raw_c = nullptr;
    BELLSIM_CHECK(bellsim_match(log, o.params.window, o.policy(), &raw_c));
    CoincPtr coincidences(raw_c);
    size_t n = 0;
    BELLSIM_CHECK(bellsim_coincidences_count(coincidences.get(), &n));
    uint64_t pairs = 0;
    BELLSIM_CHECK(bellsim_log_pair_count(log, &pairs));

    bellsim_table* raw_t = nullptr;
    BELLSIM_CHECK(bellsim_tabulate(coincidences.get(), log, &raw_t));
    TablePtr table(raw_t);
    const auto table_path = fs::path(o.out_dir) / "correlations.csv";
    BELLSIM_CHECK(bellsim_table_write_csv(table.get(), table_path.c_str()));
    outputs.push_back(table_path.string());

    bellsim_chsh_result r{};
    BELLSIM_CHECK(bellsim_chsh(table.get(), &o.quadruple, &r));
    const auto chsh_path = fs::path(o.out_dir) / "chsh.csv";
    const char* labels[] = {label};
    BELLSIM_CHECK(bellsim_write_chsh_csv(chsh_path.c_str(), labels, &r, 1));
    outputs.push_back(chsh_path.string());

    out << "coincidences: " << n << " of " << pairs << " pairs (rate "
        << fmt(static_cast<double>(n) / static_cast<double>(pairs)) << ")\n";
    out << "S = " << fmt(r.s, "%.4f") << " +/- " << fmt(r.standard_error, "%.4f") << '\n';
}

void write_sweep(const bellsim_sweep* sweep, const CliOptions& o,
                 std::vector<std::string>& outputs, std::ostream& out)
{
    const auto path = fs::path(o.out_dir) / "sweep.csv";
    BELLSIM_CHECK(bellsim_sweep_write_csv(sweep, path.c_str()));
    outputs.push_back(path.string());

    size_t count = 0;
    BELLSIM_CHECK(bellsim_sweep_count(sweep, &count));
    for (size_t k = 0; k < count; ++k) {
        bellsim_sweep_point p{};
        BELLSIM_CHECK(bellsim_sweep_get(sweep, k, &p));
        out << "W = " << fmt(p.window) << "  S = " << fmt(p.s, "%.4f") << " +/- "
            << fmt(p.standard_error, "%.4f") << "  rate = " << fmt(p.coincidence_rate, "%.4g")
            << '\n';
    }
    size_t found = 0;
    std::vector<double> crossings(count);
    BELLSIM_CHECK(bellsim_sweep_crossings(sweep, 2.0, crossings.data(), crossings.size(), &found));
    for (size_t k = 0; k < found && k < crossings.size(); ++k)
        out << "S crosses 2 near W = " << fmt(crossings[k]) << '\n';
    if (found == 0)
        out << "S does not cross 2 on this grid\n";
}

void run_mc(const CliOptions& o, std::vector<std::string>& outputs, std::ostream& out)
{
    const auto config = make_config(o);
    bellsim_log* raw = nullptr;
    BELLSIM_CHECK(bellsim_run_experiment(config.get(), &raw));
    LogPtr log(raw);
    if (!o.tags_out.empty()) {
        BELLSIM_CHECK(bellsim_write_tags(log.get(), o.tags_out.c_str()));
        outputs.push_back(o.tags_out + "_station1.csv");
        outputs.push_back(o.tags_out + "_station2.csv");
    }
    analyse_log(log.get(), o, "mc", outputs, out);
}

void run_oracle(const CliOptions& o, std::vector<std::string>& outputs, std::ostream& out)
{
    bellsim_quadrature quad = bellsim_default_quadrature();
    quad.tolerance = o.tolerance;
    const auto curve_path = fs::path(o.out_dir) / "oracle_curve.csv";
    BELLSIM_CHECK(bellsim_write_reference_csv(&o.params, &quad, o.oracle_points, curve_path.c_str()));
    outputs.push_back(curve_path.string());

    const auto& q = o.quadruple;
    const double pairs[4][2] = {{q.a, q.b}, {q.a, q.b_prime}, {q.a_prime, q.b}, {q.a_prime, q.b_prime}};
    bellsim_chsh_result r{};
    for (int k = 0; k < 4; ++k)
        BELLSIM_CHECK(bellsim_correlation_exact(pairs[k][0], pairs[k][1], &o.params, &quad,
                                                &r.correlations[k]));
    BELLSIM_CHECK(bellsim_chsh_exact(&q, &o.params, &quad, &r.s));
    const auto chsh_path = fs::path(o.out_dir) / "chsh.csv";
    const char* labels[] = {"oracle"};
    BELLSIM_CHECK(bellsim_write_chsh_csv(chsh_path.c_str(), labels, &r, 1));
    outputs.push_back(chsh_path.string());
    out << "oracle S = " << fmt(r.s, "%.6f") << '\n';
}

void run_sweep(const CliOptions& o, std::vector<std::string>& outputs, std::ostream& out)
{
    const auto config = make_config(o);
    const auto windows = windows_of(o);
    bellsim_sweep* raw = nullptr;
    if (o.independent || o.tags_out.empty()) {
        BELLSIM_CHECK(bellsim_window_sweep(config.get(), windows.data(), windows.size(),
                                           &o.quadruple, o.policy(), o.independent, &raw));
    } else {
        bellsim_log* raw_log = nullptr;
        BELLSIM_CHECK(bellsim_run_experiment(config.get(), &raw_log));
        LogPtr log(raw_log);
        BELLSIM_CHECK(bellsim_write_tags(log.get(), o.tags_out.c_str()));
        outputs.push_back(o.tags_out + "_station1.csv");
        outputs.push_back(o.tags_out + "_station2.csv");
        BELLSIM_CHECK(bellsim_log_window_sweep(log.get(), windows.data(), windows.size(),
                                               &o.quadruple, o.policy(), &raw));
    }
    SweepPtr sweep(raw);
    write_sweep(sweep.get(), o, outputs, out);
}

void run_reanalyze(const CliOptions& o, std::vector<std::string>& outputs, std::ostream& out)
{
    bellsim_log* raw = nullptr;
    BELLSIM_CHECK(bellsim_read_tags(o.tags_in.c_str(), &raw));
    LogPtr log(raw);
    for (int station : {1, 2}) {
        const auto& explicit_list = station == 1 ? o.angles1 : o.angles2;
        if (!explicit_list.empty())
            BELLSIM_CHECK(bellsim_log_set_settings(log.get(), station, explicit_list.data(),
                                                   explicit_list.size()));
    }
    if (o.windows) {
        const auto windows = windows_of(o);
        bellsim_sweep* raw_sweep = nullptr;
        BELLSIM_CHECK(bellsim_log_window_sweep(log.get(), windows.data(), windows.size(),
                                               &o.quadruple, o.policy(), &raw_sweep));
        SweepPtr sweep(raw_sweep);
        write_sweep(sweep.get(), o, outputs, out);
    } else {
        analyse_log(log.get(), o, "reanalyze", outputs, out);
    }
}

} // namespace

int run(const CliOptions& o, std::ostream& log)
{
    RunManifest manifest;
    manifest.version = bellsim_version();
    manifest.mode = mode_name(o.mode);
    manifest.seed = o.seed;
    manifest.config = config_echo(o);
    manifest.started_at = utc_timestamp();

    try {
        fs::create_directories(o.out_dir);
        switch (o.mode) {
        case Mode::Mc: run_mc(o, manifest.outputs, log); break;
        case Mode::Oracle: run_oracle(o, manifest.outputs, log); break;
        case Mode::Sweep: run_sweep(o, manifest.outputs, log); break;
        case Mode::Reanalyze: run_reanalyze(o, manifest.outputs, log); break;
        }
        manifest.finished_at = utc_timestamp();
        const auto path = fs::path(o.out_dir) / "manifest.json";
        manifest.outputs.push_back(path.string());
        write_manifest(manifest, path);
    } catch (const CallFailed& e) {
        log << "error: " << e.what() << '\n';
        return e.status == BELLSIM_ERR_INVALID_ARGUMENT ? kExitValidation : kExitRuntime;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    const auto parsed = parse_config(argc, argv, std::getenv("BELLSIM_OUT_DIR"));
    switch (parsed.status) {
    case ParseStatus::Ok: break;
    case ParseStatus::Help: out << parsed.message; return kExitOk;
    case ParseStatus::UnknownFlag:
    case ParseStatus::InvalidValue:
    case ParseStatus::MissingField: err << "error: " << parsed.message << '\n'; return kExitValidation;
    }
    return run(parsed.options, out);
}

} // namespace bellsim::cli

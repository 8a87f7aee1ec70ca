#include <bellsim/bellsim.h>

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <unistd.h>
#include <vector>

namespace fs = std::filesystem;

TEST_CASE("version and status names")
{
    CHECK(std::string(bellsim_version()).size() > 0);
    CHECK(std::string(bellsim_status_name(BELLSIM_OK)) == "ok");
    CHECK(std::strlen(bellsim_status_name(BELLSIM_ERR_QUADRATURE)) > 0);
    const auto p = bellsim_default_params();
    CHECK(p.d == 4.0);
    CHECK(p.t0 == 1000.0);
    CHECK(p.window == 10.0);
}

TEST_CASE("model functions and argument errors")
{
    double v = 0;
    CHECK(bellsim_outcome_prob(1, 0.0, &v) == BELLSIM_OK);
    CHECK(v == 1.0);
    CHECK(bellsim_outcome_prob(1, M_PI / 4, &v) == BELLSIM_OK);
    CHECK(v == doctest::Approx(0.5));
    CHECK(bellsim_outcome_prob(0, 0.0, &v) == BELLSIM_ERR_INVALID_ARGUMENT);
    CHECK(std::string(bellsim_last_error()).size() > 0);
    CHECK(bellsim_outcome_prob(1, 0.0, nullptr) == BELLSIM_ERR_INVALID_ARGUMENT);

    bellsim_model_params p{4, 1000, 10};
    CHECK(bellsim_delay_timescale(M_PI / 4, &p, &v) == BELLSIM_OK);
    CHECK(v == doctest::Approx(1000));
    p.t0 = -1;
    CHECK(bellsim_delay_timescale(0.1, &p, &v) == BELLSIM_ERR_INVALID_ARGUMENT);

    CHECK(bellsim_weight_exact(1, 1, 1, &v) == BELLSIM_OK);
    CHECK(v == 1.0);
    CHECK(bellsim_weight_exact(1, 1, -1, &v) == BELLSIM_ERR_INVALID_ARGUMENT);
    CHECK(bellsim_weight_approx(1000, 500, 1, &v) == BELLSIM_OK);
    CHECK(v == doctest::Approx(0.002));
    CHECK(bellsim_singlet_correlation(0, 0) == -1.0);
    CHECK(bellsim_mixed_correlation(0, 0) == -0.5);
}

TEST_CASE("oracle through the C API")
{
    bellsim_model_params p{0, 1, 0.1};
    double e = 0;
    REQUIRE(bellsim_correlation_exact(0, 0.4, &p, nullptr, &e) == BELLSIM_OK);
    CHECK(e == doctest::Approx(-0.5 * std::cos(0.8)).epsilon(1e-9));

    p = {4, 1, 1e-3};
    const auto q = bellsim_default_quadruple();
    double s = 0;
    REQUIRE(bellsim_chsh_exact(&q, &p, nullptr, &s) == BELLSIM_OK);
    CHECK(s > 2.7);

    double pp = 0;
    REQUIRE(bellsim_joint_prob(1, 1, 0, 0, &p, nullptr, &pp) == BELLSIM_OK);
    CHECK(pp >= 0);
    CHECK(bellsim_joint_prob(2, 1, 0, 0, &p, nullptr, &pp) == BELLSIM_ERR_INVALID_ARGUMENT);

    bellsim_quadrature quad = bellsim_default_quadrature();
    quad.max_subdivisions = 1;
    quad.tolerance = 1e-15;
    CHECK(bellsim_correlation_exact(0, 0.3, &p, &quad, &e) == BELLSIM_ERR_QUADRATURE);

    p.window = 0;
    CHECK(bellsim_correlation_exact(0, 0.3, &p, nullptr, &e) == BELLSIM_ERR_NO_COINCIDENCES);
}

TEST_CASE("simulation lifecycle")
{
    bellsim_config* cfg = nullptr;
    REQUIRE(bellsim_config_create(&cfg) == BELLSIM_OK);
    const bellsim_model_params p{4, 1, 0.05};
    REQUIRE(bellsim_config_set_params(cfg, &p) == BELLSIM_OK);
    bellsim_model_params back{};
    REQUIRE(bellsim_config_get_params(cfg, &back) == BELLSIM_OK);
    CHECK(back.window == 0.05);
    REQUIRE(bellsim_config_set_pairs(cfg, 20000) == BELLSIM_OK);
    REQUIRE(bellsim_config_set_seed(cfg, 7) == BELLSIM_OK);
    CHECK(bellsim_config_set_settings(cfg, 3, nullptr, 0) == BELLSIM_ERR_INVALID_ARGUMENT);
    const uint32_t bad_schedule[] = {9};
    CHECK(bellsim_config_set_schedule(cfg, 1, bad_schedule, 1) == BELLSIM_OK);
    CHECK(bellsim_config_validate(cfg) == BELLSIM_ERR_INVALID_ARGUMENT);
    REQUIRE(bellsim_config_set_schedule(cfg, 1, nullptr, 0) == BELLSIM_OK);
    REQUIRE(bellsim_config_validate(cfg) == BELLSIM_OK);

    bellsim_log* log = nullptr;
    REQUIRE(bellsim_run_experiment(cfg, &log) == BELLSIM_OK);
    uint64_t pairs = 0;
    size_t events = 0;
    REQUIRE(bellsim_log_pair_count(log, &pairs) == BELLSIM_OK);
    REQUIRE(bellsim_log_event_count(log, 2, &events) == BELLSIM_OK);
    CHECK(pairs == 20000);
    CHECK(events == 20000);
    bellsim_event ev{};
    REQUIRE(bellsim_log_get_event(log, 1, 0, &ev) == BELLSIM_OK);
    CHECK(ev.station == 1);
    CHECK(bellsim_log_get_event(log, 1, 20000, &ev) == BELLSIM_ERR_INVALID_ARGUMENT);

    bellsim_coincidences* c = nullptr;
    REQUIRE(bellsim_match(log, 0.05, BELLSIM_MATCH_PAIRED, &c) == BELLSIM_OK);
    size_t n = 0;
    REQUIRE(bellsim_coincidences_count(c, &n) == BELLSIM_OK);
    CHECK(n > 0);
    double rate = 0;
    REQUIRE(bellsim_coincidence_rate(log, 0.05, BELLSIM_MATCH_STREAM, &rate) == BELLSIM_OK);
    CHECK(rate == doctest::Approx(n / 20000.0));

    bellsim_table* table = nullptr;
    REQUIRE(bellsim_tabulate(c, log, &table) == BELLSIM_OK);
    size_t rows = 0, cols = 0;
    REQUIRE(bellsim_table_dims(table, &rows, &cols) == BELLSIM_OK);
    CHECK(rows == 2);
    CHECK(cols == 2);
    bellsim_chsh_result r{};
    const auto q = bellsim_default_quadruple();
    REQUIRE(bellsim_chsh(table, &q, &r) == BELLSIM_OK);
    CHECK(r.s > 2.3);
    bellsim_quadruple missing = q;
    missing.a = 0.3;
    CHECK(bellsim_chsh(table, &missing, &r) == BELLSIM_ERR_MISSING_COMBINATION);

    const fs::path dir = fs::temp_directory_path() / ("bellsim_capi_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string prefix = (dir / "tags").string();
    REQUIRE(bellsim_write_tags(log, prefix.c_str()) == BELLSIM_OK);
    bellsim_log* reread = nullptr;
    REQUIRE(bellsim_read_tags(prefix.c_str(), &reread) == BELLSIM_OK);
    double rate2 = 0;
    REQUIRE(bellsim_coincidence_rate(reread, 0.05, BELLSIM_MATCH_PAIRED, &rate2) == BELLSIM_OK);
    CHECK(rate2 == rate);
    CHECK(bellsim_read_tags((dir / "absent").string().c_str(), &reread) != BELLSIM_OK);
    CHECK(bellsim_table_write_csv(table, (dir / "t.csv").string().c_str()) == BELLSIM_OK);
    CHECK(fs::exists(dir / "t.csv"));
    fs::remove_all(dir);

    bellsim_log_destroy(reread);
    bellsim_table_destroy(table);
    bellsim_coincidences_destroy(c);
    bellsim_log_destroy(log);
    bellsim_config_destroy(cfg);
    bellsim_config_destroy(nullptr);
}

TEST_CASE("window sweep through the C API")
{
    bellsim_config* cfg = nullptr;
    REQUIRE(bellsim_config_create(&cfg) == BELLSIM_OK);
    REQUIRE(bellsim_config_set_pairs(cfg, 200000) == BELLSIM_OK);
    double windows[5];
    REQUIRE(bellsim_window_grid(1, 1000, 5, 1, windows) == BELLSIM_OK);
    bellsim_sweep* sweep = nullptr;
    REQUIRE(bellsim_window_sweep(cfg, windows, 5, nullptr, BELLSIM_MATCH_PAIRED, 0, &sweep) ==
            BELLSIM_OK);
    size_t count = 0;
    REQUIRE(bellsim_sweep_count(sweep, &count) == BELLSIM_OK);
    CHECK(count == 5);
    bellsim_sweep_point first{}, last{};
    REQUIRE(bellsim_sweep_get(sweep, 0, &first) == BELLSIM_OK);
    REQUIRE(bellsim_sweep_get(sweep, 4, &last) == BELLSIM_OK);
    CHECK(first.s > 2.7);
    CHECK(last.s < 2.0);
    double crossing = 0;
    size_t found = 0;
    REQUIRE(bellsim_sweep_crossings(sweep, 2.0, &crossing, 1, &found) == BELLSIM_OK);
    CHECK(found == 1);
    CHECK(crossing > 10);
    CHECK(crossing < 1000);
    bellsim_sweep_destroy(sweep);
    bellsim_config_destroy(cfg);
}

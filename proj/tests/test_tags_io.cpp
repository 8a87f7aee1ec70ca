#include "coincidence.hpp"
#include "error.hpp"
#include "tags_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace bellsim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("bellsim_tags_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

std::string read_text(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("tag files round-trip losslessly")
{
    TempDir dir;
    ExperimentConfig c;
    c.params = {4, 1, 0.1};
    c.n_pairs = 5000;
    c.emission = EmissionProcess::poisson(0.7);
    const auto log = run_experiment(c);
    const auto paths = write_tags(log, dir.path / "run");
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].filename() == "run_station1.csv");
    const auto back = read_tags(dir.path / "run");
    CHECK(back.station1 == log.station1);
    CHECK(back.station2 == log.station2);
    CHECK(back.settings1.size() == 2);
    CHECK(back.settings2[1].angle == log.settings2[1].angle);
    CHECK(back.n_pairs == 5000);
    for (double w : {0.0, 0.05, 0.3}) {
        CHECK(pair_filter(back, w).size() == pair_filter(log, w).size());
        CHECK(stream_match(back, w).size() == stream_match(log, w).size());
    }
}

TEST_CASE("tag parse errors name the line")
{
    TempDir dir;
    const auto p = dir.path / "bad_station1.csv";
    write_text(p, "# bellsim-tags v1 station=1 settings=0,0.5\n"
                  "pair_id,time_ns,setting_index,outcome\n"
                  "0,1.0,0,1\n"
                  "1,abc,0,1\n");
    try {
        (void)read_tag_stream(p, 1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }

    write_text(p, "# bellsim-tags v1 station=1 settings=0,0.5\n"
                  "pair_id,time_ns,setting_index,outcome\n"
                  "0,1.0,0\n");
    CHECK_THROWS_AS(read_tag_stream(p, 1), ParseError);

    write_text(p, "# bellsim-tags v1 station=1 settings=0,0.5\n"
                  "pair_id,time_ns,setting_index,outcome\n"
                  "0,1.0,2,1\n");
    CHECK_THROWS_AS(read_tag_stream(p, 1), ParseError);

    write_text(p, "# bellsim-tags v1 station=1 settings=0,0.5\n"
                  "pair_id,time_ns,setting_index,outcome\n"
                  "0,1.0,0,0\n");
    CHECK_THROWS_AS(read_tag_stream(p, 1), ParseError);

    write_text(p, "pair_id,time_ns,setting_index,outcome\n0,1.0,0,1\n");
    CHECK_THROWS_AS(read_tag_stream(p, 1), ParseError);

    write_text(p, "# bellsim-tags v9 station=1 settings=0,0.5\n"
                  "pair_id,time_ns,setting_index,outcome\n");
    try {
        (void)read_tag_stream(p, 1);
        FAIL("expected version error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Version);
    }

    CHECK_THROWS_AS(read_tag_stream(dir.path / "missing.csv", 1), Error);
}

TEST_CASE("tag files without pair ids support stream matching only")
{
    TempDir dir;
    write_text(dir.path / "x_station1.csv", "# bellsim-tags v1 station=1 settings=0\n"
                                            "time_ns,setting_index,outcome\n"
                                            "0.0,0,1\n"
                                            "1.0,0,-1\n");
    write_text(dir.path / "x_station2.csv", "# bellsim-tags v1 station=2 settings=0.3\n"
                                            "time_ns,setting_index,outcome\n"
                                            "0.4,0,1\n");
    const auto log = read_tags(dir.path / "x");
    CHECK_FALSE(log.has_pair_ids);
    CHECK(log.n_pairs == 2);
    CHECK_THROWS_AS(pair_filter(log, 0.5), Error);
    const auto m = stream_match(log, 0.5);
    REQUIRE(m.size() == 1);
    CHECK(m[0].first.time_tag == 0.0);
}

TEST_CASE("result CSV headers")
{
    TempDir dir;
    CorrelationTable table({{0.0}}, {{0.5}});
    table.cell(0, 0) = {3, 1, 1, 3};
    write_table_csv(table, dir.path / "t.csv");
    const auto t = read_text(dir.path / "t.csv");
    CHECK(t.rfind("setting1,setting2,angle1,angle2,n_pp,n_pm,n_mp,n_mm,n_total,E,stderr\n", 0) == 0);

    write_chsh_csv({{"mc", chsh(std::array<Estimate, 4>{})}}, dir.path / "c.csv");
    CHECK(read_text(dir.path / "c.csv").rfind("source,S,stderr,", 0) == 0);

    SweepResult sweep;
    sweep.points = {{1, 2.5, 0.01, 0.2}};
    write_sweep_csv(sweep, dir.path / "s.csv");
    CHECK(read_text(dir.path / "s.csv").rfind("window_ns,S,stderr,coincidence_rate\n", 0) == 0);

    write_reference_csv({}, dir.path / "r.csv");
    CHECK(read_text(dir.path / "r.csv") == "delta_rad,E_model,E_singlet,E_mixed\n");
}

#include "manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace bellsim::cli {

void to_json(nlohmann::json& j, const RunManifest& m)
{
    j = nlohmann::json{{"version", m.version},       {"mode", m.mode},
                       {"seed", m.seed},             {"config", m.config},
                       {"started_at", m.started_at}, {"finished_at", m.finished_at},
                       {"outputs", m.outputs}};
}

void from_json(const nlohmann::json& j, RunManifest& m)
{
    j.at("version").get_to(m.version);
    j.at("mode").get_to(m.mode);
    j.at("seed").get_to(m.seed);
    m.config = j.at("config");
    j.at("started_at").get_to(m.started_at);
    j.at("finished_at").get_to(m.finished_at);
    j.at("outputs").get_to(m.outputs);
}

nlohmann::json config_echo(const CliOptions& o)
{
    nlohmann::json j;
    j["mode"] = mode_name(o.mode);
    j["d"] = o.params.d;
    j["t0_ns"] = o.params.t0;
    j["window_ns"] = o.params.window;
    if (o.windows)
        j["windows"] = {{"min", o.windows->lo},
                        {"max", o.windows->hi},
                        {"count", o.windows->count},
                        {"spacing", o.windows->logarithmic ? "log" : "lin"}};
    j["pairs"] = o.pairs;
    j["seed"] = o.seed;
    j["angles1_rad"] = o.settings(1);
    j["angles2_rad"] = o.settings(2);
    j["quadruple_rad"] = {o.quadruple.a, o.quadruple.a_prime, o.quadruple.b, o.quadruple.b_prime};
    j["emission"] = {{"kind", o.emission == EmissionKind::Regular ? "regular" : "poisson"},
                     {"value", o.emission_value}};
    j["matcher"] = o.policy() == BELLSIM_MATCH_STREAM ? "stream" : "paired";
    j["independent"] = o.independent;
    j["workers"] = o.workers;
    if (!o.tags_in.empty())
        j["tags_in"] = o.tags_in;
    if (!o.tags_out.empty())
        j["tags_out"] = o.tags_out;
    if (o.mode == Mode::Oracle) {
        j["points"] = o.oracle_points;
        j["tolerance"] = o.tolerance;
    }
    return j;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << nlohmann::json(manifest).dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    return nlohmann::json::parse(in).get<RunManifest>();
}

} // namespace bellsim::cli

#include "tags_io.hpp"

#include "error.hpp"

#include <algorithm>
#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bellsim {

namespace fs = std::filesystem;

namespace {

constexpr const char* kMagic = "# bellsim-tags";

std::string format(const char* fmt, auto... args)
{
    char buf[128];
    const int n = std::snprintf(buf, sizeof buf, fmt, args...);
    return std::string(buf, static_cast<std::size_t>(std::max(0, n)));
}

std::ofstream open_out(const fs::path& path)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& path)
{
    out.flush();
    if (!out)
        throw Error(ErrorKind::Io, "write to " + path.string() + " failed");
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep))
        fields.push_back(field);
    if (!line.empty() && line.back() == sep)
        fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, const fs::path& path, std::size_t line,
                    const char* what)
{
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (text.empty() || end != begin + text.size() || errno == ERANGE)
        throw ParseError(path.string(), line,
                         std::string("non-numeric ") + what + " '" + text + "'");
    return v;
}

std::uint64_t parse_uint(const std::string& text, const fs::path& path, std::size_t line,
                         const char* what)
{
    const char* begin = text.c_str();
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(begin, &end, 10);
    if (text.empty() || text[0] == '-' || end != begin + text.size() || errno == ERANGE)
        throw ParseError(path.string(), line,
                         std::string("invalid ") + what + " '" + text + "'");
    return v;
}

} // namespace

fs::path tag_path(const fs::path& prefix, int station)
{
    if (station != 1 && station != 2)
        throw InvalidArgument("station must be 1 or 2");
    fs::path p = prefix;
    p += "_station" + std::to_string(station) + ".csv";
    return p;
}

void write_tag_stream(const fs::path& path, int station,
                      const std::vector<DetectionEvent>& events,
                      const std::vector<Setting>& settings)
{
    auto out = open_out(path);
    out << kMagic << " v" << kTagFormatVersion << " station=" << station << " settings=";
    for (std::size_t i = 0; i < settings.size(); ++i)
        out << (i ? "," : "") << format("%.17g", settings[i].angle);
    out << "\npair_id,time_ns,setting_index,outcome\n";
    std::string row;
    for (const auto& e : events) {
        row = format("%" PRIu64 ",%.6f,%" PRIu32 ",%d\n", e.pair_id, e.time_tag,
                     e.setting_index, static_cast<int>(e.outcome));
        out << row;
    }
    finish(out, path);
}

TagStream read_tag_stream(const fs::path& path, int station)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open " + path.string());

    TagStream ts;
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line) || line.rfind(kMagic, 0) != 0)
        throw ParseError(path.string(), lineno, "missing '# bellsim-tags' header");
    {
        std::istringstream head(line.substr(std::string(kMagic).size()));
        std::string token;
        bool have_version = false;
        while (head >> token) {
            if (token.size() > 1 && token[0] == 'v' && !have_version) {
                const auto version = parse_uint(token.substr(1), path, lineno, "version");
                if (version != static_cast<std::uint64_t>(kTagFormatVersion))
                    throw Error(ErrorKind::Version,
                                path.string() + ": tag format version " + token.substr(1) +
                                    " is not supported (expected " +
                                    std::to_string(kTagFormatVersion) + ")");
                have_version = true;
            } else if (token.rfind("station=", 0) == 0) {
                const auto s = parse_uint(token.substr(8), path, lineno, "station");
                if (s != static_cast<std::uint64_t>(station))
                    throw ParseError(path.string(), lineno,
                                     "file holds station " + token.substr(8) + ", expected " +
                                         std::to_string(station));
            } else if (token.rfind("settings=", 0) == 0) {
                for (const auto& a : split(token.substr(9), ','))
                    ts.settings.push_back({parse_double(a, path, lineno, "setting angle")});
            }
        }
        if (!have_version)
            throw ParseError(path.string(), lineno, "header carries no format version");
    }

    ++lineno;
    if (!std::getline(in, line))
        throw ParseError(path.string(), lineno, "missing column header");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line == "pair_id,time_ns,setting_index,outcome")
        ts.has_pair_ids = true;
    else if (line == "time_ns,setting_index,outcome")
        ts.has_pair_ids = false;
    else
        throw ParseError(path.string(), lineno, "unexpected column header '" + line + "'");
    const std::size_t columns = ts.has_pair_ids ? 4 : 3;

    std::uint64_t next_id = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != columns)
            throw ParseError(path.string(), lineno,
                             "expected " + std::to_string(columns) + " columns, found " +
                                 std::to_string(f.size()));
        std::size_t c = 0;
        DetectionEvent e;
        e.station = static_cast<std::uint8_t>(station);
        e.pair_id = ts.has_pair_ids ? parse_uint(f[c++], path, lineno, "pair_id") : next_id++;
        e.time_tag = parse_double(f[c++], path, lineno, "time tag");
        const auto idx = parse_uint(f[c++], path, lineno, "setting_index");
        if (!ts.settings.empty() && idx >= ts.settings.size())
            throw ParseError(path.string(), lineno, "setting_index out of range");
        e.setting_index = static_cast<std::uint32_t>(idx);
        const auto& o = f[c++];
        if (o == "1" || o == "+1")
            e.outcome = 1;
        else if (o == "-1")
            e.outcome = -1;
        else
            throw ParseError(path.string(), lineno, "outcome must be 1 or -1, got '" + o + "'");
        ts.events.push_back(e);
    }
    return ts;
}

std::vector<fs::path> write_tags(const EventLog& log, const fs::path& prefix)
{
    std::vector<fs::path> paths{tag_path(prefix, 1), tag_path(prefix, 2)};
    write_tag_stream(paths[0], 1, log.station1, log.settings1);
    write_tag_stream(paths[1], 2, log.station2, log.settings2);
    return paths;
}

EventLog read_tags(const fs::path& prefix)
{
    auto s1 = read_tag_stream(tag_path(prefix, 1), 1);
    auto s2 = read_tag_stream(tag_path(prefix, 2), 2);
    EventLog log;
    const auto by_time = [](const DetectionEvent& a, const DetectionEvent& b) {
        return a.time_tag < b.time_tag || (a.time_tag == b.time_tag && a.pair_id < b.pair_id);
    };
    for (auto* s : {&s1, &s2})
        if (!std::is_sorted(s->events.begin(), s->events.end(), by_time))
            std::stable_sort(s->events.begin(), s->events.end(), by_time);
    log.station1 = std::move(s1.events);
    log.station2 = std::move(s2.events);
    log.settings1 = std::move(s1.settings);
    log.settings2 = std::move(s2.settings);
    log.has_pair_ids = s1.has_pair_ids && s2.has_pair_ids;
    log.n_pairs = std::max(log.station1.size(), log.station2.size());
    return log;
}

void write_table_csv(const CorrelationTable& table, const fs::path& path)
{
    auto out = open_out(path);
    out << "setting1,setting2,angle1,angle2,n_pp,n_pm,n_mp,n_mm,n_total,E,stderr\n";
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (std::size_t j = 0; j < table.cols(); ++j) {
            const auto& c = table.cell(i, j);
            out << i << ',' << j << ',' << format("%.17g", table.settings1()[i].angle) << ','
                << format("%.17g", table.settings2()[j].angle) << ',' << c.pp << ',' << c.pm
                << ',' << c.mp << ',' << c.mm << ',' << c.total() << ',';
            if (c.empty())
                out << "nan,nan\n";
            else
                out << format("%.10f", c.correlation()) << ','
                    << format("%.10f", c.standard_error()) << '\n';
        }
    }
    finish(out, path);
}

void write_chsh_csv(const std::vector<LabelledChsh>& rows, const fs::path& path)
{
    auto out = open_out(path);
    out << "source,S,stderr,E_ab,E_ab',E_a'b,E_a'b'\n";
    for (const auto& r : rows) {
        out << r.label << ',' << format("%.10f", r.result.s) << ','
            << format("%.10f", r.result.standard_error);
        for (double e : r.result.correlations)
            out << ',' << format("%.10f", e);
        out << '\n';
    }
    finish(out, path);
}

void write_sweep_csv(const SweepResult& sweep, const fs::path& path)
{
    auto out = open_out(path);
    out << "window_ns,S,stderr,coincidence_rate\n";
    for (const auto& p : sweep.points)
        out << format("%.10g", p.window) << ',' << format("%.10f", p.s) << ','
            << format("%.10f", p.standard_error) << ',' << format("%.10f", p.coincidence_rate)
            << '\n';
    finish(out, path);
}

void write_reference_csv(const std::vector<ReferencePoint>& curve, const fs::path& path)
{
    auto out = open_out(path);
    out << "delta_rad,E_model,E_singlet,E_mixed\n";
    for (const auto& p : curve)
        out << format("%.12f", p.delta) << ',' << format("%.12f", p.model) << ','
            << format("%.12f", p.singlet) << ',' << format("%.12f", p.mixed) << '\n';
    finish(out, path);
}

} // namespace bellsim

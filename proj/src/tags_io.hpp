#pragma once

#include "analysis.hpp"
#include "event_sim.hpp"
#include "oracle.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace bellsim {

/// Time-tag files: one CSV per station.
///
///     # bellsim-tags v1 station=1 settings=0,0.78539816339744828
///     pair_id,time_ns,setting_index,outcome
///     0,0.316228,1,-1
///
/// Time tags are written with 6 decimals. The pair_id column may be absent
/// on read; the log is then only usable with stream matching.
inline constexpr int kTagFormatVersion = 1;

/// Paths `<prefix>_station1.csv` and `<prefix>_station2.csv`.
std::filesystem::path tag_path(const std::filesystem::path& prefix, int station);

void write_tag_stream(const std::filesystem::path& path, int station,
                      const std::vector<DetectionEvent>& events,
                      const std::vector<Setting>& settings);

struct TagStream {
    std::vector<DetectionEvent> events;
    std::vector<Setting> settings;
    bool has_pair_ids = true;
};

/// Throws ParseError naming the offending line, or Error(Version).
TagStream read_tag_stream(const std::filesystem::path& path, int station);

/// Returns the two paths written.
std::vector<std::filesystem::path> write_tags(const EventLog& log,
                                              const std::filesystem::path& prefix);

/// Streams are re-sorted by time if needed. n_pairs is taken as the larger
/// event count.
EventLog read_tags(const std::filesystem::path& prefix);

// Result tables (plot-ready CSV, one row per record).
void write_table_csv(const CorrelationTable& table, const std::filesystem::path& path);

struct LabelledChsh {
    std::string label;
    ChshResult result;
};
void write_chsh_csv(const std::vector<LabelledChsh>& rows, const std::filesystem::path& path);

void write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path);

void write_reference_csv(const std::vector<ReferencePoint>& curve,
                         const std::filesystem::path& path);

} // namespace bellsim

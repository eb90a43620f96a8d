#pragma once

#include "degtherm/config.hpp"

#include <string>
#include <vector>

namespace degtherm {

/// Levels written as snapshots: every save_every-th level and the last one.
std::vector<Index> saved_levels(Index num_levels, Index save_every);

/// Writes config.ini, snapshots/{u,phi}_NNNNNN.txt, diagnostics.jsonl,
/// report.json and plotdata/*.csv. The output depends only on the config and seed;
/// the meta.json sidecar is written separately by write_meta.
void write_run_directory(const std::string& dir, const RunConfig& config, const RunResult& run);

/// Writes one file, creating parent directories; throws Error on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Writes meta.json with the current time and worker count.
void write_meta(const std::string& dir, const std::string& command);

/// Snapshot paths of a run directory for field "u" or "phi", in level order.
std::vector<std::string> snapshot_files(const std::string& dir, const std::string& field);

/// Saved u levels of a run directory at uniform spacing save_every * dt; a final
/// snapshot off that spacing is dropped.
SpaceTimeField read_saved_levels(const std::string& dir, const std::string& field);

}  // namespace degtherm

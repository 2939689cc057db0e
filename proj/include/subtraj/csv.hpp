#pragma once

#include "subtraj/types.hpp"

#include <string>
#include <vector>

namespace subtraj {

struct IngestOptions {
    /// When true, the first malformed row aborts ingestion.
    bool fail_fast = false;
};

struct IngestReport {
    std::size_t rows_read = 0;
    std::size_t rows_malformed = 0;
    std::size_t rows_duplicate = 0;
    std::size_t trajectory_count = 0;
    std::vector<std::string> warnings;
};

struct IngestResult {
    Dataset dataset;
    IngestReport report;
};

/// Reads a `traj_id,t,x,y` CSV (header required) into a Dataset.
/// Rows are grouped by trajectory and sorted by time; rows that repeat a
/// (traj_id, t) pair are dropped and counted in the report.
IngestResult ingest_csv(const std::string& path, const IngestOptions& opts = {});

/// Writes the dataset back out in the same CSV schema.
void write_csv(const Dataset& ds, const std::string& path);

/// Emits record counts, time extent and bounding box as a small JSON file.
void write_manifest(const Dataset& ds, const IngestReport& report, const std::string& path);

} // namespace subtraj

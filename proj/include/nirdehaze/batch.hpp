#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nirdehaze/fusion.hpp"
#include "nirdehaze/metrics.hpp"

namespace nirdehaze {

struct ManifestEntry {
    std::string rgb;
    std::string nir;
    std::string out;
    std::string label;
};

struct RunManifest {
    std::vector<ManifestEntry> entries;
    FusionConfig config;
};

/// One processed pair: the config that produced it, the metric suite for
/// (original, dehazed), and wall-clock milliseconds. `error` is set instead
/// of `metrics` when the entry failed.
struct ReportRecord {
    std::string label;
    FusionConfig config;
    std::optional<MetricsReport> metrics;
    std::string error;
    double ms = 0;

    bool ok() const { return metrics.has_value(); }
};

/// Parses a CSV manifest with header rgb,nir,out[,label]. Missing labels
/// default to the stem of the rgb path; labels must end up unique.
RunManifest load_manifest(const std::string& path, const FusionConfig& config);

/// Dehazes one pair, writes the output PNG, and scores (original, dehazed)
/// on their luma planes.
ReportRecord run_single(const std::string& rgb_path, const std::string& nir_path,
                        const std::string& out_path, const std::string& label,
                        const FusionConfig& cfg);

/// Processes all entries with bounded parallelism (`max_threads` 0 picks a
/// default). Per-entry failures become failure records, not exceptions; the
/// returned records follow manifest order regardless of thread count.
std::vector<ReportRecord> run_batch(const RunManifest& manifest, int max_threads = 0);

/// JSON report array, one object per record in the given order.
std::string report_json(const std::vector<ReportRecord>& records);
void write_report(const std::vector<ReportRecord>& records, const std::string& path);

/// CSV table of the successful records, one row per label, sorted by label,
/// 4 decimal places.
std::string emit_table(const std::vector<ReportRecord>& records);

const char* to_string(HazeMapMode mode);
HazeMapMode haze_map_mode_from_string(const std::string& name);

}  // namespace nirdehaze

#include "nirdehaze/batch.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "nirdehaze/image_io.hpp"

namespace nirdehaze {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    for (auto& f : fields) {
        const auto begin = f.find_first_not_of(" \t");
        const auto end = f.find_last_not_of(" \t");
        f = begin == std::string::npos ? "" : f.substr(begin, end - begin + 1);
    }
    return fields;
}

MetricsReport score_pair(const Plane& original_luma, const Plane& restored_luma) {
    MetricsReport m;
    m.entropy = entropy(restored_luma);
    m.std_dev = std_dev(restored_luma);
    m.ssim = ssim(original_luma, restored_luma);
    m.cc = correlation_coefficient(original_luma, restored_luma);
    m.sf = spatial_frequency(restored_luma);
    const BlindAssessment blind = blind_assessment(original_luma, restored_luma);
    m.e = blind.e;
    m.sigma_sat = blind.sigma_sat;
    m.r_bar = blind.r_bar;
    return m;
}

ordered_json record_json(const ReportRecord& rec) {
    ordered_json j;
    j["label"] = rec.label;
    j["config"] = {{"levels", rec.config.n_levels},
                   {"haze_map", to_string(rec.config.haze_map_mode)},
                   {"bins", rec.config.histogram_bins}};
    if (rec.ok()) {
        const MetricsReport& m = *rec.metrics;
        j["metrics"] = {{"entropy", m.entropy}, {"std_dev", m.std_dev}, {"ssim", m.ssim},
                        {"cc", m.cc},           {"sf", m.sf},           {"e", m.e},
                        {"sigma_sat", m.sigma_sat}, {"r_bar", m.r_bar}};
    } else {
        j["error"] = rec.error;
    }
    j["ms"] = rec.ms;
    return j;
}

}  // namespace

const char* to_string(HazeMapMode mode) {
    return mode == HazeMapMode::scale ? "scale" : "minmax";
}

HazeMapMode haze_map_mode_from_string(const std::string& name) {
    if (name == "scale") return HazeMapMode::scale;
    if (name == "minmax") return HazeMapMode::minmax;
    throw std::invalid_argument("unknown haze map mode '" + name + "' (expected scale|minmax)");
}

RunManifest load_manifest(const std::string& path, const FusionConfig& config) {
    std::ifstream in(path);
    if (!in) throw ManifestParseError(path + ": cannot open manifest");

    RunManifest manifest;
    manifest.config = config;
    std::string line;
    if (!std::getline(in, line)) throw ManifestParseError(path + ": empty manifest");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    const bool has_label = header.size() == 4 && header[3] == "label";
    if ((header.size() != 3 && !has_label) || header[0] != "rgb" || header[1] != "nir" ||
        header[2] != "out")
        throw ManifestParseError(path + ": manifest header must be rgb,nir,out[,label]");

    std::set<std::string> seen;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw ManifestParseError(path + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(header.size()) + " fields");
        ManifestEntry entry{fields[0], fields[1], fields[2],
                            has_label && !fields[3].empty()
                                ? fields[3]
                                : std::filesystem::path(fields[0]).stem().string()};
        if (entry.rgb.empty() || entry.nir.empty() || entry.out.empty())
            throw ManifestParseError(path + ":" + std::to_string(line_no) + ": empty path field");
        if (!seen.insert(entry.label).second)
            throw ManifestParseError(path + ":" + std::to_string(line_no) +
                                     ": duplicate label '" + entry.label + "'");
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

ReportRecord run_single(const std::string& rgb_path, const std::string& nir_path,
                        const std::string& out_path, const std::string& label,
                        const FusionConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();

    const ImagePair pair = load_pair(rgb_path, nir_path);
    const RgbImage restored = dehaze(pair, cfg);
    save_image(restored, out_path, 8);

    const Plane original_luma = rgb_to_ycbcr(pair.rgb).y;
    const Plane restored_luma = rgb_to_ycbcr(restored).y;

    ReportRecord rec;
    rec.label = label;
    rec.config = cfg;
    rec.metrics = score_pair(original_luma, restored_luma);
    rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                 .count();
    return rec;
}

std::vector<ReportRecord> run_batch(const RunManifest& manifest, int max_threads) {
    manifest.config.validate();
    const size_t n = manifest.entries.size();
    std::vector<ReportRecord> records(n);
    if (n == 0) return records;

    int threads = max_threads > 0 ? max_threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp<int>(threads, 1, 8);
    threads = std::min<int>(threads, static_cast<int>(n));

    std::atomic<size_t> next{0};
    const auto worker = [&]() {
        for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            const ManifestEntry& entry = manifest.entries[i];
            try {
                records[i] =
                    run_single(entry.rgb, entry.nir, entry.out, entry.label, manifest.config);
            } catch (const std::exception& ex) {
                const auto t0 = std::chrono::steady_clock::now();
                records[i].label = entry.label;
                records[i].config = manifest.config;
                records[i].error = ex.what();
                records[i].ms = std::chrono::duration<double, std::milli>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count();
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

std::string report_json(const std::vector<ReportRecord>& records) {
    ordered_json arr = ordered_json::array();
    for (const auto& rec : records) arr.push_back(record_json(rec));
    return arr.dump(2) + "\n";
}

void write_report(const std::vector<ReportRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open report for writing");
    out << report_json(records);
    if (!out) throw IoError(path + ": report write failed");
}

std::string emit_table(const std::vector<ReportRecord>& records) {
    std::vector<const ReportRecord*> rows;
    for (const auto& rec : records)
        if (rec.ok()) rows.push_back(&rec);
    std::sort(rows.begin(), rows.end(),
              [](const ReportRecord* a, const ReportRecord* b) { return a->label < b->label; });

    std::ostringstream out;
    out << "label,entropy,std_dev,ssim,cc,sf,e,sigma_sat,r_bar\n";
    char buf[160];
    for (const ReportRecord* rec : rows) {
        const MetricsReport& m = *rec->metrics;
        std::snprintf(buf, sizeof(buf), ",%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n", m.entropy,
                      m.std_dev, m.ssim, m.cc, m.sf, m.e, m.sigma_sat, m.r_bar);
        out << rec->label << buf;
    }
    return out.str();
}

}  // namespace nirdehaze

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nirdehaze/batch.hpp"
#include "nirdehaze/image_io.hpp"
#include "support/synthetic.hpp"

using namespace nirdehaze;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("nirdehaze_batch_test_" +
                                                  std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_pair(const TempDir& tmp, const std::string& stem, std::uint32_t seed) {
    const auto scene = testsupport::make_hazy_scene(seed, 48, 64);
    save_image(scene.rgb, tmp.file(stem + "_rgb.png"), 8);
    save_image(RgbImage{scene.nir.plane, scene.nir.plane, scene.nir.plane},
               tmp.file(stem + "_nir.png"), 8);
}

std::string write_manifest(const TempDir& tmp, const std::string& name,
                           const std::string& body) {
    const std::string path = tmp.file(name);
    std::ofstream out(path);
    out << body;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_ms(std::string json) {
    static const std::regex ms_re("\"ms\": [0-9eE+.-]+");
    return std::regex_replace(json, ms_re, "\"ms\": 0");
}

}  // namespace

TEST_CASE("manifest parsing, label defaulting and validation") {
    TempDir tmp;
    const std::string path = write_manifest(tmp, "m.csv",
                                            "rgb,nir,out,label\n"
                                            "a_rgb.png, a_nir.png ,a_out.png,alpha\n"
                                            "b_rgb.png,b_nir.png,b_out.png,\n"
                                            "\n");
    const RunManifest m = load_manifest(path, FusionConfig{});
    REQUIRE(m.entries.size() == 2);
    CHECK(m.entries[0].label == "alpha");
    CHECK(m.entries[0].nir == "a_nir.png");  // whitespace trimmed
    CHECK(m.entries[1].label == "b_rgb");    // defaults to the rgb stem

    CHECK_THROWS_AS(load_manifest(write_manifest(tmp, "bad1.csv", "foo,bar\n"), FusionConfig{}),
                    ManifestParseError);
    CHECK_THROWS_AS(load_manifest(write_manifest(tmp, "bad2.csv",
                                                 "rgb,nir,out,label\n"
                                                 "a,b,c,dup\n"
                                                 "d,e,f,dup\n"),
                                  FusionConfig{}),
                    ManifestParseError);
    CHECK_THROWS_AS(load_manifest(write_manifest(tmp, "bad3.csv",
                                                 "rgb,nir,out\n"
                                                 "a,b\n"),
                                  FusionConfig{}),
                    ManifestParseError);
    CHECK_THROWS_AS(load_manifest(tmp.file("absent.csv"), FusionConfig{}), ManifestParseError);
}

TEST_CASE("run_single writes the output image and scores the pair") {
    TempDir tmp;
    write_pair(tmp, "a", 21);
    const ReportRecord rec = run_single(tmp.file("a_rgb.png"), tmp.file("a_nir.png"),
                                        tmp.file("a_out.png"), "a", FusionConfig{});
    REQUIRE(rec.ok());
    CHECK(fs::exists(tmp.file("a_out.png")));
    CHECK(rec.metrics->ssim <= 1.0);
    CHECK(rec.metrics->entropy > 0.0);
    CHECK(rec.ms >= 0.0);

    // Self-fusion: NIR set to the luma content keeps the output near the input.
    const RgbImage rgb = load_rgb(tmp.file("a_rgb.png"));
    const Plane luma = rgb_to_ycbcr(rgb).y;
    save_image(RgbImage{luma, luma, luma}, tmp.file("a_luma.png"), 8);
    const ReportRecord self = run_single(tmp.file("a_rgb.png"), tmp.file("a_luma.png"),
                                         tmp.file("a_self.png"), "self", FusionConfig{});
    REQUIRE(self.ok());
    CHECK(self.metrics->ssim >= 0.99);
}

TEST_CASE("run_batch records failures without aborting") {
    TempDir tmp;
    write_pair(tmp, "a", 22);
    write_pair(tmp, "b", 23);
    const std::string manifest_path = write_manifest(
        tmp, "m.csv",
        "rgb,nir,out\n" + tmp.file("a_rgb.png") + "," + tmp.file("a_nir.png") + "," +
            tmp.file("a_out.png") + "\n" + tmp.file("missing_rgb.png") + "," +
            tmp.file("a_nir.png") + "," + tmp.file("x_out.png") + "\n" + tmp.file("b_rgb.png") +
            "," + tmp.file("b_nir.png") + "," + tmp.file("b_out.png") + "\n");
    const RunManifest manifest = load_manifest(manifest_path, FusionConfig{});
    const auto records = run_batch(manifest);
    REQUIRE(records.size() == 3);
    CHECK(records[0].ok());
    CHECK_FALSE(records[1].ok());
    CHECK(records[1].error.find("missing_rgb.png") != std::string::npos);
    CHECK(records[2].ok());
}

TEST_CASE("empty manifest yields an empty report") {
    TempDir tmp;
    const RunManifest manifest =
        load_manifest(write_manifest(tmp, "empty.csv", "rgb,nir,out\n"), FusionConfig{});
    const auto records = run_batch(manifest);
    CHECK(records.empty());
    CHECK(report_json(records) == "[]\n");
}

TEST_CASE("reports are deterministic and thread-count independent") {
    TempDir tmp;
    write_pair(tmp, "a", 24);
    write_pair(tmp, "b", 25);
    std::string body = "rgb,nir,out,label\n";
    for (const char* stem : {"a", "b"})
        body += tmp.file(std::string(stem) + "_rgb.png") + "," +
                tmp.file(std::string(stem) + "_nir.png") + "," +
                tmp.file(std::string(stem) + "_out.png") + "," + stem + "\n";
    const RunManifest manifest =
        load_manifest(write_manifest(tmp, "m.csv", body), FusionConfig{});

    const auto serial = run_batch(manifest, 1);
    const auto parallel = run_batch(manifest, 4);
    CHECK(strip_ms(report_json(serial)) == strip_ms(report_json(parallel)));

    write_report(serial, tmp.file("r1.json"));
    write_report(run_batch(manifest, 2), tmp.file("r2.json"));
    CHECK(strip_ms(slurp(tmp.file("r1.json"))) == strip_ms(slurp(tmp.file("r2.json"))));

    // Schema check on one record.
    const auto parsed = nlohmann::json::parse(slurp(tmp.file("r1.json")));
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 2);
    const auto& rec = parsed[0];
    CHECK(rec["label"] == "a");
    CHECK(rec["config"]["levels"] == 2);
    CHECK(rec["config"]["haze_map"] == "scale");
    CHECK(rec["config"]["bins"] == 256);
    for (const char* key : {"entropy", "std_dev", "ssim", "cc", "sf", "e", "sigma_sat", "r_bar"})
        CHECK(rec["metrics"].contains(key));
    CHECK(rec.contains("ms"));
}

TEST_CASE("emit_table sorts by label and round-trips at 4 decimals") {
    MetricsReport m;
    m.entropy = 7.12345;
    m.std_dev = 0.2;
    m.ssim = 0.987654;
    m.cc = 0.5;
    m.sf = 0.0321;
    m.e = 0.25;
    m.sigma_sat = 0.0;
    m.r_bar = 1.4567;
    ReportRecord rec_b{"bravo", FusionConfig{}, m, "", 1.0};
    ReportRecord rec_a{"alpha", FusionConfig{}, m, "", 1.0};
    ReportRecord failed{"charlie", FusionConfig{}, std::nullopt, "boom", 0.1};

    const std::string table = emit_table({rec_b, failed, rec_a});
    std::istringstream lines(table);
    std::string header, row1, row2, extra;
    std::getline(lines, header);
    std::getline(lines, row1);
    std::getline(lines, row2);
    CHECK(header == "label,entropy,std_dev,ssim,cc,sf,e,sigma_sat,r_bar");
    CHECK(row1.substr(0, 6) == "alpha,");
    CHECK(row2.substr(0, 6) == "bravo,");
    CHECK_FALSE(std::getline(lines, extra));  // failed entries carry no metrics row

    // Parse row1 back and compare at 4 decimal places.
    std::istringstream fields(row1.substr(6));
    std::string tok;
    std::getline(fields, tok, ',');
    CHECK(std::abs(std::stod(tok) - 7.12345) <= 5.1e-5);
    std::getline(fields, tok, ',');
    CHECK(std::stod(tok) == doctest::Approx(0.2).epsilon(1e-9));
    std::getline(fields, tok, ',');
    CHECK(std::abs(std::stod(tok) - 0.987654) <= 5.1e-5);
}

TEST_CASE("single record report serializes the config echo") {
    FusionConfig cfg;
    cfg.n_levels = 3;
    cfg.haze_map_mode = HazeMapMode::minmax;
    cfg.histogram_bins = 128;
    MetricsReport m;
    const std::string json = report_json({ReportRecord{"x", cfg, m, "", 2.5}});
    const auto parsed = nlohmann::json::parse(json);
    CHECK(parsed[0]["config"]["levels"] == 3);
    CHECK(parsed[0]["config"]["haze_map"] == "minmax");
    CHECK(parsed[0]["config"]["bins"] == 128);

    const std::string failure = report_json({ReportRecord{"y", cfg, std::nullopt, "bad", 0.0}});
    const auto parsed_failure = nlohmann::json::parse(failure);
    CHECK(parsed_failure[0]["error"] == "bad");
    CHECK_FALSE(parsed_failure[0].contains("metrics"));
}

TEST_CASE("haze map mode names") {
    CHECK(std::string(to_string(HazeMapMode::scale)) == "scale");
    CHECK(std::string(to_string(HazeMapMode::minmax)) == "minmax");
    CHECK(haze_map_mode_from_string("minmax") == HazeMapMode::minmax);
    CHECK_THROWS_AS(haze_map_mode_from_string("nope"), std::invalid_argument);
}

// End-to-end tests that drive the installed CLI binary as a subprocess:
// exit codes, output files, determinism, config precedence, and the
// output-directory environment override.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "lesionseg/image_io.hpp"
#include "lesionseg/raster.hpp"

using namespace lesionseg;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("lesionseg_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

std::string q(const std::string& s) { return "'" + s + "'"; }

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const fs::path capture =
        fs::temp_directory_path() /
        ("lesionseg_cli_out_" + std::to_string(::getpid()) + "_" +
         std::to_string(counter++) + ".txt");
    std::string cmd = env_prefix;
    if (!cmd.empty())
        cmd += " ";
    cmd += q(LESIONSEG_CLI_PATH) + " " + args + " >" + q(capture.string()) +
           " 2>&1";

    CliResult result;
    const int status = std::system(cmd.c_str());
    if (status != -1 && WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);

    std::ifstream in(capture);
    std::stringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    std::error_code ec;
    fs::remove(capture, ec);
    return result;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("help exits zero and names the subcommands") {
    const CliResult r = run_cli("--help");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "segment"));
    CHECK(contains(r.output, "synth"));
    CHECK(contains(r.output, "eval"));
}

TEST_CASE("argument errors exit one, io errors exit two") {
    // Missing required --mask.
    CHECK(run_cli("segment some.png").exit_code == 1);
    // No subcommand at all.
    CHECK(run_cli("").exit_code == 1);
    // Unreadable input image.
    TempDir dir;
    CHECK(run_cli("segment " + q(dir.file("missing.png")) + " --mask " +
                  q(dir.file("m.png")))
              .exit_code == 2);
    // Bad flag values surface as processing errors.
    const std::string input = dir.file("in.png");
    REQUIRE(run_cli("synth --seed 1 --out " + q(input)).exit_code == 0);
    CHECK(run_cli("segment " + q(input) + " --mask " + q(dir.file("m.png")) +
                  " --channel cyan")
              .exit_code == 1);
    CHECK(run_cli("segment " + q(input) + " --mask " + q(dir.file("m.png")) +
                  " --method otsu --roi 10,10,0,5")
              .exit_code == 1);
    // Unwritable mask output.
    CHECK(run_cli("segment " + q(input) +
                  " --mask /proc/nonexistent/m.png --method otsu")
              .exit_code == 2);
}

TEST_CASE("synth writes a deterministic image and a strict mask") {
    TempDir dir;
    const std::string args =
        "synth --seed 5 --shape ellipse --a 60 --b 40 --theta 0.7 --noise 5 "
        "--softness 1";
    REQUIRE(run_cli(args + " --out " + q(dir.file("a.png")) + " --mask " +
                    q(dir.file("am.png")))
                .exit_code == 0);
    REQUIRE(run_cli(args + " --out " + q(dir.file("b.png")) + " --mask " +
                    q(dir.file("bm.png")))
                .exit_code == 0);
    CHECK(read_file(dir.file("a.png")) == read_file(dir.file("b.png")));
    CHECK(read_file(dir.file("am.png")) == read_file(dir.file("bm.png")));

    const RasterImage img = read_image(dir.file("a.png"));
    CHECK(img.width == 256);
    CHECK(img.height == 256);
    CHECK(img.channels == 3);
    const BinaryMask mask = read_mask(dir.file("am.png"));
    CHECK(mask.width == 256);
    CHECK(mask.count() > 0);
    CHECK(mask.count() < 256u * 256u);

    // A different seed must change the image.
    REQUIRE(run_cli("synth --seed 6 --shape ellipse --a 60 --b 40 --theta 0.7 "
                    "--noise 5 --softness 1 --out " +
                    q(dir.file("c.png")))
                .exit_code == 0);
    CHECK(read_file(dir.file("a.png")) != read_file(dir.file("c.png")));
}

TEST_CASE("segment snake writes mask, overlay, keypoints, and trace") {
    TempDir dir;
    const std::string input = dir.file("in.png");
    REQUIRE(run_cli("synth --seed 2 --radius 50 --noise 4 --out " + q(input))
                .exit_code == 0);

    const CliResult r = run_cli(
        "segment " + q(input) + " --method snake --iterations 80 --points 24 " +
        "--alpha 0.05 --beta 0.1 --gamma 10 --smoothing-sigma 4 --mask " +
        q(dir.file("mask.png")) + " --overlay " + q(dir.file("overlay.png")) +
        " --dump-keypoints " + q(dir.file("kp.json")) + " --trace " +
        q(dir.file("trace.csv")));
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.output, "method: snake"));
    CHECK(contains(r.output, "init: hull"));
    CHECK(contains(r.output, "keypoints:"));
    CHECK(contains(r.output, "sweeps:"));

    const BinaryMask mask = read_mask(dir.file("mask.png"));
    CHECK(mask.count() > 0);

    // The overlay differs from the input only by pure-green contour pixels.
    const RasterImage base = read_image(input);
    const RasterImage over = read_image(dir.file("overlay.png"));
    REQUIRE(over.width == base.width);
    REQUIRE(over.height == base.height);
    REQUIRE(over.channels == 3);
    std::size_t changed = 0;
    bool all_green = true;
    for (int y = 0; y < base.height; ++y)
        for (int x = 0; x < base.width; ++x) {
            const bool same = base.at(x, y, 0) == over.at(x, y, 0) &&
                              base.at(x, y, 1) == over.at(x, y, 1) &&
                              base.at(x, y, 2) == over.at(x, y, 2);
            if (same)
                continue;
            ++changed;
            if (over.at(x, y, 0) != 0 || over.at(x, y, 1) != 255 ||
                over.at(x, y, 2) != 0)
                all_green = false;
        }
    CHECK(changed > 0);
    CHECK(all_green);

    const auto keypoints = nlohmann::json::parse(read_file(dir.file("kp.json")));
    REQUIRE(keypoints.is_array());
    for (const auto& kp : keypoints) {
        CHECK(kp.contains("x"));
        CHECK(kp.contains("y"));
        CHECK(kp.contains("scale"));
        CHECK(kp.contains("response"));
    }

    const std::string trace = read_file(dir.file("trace.csv"));
    CHECK(trace.rfind("iteration,elastic,bending,image,total\n", 0) == 0);

    // Re-running with identical flags reproduces every output byte.
    const CliResult r2 = run_cli(
        "segment " + q(input) + " --method snake --iterations 80 --points 24 " +
        "--alpha 0.05 --beta 0.1 --gamma 10 --smoothing-sigma 4 --mask " +
        q(dir.file("mask2.png")) + " --overlay " + q(dir.file("overlay2.png")) +
        " --dump-keypoints " + q(dir.file("kp2.json")) + " --trace " +
        q(dir.file("trace2.csv")));
    REQUIRE(r2.exit_code == 0);
    CHECK(read_file(dir.file("mask.png")) == read_file(dir.file("mask2.png")));
    CHECK(read_file(dir.file("overlay.png")) ==
          read_file(dir.file("overlay2.png")));
    CHECK(read_file(dir.file("kp.json")) == read_file(dir.file("kp2.json")));
    CHECK(read_file(dir.file("trace.csv")) == read_file(dir.file("trace2.csv")));
}

TEST_CASE("segment otsu reports classes and respects the lesion rule") {
    TempDir dir;
    const std::string input = dir.file("in.png");
    REQUIRE(run_cli("synth --seed 9 --radius 60 --noise 5 --out " + q(input))
                .exit_code == 0);

    const CliResult r = run_cli("segment " + q(input) +
                                " --method otsu --classes 3 --lesion darkest "
                                "--mask " +
                                q(dir.file("mask.png")));
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.output, "method: otsu"));
    CHECK(contains(r.output, "classes: 3"));
    const BinaryMask darkest = read_mask(dir.file("mask.png"));
    CHECK(darkest.count() > 0);

    REQUIRE(run_cli("segment " + q(input) +
                    " --method otsu --classes 3 --lesion brightest --mask " +
                    q(dir.file("bright.png")))
                .exit_code == 0);
    const BinaryMask brightest = read_mask(dir.file("bright.png"));
    // Darkest and brightest classes are disjoint.
    std::uint64_t overlap = 0;
    for (int y = 0; y < darkest.height; ++y)
        for (int x = 0; x < darkest.width; ++x)
            overlap += darkest.at(x, y) && brightest.at(x, y) ? 1 : 0;
    CHECK(overlap == 0);
}

TEST_CASE("features prints a report or writes it to a file") {
    TempDir dir;
    const std::string input = dir.file("lesion.png");
    REQUIRE(run_cli("synth --seed 4 --radius 45 --out " + q(input) + " --mask " +
                    q(dir.file("truth.png")))
                .exit_code == 0);

    const CliResult to_stdout =
        run_cli("features " + q(input) + " --mask " + q(dir.file("truth.png")));
    REQUIRE(to_stdout.exit_code == 0);
    const auto report = nlohmann::json::parse(to_stdout.output);
    CHECK(report["image_id"] == "lesion"); // defaults to the input stem
    CHECK(report.contains("lesion"));
    CHECK(report.contains("healthy"));

    const CliResult to_file =
        run_cli("features " + q(input) + " --mask " + q(dir.file("truth.png")) +
                " --id sample7 --out " + q(dir.file("report.json")));
    REQUIRE(to_file.exit_code == 0);
    const auto from_file =
        nlohmann::json::parse(read_file(dir.file("report.json")));
    CHECK(from_file["image_id"] == "sample7");
}

TEST_CASE("eval pairs masks by stem and rejects unmatched sets") {
    TempDir dir;
    fs::create_directories(dir.path / "pred");
    fs::create_directories(dir.path / "ref");
    REQUIRE(run_cli("synth --seed 3 --radius 40 --out " + q(dir.file("i.png")) +
                    " --mask " + q((dir.path / "pred" / "case1.png").string()))
                .exit_code == 0);
    fs::copy_file(dir.path / "pred" / "case1.png", dir.path / "ref" / "case1.png");

    const CliResult r = run_cli(
        "eval --pred " + q((dir.path / "pred").string()) + " --ref " +
        q((dir.path / "ref").string()) + " --csv " + q(dir.file("e.csv")) +
        " --json " + q(dir.file("e.json")));
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.output, "average recall: 100.00%"));
    CHECK(contains(r.output, "average precision: 100.00%"));

    const std::string csv = read_file(dir.file("e.csv"));
    CHECK(csv.rfind("id,recall,precision\n", 0) == 0);
    CHECK(contains(csv, "case1,100.00,100.00"));
    CHECK(contains(csv, "AVERAGE,100.00,100.00"));
    const auto j = nlohmann::json::parse(read_file(dir.file("e.json")));
    CHECK(j["average_recall"] == 100.0);

    // A reference with no matching prediction is an error.
    fs::copy_file(dir.path / "ref" / "case1.png", dir.path / "ref" / "case2.png");
    const CliResult bad = run_cli("eval --pred " +
                                  q((dir.path / "pred").string()) + " --ref " +
                                  q((dir.path / "ref").string()));
    CHECK(bad.exit_code == 1);
    CHECK(contains(bad.output, "case2"));
}

TEST_CASE("overlay command draws the mask boundary in green") {
    TempDir dir;
    const std::string input = dir.file("in.png");
    REQUIRE(run_cli("synth --seed 11 --radius 55 --out " + q(input) +
                    " --mask " + q(dir.file("m.png")))
                .exit_code == 0);
    REQUIRE(run_cli("overlay " + q(input) + " --mask " + q(dir.file("m.png")) +
                    " --out " + q(dir.file("ov.png")))
                .exit_code == 0);

    const RasterImage base = read_image(input);
    const RasterImage over = read_image(dir.file("ov.png"));
    std::size_t green = 0;
    for (int y = 0; y < base.height; ++y)
        for (int x = 0; x < base.width; ++x)
            if (over.at(x, y, 0) == 0 && over.at(x, y, 1) == 255 &&
                over.at(x, y, 2) == 0)
                ++green;
    CHECK(green > 100); // a radius-55 boundary has hundreds of edge pixels
}

TEST_CASE("output directory environment variable prefixes relative paths") {
    TempDir dir;
    const CliResult r =
        run_cli("synth --seed 8 --out rel_img.png --mask rel_mask.png",
                "LESIONSEG_OUT_DIR=" + q(dir.path.string()));
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir.path / "rel_img.png"));
    CHECK(fs::exists(dir.path / "rel_mask.png"));
}

TEST_CASE("config file supplies defaults and explicit flags win") {
    TempDir dir;
    const std::string input = dir.file("in.png");
    REQUIRE(run_cli("synth --seed 12 --radius 50 --out " + q(input))
                .exit_code == 0);

    {
        std::ofstream cfg(dir.file("seg.toml"));
        cfg << "[segment]\n"
            << "method=otsu\n"
            << "classes=3\n";
    }

    // --config belongs to the top-level app, so it precedes the subcommand.
    const CliResult from_config =
        run_cli("--config " + q(dir.file("seg.toml")) + " segment " + q(input) +
                " --mask " + q(dir.file("m1.png")));
    REQUIRE(from_config.exit_code == 0);
    CHECK(contains(from_config.output, "method: otsu"));
    CHECK(contains(from_config.output, "classes: 3"));

    const CliResult flag_wins =
        run_cli("--config " + q(dir.file("seg.toml")) + " segment " + q(input) +
                " --mask " + q(dir.file("m2.png")) + " --classes 4");
    REQUIRE(flag_wins.exit_code == 0);
    CHECK(contains(flag_wins.output, "method: otsu"));
    CHECK(contains(flag_wins.output, "classes: 4"));
}

TEST_CASE("suite generation writes twenty images, masks, and a manifest") {
    TempDir dir;
    const std::string suite = (dir.path / "suite").string();
    REQUIRE(run_cli("synth --suite " + q(suite)).exit_code == 0);

    const auto manifest =
        nlohmann::json::parse(read_file(suite + "/manifest.json"));
    CHECK(manifest["suite"] == "synth20");
    REQUIRE(manifest["cases"].size() == 20);
    for (const auto& c : manifest["cases"]) {
        const std::string id = c["id"];
        CHECK(fs::exists(fs::path(suite) / (id + ".png")));
        CHECK(fs::exists(fs::path(suite) / (id + "_mask.png")));
    }
}

} // TEST_SUITE

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "catch2/catch_amalgamated.hpp"
#include "strictlab/manifest.hpp"
#include "strictlab/runner.hpp"

using namespace strictlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "strictlab_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_manifest(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "manifest.txt";
    std::ofstream out(p);
    out << text;
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(STRICTLAB_CLI_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

const char* kSmallManifest =
    "# desk-scale smoke manifest\n"
    "preset_R = 2\n"
    "preset_delta = 0.1\n"
    "L = 4\n"
    "beta = 0.2, 1.0\n"
    "therm_sweeps = 20\n"
    "measure_sweeps = 60\n"
    "measure_stride = 2\n"
    "seed = 777\n";

}  // namespace

TEST_CASE("manifest parsing and diagnostics", "[cli]") {
    const auto m = ExperimentManifest::parse_string(kSmallManifest);
    CHECK(m.is_preset());
    CHECK(m.lattice_size() == 4);
    CHECK(m.betas() == std::vector<double>{0.2, 1.0});
    CHECK(m.get_u64("seed", 0) == 777);
    const ModelParams p = m.build_params();
    CHECK(p.profile.U == 8.0);

    CHECK_THROWS_WITH(ExperimentManifest::parse_string("L = 4\n"),
                      Catch::Matchers::ContainsSubstring("either preset"));
    CHECK_THROWS_WITH(
        ExperimentManifest::parse_string("preset_R = 2\npreset_delta = 0.1\nmu = 1\n"),
        Catch::Matchers::ContainsSubstring("mixes"));
    CHECK_THROWS_WITH(
        ExperimentManifest::parse_string("preset_R = 2\npreset_delta = 0.1\njunk\n"),
        Catch::Matchers::ContainsSubstring("line 3"));
    CHECK_THROWS_WITH(
        ExperimentManifest::parse_string(
            "preset_R = 2\npreset_delta = 0.1\nbeta = 0.1, x\n"),
        Catch::Matchers::ContainsSubstring("field beta"));
}

TEST_CASE("explicit parameter block", "[cli]") {
    const auto m = ExperimentManifest::parse_string(
        "mu = 1\nlambda = 0.5\nR = 2\neps = 0.4\nrho = 0.5\n"
        "U = 8\nU_bar = 8.04\nu = 0.1\nL = 4\nbeta = 1\n");
    const ModelParams p = m.build_params();
    CHECK(p.lambda == 0.5);
    CHECK(p.profile.rho == 0.5);
    CHECK_FALSE(m.is_preset());
}

TEST_CASE("manifest hash is stable and content-sensitive", "[cli]") {
    const auto a = ExperimentManifest::parse_string(kSmallManifest);
    const auto b = ExperimentManifest::parse_string(kSmallManifest);
    CHECK(a.hash() == b.hash());
    const auto c = ExperimentManifest::parse_string(std::string(kSmallManifest) +
                                                    "measure_stride = 3\n");
    CHECK(a.hash() != c.hash());
}

TEST_CASE("simulate writes deterministic CSV output", "[cli]") {
    const auto dir = scratch_dir("simulate");
    const auto manifest = write_manifest(dir, kSmallManifest);

    runner::Options opt{manifest.string(), (dir / "out1").string(), std::nullopt, 1};
    REQUIRE(runner::dispatch("simulate", opt) == runner::kExitOk);
    opt.out_dir = (dir / "out2").string();
    opt.threads = 3;
    REQUIRE(runner::dispatch("simulate", opt) == runner::kExitOk);

    const std::string s1 = slurp(dir / "out1" / "summary.csv");
    CHECK(s1 == slurp(dir / "out2" / "summary.csv"));
    CHECK(slurp(dir / "out1" / "series.csv") == slurp(dir / "out2" / "series.csv"));
    CHECK(s1.rfind("# manifest_hash=", 0) == 0);
    CHECK(s1.find("seed=777") != std::string::npos);
    CHECK(s1.find("phase") != std::string::npos);
}

TEST_CASE("cli binary exit codes", "[cli]") {
    const auto dir = scratch_dir("cli_exit");
    const auto manifest = write_manifest(dir, kSmallManifest);

    CHECK(run_cli("simulate --manifest " + manifest.string() + " --out " +
                  (dir / "ok").string()) == 0);

    // invalid manifest -> 1
    const auto bad = dir / "bad.txt";
    std::ofstream(bad) << "L = 4\nbeta = 1\n";
    CHECK(run_cli("simulate --manifest " + bad.string() + " --out " +
                  (dir / "x").string()) == 1);

    // missing manifest file -> 1
    CHECK(run_cli("simulate --manifest " + (dir / "nope.txt").string() +
                  " --out " + (dir / "y").string()) == 1);

    // unwritable output path (a regular file where the directory should go) -> 2
    const auto blocker = dir / "blocker";
    std::ofstream(blocker) << "x";
    CHECK(run_cli("simulate --manifest " + manifest.string() + " --out " +
                  blocker.string()) == 2);

    // oracle cap exceeded -> 3
    const auto cap = write_manifest(scratch_dir("cli_cap"),
                                    "preset_R = 2\npreset_delta = 0.1\nL = 2\n"
                                    "beta = 1\nmeasure_sweeps = 10\n"
                                    "r_mode = grid\ngrid_size = 12\n");
    CHECK(run_cli("oracle --manifest " + cap.string() + " --out " +
                  (dir / "cap").string()) == 3);
}

TEST_CASE("bounds command emits report and regime verdict", "[cli]") {
    const auto dir = scratch_dir("bounds");
    const auto manifest = write_manifest(
        dir,
        "preset_R = 2\npreset_delta = 0.1\nL = 4\nbeta = 0.1, 0.5, 2.0\n");
    runner::Options opt{manifest.string(), (dir / "out").string(), std::nullopt, 1};
    REQUIRE(runner::dispatch("bounds", opt) == runner::kExitOk);

    const std::string bounds_csv = slurp(dir / "out" / "bounds.csv");
    CHECK(bounds_csv.find("pair_bound") != std::string::npos);
    // header + 3 beta rows + column header
    CHECK(std::count(bounds_csv.begin(), bounds_csv.end(), '\n') == 5);

    const std::string regime = slurp(dir / "out" / "regime.txt");
    CHECK(regime.find("FAIL") != std::string::npos);  // desk scale fails the chain
    CHECK(regime.find("cond_2_12") != std::string::npos);
    CHECK(regime.find("verdict") != std::string::npos);
}

TEST_CASE("oracle command writes report and comparison", "[cli]") {
    const auto dir = scratch_dir("oracle_cmd");
    const auto manifest = write_manifest(
        dir,
        "preset_R = 2\npreset_delta = 0.1\nL = 2\nbeta = 0.5\n"
        "therm_sweeps = 100\nmeasure_sweeps = 3000\nr_mode = grid\n"
        "grid_size = 4\nseed = 11\n");
    runner::Options opt{manifest.string(), (dir / "out").string(), std::nullopt, 1};
    REQUIRE(runner::dispatch("oracle", opt) == runner::kExitOk);

    const std::string oracle_csv = slurp(dir / "out" / "oracle.csv");
    CHECK(oracle_csv.find("chessboard_gt_holds") != std::string::npos);
    const std::string cmp = slurp(dir / "out" / "comparison.csv");
    CHECK(cmp.find("pair_lt_gt") != std::string::npos);

    // L != 2 rejected
    const auto bad = write_manifest(scratch_dir("oracle_l4"),
                                    "preset_R = 2\npreset_delta = 0.1\nL = 4\n"
                                    "beta = 0.5\n");
    runner::Options opt2{bad.string(), (dir / "out2").string(), std::nullopt, 1};
    CHECK(runner::dispatch("oracle", opt2) == runner::kExitInvalid);
}

TEST_CASE("hysteresis command records both directions", "[cli]") {
    const auto dir = scratch_dir("hysteresis");
    const auto manifest = write_manifest(
        dir,
        "preset_R = 2\npreset_delta = 0.1\nL = 4\nbeta = 0.3, 0.6\n"
        "therm_sweeps = 10\nmeasure_sweeps = 20\nseed = 5\n");
    runner::Options opt{manifest.string(), (dir / "out").string(), std::nullopt, 1};
    REQUIRE(runner::dispatch("hysteresis", opt) == runner::kExitOk);
    const std::string summary = slurp(dir / "out" / "summary.csv");
    CHECK(summary.find(",up,") != std::string::npos);
    CHECK(summary.find(",down,") != std::string::npos);
    // 2 betas x 2 directions + comment + column header
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 6);
}

TEST_CASE("seed override changes the output", "[cli]") {
    const auto dir = scratch_dir("seed_override");
    const auto manifest = write_manifest(dir, kSmallManifest);
    runner::Options a{manifest.string(), (dir / "a").string(), std::nullopt, 1};
    runner::Options b{manifest.string(), (dir / "b").string(),
                      std::uint64_t{123456}, 1};
    REQUIRE(runner::dispatch("simulate", a) == runner::kExitOk);
    REQUIRE(runner::dispatch("simulate", b) == runner::kExitOk);
    CHECK(slurp(dir / "a" / "series.csv") != slurp(dir / "b" / "series.csv"));
    CHECK(slurp(dir / "b" / "summary.csv").find("seed=123456") !=
          std::string::npos);
}

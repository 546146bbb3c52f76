#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "msdet/annot_io.hpp"
#include "msdet/io_util.hpp"

// Exercises the installed binary end to end. The test runner exports
// MSDET_CLI with the tool path; without it these cases are skipped.

namespace {

namespace fs = std::filesystem;

const char* cli_path() { return std::getenv("MSDET_CLI"); }

struct RunResult {
  int exit_code;
  std::string output;  // stdout only
};

RunResult run(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "msdet_cli_stdout.txt";
  const std::string command =
      std::string(cli_path()) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  result.output = ss.str();
  return result;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("cli contract") {
  if (!cli_path()) {
    MESSAGE("MSDET_CLI not set; skipping CLI tests");
    return;
  }

  SUBCASE("--version exits cleanly") {
    const auto r = run("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("msdet") != std::string::npos);
  }

  SUBCASE("missing required flags exit 1") {
    CHECK(run("eval").exit_code == 1);
    CHECK(run("synth").exit_code == 1);
  }

  SUBCASE("unknown flags are rejected") {
    CHECK(run("synth --seed 1 --frames 1 --out /tmp/x --bogus-flag 3").exit_code == 1);
  }

  SUBCASE("nonexistent inputs exit 1") {
    CHECK(run("eval --gt /nonexistent-gt-dir --dets /nonexistent.csv").exit_code == 1);
  }

  SUBCASE("synth then eval round trip") {
    const fs::path dir = fresh_dir("msdet_cli_synth");
    const auto synth = run("synth --seed 7 --frames 12 --recall 0.8 --fppi 0.4 --out " +
                           dir.string());
    REQUIRE(synth.exit_code == 0);
    CHECK(fs::exists(dir / "dataset.json"));
    CHECK(fs::exists(dir / "detections.csv"));
    CHECK(fs::exists(dir / "frames.txt"));
    CHECK(fs::is_directory(dir / "annotations"));

    const auto eval = run("eval --gt " + (dir / "annotations").string() + " --dets " +
                          (dir / "detections.csv").string() + " --frames " +
                          (dir / "frames.txt").string() + " --subset all");
    CHECK(eval.exit_code == 0);
    CHECK(eval.output.find("MR-all: ") != std::string::npos);
    CHECK(eval.output.find('%') != std::string::npos);

    // canonical dataset input gives the same number
    const auto eval_json = run("eval --gt " + (dir / "dataset.json").string() + " --dets " +
                               (dir / "detections.csv").string() + " --subset all");
    CHECK(eval_json.exit_code == 0);
    CHECK(eval_json.output == eval.output);
  }

  SUBCASE("synth twice produces identical trees") {
    const fs::path a = fresh_dir("msdet_cli_det_a");
    const fs::path b = fresh_dir("msdet_cli_det_b");
    REQUIRE(run("synth --seed 11 --frames 6 --out " + a.string()).exit_code == 0);
    REQUIRE(run("synth --seed 11 --frames 6 --out " + b.string()).exit_code == 0);
    CHECK(msdet::read_file(a / "dataset.json") == msdet::read_file(b / "dataset.json"));
    CHECK(msdet::read_file(a / "detections.csv") == msdet::read_file(b / "detections.csv"));
  }

  SUBCASE("JSON config files supply options, flags override") {
    const fs::path dir = fresh_dir("msdet_cli_cfg");
    REQUIRE(run("synth --seed 5 --frames 6 --out " + dir.string()).exit_code == 0);
    std::ofstream cfg(dir / "cfg.json");
    cfg << "{\n  \"eval\": {\n    \"gt\": \"" << (dir / "dataset.json").string()
        << "\",\n    \"dets\": \"" << (dir / "detections.csv").string()
        << "\",\n    \"subset\": \"day\"\n  }\n}\n";
    cfg.close();

    const auto from_file = run("--config " + (dir / "cfg.json").string() + " eval");
    CHECK(from_file.exit_code == 0);
    CHECK(from_file.output.find("MR-day") != std::string::npos);

    const auto overridden =
        run("--config " + (dir / "cfg.json").string() + " eval --subset night");
    CHECK(overridden.exit_code == 0);
    CHECK(overridden.output.find("MR-night") != std::string::npos);
  }

  SUBCASE("--json summaries parse") {
    const fs::path dir = fresh_dir("msdet_cli_json");
    REQUIRE(run("synth --seed 3 --frames 8 --recall 0.9 --out " + dir.string()).exit_code == 0);
    const auto r = run("--json eval --gt " + (dir / "dataset.json").string() + " --dets " +
                       (dir / "detections.csv").string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"mr\"") != std::string::npos);
  }
}

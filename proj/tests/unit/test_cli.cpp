#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "proxmon/cli.hpp"
#include "temp_dir.hpp"

namespace fs = std::filesystem;
using proxmon::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// Dense scene so every proximity category shows up in a short run.
constexpr const char* kDenseScene = R"({
  "bounds": {"x_min": -25.0, "x_max": 25.0, "z_min": -25.0, "z_max": 25.0},
  "worker_count": 60,
  "vehicle": {"scheme": "static", "start_position": [0.0, 0.0]}
})";

Result generate(const fs::path& out, std::vector<std::string> extra = {}) {
  std::vector<std::string> args{"generate", "--out", out.string()};
  args.insert(args.end(), extra.begin(), extra.end());
  return cli(args);
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"detect"}).code, 2);
}

TEST(Cli, GenerateTimestampsAndHeader) {
  TempDir tmp;
  auto r = generate(tmp.path(), {"--frames", "10", "--dt", "0.2", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("# ", 0), 0u);
  EXPECT_NE(r.out.find("\"seed\":7"), std::string::npos);
  const fs::path ds = tmp.path() / "front";
  int files = 0;
  for (const auto& e : fs::directory_iterator(ds)) {
    files += e.path().filename().string().rfind("frame_", 0) == 0;
  }
  EXPECT_EQ(files, 10);
  EXPECT_NE(slurp(ds / "frame_000009.json").find("\"timestamp\": 1.8,"), std::string::npos);
  EXPECT_NE(slurp(ds / "frame_000003.json").find("\"timestamp\": 0.6,"), std::string::npos);
  EXPECT_TRUE(fs::exists(tmp.path() / "sim_config.json"));
  EXPECT_FALSE(fs::exists(tmp.path() / ".proxmon-staging"));
}

TEST(Cli, GenerateDeterministic) {
  TempDir a;
  TempDir b;
  ASSERT_EQ(generate(a.path(), {"--preset", "table3-front", "--seed", "7", "--frames", "15"}).code,
            0);
  ASSERT_EQ(generate(b.path(), {"--preset", "table3-front", "--seed", "7", "--frames", "15"}).code,
            0);
  for (const auto& e : fs::recursive_directory_iterator(a.path())) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), a.path());
    EXPECT_EQ(slurp(e.path()), slurp(b.path() / rel)) << rel;
  }
}

TEST(Cli, GenerateMissingOutputDirectory) {
  TempDir tmp;
  const fs::path missing = tmp.path() / "nope";
  auto r = generate(missing, {"--frames", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(fs::exists(missing));
}

TEST(Cli, GenerateRefusesToOverwrite) {
  TempDir tmp;
  ASSERT_EQ(generate(tmp.path(), {"--frames", "3"}).code, 0);
  const std::string before = slurp(tmp.path() / "front" / "frame_000000.json");
  EXPECT_EQ(generate(tmp.path(), {"--frames", "3", "--seed", "9"}).code, 2);
  EXPECT_EQ(slurp(tmp.path() / "front" / "frame_000000.json"), before);
}

TEST(Cli, GenerateUsesEnvironmentOutputDir) {
  TempDir tmp;
  ::setenv(proxmon::cli::kOutputDirEnv, tmp.path().c_str(), 1);
  auto r = cli({"generate", "--frames", "2"});
  ::unsetenv(proxmon::cli::kOutputDirEnv);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(tmp.path() / "front" / "manifest.json"));
}

TEST(Cli, GenerateConfigErrors) {
  TempDir tmp;
  EXPECT_EQ(generate(tmp.path(), {"--preset", "nosuch"}).code, 2);
  EXPECT_EQ(generate(tmp.path(), {"--dt", "-1"}).code, 2);
  spit(tmp.path() / "bad.json", "{\"worker_count\": \"many\"}");
  EXPECT_EQ(generate(tmp.path(), {"--config", (tmp.path() / "bad.json").string()}).code, 2);
}

TEST(Cli, MonitorEmptyDetections) {
  TempDir tmp;
  ASSERT_EQ(generate(tmp.path(), {"--frames", "5"}).code, 0);
  spit(tmp.path() / "empty.json", "");
  for (const char* mode : {"live", "eval"}) {
    auto r = cli({"monitor", "--dataset", (tmp.path() / "front").string(), "--detections",
                  (tmp.path() / "empty.json").string(), "--mode", mode, "--out",
                  (tmp.path() / "mon.jsonl").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("I=0 II=0 III=0 IV=0"), std::string::npos);
    EXPECT_NE(r.out.find("events=0"), std::string::npos);
  }
  EXPECT_EQ(cli({"monitor", "--dataset", (tmp.path() / "front").string(), "--detections",
                 (tmp.path() / "empty.json").string(), "--mode", "sideways"})
                .code,
            2);
}

TEST(Cli, BadDetectionsAreInputErrors) {
  TempDir tmp;
  ASSERT_EQ(generate(tmp.path(), {"--frames", "3"}).code, 0);
  const std::string ds = (tmp.path() / "front").string();
  spit(tmp.path() / "bad.json", "{\"frames\": [");
  spit(tmp.path() / "mismatch.json", R"({"frames": [{"frame_index": 99, "detections": []}]})");
  for (const char* f : {"bad.json", "mismatch.json"}) {
    EXPECT_EQ(cli({"monitor", "--dataset", ds, "--detections", (tmp.path() / f).string()}).code, 3);
    EXPECT_EQ(cli({"evaluate", "--dataset", ds, "--detections", (tmp.path() / f).string(), "--out",
                   (tmp.path() / "ev").string()})
                  .code,
              3);
  }
  fs::remove(tmp.path() / "front" / "frame_000001.json");
  EXPECT_EQ(cli({"detect", "--dataset", ds}).code, 3);
}

TEST(Cli, DetectThenEvaluateMatchesNoiseFlag) {
  TempDir tmp;
  spit(tmp.path() / "scene.json", kDenseScene);
  ASSERT_EQ(generate(tmp.path(), {"--config", (tmp.path() / "scene.json").string(), "--frames",
                                  "20", "--seed", "4"})
                .code,
            0);
  const std::string ds = (tmp.path() / "front").string();
  ASSERT_EQ(cli({"detect", "--dataset", ds, "--noise", "paper-trend", "--seed", "3"}).code, 0);
  auto a = cli({"evaluate", "--dataset", ds, "--detections", ds + "/detections.json", "--out",
                (tmp.path() / "a").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  auto b = cli({"evaluate", "--dataset", ds, "--noise", "paper-trend", "--seed", "3", "--out",
                (tmp.path() / "b").string()});
  ASSERT_EQ(b.code, 0) << b.err;
  for (const char* f : {"detection_ap.csv", "classification.csv", "classification_summary.csv", "pr_curves.csv"}) {
    EXPECT_EQ(slurp(tmp.path() / "a" / f), slurp(tmp.path() / "b" / f)) << f;
  }
}

TEST(Cli, EvaluatePerfectNoiseGivesOnes) {
  TempDir tmp;
  spit(tmp.path() / "scene.json", kDenseScene);
  ASSERT_EQ(generate(tmp.path(), {"--config", (tmp.path() / "scene.json").string(), "--frames",
                                  "40", "--seed", "11"})
                .code,
            0);
  const fs::path out = tmp.path() / "eval";
  auto r = cli({"evaluate", "--dataset", (tmp.path() / "front").string(), "--noise", "perfect",
                "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream rows_in(slurp(out / "classification.csv"));
  std::string line;
  std::getline(rows_in, line);
  EXPECT_EQ(line, "Dataset,Range,R_exclusion,Proximity category,TP,FP,FN,Precision,Recall,F1");
  int rows = 0;
  while (std::getline(rows_in, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.size() - 15), ",1.00,1.00,1.00") << line;
  }
  EXPECT_EQ(rows, 2 * 3 * 5);
  EXPECT_NE(slurp(out / "classification_summary.csv").find("Mean,1.00,1.00,1.00"), std::string::npos);
  EXPECT_NE(slurp(out / "detection_ap.csv").find("\"(0, inf)\""), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "records_table3-front_front_rexcl4.json"));
}

TEST(Cli, ReportRegeneratesTables) {
  TempDir tmp;
  spit(tmp.path() / "scene.json", kDenseScene);
  ASSERT_EQ(generate(tmp.path(), {"--config", (tmp.path() / "scene.json").string(), "--frames",
                                  "20"})
                .code,
            0);
  const fs::path ev = tmp.path() / "eval";
  ASSERT_EQ(cli({"evaluate", "--dataset", (tmp.path() / "front").string(), "--noise", "stress",
                 "--r-exclusion", "4,7", "--out", ev.string()})
                .code,
            0);
  const fs::path rep = tmp.path() / "report";
  auto r = cli({"report", "--eval-dir", ev.string(), "--out", rep.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(rep / "classification.csv"), slurp(ev / "classification.csv"));
  EXPECT_EQ(slurp(rep / "classification_summary.csv"), slurp(ev / "classification_summary.csv"));
  EXPECT_EQ(cli({"report", "--eval-dir", (tmp.path() / "missing").string()}).code, 2);
}

TEST(Cli, EvaluateRejectsBadSettings) {
  TempDir tmp;
  ASSERT_EQ(generate(tmp.path(), {"--frames", "2"}).code, 0);
  const std::string ds = (tmp.path() / "front").string();
  const std::string out = (tmp.path() / "ev").string();
  EXPECT_EQ(cli({"evaluate", "--dataset", ds, "--out", out}).code, 2);
  EXPECT_EQ(cli({"evaluate", "--dataset", ds, "--noise", "perfect", "--range", "9:3", "--out", out})
                .code,
            2);
  EXPECT_EQ(cli({"evaluate", "--dataset", ds, "--noise", "perfect", "--iou-threshold", "0", "--out",
                 out})
                .code,
            2);
  EXPECT_EQ(cli({"evaluate", "--dataset", ds, "--noise", "perfect", "--r-warning", "3", "--r-exclusion",
                 "4", "--out", out})
                .code,
            2);
}

#pragma once

// Command-line front end: generate, detect, monitor, evaluate, report.

#include <iosfwd>
#include <string>
#include <vector>

#include "proxmon/dataset.hpp"
#include "proxmon/detection.hpp"
#include "proxmon/metrics.hpp"
#include "proxmon/proximity.hpp"

namespace proxmon::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kInputFormatError = 3,
  kInternalError = 4,
};

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "PROXMON_OUTPUT_DIR";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Pipeline helpers shared by the commands and the test suites.
std::vector<metrics::APFrame> build_ap_frames(const dataset::Dataset& ds,
                                              const std::vector<std::vector<Detection>>& dets);

std::vector<proximity::EvalRecord> collect_eval_records(
    const dataset::Dataset& ds, const std::vector<std::vector<Detection>>& dets,
    const proximity::ClassifierConfig& classifier, const proximity::MatcherConfig& matcher);

}  // namespace proxmon::cli

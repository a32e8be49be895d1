#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ydss/dataset.hpp"
#include "ydss/service.hpp"

namespace ydss::cli {

/// Runs one subcommand. Exit codes: 0 success, 2 validation error, 1 runtime failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct PipelineConfig {
    bool gen_default = false;
    std::string data_path;
    std::string schema_path;
    std::uint64_t seed = 7;
    std::size_t n = 10000;
    double test_fraction = 0.2;
    double screen_alpha = 0.20;
    double select_alpha = 0.05;
    bool interactions = true;
    unsigned jobs = 0;
    std::size_t min_support = 50;
    std::size_t max_depth = 0;
    std::filesystem::path out_dir = "out";
};

/// Runs gen-or-load, screen, select, fit, tree, rules and held-out evaluation,
/// writing every artifact to config.out_dir. Returns the summary document.
nlohmann::json run_pipeline(const PipelineConfig& config, std::ostream& log);

/// Held-out evaluation of both predictors; writes eval.csv, confusion CSVs,
/// roc.csv and roc.svg and returns the accuracy figures.
nlohmann::json evaluate_artifacts(const Artifacts& artifacts, const Dataset& data,
                                  const std::filesystem::path& out_dir);

/// Rewrites manifest.json listing every other regular file in `dir` with its
/// size and FNV-1a 64 content hash.
void write_manifest(const std::filesystem::path& dir);

/// DSS_OUTPUT_DIR when set and non-empty, otherwise `flag`.
std::filesystem::path output_dir(const std::string& flag);

} // namespace ydss::cli

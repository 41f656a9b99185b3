#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace oeval::cli {

enum class Command { Validate, EvalRun, Simulate, Pareto, Report };
enum class Level { Abstract, Fulltext };
enum class Format { Csv, Json, Svg };

struct CliConfig {
    Command command = Command::Validate;
    std::filesystem::path corpus;
    std::filesystem::path mapping;
    std::filesystem::path qrels;
    std::vector<std::filesystem::path> runs;
    std::filesystem::path points;  // pareto: precomputed run_tag,x,y_raw
    std::vector<double> cutoffs{5, 10, 20, 30, 50};
    double reference_cutoff = 30;
    std::vector<std::size_t> removals{1, 2, 3, 4, 5, 10, 15, 20, 30, 50, 100};
    std::size_t seeds = 20;
    std::uint64_t base_seed = 0;
    unsigned threads = 0;
    Level level = Level::Fulltext;  // recorded in outputs, not interpreted
    std::filesystem::path out = "out";
    Format format = Format::Csv;
    std::optional<double> axis_clamp;
    bool baselines = true;
    double published_tolerance = 0.01;
    std::string review;  // report: restrict to one review
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Raised for configuration problems detected before any input is read.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int run_command(const CliConfig& config);

int cmd_validate(const CliConfig& config);
int cmd_eval_run(const CliConfig& config);
int cmd_simulate(const CliConfig& config);
int cmd_pareto(const CliConfig& config);
int cmd_report(const CliConfig& config);

}  // namespace oeval::cli

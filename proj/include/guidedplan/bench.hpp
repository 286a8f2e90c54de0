#pragma once

#include <guidedplan/dataset.hpp>
#include <guidedplan/metrics.hpp>
#include <guidedplan/ose.hpp>
#include <guidedplan/planner.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace guidedplan
{

enum class Heuristic
{
    Uniform,
    Ose,
    Prediction,
};

Heuristic parse_heuristic(std::string_view name);
std::string_view to_string(Heuristic h);

/// Scenarios family-seed for seed in [seed_first, seed_last].
struct ScenarioRange
{
    ScenarioFamily family = ScenarioFamily::Empty;
    std::uint64_t seed_first = 0;
    std::uint64_t seed_last = 0;
    GenerateOptions options;
};

struct PredictionSpec
{
    /// Oracle paints predictions from the reference trajectory; otherwise
    /// `<dir>/<scenario name>.pgrid` is loaded.
    bool oracle = true;
    std::filesystem::path dir;
    double blur = 2.0;
};

struct BenchSpec
{
    std::vector<ScenarioRange> scenarios;
    std::vector<Heuristic> heuristics{Heuristic::Uniform, Heuristic::Ose, Heuristic::Prediction};
    std::size_t n_samples = 200;
    std::size_t n_runs = 100;
    std::uint64_t seed = 0;
    PredictionSpec prediction;
    OseParams ose;
    PlannerConfig planner;
    /// Planner settings for the reference trajectory of each scenario.
    PlannerConfig reference;

    BenchSpec();
};

/// Parses a JSON bench spec; relative paths resolve against `base_dir`.
/// Throws ConfigError on any malformed or out-of-range field.
BenchSpec parse_bench_spec(std::string_view json_text, const std::filesystem::path &base_dir = {});
BenchSpec load_bench_spec(const std::filesystem::path &path);

struct BenchOptions
{
    unsigned jobs = 1;
    std::ostream *progress = nullptr;
};

/// Runs fn(0) .. fn(n - 1) on up to `jobs` threads.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)> &fn);

/// Generated scenario with its reference trajectory and, when needed, its guides.
struct BenchCase
{
    Scenario scenario;
    std::optional<Trajectory> reference;
    std::optional<std::vector<OseCircle>> ose_chain;
    std::string ose_error;
    double ose_ms = 0.0;
    std::optional<PredictionGrids> prediction;
    std::string prediction_error;
    double prediction_ms = 0.0;
};

/// Prediction window used for a scenario: centered at the start, axis aligned.
GridGeometry bench_window(const Scenario &scenario);

/// Builds all cases of a bench spec (generation, reference plan, exploration, prediction).
std::vector<BenchCase> build_cases(const BenchSpec &spec, const BenchOptions &options = {});

struct SamplerRow
{
    std::string scenario;
    std::string heuristic;
    bool available = false;
    std::string note;
    std::optional<double> G;
    std::optional<double> D;
    std::optional<double> time_ms;
};

inline constexpr const char *kSamplerCsvHeader = "scenario,heuristic,available,G,D,time_ms,note";
inline constexpr const char *kSamplerSummaryHeader =
    "heuristic,scenarios,G_mean,G_std,D_mean,D_std,time_ms_mean,time_ms_std";
inline constexpr const char *kOseFailureHeader = "scenarios,failures,failure_rate";

struct SamplerSummary
{
    std::string heuristic;
    std::size_t scenarios = 0;
    MeanStd G;
    MeanStd D;
    MeanStd time_ms;
};

struct SamplerBenchResult
{
    std::vector<SamplerRow> rows;
    std::vector<SamplerSummary> summary;
    std::size_t ose_attempts = 0;
    std::size_t ose_failures = 0;
};

SamplerBenchResult run_sampler_bench(const BenchSpec &spec, const std::vector<BenchCase> &cases,
                                     const BenchOptions &options = {});
void write_sampler_outputs(const std::filesystem::path &dir, const SamplerBenchResult &result);

struct PlannerRun
{
    PlanRow row;
    std::size_t run = 0;
    std::vector<TracePoint> trace;
    bool path_valid = true;   ///< fine re-validation of the returned path
};

inline constexpr const char *kConvergenceHeader = "scenario,heuristic,run,time_s,cost";
inline constexpr const char *kPlannerSummaryHeader =
    "scenario,heuristic,runs,success_rate,ttfs_mean,ttfs_std,ttfs_median,cusps_mean,cusps_std,length_mean,"
    "length_std,cost_mean,cost_std";

struct PlannerBenchResult
{
    std::vector<PlannerRun> runs;
    std::size_t invalid_paths = 0;
};

PlannerBenchResult run_planner_bench(const BenchSpec &spec, const std::vector<BenchCase> &cases,
                                     const BenchOptions &options = {});
void write_planner_outputs(const std::filesystem::path &dir, const PlannerBenchResult &result);

/// Sampler for one planning run of a case. Guided heuristics mix with uniform draws
/// and fall back to uniform when their guide is missing.
std::unique_ptr<Sampler> make_sampler(const BenchCase &c, Heuristic h, const PlannerConfig &config,
                                      std::uint64_t seed);

double median(std::vector<double> values);

} // namespace guidedplan

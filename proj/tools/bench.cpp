#include <guidedplan/bench.hpp>
#include <guidedplan/errors.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    using namespace guidedplan;
    CLI::App app{"Sampler and planner benchmarks"};
    app.require_subcommand(1);
    std::filesystem::path spec_path;
    std::filesystem::path out_dir;
    bool wallclock = false;
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;
    for (CLI::App *sub : {app.add_subcommand("sampler", "sampling quality (G, D, time)"),
                          app.add_subcommand("planner", "guided planning runs")})
    {
        sub->add_option("--spec", spec_path, "bench spec JSON")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_flag("--wallclock", wallclock, "measure planning time with a steady clock");
        sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "override the base seed");
    }
    CLI11_PARSE(app, argc, argv);

    BenchSpec spec;
    try
    {
        spec = load_bench_spec(spec_path);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "bench: " << e.what() << '\n';
        return 2;
    }
    if (seed)
        spec.seed = *seed;
    if (wallclock)
        spec.planner.clock = ClockMode::Wall;

    BenchOptions options;
    options.jobs = jobs;
    options.progress = &std::cerr;
    try
    {
        const std::vector<BenchCase> cases = build_cases(spec, options);
        if (app.got_subcommand("sampler"))
        {
            const SamplerBenchResult result = run_sampler_bench(spec, cases, options);
            write_sampler_outputs(out_dir, result);
        }
        else
        {
            const PlannerBenchResult result = run_planner_bench(spec, cases, options);
            write_planner_outputs(out_dir, result);
            if (result.invalid_paths > 0)
                std::cerr << "bench: " << result.invalid_paths << " returned paths failed re-validation\n";
        }
    }
    catch (const GenerationError &e)
    {
        std::cerr << "bench: " << e.what() << '\n';
        return 2;
    }
    catch (const Error &e)
    {
        std::cerr << "bench: " << e.what() << '\n';
        return 1;
    }
    std::cerr << "bench: wrote " << out_dir.string() << '\n';
    return 0;
}

#include <guidedplan/bench.hpp>
#include <guidedplan/errors.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace guidedplan
{

using nlohmann::json;

Heuristic parse_heuristic(std::string_view name)
{
    if (name == "uniform")
        return Heuristic::Uniform;
    if (name == "ose")
        return Heuristic::Ose;
    if (name == "prediction")
        return Heuristic::Prediction;
    throw ConfigError("unknown heuristic '" + std::string(name) + "'");
}

std::string_view to_string(Heuristic h)
{
    switch (h)
    {
    case Heuristic::Uniform:
        return "uniform";
    case Heuristic::Ose:
        return "ose";
    case Heuristic::Prediction:
        return "prediction";
    }
    return "?";
}

BenchSpec::BenchSpec()
{
    reference.optimize_time = 3.0;
    reference.steering = SteeringFamily::ReedsShepp;
}

namespace
{

double elapsed_ms(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

template <typename T> T number(const json &j, const char *key, T fallback)
{
    if (!j.contains(key))
        return fallback;
    const json &v = j.at(key);
    if (!v.is_number())
        throw ConfigError(std::string("field '") + key + "' must be a number");
    return v.get<T>();
}

void apply_planner(const json &j, PlannerConfig &cfg)
{
    if (!j.is_object())
        throw ConfigError("planner settings must be an object");
    if (j.contains("steering"))
        cfg.steering = parse_steering_family(j.at("steering").get<std::string>());
    cfg.max_initial_time = number(j, "max_initial_time", cfg.max_initial_time);
    cfg.optimize_time = number(j, "optimize_time", cfg.optimize_time);
    cfg.sampler_config.mix_uniform = number(j, "mix_uniform", cfg.sampler_config.mix_uniform);
    cfg.sampler_config.goal_bias = number(j, "goal_bias", cfg.sampler_config.goal_bias);
    cfg.sampler_config.n_batch = number(j, "n_batch", cfg.sampler_config.n_batch);
    cfg.validate();
}

} // namespace

BenchSpec parse_bench_spec(std::string_view json_text, const std::filesystem::path &base_dir)
{
    BenchSpec spec;
    try
    {
        const json doc = json::parse(json_text);
        if (!doc.is_object())
            throw ConfigError("bench spec must be a JSON object");
        if (!doc.contains("scenarios") || !doc.at("scenarios").is_array() || doc.at("scenarios").empty())
            throw ConfigError("bench spec needs a non-empty 'scenarios' list");
        for (const json &s : doc.at("scenarios"))
        {
            ScenarioRange range;
            range.family = parse_family(s.at("family").get<std::string>());
            const json &seeds = s.at("seeds");
            if (seeds.is_array())
            {
                if (seeds.size() != 2)
                    throw ConfigError("'seeds' must be [first, last]");
                range.seed_first = seeds[0].get<std::uint64_t>();
                range.seed_last = seeds[1].get<std::uint64_t>();
            }
            else
            {
                range.seed_first = range.seed_last = seeds.get<std::uint64_t>();
            }
            if (range.seed_last < range.seed_first)
                throw ConfigError("'seeds' range is empty");
            range.options.passage_gap = number(s, "passage_gap", range.options.passage_gap);
            if (!(range.options.passage_gap > 0.0))
                throw ConfigError("'passage_gap' must be positive");
            spec.scenarios.push_back(range);
        }
        if (doc.contains("heuristics"))
        {
            spec.heuristics.clear();
            for (const json &h : doc.at("heuristics"))
                spec.heuristics.push_back(parse_heuristic(h.get<std::string>()));
            if (spec.heuristics.empty())
                throw ConfigError("'heuristics' must not be empty");
        }
        const auto n_samples = number<long long>(doc, "n_samples", 200);
        const auto n_runs = number<long long>(doc, "n_runs", 100);
        if (n_samples < 2 || n_runs < 1)
            throw ConfigError("n_samples must be >= 2 and n_runs >= 1");
        spec.n_samples = static_cast<std::size_t>(n_samples);
        spec.n_runs = static_cast<std::size_t>(n_runs);
        spec.seed = number<std::uint64_t>(doc, "seed", 0);
        if (doc.contains("prediction"))
        {
            const json &p = doc.at("prediction");
            const std::string source = p.value("source", "oracle");
            if (source == "oracle")
                spec.prediction.oracle = true;
            else if (source == "dir")
            {
                spec.prediction.oracle = false;
                spec.prediction.dir = base_dir / p.at("dir").get<std::string>();
            }
            else
                throw ConfigError("prediction source must be 'oracle' or 'dir'");
            spec.prediction.blur = number(p, "blur", spec.prediction.blur);
            if (!(spec.prediction.blur >= 0.0))
                throw ConfigError("prediction blur must be non-negative");
        }
        if (doc.contains("planner"))
            apply_planner(doc.at("planner"), spec.planner);
        if (doc.contains("reference"))
            apply_planner(doc.at("reference"), spec.reference);
        if (doc.contains("ose_timeout"))
            spec.ose.timeout = number(doc, "ose_timeout", spec.ose.timeout);
        spec.ose.validate();
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("bench spec: ") + e.what());
    }
    catch (const PreconditionError &e)
    {
        throw ConfigError(std::string("bench spec: ") + e.what());
    }
    return spec;
}

BenchSpec load_bench_spec(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open bench spec " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bench_spec(ss.str(), path.parent_path());
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)> &fn)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

GridGeometry bench_window(const Scenario &scenario)
{
    return prediction_window(scenario.start.pose.position());
}

std::vector<BenchCase> build_cases(const BenchSpec &spec, const BenchOptions &options)
{
    struct Job
    {
        ScenarioFamily family;
        std::uint64_t seed;
        GenerateOptions options;
    };
    std::vector<Job> jobs;
    for (const ScenarioRange &r : spec.scenarios)
        for (std::uint64_t s = r.seed_first; s <= r.seed_last; ++s)
            jobs.push_back({r.family, s, r.options});

    const bool need_ose = std::find(spec.heuristics.begin(), spec.heuristics.end(), Heuristic::Ose) !=
                          spec.heuristics.end();
    const bool need_pred = std::find(spec.heuristics.begin(), spec.heuristics.end(), Heuristic::Prediction) !=
                           spec.heuristics.end();

    std::vector<std::optional<BenchCase>> built(jobs.size());
    std::mutex progress_mutex;
    std::size_t done = 0;
    parallel_for(jobs.size(), options.jobs, [&](std::size_t i) {
        BenchCase c{generate(jobs[i].family, jobs[i].seed, jobs[i].options), {}, {}, {}, 0.0, {}, {}, 0.0};
        PlannerConfig ref = spec.reference;
        ref.rng_seed = mix_seed(spec.seed, jobs[i].seed * 16 + static_cast<std::uint64_t>(jobs[i].family));
        c.reference = reference_trajectory(c.scenario, ref);
        if (need_ose)
        {
            const CostMap map = inflate(c.scenario.grid, spec.planner.inflation_radius);
            const auto t0 = std::chrono::steady_clock::now();
            try
            {
                c.ose_chain = explore(map, c.scenario.start.pose, c.scenario.goal.pose, spec.ose);
            }
            catch (const Error &e)
            {
                c.ose_error = e.what();
            }
            c.ose_ms = elapsed_ms(t0);
        }
        if (need_pred)
        {
            const auto t0 = std::chrono::steady_clock::now();
            if (spec.prediction.oracle)
            {
                if (c.reference)
                    c.prediction = paint_oracle(*c.reference, bench_window(c.scenario), spec.prediction.blur);
                else
                    c.prediction_error = "no reference trajectory";
            }
            else
            {
                const std::filesystem::path file = spec.prediction.dir / (c.scenario.name() + ".pgrid");
                try
                {
                    c.prediction = read_pgrid(file);
                }
                catch (const Error &e)
                {
                    c.prediction_error = e.what();
                }
            }
            c.prediction_ms = elapsed_ms(t0);
        }
        built[i] = std::move(c);
        if (options.progress)
        {
            std::lock_guard lock(progress_mutex);
            *options.progress << "[cases] " << ++done << "/" << jobs.size() << " " << built[i]->scenario.name()
                              << (built[i]->reference ? "" : " (no reference)") << '\n';
        }
    });
    std::vector<BenchCase> out;
    out.reserve(built.size());
    for (auto &c : built)
        out.push_back(std::move(*c));
    return out;
}

SamplerBenchResult run_sampler_bench(const BenchSpec &spec, const std::vector<BenchCase> &cases,
                                     const BenchOptions &options)
{
    const std::size_t nh = spec.heuristics.size();
    std::vector<SamplerRow> rows(cases.size() * nh);
    parallel_for(rows.size(), options.jobs, [&](std::size_t job) {
        const BenchCase &c = cases[job / nh];
        const Heuristic h = spec.heuristics[job % nh];
        SamplerRow row;
        row.scenario = c.scenario.name();
        row.heuristic = std::string(to_string(h));
        if (!c.reference)
        {
            row.note = "no reference trajectory";
            rows[job] = row;
            return;
        }
        Rng rng(mix_seed(mix_seed(spec.seed, job / nh), static_cast<std::uint64_t>(h)));
        std::vector<PoseSample> samples;
        const auto t0 = std::chrono::steady_clock::now();
        double extra_ms = 0.0;
        switch (h)
        {
        case Heuristic::Uniform: {
            const Extent extent = c.scenario.grid.geometry().extent();
            for (std::size_t i = 0; i < spec.n_samples; ++i)
                samples.push_back(sample_uniform(extent, c.scenario.goal.pose, 0.0, rng));
            break;
        }
        case Heuristic::Ose:
            if (!c.ose_chain)
            {
                row.note = c.ose_error;
                rows[job] = row;
                return;
            }
            samples = sample_ose(*c.ose_chain, spec.n_samples, rng);
            extra_ms = c.ose_ms;
            break;
        case Heuristic::Prediction:
            if (!c.prediction)
            {
                row.note = c.prediction_error;
                rows[job] = row;
                return;
            }
            try
            {
                samples =
                    sample_prediction(*c.prediction, spec.n_samples, spec.planner.sampler_config.p_path_threshold, rng);
            }
            catch (const Error &e)
            {
                row.note = e.what();
                rows[job] = row;
                return;
            }
            extra_ms = c.prediction_ms;
            break;
        }
        row.time_ms = extra_ms + elapsed_ms(t0);
        row.available = true;
        row.G = max_prediction_gap(*c.reference, samples, spec.planner.metric);
        row.D = avg_path_deviation(*c.reference, samples, spec.planner.metric);
        rows[job] = row;
    });

    SamplerBenchResult result;
    for (Heuristic h : spec.heuristics)
    {
        SamplerSummary s;
        s.heuristic = std::string(to_string(h));
        std::vector<std::optional<double>> g, d, t;
        for (const SamplerRow &r : rows)
        {
            if (r.heuristic != s.heuristic || !r.available)
                continue;
            ++s.scenarios;
            g.push_back(r.G);
            d.push_back(r.D);
            t.push_back(r.time_ms);
        }
        s.G = mean_std(g);
        s.D = mean_std(d);
        s.time_ms = mean_std(t);
        result.summary.push_back(s);
    }
    if (std::find(spec.heuristics.begin(), spec.heuristics.end(), Heuristic::Ose) != spec.heuristics.end())
    {
        for (const BenchCase &c : cases)
        {
            ++result.ose_attempts;
            if (!c.ose_chain)
                ++result.ose_failures;
        }
    }
    result.rows = std::move(rows);
    if (options.progress)
        for (const SamplerSummary &s : result.summary)
            *options.progress << "[sampler] " << s.heuristic << " n=" << s.scenarios << " D=" << s.D.mean
                              << " G=" << s.G.mean << '\n';
    return result;
}

namespace
{

std::ofstream open_out(const std::filesystem::path &path)
{
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot open " + path.string() + " for writing");
    return out;
}

} // namespace

void write_sampler_outputs(const std::filesystem::path &dir, const SamplerBenchResult &result)
{
    std::filesystem::create_directories(dir);
    {
        std::ofstream out = open_out(dir / "sampler_rows.csv");
        out << kSamplerCsvHeader << '\n';
        for (const SamplerRow &r : result.rows)
        {
            std::string note = r.note;
            std::replace(note.begin(), note.end(), ',', ';');
            std::replace(note.begin(), note.end(), '\n', ' ');
            out << r.scenario << ',' << r.heuristic << ',' << (r.available ? 1 : 0) << ',' << format_value(r.G)
                << ',' << format_value(r.D) << ',' << format_value(r.time_ms) << ',' << note << '\n';
        }
    }
    {
        std::ofstream out = open_out(dir / "sampler_summary.csv");
        out << kSamplerSummaryHeader << '\n';
        auto fmt = [](const MeanStd &m) {
            return m.n == 0 ? std::string(",") : format_value(m.mean) + ',' + format_value(m.std);
        };
        for (const SamplerSummary &s : result.summary)
            out << s.heuristic << ',' << s.scenarios << ',' << fmt(s.G) << ',' << fmt(s.D) << ',' << fmt(s.time_ms)
                << '\n';
    }
    {
        std::ofstream out = open_out(dir / "ose_failures.csv");
        out << kOseFailureHeader << '\n';
        const std::optional<double> rate =
            result.ose_attempts ? std::optional<double>(double(result.ose_failures) / double(result.ose_attempts))
                                : std::nullopt;
        out << result.ose_attempts << ',' << result.ose_failures << ',' << format_value(rate) << '\n';
    }
}

std::unique_ptr<Sampler> make_sampler(const BenchCase &c, Heuristic h, const PlannerConfig &config,
                                      std::uint64_t seed)
{
    const Extent extent = c.scenario.grid.geometry().extent();
    const SamplerConfig &sc = config.sampler_config;
    auto uniform = std::make_unique<UniformSampler>(extent, c.scenario.goal.pose, sc.goal_bias, mix_seed(seed, 1));
    if (h == Heuristic::Uniform)
        return uniform;
    std::unique_ptr<GuidedSource> guide;
    if (h == Heuristic::Ose)
    {
        if (c.ose_chain)
            guide = std::make_unique<OseSource>(*c.ose_chain);
        else
            guide = std::make_unique<FailedSource>("ose", c.ose_error);
    }
    else
    {
        if (c.prediction)
            guide = std::make_unique<PredictionSource>(*c.prediction, sc.p_path_threshold);
        else
            guide = std::make_unique<FailedSource>("prediction", c.prediction_error);
    }
    SamplerConfig mixed = sc;
    mixed.rng_seed = mix_seed(seed, 2);
    return std::make_unique<MixedStream>(std::move(guide), std::move(uniform), mixed);
}

PlannerBenchResult run_planner_bench(const BenchSpec &spec, const std::vector<BenchCase> &cases,
                                     const BenchOptions &options)
{
    const std::size_t nh = spec.heuristics.size();
    const std::size_t per_case = nh * spec.n_runs;
    std::vector<PlannerRun> runs(cases.size() * per_case);
    std::vector<CostMap> maps;
    maps.reserve(cases.size());
    for (const BenchCase &c : cases)
        maps.push_back(inflate(c.scenario.grid, spec.planner.inflation_radius));

    std::mutex progress_mutex;
    std::size_t done = 0;
    parallel_for(runs.size(), options.jobs, [&](std::size_t job) {
        const std::size_t ci = job / per_case;
        const Heuristic h = spec.heuristics[(job % per_case) / spec.n_runs];
        const std::size_t run = job % spec.n_runs;
        const BenchCase &c = cases[ci];
        const std::uint64_t seed = mix_seed(mix_seed(spec.seed, c.scenario.seed), run);

        PlannerConfig cfg = spec.planner;
        cfg.rng_seed = seed;
        std::unique_ptr<Sampler> sampler = make_sampler(c, h, cfg, seed);
        const PlanResult result = plan(maps[ci], c.scenario.start, c.scenario.goal, *sampler, cfg);

        std::optional<double> pred_ms;
        if (h == Heuristic::Ose)
            pred_ms = c.ose_ms;
        else if (h == Heuristic::Prediction)
            pred_ms = c.prediction_ms;
        PlannerRun r;
        r.row = extract_metrics(result, c.scenario.name(), std::string(to_string(h)), cfg.steering, pred_ms);
        r.run = run;
        r.trace = result.trace;
        r.path_valid = !result.success || path_collision_free(result.path, maps[ci], cfg.vehicle, 0.01);
        runs[job] = std::move(r);
        if (options.progress)
        {
            std::lock_guard lock(progress_mutex);
            ++done;
            if (done % 10 == 0 || done == runs.size())
                *options.progress << "[planner] " << done << "/" << runs.size() << '\n';
        }
    });

    PlannerBenchResult result;
    for (const PlannerRun &r : runs)
        if (!r.path_valid)
            ++result.invalid_paths;
    result.runs = std::move(runs);
    return result;
}

double median(std::vector<double> values)
{
    if (values.empty())
        return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void write_planner_outputs(const std::filesystem::path &dir, const PlannerBenchResult &result)
{
    std::filesystem::create_directories(dir);
    {
        std::ofstream out = open_out(dir / "planner_runs.csv");
        out << "run," << kPlanCsvHeader << '\n';
        for (const PlannerRun &r : result.runs)
            out << r.run << ',' << to_csv(r.row) << '\n';
    }
    {
        std::ofstream out = open_out(dir / "convergence.csv");
        out << kConvergenceHeader << '\n';
        for (const PlannerRun &r : result.runs)
            for (const TracePoint &p : r.trace)
                out << r.row.scenario << ',' << r.row.heuristic << ',' << r.run << ','
                    << format_value(p.time_s) << ','
                    << (std::isfinite(p.cost) ? format_value(p.cost) : std::string("inf")) << '\n';
    }
    {
        std::ofstream out = open_out(dir / "planner_summary.csv");
        out << kPlannerSummaryHeader << '\n';
        std::vector<std::pair<std::string, std::string>> groups;
        for (const PlannerRun &r : result.runs)
        {
            const auto key = std::make_pair(r.row.scenario, r.row.heuristic);
            if (std::find(groups.begin(), groups.end(), key) == groups.end())
                groups.push_back(key);
        }
        auto fmt = [](const MeanStd &m) {
            return m.n == 0 ? std::string(",") : format_value(m.mean) + ',' + format_value(m.std);
        };
        for (const auto &[scenario, heuristic] : groups)
        {
            std::vector<std::optional<double>> ttfs, cusps, length, cost;
            std::size_t total = 0, ok = 0;
            std::vector<double> ttfs_ok;
            for (const PlannerRun &r : result.runs)
            {
                if (r.row.scenario != scenario || r.row.heuristic != heuristic)
                    continue;
                ttfs.push_back(r.row.ttfs_s);
                cusps.push_back(r.row.cusps);
                length.push_back(r.row.length_m);
                cost.push_back(r.row.cost_opt);
                ++total;
                ok += r.row.success ? 1 : 0;
                if (r.row.ttfs_s)
                    ttfs_ok.push_back(*r.row.ttfs_s);
            }
            const std::optional<double> med =
                ttfs_ok.empty() ? std::nullopt : std::optional<double>(median(ttfs_ok));
            out << scenario << ',' << heuristic << ',' << total << ',' << format_value(double(ok) / double(total))
                << ',' << fmt(mean_std(ttfs)) << ',' << format_value(med) << ',' << fmt(mean_std(cusps)) << ','
                << fmt(mean_std(length)) << ',' << fmt(mean_std(cost)) << '\n';
        }
    }
}

} // namespace guidedplan

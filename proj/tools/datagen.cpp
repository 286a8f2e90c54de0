#include <guidedplan/dataset_io.hpp>
#include <guidedplan/errors.hpp>
#include <guidedplan/grid_io.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

using namespace guidedplan;

int generate_dataset(const std::string &family_name, std::uint64_t first, std::uint64_t count,
                     const std::filesystem::path &out, std::size_t augmentations, std::uint64_t seed)
{
    const ScenarioFamily family = parse_family(family_name);
    std::filesystem::create_directories(out / "scenarios");
    std::filesystem::create_directories(out / "examples");
    const std::vector<std::string> splits = assign_splits(count, seed);
    std::vector<ManifestEntry> entries;
    for (std::uint64_t i = 0; i < count; ++i)
    {
        const Scenario scenario = generate(family, first + i);
        const std::string name = scenario.name();
        const std::string json_rel = "scenarios/" + name + ".json";
        write_scenario(out / json_rel, scenario, name + ".ogrid");

        RecordingConfig rc;
        rc.augmentations = augmentations;
        rc.seed = mix_seed(seed, first + i);
        const std::optional<Recording> rec = make_recording(scenario, rc);
        if (!rec)
        {
            std::cerr << "datagen: " << name << ": planning failed, skipped\n";
            continue;
        }
        for (std::size_t k = 0; k < rec->examples.size(); ++k)
        {
            const Example &ex = rec->examples[k];
            const std::string id = name + "-" + std::to_string(k);
            const std::string inputs = "examples/" + id + ".plns";
            const std::string labels = "examples/" + id + ".pgrid";
            write_planes(out / inputs, to_stack(ex.inputs));
            write_pgrid(out / labels, ex.labels);
            entries.push_back({id, json_rel, splits[i], inputs, labels});
        }
        std::cerr << "datagen: " << name << " (" << rec->examples.size() << " examples)\n";
    }
    write_manifest(out / "manifest.csv", entries);
    return 0;
}

int paint(const std::filesystem::path &scenario_json, const std::filesystem::path &out, double blur,
          double optimize_time, std::uint64_t seed)
{
    const Scenario scenario = read_scenario(scenario_json);
    PlannerConfig cfg;
    cfg.optimize_time = optimize_time;
    cfg.rng_seed = seed;
    const std::optional<Trajectory> ref = reference_trajectory(scenario, cfg);
    if (!ref)
    {
        std::cerr << "datagen: no reference trajectory for " << scenario.name() << '\n';
        return 1;
    }
    write_pgrid(out, paint_oracle(*ref, prediction_window(scenario.start.pose.position()), blur));
    return 0;
}

int loss_of(const std::filesystem::path &logits, const std::filesystem::path &labels_path, double weights_sq_sum)
{
    const PlaneStack stack = read_planes(logits);
    if (stack.planes.size() != 4)
        throw FormatError("logit stack needs 4 planes (off, on, sin, cos)");
    const PredictionGrids labels = read_pgrid(labels_path);
    LogitPlanes pred;
    for (auto [dst, src] : {std::pair{&pred.logit_off, 0}, {&pred.logit_on, 1}, {&pred.sin_theta, 2},
                            {&pred.cos_theta, 3}})
        dst->assign(stack.planes[src].begin(), stack.planes[src].end());
    std::cout.precision(17);
    std::cout << loss(pred, labels, TrainConfig{}, weights_sq_sum) << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Scenario and training data generation"};
    app.require_subcommand(1);

    std::string family = "passage";
    std::uint64_t first = 0, count = 10, seed = 0;
    std::size_t augmentations = 5;
    std::filesystem::path out;
    auto *gen = app.add_subcommand("generate", "scenarios, recordings and the manifest");
    gen->add_option("--family", family, "empty, passage, blocked_intersection, parking_row, maze");
    gen->add_option("--first-seed", first);
    gen->add_option("--count", count);
    gen->add_option("--augmentations", augmentations);
    gen->add_option("--seed", seed, "split and recording seed");
    gen->add_option("--out", out, "output directory")->required();

    std::filesystem::path scenario_json;
    double blur = 2.0, optimize_time = 3.0;
    auto *pnt = app.add_subcommand("paint", "oracle PGRID from a reference plan");
    pnt->add_option("--scenario", scenario_json)->required()->check(CLI::ExistingFile);
    pnt->add_option("--out", out, "PGRID path")->required();
    pnt->add_option("--blur", blur);
    pnt->add_option("--optimize-time", optimize_time);
    pnt->add_option("--seed", seed);

    std::filesystem::path logits, labels;
    double wsq = 0.0;
    auto *lss = app.add_subcommand("loss", "reference loss of a logit PLNS stack against PGRID labels");
    lss->add_option("--logits", logits)->required()->check(CLI::ExistingFile);
    lss->add_option("--labels", labels)->required()->check(CLI::ExistingFile);
    lss->add_option("--weights-sq-sum", wsq);

    CLI11_PARSE(app, argc, argv);
    try
    {
        if (gen->parsed())
            return generate_dataset(family, first, count, out, augmentations, seed);
        if (pnt->parsed())
            return paint(scenario_json, out, blur, optimize_time, seed);
        return loss_of(logits, labels, wsq);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "datagen: " << e.what() << '\n';
        return 2;
    }
    catch (const Error &e)
    {
        std::cerr << "datagen: " << e.what() << '\n';
        return 1;
    }
}

#include <guidedplan/dataset_io.hpp>
#include <guidedplan/errors.hpp>
#include <guidedplan/grid_io.hpp>

#include <json.hpp>

#include <fstream>
#include <numeric>
#include <sstream>

namespace guidedplan
{

namespace
{

using nlohmann::json;

json state_json(const State &s)
{
    return {{"x", s.pose.x()}, {"y", s.pose.y()}, {"theta", s.pose.theta()}, {"kappa", s.kappa}, {"v", s.v}};
}

State state_from(const json &j)
{
    return State{Pose(j.at("x").get<double>(), j.at("y").get<double>(), j.at("theta").get<double>()),
                 j.value("kappa", 0.0), j.value("v", 0.0)};
}

} // namespace

void write_scenario(const std::filesystem::path &json_path, const Scenario &scenario, const std::string &grid_ref)
{
    const std::filesystem::path grid_path = json_path.parent_path() / grid_ref;
    if (grid_path.has_parent_path())
        std::filesystem::create_directories(grid_path.parent_path());
    write_ogrid(grid_path, scenario.grid);
    const json doc = {{"family", to_string(scenario.family)},
                      {"seed", scenario.seed},
                      {"start", state_json(scenario.start)},
                      {"goal", state_json(scenario.goal)},
                      {"grid_ref", grid_ref}};
    std::ofstream out(json_path);
    if (!out)
        throw FormatError("cannot open " + json_path.string() + " for writing");
    out << doc.dump(2) << '\n';
}

Scenario read_scenario(const std::filesystem::path &json_path)
{
    std::ifstream in(json_path);
    if (!in)
        throw FormatError("cannot open " + json_path.string());
    try
    {
        const json doc = json::parse(in);
        const std::filesystem::path grid_path = json_path.parent_path() / doc.at("grid_ref").get<std::string>();
        Scenario s{parse_family(doc.at("family").get<std::string>()), doc.at("seed").get<std::uint64_t>(),
                   read_ogrid(grid_path), state_from(doc.at("start")), state_from(doc.at("goal"))};
        return s;
    }
    catch (const json::exception &e)
    {
        throw FormatError("bad scenario file " + json_path.string() + ": " + e.what());
    }
}

void write_planes(std::ostream &out, const PlaneStack &stack)
{
    const GridGeometry &g = stack.geometry;
    out.write("PLNS", 4);
    detail::put_u32(out, static_cast<std::uint32_t>(g.width()));
    detail::put_u32(out, static_cast<std::uint32_t>(g.height()));
    detail::put_u32(out, static_cast<std::uint32_t>(stack.planes.size()));
    detail::put_f32(out, static_cast<float>(g.resolution()));
    detail::put_f64(out, g.origin().x());
    detail::put_f64(out, g.origin().y());
    detail::put_f64(out, g.origin().theta());
    for (const auto &plane : stack.planes)
    {
        if (plane.size() != g.cell_count())
            throw PreconditionError("plane size does not match the geometry");
        for (float v : plane)
            detail::put_f32(out, v);
    }
    if (!out)
        throw FormatError("failed writing PLNS");
}

void write_planes(const std::filesystem::path &path, const PlaneStack &stack)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot open " + path.string() + " for writing");
    write_planes(out, stack);
}

PlaneStack read_planes(std::istream &in)
{
    detail::expect_magic(in, "PLNS");
    const std::uint32_t w = detail::get_u32(in);
    const std::uint32_t h = detail::get_u32(in);
    const std::uint32_t n = detail::get_u32(in);
    const float res = detail::get_f32(in);
    const double x = detail::get_f64(in);
    const double y = detail::get_f64(in);
    const double theta = detail::get_f64(in);
    if (w == 0 || h == 0 || w > (1u << 14) || h > (1u << 14) || n > 64)
        throw FormatError("PLNS dimensions out of range");
    if (!(res > 0.0f))
        throw FormatError("PLNS resolution must be positive");
    PlaneStack stack{GridGeometry(static_cast<int>(w), static_cast<int>(h), res, Pose(x, y, theta)), {}};
    stack.planes.assign(n, std::vector<float>(stack.geometry.cell_count()));
    for (auto &plane : stack.planes)
        for (float &v : plane)
            v = detail::get_f32(in);
    return stack;
}

PlaneStack read_planes(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open " + path.string());
    return read_planes(in);
}

PlaneStack to_stack(const InputPlanes &inputs)
{
    return PlaneStack{inputs.window, {inputs.planes.begin(), inputs.planes.end()}};
}

void write_manifest(const std::filesystem::path &path, const std::vector<ManifestEntry> &entries)
{
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot open " + path.string() + " for writing");
    out << kManifestHeader << '\n';
    for (const ManifestEntry &e : entries)
    {
        for (const std::string *f : {&e.example_id, &e.scenario_file, &e.split, &e.inputs, &e.labels})
            if (f->find_first_of(",\n\"") != std::string::npos)
                throw PreconditionError("manifest field contains a separator: " + *f);
        out << e.example_id << ',' << e.scenario_file << ',' << e.split << ',' << e.inputs << ',' << e.labels
            << '\n';
    }
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kManifestHeader)
        throw FormatError("manifest header mismatch in " + path.string());
    std::vector<ManifestEntry> out;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ','))
            fields.push_back(f);
        if (fields.size() != 5)
            throw FormatError("manifest row needs 5 fields: " + line);
        out.push_back({fields[0], fields[1], fields[2], fields[3], fields[4]});
    }
    return out;
}

std::vector<std::string> assign_splits(std::size_t n, std::uint64_t seed)
{
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[rng.index(i)]);
    std::vector<std::string> out(n);
    for (std::size_t r = 0; r < n; ++r)
    {
        const double frac = static_cast<double>(r) / static_cast<double>(n);
        out[perm[r]] = frac < 0.64 ? "train" : frac < 0.80 ? "val" : "test";
    }
    return out;
}

} // namespace guidedplan

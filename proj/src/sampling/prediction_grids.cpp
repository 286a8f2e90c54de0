#include <guidedplan/errors.hpp>
#include <guidedplan/grid_io.hpp>
#include <guidedplan/prediction_grids.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace guidedplan
{

PredictionGrids::PredictionGrids(GridGeometry g)
    : geometry(g), p_path(g.cell_count(), 0.0f), sin_theta(g.cell_count(), 0.0f), cos_theta(g.cell_count(), 0.0f)
{
}

double PredictionGrids::confidence(std::size_t cell) const
{
    return std::hypot(static_cast<double>(sin_theta[cell]), static_cast<double>(cos_theta[cell]));
}

void PredictionGrids::validate(double overshoot) const
{
    const std::size_t n = geometry.cell_count();
    if (p_path.size() != n || sin_theta.size() != n || cos_theta.size() != n)
        throw PreconditionError("prediction planes do not match the window geometry");
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!(p_path[i] >= 0.0f && p_path[i] <= 1.0f))
            throw PreconditionError("p_path outside [0, 1]");
        if (!(std::abs(sin_theta[i]) <= 1.0f + overshoot && std::abs(cos_theta[i]) <= 1.0f + overshoot))
            throw PreconditionError("heading plane outside [-1, 1]");
        if (!(confidence(i) <= 1.0 + overshoot))
            throw PreconditionError("heading confidence exceeds 1");
    }
}

void write_pgrid(std::ostream &out, const PredictionGrids &grids)
{
    const GridGeometry &g = grids.geometry;
    const std::size_t n = g.cell_count();
    if (grids.p_path.size() != n || grids.sin_theta.size() != n || grids.cos_theta.size() != n)
        throw PreconditionError("prediction planes do not match the window geometry");
    out.write("PGRD", 4);
    detail::put_u32(out, static_cast<std::uint32_t>(g.width()));
    detail::put_u32(out, static_cast<std::uint32_t>(g.height()));
    detail::put_f32(out, static_cast<float>(g.resolution()));
    detail::put_f64(out, g.origin().x());
    detail::put_f64(out, g.origin().y());
    detail::put_f64(out, g.origin().theta());
    for (const auto *plane : {&grids.p_path, &grids.sin_theta, &grids.cos_theta})
        for (float v : *plane)
            detail::put_f32(out, v);
    if (!out)
        throw FormatError("failed writing PGRID");
}

PredictionGrids read_pgrid(std::istream &in)
{
    detail::expect_magic(in, "PGRD");
    const std::uint32_t w = detail::get_u32(in);
    const std::uint32_t h = detail::get_u32(in);
    const float res = detail::get_f32(in);
    const double x = detail::get_f64(in);
    const double y = detail::get_f64(in);
    const double theta = detail::get_f64(in);
    if (w == 0 || h == 0 || w > (1u << 14) || h > (1u << 14))
        throw FormatError("PGRID dimensions out of range");
    if (!(res > 0.0f))
        throw FormatError("PGRID resolution must be positive");
    PredictionGrids grids(GridGeometry(static_cast<int>(w), static_cast<int>(h), res, Pose(x, y, theta)));
    for (auto *plane : {&grids.p_path, &grids.sin_theta, &grids.cos_theta})
        for (float &v : *plane)
            v = detail::get_f32(in);
    return grids;
}

void write_pgrid(const std::filesystem::path &path, const PredictionGrids &grids)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot open " + path.string() + " for writing");
    write_pgrid(out, grids);
}

PredictionGrids read_pgrid(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open " + path.string());
    return read_pgrid(in);
}

} // namespace guidedplan

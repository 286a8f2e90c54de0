#include <guidedplan/errors.hpp>
#include <guidedplan/grid_io.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace guidedplan
{

namespace detail
{

namespace
{

template <typename U> void put_le(std::ostream &out, U v)
{
    char bytes[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i)
        bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(bytes, sizeof(U));
}

template <typename U> U get_le(std::istream &in)
{
    unsigned char bytes[sizeof(U)];
    if (!in.read(reinterpret_cast<char *>(bytes), sizeof(U)))
        throw FormatError("unexpected end of file");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        v |= static_cast<U>(bytes[i]) << (8 * i);
    return v;
}

} // namespace

void put_u32(std::ostream &out, std::uint32_t v) { put_le(out, v); }
void put_f32(std::ostream &out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }
void put_f64(std::ostream &out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
std::uint32_t get_u32(std::istream &in) { return get_le<std::uint32_t>(in); }
float get_f32(std::istream &in) { return std::bit_cast<float>(get_le<std::uint32_t>(in)); }
double get_f64(std::istream &in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

void expect_magic(std::istream &in, const char (&magic)[5])
{
    char got[4];
    if (!in.read(got, 4) || std::memcmp(got, magic, 4) != 0)
        throw FormatError(std::string("bad magic, expected ") + magic);
}

} // namespace detail

void write_ogrid(std::ostream &out, const OccupancyGrid &grid)
{
    const GridGeometry &g = grid.geometry();
    out.write("OGRD", 4);
    detail::put_u32(out, static_cast<std::uint32_t>(g.width()));
    detail::put_u32(out, static_cast<std::uint32_t>(g.height()));
    detail::put_f32(out, static_cast<float>(g.resolution()));
    detail::put_f64(out, g.origin().x());
    detail::put_f64(out, g.origin().y());
    detail::put_f64(out, g.origin().theta());
    for (CellState s : grid.cells())
        out.put(static_cast<char>(s));
    if (!out)
        throw FormatError("failed writing OGRID");
}

OccupancyGrid read_ogrid(std::istream &in)
{
    detail::expect_magic(in, "OGRD");
    const std::uint32_t w = detail::get_u32(in);
    const std::uint32_t h = detail::get_u32(in);
    const float res = detail::get_f32(in);
    const double x = detail::get_f64(in);
    const double y = detail::get_f64(in);
    const double theta = detail::get_f64(in);
    if (w == 0 || h == 0 || w > (1u << 16) || h > (1u << 16))
        throw FormatError("OGRID dimensions out of range");
    if (!(res > 0.0f))
        throw FormatError("OGRID resolution must be positive");
    OccupancyGrid grid(GridGeometry(static_cast<int>(w), static_cast<int>(h), res, Pose(x, y, theta)));
    std::vector<char> bytes(grid.cells().size());
    if (!in.read(bytes.data(), static_cast<std::streamsize>(bytes.size())))
        throw FormatError("truncated OGRID cell data");
    for (std::size_t i = 0; i < bytes.size(); ++i)
    {
        const auto v = static_cast<unsigned char>(bytes[i]);
        if (v > 2)
            throw FormatError("invalid OGRID cell value");
        grid.cells()[i] = static_cast<CellState>(v);
    }
    return grid;
}

void write_ogrid(const std::filesystem::path &path, const OccupancyGrid &grid)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot open " + path.string() + " for writing");
    write_ogrid(out, grid);
}

OccupancyGrid read_ogrid(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open " + path.string());
    return read_ogrid(in);
}

} // namespace guidedplan

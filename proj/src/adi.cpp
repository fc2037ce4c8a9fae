#include "adi.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace adicurb
{

AltitudeGrid build_altitude_grid(const std::vector<PixelSample>& samples, int width, int height)
{
    AltitudeGrid grid(width, height);
    for (const PixelSample& s : samples)
    {
        const int x = static_cast<int>(std::lround(s.u));
        const int y = static_cast<int>(std::lround(s.v));
        if (x < 0 || x >= width || y < 0 || y >= height)
            continue;
        AltitudeGrid::Cell& c = grid.at(x, y);
        if (!c.filled || s.depth < c.depth)
        {
            c.altitude = s.altitude;
            c.depth = s.depth;
            c.filled = true;
        }
    }
    return grid;
}

void vertical_fill(AltitudeGrid& grid, int max_gap)
{
    if (max_gap < 1)
        return;
    // Fill from a snapshot so newly filled cells cannot cascade beyond max_gap.
    const AltitudeGrid source = grid;
    for (int x = 0; x < grid.width; ++x)
    {
        for (int y = 0; y < grid.height; ++y)
        {
            if (source.at(x, y).filled)
                continue;
            for (int d = 1; d <= max_gap; ++d)
            {
                if (y - d >= 0 && source.at(x, y - d).filled)
                {
                    grid.at(x, y) = source.at(x, y - d);
                    break;
                }
                if (y + d < grid.height && source.at(x, y + d).filled)
                {
                    grid.at(x, y) = source.at(x, y + d);
                    break;
                }
            }
        }
    }
}

AltitudeDifferenceImage altitude_difference_transform(const AltitudeGrid& grid, int radius)
{
    if (radius < 1)
        throw std::invalid_argument("altitude_difference_transform: radius must be >= 1");

    AltitudeDifferenceImage adi;
    adi.width = grid.width;
    adi.height = grid.height;
    adi.neighborhood_radius = radius;
    adi.values.assign(static_cast<std::size_t>(grid.width) * grid.height, 0.0);

    // Precompute inverse pixel distances for the window.
    const int side = 2 * radius + 1;
    std::vector<double> inv_dist(static_cast<std::size_t>(side) * side, 0.0);
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx != 0 || dy != 0)
                inv_dist[(dy + radius) * side + (dx + radius)] =
                    1.0 / std::sqrt(double(dx) * dx + double(dy) * dy);

    for (int y = 0; y < grid.height; ++y)
    {
        for (int x = 0; x < grid.width; ++x)
        {
            const AltitudeGrid::Cell& c = grid.at(x, y);
            if (!c.filled)
                continue;
            double sum = 0.0;
            int m = 0;
            const int y0 = std::max(0, y - radius), y1 = std::min(grid.height - 1, y + radius);
            const int x0 = std::max(0, x - radius), x1 = std::min(grid.width - 1, x + radius);
            for (int ny = y0; ny <= y1; ++ny)
            {
                for (int nx = x0; nx <= x1; ++nx)
                {
                    if (nx == x && ny == y)
                        continue;
                    const AltitudeGrid::Cell& nc = grid.at(nx, ny);
                    if (!nc.filled)
                        continue;
                    sum += std::abs(c.altitude - nc.altitude) *
                           inv_dist[(ny - y + radius) * side + (nx - x + radius)];
                    ++m;
                }
            }
            if (m > 0)
                adi.values[static_cast<std::size_t>(y) * grid.width + x] = sum / m;
        }
    }
    return adi;
}

Image8 normalize_to_8bit(const AltitudeDifferenceImage& adi, double clip)
{
    if (!(clip > 0.0))
        throw std::invalid_argument("normalize_to_8bit: clip must be > 0");
    Image8 img(adi.width, adi.height);
    for (std::size_t i = 0; i < adi.values.size(); ++i)
    {
        const double v = std::min(adi.values[i], clip);
        img.data[i] = static_cast<std::uint8_t>(std::lround(255.0 * v / clip));
    }
    return img;
}

void save_adi_f32(const std::string& path, const AltitudeDifferenceImage& adi)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error(path + ": cannot open for writing");
    const std::uint32_t w = static_cast<std::uint32_t>(adi.width);
    const std::uint32_t h = static_cast<std::uint32_t>(adi.height);
    out.write(reinterpret_cast<const char*>(&w), 4);
    out.write(reinterpret_cast<const char*>(&h), 4);
    std::vector<float> row(adi.values.size());
    for (std::size_t i = 0; i < adi.values.size(); ++i)
        row[i] = static_cast<float>(adi.values[i]);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
}

AltitudeDifferenceImage load_adi_f32(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error(path + ": cannot open");
    std::uint32_t w = 0, h = 0;
    in.read(reinterpret_cast<char*>(&w), 4);
    in.read(reinterpret_cast<char*>(&h), 4);
    if (!in)
        throw std::runtime_error(path + ": truncated header");
    AltitudeDifferenceImage adi;
    adi.width = static_cast<int>(w);
    adi.height = static_cast<int>(h);
    std::vector<float> buf(static_cast<std::size_t>(w) * h);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!in)
        throw std::runtime_error(path + ": truncated payload");
    adi.values.assign(buf.begin(), buf.end());
    return adi;
}

} // namespace adicurb

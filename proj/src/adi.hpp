#ifndef ADICURB_ADI_HPP
#define ADICURB_ADI_HPP

#include <string>
#include <vector>

#include "projection.hpp"
#include "types.hpp"

namespace adicurb
{

// Sparse per-pixel altitude buffer. A populated cell holds the altitude of the
// nearest-depth point projected onto that pixel.
struct AltitudeGrid
{
    struct Cell
    {
        double altitude = 0.0;
        double depth = 0.0;
        bool filled = false;
    };

    int width = 0;
    int height = 0;
    std::vector<Cell> cells;

    AltitudeGrid() = default;
    AltitudeGrid(int w, int h) : width(w), height(h), cells(static_cast<std::size_t>(w) * h) {}

    Cell& at(int x, int y) { return cells[static_cast<std::size_t>(y) * width + x]; }
    const Cell& at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x]; }
};

struct AltitudeDifferenceImage
{
    int width = 0;
    int height = 0;
    int neighborhood_radius = 0;
    std::vector<double> values; // meters per pixel-distance, >= 0

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

// Scatter samples into the grid, rounding to the nearest integer pixel.
// Collisions keep the smallest-depth sample (z-buffer).
AltitudeGrid build_altitude_grid(const std::vector<PixelSample>& samples, int width, int height);

// Optional nearest-neighbor fill along columns, bridging gaps up to max_gap
// rows. Off by default in the pipeline.
void vertical_fill(AltitudeGrid& grid, int max_gap);

// Distance-weighted mean absolute altitude difference over the populated
// Chebyshev neighborhood of each populated pixel. The averaging count uses
// only populated neighbors; unpopulated pixels and pixels with no populated
// neighbor get 0.
AltitudeDifferenceImage altitude_difference_transform(const AltitudeGrid& grid, int radius);

// v -> round(255 * min(v, clip) / clip)
Image8 normalize_to_8bit(const AltitudeDifferenceImage& adi, double clip);

// Lossless dump: 8-byte header (width, height as LE uint32) + row-major float32.
void save_adi_f32(const std::string& path, const AltitudeDifferenceImage& adi);
AltitudeDifferenceImage load_adi_f32(const std::string& path);

} // namespace adicurb

#endif

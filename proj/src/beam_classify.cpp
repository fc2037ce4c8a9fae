#include "beam_classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adicurb
{

BeamModel build_beam_model(const PointCloud& non_ground, int n_beams, double max_range)
{
    if (n_beams < 8)
        throw std::invalid_argument("build_beam_model: n_beams must be >= 8");
    BeamModel model;
    model.n_beams = n_beams;
    model.max_range = max_range;
    model.lengths.assign(n_beams, max_range);

    const double step = 2.0 * M_PI / n_beams;
    for (const RawPoint& p : non_ground.points)
    {
        const double r = std::sqrt(double(p.x) * p.x + double(p.y) * p.y);
        if (r < 1e-6)
            continue;
        const double az = std::atan2(p.y, p.x);
        int b = static_cast<int>((az + M_PI) / step);
        b = std::clamp(b, 0, n_beams - 1);
        model.lengths[b] = std::min(model.lengths[b], std::min(r, max_range));
    }
    return model;
}

namespace
{

double angular_distance(double a, double b)
{
    double d = std::fmod(std::abs(a - b), 2.0 * M_PI);
    return d > M_PI ? 2.0 * M_PI - d : d;
}

} // namespace

RoadSegmentationLine find_dominant_extremes(const BeamModel& model, double min_separation,
                                            int smoothing_window)
{
    const int n = model.n_beams;
    const int half = std::max(smoothing_window, 1) / 2;

    // Circular moving average.
    std::vector<double> smooth(n, 0.0);
    for (int b = 0; b < n; ++b)
    {
        double sum = 0.0;
        int cnt = 0;
        for (int d = -half; d <= half; ++d)
        {
            sum += model.lengths[((b + d) % n + n) % n];
            ++cnt;
        }
        smooth[b] = sum / cnt;
    }

    struct Peak
    {
        int bin;
        double value;
        double azimuth;
    };
    std::vector<Peak> peaks;
    for (int b = 0; b < n; ++b)
    {
        const double prev = smooth[((b - 1) % n + n) % n];
        const double next = smooth[(b + 1) % n];
        if (smooth[b] >= prev && smooth[b] >= next && (smooth[b] > prev || smooth[b] > next))
            peaks.push_back({b, smooth[b], model.beam_azimuth(b)});
    }

    auto pick = [&](bool front) -> std::pair<bool, Peak> {
        const double heading = front ? 0.0 : M_PI;
        Peak best{-1, -1.0, heading};
        for (const Peak& p : peaks)
        {
            const bool in_half = std::abs(p.azimuth) < M_PI / 2.0;
            if (in_half != front)
                continue;
            if (p.value > best.value ||
                (p.value == best.value &&
                 angular_distance(p.azimuth, heading) < angular_distance(best.azimuth, heading)))
                best = p;
        }
        return {best.bin >= 0, best};
    };

    RoadSegmentationLine line;
    auto [have_front, front] = pick(true);
    auto [have_rear, rear] = pick(false);

    if (have_front && have_rear &&
        angular_distance(front.azimuth, rear.azimuth) < min_separation)
    {
        // Keep the stronger extreme, let the other side fall back.
        if (front.value >= rear.value)
            have_rear = false;
        else
            have_front = false;
    }

    if (have_front)
        line.direction_front = front.azimuth;
    else
        line.front_fallback = true; // direction stays 0
    if (have_rear)
        line.direction_rear = rear.azimuth;
    else
    {
        line.direction_rear = M_PI;
        line.rear_fallback = true;
    }
    return line;
}

std::pair<std::vector<FeaturePoint>, std::vector<FeaturePoint>>
split_left_right(const std::vector<FeaturePoint>& features, const RoadSegmentationLine& line)
{
    std::vector<FeaturePoint> left, right;
    const Eigen::Vector2d front(std::cos(line.direction_front), std::sin(line.direction_front));
    // Direction of travel in the rear region points from the rear endpoint
    // toward the origin.
    const Eigen::Vector2d rear_travel(-std::cos(line.direction_rear),
                                      -std::sin(line.direction_rear));
    for (const FeaturePoint& f : features)
    {
        const double az = std::atan2(f.point.y, f.point.x);
        const bool in_front = angular_distance(az, line.direction_front) <=
                              angular_distance(az, line.direction_rear);
        const Eigen::Vector2d& dir = in_front ? front : rear_travel;
        const double cross = dir.x() * f.point.y - dir.y() * f.point.x;
        (cross > 0.0 ? left : right).push_back(f);
    }
    return {std::move(left), std::move(right)};
}

} // namespace adicurb

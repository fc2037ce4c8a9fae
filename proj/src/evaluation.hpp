#ifndef ADICURB_EVALUATION_HPP
#define ADICURB_EVALUATION_HPP

#include <vector>

#include "types.hpp"

namespace adicurb
{

struct ConfusionCounts
{
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double tolerance = 0.0;
};

struct Metrics
{
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Exact squared Euclidean distance transform to the nonzero pixels of the
// mask (Felzenszwalb-Huttenlocher). An empty mask yields values beyond any
// meaningful tolerance (>= 1e12 minus the grid diagonal).
std::vector<double> squared_distance_transform(const Image8& mask);

// Tolerance-based pixel matching: a predicted pixel within tol of ground
// truth is TP, otherwise FP; a ground-truth pixel farther than tol from any
// prediction is FN.
ConfusionCounts match_with_tolerance(const Image8& pred, const Image8& gt, double tol);

Metrics compute_metrics(const ConfusionCounts& counts);

} // namespace adicurb

#endif

#ifndef ADICURB_GPR_FILTER_HPP
#define ADICURB_GPR_FILTER_HPP

#include <utility>
#include <vector>

#include "config.hpp"
#include "types.hpp"

namespace adicurb
{

// Exact squared-exponential GPR over a road boundary parameterized as lateral
// offset y = f(x) along the road direction.
class BoundaryModel
{
  public:
    // Factorizes K + sigma_n^2 I. Duplicate x values are allowed (the noise
    // term regularizes). On factorization failure the noise is escalated by
    // x10, at most three times, before giving up.
    BoundaryModel(const std::vector<double>& x, const std::vector<double>& y,
                  const GprConfig& hyper);

    // Posterior mean and variance (clamped to >= 0).
    std::pair<double, double> predict(double x_query) const;

    const GprConfig& hyper() const { return hyper_; }
    double effective_noise() const { return noise_; }

  private:
    std::vector<double> x_;
    GprConfig hyper_;
    double noise_; // possibly escalated
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd alpha_;
};

double se_kernel(double a, double b, const GprConfig& hyper);

struct FilterResult
{
    std::vector<std::size_t> inlier_indices;
    std::vector<std::size_t> outlier_indices;
    int iterations = 0;
    bool warning_small_input = false;
};

// Iterative fit-and-reject: a point is an outlier when its residual exceeds
// outlier_sigma * sqrt(posterior variance + noise variance). Removed points
// never re-enter. Fewer than 4 points are returned unchanged with a warning.
FilterResult iterative_filter(const std::vector<double>& x, const std::vector<double>& y,
                              const GprConfig& hyper);

} // namespace adicurb

#endif

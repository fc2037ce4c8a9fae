#include "gpr_filter.hpp"

#include <cmath>
#include <stdexcept>

namespace adicurb
{

double se_kernel(double a, double b, const GprConfig& hyper)
{
    const double d = a - b;
    return hyper.signal_variance *
           std::exp(-d * d / (2.0 * hyper.length_scale * hyper.length_scale));
}

BoundaryModel::BoundaryModel(const std::vector<double>& x, const std::vector<double>& y,
                             const GprConfig& hyper)
    : x_(x), hyper_(hyper), noise_(hyper.noise_variance)
{
    if (x.size() < 2 || x.size() != y.size())
        throw std::invalid_argument("BoundaryModel: need >= 2 (x, y) pairs");

    const Eigen::Index n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
        {
            const double v = se_kernel(x_[i], x_[j], hyper_);
            k(i, j) = v;
            k(j, i) = v;
        }

    Eigen::Map<const Eigen::VectorXd> targets(y.data(), n);
    for (int escalation = 0;; ++escalation)
    {
        Eigen::MatrixXd kn = k;
        kn.diagonal().array() += noise_;
        llt_.compute(kn);
        if (llt_.info() == Eigen::Success)
            break;
        if (escalation >= 3)
            throw std::runtime_error("BoundaryModel: kernel factorization failed");
        noise_ *= 10.0;
    }
    alpha_ = llt_.solve(targets);
}

std::pair<double, double> BoundaryModel::predict(double x_query) const
{
    const Eigen::Index n = static_cast<Eigen::Index>(x_.size());
    Eigen::VectorXd ks(n);
    for (Eigen::Index i = 0; i < n; ++i)
        ks(i) = se_kernel(x_query, x_[i], hyper_);
    const double mean = ks.dot(alpha_);
    double var = hyper_.signal_variance - ks.dot(llt_.solve(ks));
    if (var < 0.0)
        var = 0.0;
    return {mean, var};
}

FilterResult iterative_filter(const std::vector<double>& x, const std::vector<double>& y,
                              const GprConfig& hyper)
{
    FilterResult res;
    if (x.size() != y.size())
        throw std::invalid_argument("iterative_filter: size mismatch");
    if (x.size() < 4)
    {
        res.warning_small_input = true;
        for (std::size_t i = 0; i < x.size(); ++i)
            res.inlier_indices.push_back(i);
        return res;
    }

    std::vector<std::size_t> inliers(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        inliers[i] = i;

    for (int iter = 0; iter < hyper.max_iterations; ++iter)
    {
        std::vector<double> xi, yi;
        xi.reserve(inliers.size());
        yi.reserve(inliers.size());
        for (std::size_t i : inliers)
        {
            xi.push_back(x[i]);
            yi.push_back(y[i]);
        }
        BoundaryModel model(xi, yi, hyper);
        res.iterations = iter + 1;

        std::vector<std::size_t> next;
        std::vector<std::size_t> rejected;
        for (std::size_t i : inliers)
        {
            const auto [mean, var] = model.predict(x[i]);
            const double limit =
                hyper.outlier_sigma * std::sqrt(var + model.effective_noise());
            if (std::abs(y[i] - mean) > limit)
                rejected.push_back(i);
            else
                next.push_back(i);
        }
        if (next.size() < 2)
            break; // would drop below a fittable set; keep the current inliers
        if (rejected.empty())
        {
            inliers = std::move(next);
            break;
        }
        for (std::size_t i : rejected)
            res.outlier_indices.push_back(i);
        inliers = std::move(next);
    }
    res.inlier_indices = std::move(inliers);
    return res;
}

} // namespace adicurb

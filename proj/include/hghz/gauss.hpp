#pragma once

#include <cstdint>
#include <vector>

#include "hghz/rng.hpp"

namespace hghz {

struct GaussParam {
    double s; // Gaussian width (alpha*q), density proportional to exp(-pi x^2 / s^2)
};

// Discrete Gaussian D_{Z,s} by table-based inverse CDF over the truncated
// support [-cut, cut], cut = ceil(12 s). The truncated tail mass is below
// 2^-200 and is renormalized away.
class DiscreteGaussian {
  public:
    explicit DiscreteGaussian(GaussParam p);

    int64_t sample(Rng& rng) const;
    int64_t cut() const { return cut_; }

    // log2 of an upper bound on the truncated tail mass (geometric majorization)
    static double log2_tail_bound(double s);

  private:
    int64_t cut_;
    std::vector<double> cdf_; // cdf_[i] = P[x <= -cut + i]
};

} // namespace hghz

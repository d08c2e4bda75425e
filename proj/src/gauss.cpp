#include "hghz/gauss.hpp"

#include <cmath>
#include <stdexcept>

namespace hghz {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

DiscreteGaussian::DiscreteGaussian(GaussParam p) {
    if (!(p.s > 0)) throw std::invalid_argument("DiscreteGaussian: s must be positive");
    cut_ = static_cast<int64_t>(std::ceil(12.0 * p.s));
    // Weights in long double; the ratio extremes stay representable because
    // exp(-pi*144) is far above the long double underflow threshold.
    long double total = 0;
    std::vector<long double> w(static_cast<size_t>(2 * cut_ + 1));
    for (int64_t x = -cut_; x <= cut_; ++x) {
        long double e = expl(-static_cast<long double>(kPi) * x * x / (p.s * p.s));
        w[static_cast<size_t>(x + cut_)] = e;
        total += e;
    }
    cdf_.resize(w.size());
    long double run = 0;
    for (size_t i = 0; i < w.size(); ++i) {
        run += w[i];
        cdf_[i] = static_cast<double>(run / total);
    }
    cdf_.back() = 1.0;
}

int64_t DiscreteGaussian::sample(Rng& rng) const {
    double u = rng.real01();
    size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (cdf_[mid] <= u)
            lo = mid + 1;
        else
            hi = mid;
    }
    return static_cast<int64_t>(lo) - cut_;
}

double DiscreteGaussian::log2_tail_bound(double s) {
    // tail = 2 * sum_{x > cut} exp(-pi x^2/s^2) <= 2 exp(-pi (cut+1)^2/s^2) / (1 - r),
    // r = exp(-pi (2 cut + 3)/s^2), against total >= 1 (the x=0 term).
    double cut = std::ceil(12.0 * s);
    double log2e = 1.4426950408889634;
    double lead = -kPi * (cut + 1) * (cut + 1) / (s * s) * log2e + 1.0;
    double r = std::exp(-kPi * (2 * cut + 3) / (s * s));
    return lead - std::log2(1.0 - r);
}

} // namespace hghz

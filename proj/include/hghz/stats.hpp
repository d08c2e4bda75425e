#pragma once

#include <cstdint>
#include <utility>

namespace hghz {

// regularized incomplete beta I_x(a, b)
double inc_beta(double a, double b, double x);

// two-sided Clopper-Pearson interval for k successes in n trials
std::pair<double, double> clopper_pearson(uint64_t k, uint64_t n, double confidence);

// chi-square upper tail survival via the regularized gamma function
double chi2_sf(double stat, double dof);

} // namespace hghz

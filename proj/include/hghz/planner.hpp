#pragma once

#include <cstdint>
#include <string>

namespace hghz {

struct PlanInputs {
    uint64_t N = 0;
    double epsilon = 0;
    uint64_t n = 0;
};

// Feasibility report for the secure regime. All derived quantities are carried
// as log2 values; q = 2^k never materializes.
struct PlanReport {
    PlanInputs inputs;
    uint64_t k = 0;
    double log2_q = 0;
    double log2_alpha_q = 0;
    double log2_r_max = 0;
    double log2_r_safe = 0; // NaN when r_safe <= 0
    double log2_mu = 0;     // NaN when mu < 1
    double log2_delta_m = 0;
    bool feasible = false;
    std::string first_violation; // empty when feasible
};

// k = floor(N^eps), q = 2^k, alpha q = sqrt(4N + (log2 N)^2 + 1),
// r_max = q / (4 sqrt((C alpha q sqrt(N)(sqrt(k)+sqrt(2)+1))^2 + 1)),
// r_safe = r_max - alpha q sqrt(N+M+n), mu = floor(r_safe / sqrt(N+M+n)),
// delta_m = (alpha q + 1)(N+M+n)^{3/2} / (mu + 1/2).
// Feasible iff floor(mu - alpha q sqrt(N+M+n)) >= 0, alpha in (0,1) and
// alpha_0 q > 2 sqrt(N); violations are reported in that order.
PlanReport plan_params(uint64_t N, double epsilon, uint64_t n);

} // namespace hghz

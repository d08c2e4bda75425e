#include "hghz/planner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <quadmath.h>

namespace hghz {

namespace {

using f128 = __float128;

const f128 kC = 0.39894228Q; // ~= 1/sqrt(2 pi)

// floor(N^eps) with directed rounding: the float candidate is checked against
// the exact predicate k <= N^eps, i.e. ln k <= eps ln N, with a one-step
// correction in each direction.
uint64_t floor_pow(uint64_t N, double eps) {
    f128 v = expq(static_cast<f128>(eps) * logq(static_cast<f128>(N)));
    long long c = static_cast<long long>(floorq(v));
    auto ok = [&](long long k) {
        if (k < 1) return k >= 1;
        return logq(static_cast<f128>(k)) <= static_cast<f128>(eps) * logq(static_cast<f128>(N));
    };
    while (c > 1 && !ok(c)) --c;
    while (ok(c + 1)) ++c;
    return static_cast<uint64_t>(c);
}

double to_log2(f128 x) {
    if (x <= 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(log2q(x));
}

} // namespace

PlanReport plan_params(uint64_t N, double epsilon, uint64_t n) {
    if (N < 2 || n < 1 || !(epsilon > 0.0) || !(epsilon < 0.5))
        throw std::invalid_argument("plan_params: need N >= 2, n >= 1, eps in (0, 1/2)");

    PlanReport rep;
    rep.inputs = {N, epsilon, n};
    rep.k = floor_pow(N, epsilon);
    if (rep.k < 1) rep.k = 1;
    rep.log2_q = static_cast<double>(rep.k);

    const f128 Nq = static_cast<f128>(N);
    const f128 omega = log2q(Nq); // the fixed choice omega(sqrt(log N)) = log N
    const f128 alpha_q = sqrtq(4 * Nq + omega * omega + 1);
    rep.log2_alpha_q = to_log2(alpha_q);

    const f128 M = Nq * (1 + static_cast<f128>(rep.k));
    const f128 dims = Nq + M + static_cast<f128>(n);
    const f128 sq_dims = sqrtq(dims);

    const f128 T = kC * alpha_q * sqrtq(Nq) *
                   (sqrtq(static_cast<f128>(rep.k)) + sqrtq(2.0Q) + 1);
    // log2 r_max = k - log2(4 sqrt(T^2 + 1))
    const f128 log2_rmax = static_cast<f128>(rep.k) - log2q(4 * sqrtq(T * T + 1));
    rep.log2_r_max = static_cast<double>(log2_rmax);

    // r_safe = r_max - alpha_q sqrt(dims); worked in the log domain via
    // r_max (1 - alpha_q sqrt(dims) / r_max)
    const f128 corr = alpha_q * sq_dims;
    const f128 log2_corr = log2q(corr);
    f128 mu = -1;
    if (log2_corr < log2_rmax) {
        const f128 ratio = exp2q(log2_corr - log2_rmax); // < 1
        const f128 log2_rsafe = log2_rmax + log2q(1 - ratio);
        rep.log2_r_safe = static_cast<double>(log2_rsafe);
        mu = floorq(exp2q(log2_rsafe - log2q(sq_dims)));
        rep.log2_mu = to_log2(mu);
    } else {
        rep.log2_r_safe = std::numeric_limits<double>::quiet_NaN();
        rep.log2_mu = std::numeric_limits<double>::quiet_NaN();
    }

    if (mu >= 1) {
        const f128 log2_dm = log2q(alpha_q + 1) + 1.5Q * log2q(dims) - log2q(mu + 0.5Q);
        rep.log2_delta_m = static_cast<double>(log2_dm);
    } else {
        rep.log2_delta_m = std::numeric_limits<double>::quiet_NaN();
    }

    // feasibility, first violated inequality wins
    if (!(mu >= 0) || floorq(mu - corr) < 0) {
        rep.feasible = false;
        rep.first_violation = "floor(mu - alpha_q*sqrt(N+M+n)) >= 0";
        return rep;
    }
    // alpha in (0,1)  <=>  log2(alpha_q) < k
    if (!(rep.log2_alpha_q < static_cast<double>(rep.k))) {
        rep.feasible = false;
        rep.first_violation = "alpha in (0,1)";
        return rep;
    }
    // alpha_0 q = sqrt((alpha q)^2 - omega^2) > 2 sqrt(N)
    const f128 a0q_sq = alpha_q * alpha_q - omega * omega;
    if (!(a0q_sq > 4 * Nq)) {
        rep.feasible = false;
        rep.first_violation = "alpha_0*q > 2*sqrt(N)";
        return rep;
    }
    rep.feasible = true;
    return rep;
}

} // namespace hghz

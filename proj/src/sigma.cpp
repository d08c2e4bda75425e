#include "hghz/sigma.hpp"

#include <cmath>
#include <stdexcept>

namespace hghz {

namespace {

// dense B = R^T R (cols x cols), in doubles
std::vector<double> gram(const IntMatrix& R) {
    size_t n = R.cols;
    std::vector<double> B(n * n, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            double s = 0;
            for (size_t r = 0; r < R.rows; ++r)
                s += static_cast<double>(R.at(r, i)) * static_cast<double>(R.at(r, j));
            B[i * n + j] = s;
            B[j * n + i] = s;
        }
    return B;
}

} // namespace

SigmaEstimate sigma_max_estimate(const IntMatrix& R) {
    if (R.rows == 0 || R.cols == 0) throw std::invalid_argument("sigma_max: empty matrix");
    size_t n = R.cols;
    std::vector<double> B = gram(R);

    // Gershgorin bound on lambda_max(B), used to scale the all-zero corner case
    double gersh = 0;
    for (size_t i = 0; i < n; ++i) {
        double row = 0;
        for (size_t j = 0; j < n; ++j) row += std::fabs(B[i * n + j]);
        if (row > gersh) gersh = row;
    }
    if (gersh == 0) return {0.0, 0.0, 0.0, 0.0, 0};

    // fixed pseudo-random start so results are deterministic
    std::vector<double> v(n), Bv(n);
    uint64_t lcg = 0x243f6a8885a308d3ULL;
    double nv = 0;
    for (size_t i = 0; i < n; ++i) {
        lcg = lcg * 6364136223846793005ULL + 1442695040888963407ULL;
        v[i] = 0.5 + static_cast<double>(lcg >> 11) * 0x1.0p-53;
        nv += v[i] * v[i];
    }
    nv = std::sqrt(nv);
    for (auto& x : v) x /= nv;

    double lambda = 0;
    int it = 0;
    for (; it < 10000; ++it) {
        for (size_t i = 0; i < n; ++i) {
            double s = 0;
            for (size_t j = 0; j < n; ++j) s += B[i * n + j] * v[j];
            Bv[i] = s;
        }
        double num = 0, nb = 0;
        for (size_t i = 0; i < n; ++i) {
            num += v[i] * Bv[i];
            nb += Bv[i] * Bv[i];
        }
        nb = std::sqrt(nb);
        double next = num; // Rayleigh quotient, ||v|| = 1
        if (nb == 0) {
            lambda = 0;
            break;
        }
        for (size_t i = 0; i < n; ++i) v[i] = Bv[i] / nb;
        if (it > 0 && std::fabs(next - lambda) <= 1e-12 * std::fabs(next)) {
            lambda = next;
            ++it;
            break;
        }
        lambda = next;
    }

    double res = 0;
    for (size_t i = 0; i < n; ++i) {
        double s = 0;
        for (size_t j = 0; j < n; ++j) s += B[i * n + j] * v[j];
        double d = s - lambda * v[i];
        res += d * d;
    }
    res = std::sqrt(res);

    SigmaEstimate e;
    e.lambda = lambda;
    e.residual = res;
    e.sigma = std::sqrt(std::max(0.0, lambda));
    e.sigma_upper = std::sqrt(std::max(0.0, lambda + res));
    e.iterations = it;
    return e;
}

double sigma_max(const IntMatrix& R) { return sigma_max_estimate(R).sigma; }

bool sigma_sq_plus_one_leq(const IntMatrix& R, double bound) {
    if (bound <= 0) return false;
    SigmaEstimate e = sigma_max_estimate(R);
    return std::sqrt(e.lambda + e.residual + 1.0) <= bound;
}

} // namespace hghz

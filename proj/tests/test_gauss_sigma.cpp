#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "hghz/gauss.hpp"
#include "hghz/sigma.hpp"
#include "hghz/stats.hpp"

using namespace hghz;

TEST_CASE("gauss_sample rejects non-positive width") {
    CHECK_THROWS_AS(DiscreteGaussian({0.0}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteGaussian({-1.0}), std::invalid_argument);
}

TEST_CASE("gauss_sample empirical mean obeys the CLT bound") {
    const double s = 2.5;
    DiscreteGaussian dg({s});
    Rng rng(11);
    const int T = 100000;
    double sum = 0;
    for (int i = 0; i < T; ++i) sum += static_cast<double>(dg.sample(rng));
    double mean = sum / T;
    CHECK(std::fabs(mean) <= 5.0 * s / std::sqrt(static_cast<double>(T)));
}

TEST_CASE("vector norm tail is dominated by the Banaszczyk bound") {
    // Pr[||x||_2 >= s sqrt(n)] <= 2^-n, checked with sampling slack
    const double s = 3.0;
    const size_t n = 8;
    DiscreteGaussian dg({s});
    Rng rng(13);
    const int T = 20000;
    int exceed = 0;
    for (int i = 0; i < T; ++i) {
        double nrm = 0;
        for (size_t j = 0; j < n; ++j) {
            double v = static_cast<double>(dg.sample(rng));
            nrm += v * v;
        }
        if (std::sqrt(nrm) >= s * std::sqrt(static_cast<double>(n))) ++exceed;
    }
    double bound = std::pow(2.0, -static_cast<double>(n));
    CHECK(static_cast<double>(exceed) / T <= bound + 5.0 / std::sqrt(static_cast<double>(T)));
}

TEST_CASE("truncated tail mass is below 2^-200") {
    for (double s : {0.3, 1.0, 2.5, 7.0}) CHECK(DiscreteGaussian::log2_tail_bound(s) < -200.0);
}

TEST_CASE("gauss_sample symmetry via chi-square") {
    const double s = 4.0;
    DiscreteGaussian dg({s});
    Rng rng(17);
    std::map<int64_t, uint64_t> hist;
    const int T = 1000000;
    for (int i = 0; i < T; ++i) ++hist[dg.sample(rng)];
    // pair up x and -x, chi-square on the halves
    double stat = 0;
    int dof = 0;
    for (auto& [v, cnt] : hist) {
        if (v <= 0) continue;
        uint64_t neg = hist.count(-v) ? hist[-v] : 0;
        double tot = static_cast<double>(cnt + neg);
        if (tot < 10) continue;
        double e = tot / 2.0;
        double d1 = static_cast<double>(cnt) - e, d2 = static_cast<double>(neg) - e;
        stat += d1 * d1 / e + d2 * d2 / e;
        dof += 1;
    }
    REQUIRE(dof >= 3);
    CHECK(chi2_sf(stat, static_cast<double>(dof)) > 1e-6);
}

namespace {

// Jacobi eigenvalue oracle for symmetric matrices, test-only
double jacobi_lambda_max(std::vector<double> B, size_t n) {
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) off += B[i * n + j] * B[i * n + j];
        if (off < 1e-24) break;
        for (size_t p = 0; p < n; ++p)
            for (size_t q = p + 1; q < n; ++q) {
                double apq = B[p * n + q];
                if (std::fabs(apq) < 1e-300) continue;
                double app = B[p * n + p], aqq = B[q * n + q];
                double theta = 0.5 * std::atan2(2 * apq, aqq - app);
                double c = std::cos(theta), s = std::sin(theta);
                for (size_t r = 0; r < n; ++r) {
                    double arp = B[r * n + p], arq = B[r * n + q];
                    B[r * n + p] = c * arp - s * arq;
                    B[r * n + q] = s * arp + c * arq;
                }
                for (size_t r = 0; r < n; ++r) {
                    double apr = B[p * n + r], aqr = B[q * n + r];
                    B[p * n + r] = c * apr - s * aqr;
                    B[q * n + r] = s * apr + c * aqr;
                }
            }
    }
    double lmax = B[0];
    for (size_t i = 1; i < n; ++i) lmax = std::max(lmax, B[i * n + i]);
    return lmax;
}

double oracle_sigma_max(const IntMatrix& R) {
    size_t n = R.cols;
    std::vector<double> B(n * n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            double s = 0;
            for (size_t r = 0; r < R.rows; ++r)
                s += static_cast<double>(R.at(r, i)) * static_cast<double>(R.at(r, j));
            B[i * n + j] = s;
        }
    return std::sqrt(std::max(0.0, jacobi_lambda_max(std::move(B), n)));
}

} // namespace

TEST_CASE("sigma_max on fixed matrices") {
    IntMatrix I(2, 2);
    I.at(0, 0) = 1;
    I.at(1, 1) = 1;
    CHECK(sigma_max(I) == doctest::Approx(1.0));
    IntMatrix D(2, 2);
    D.at(0, 0) = 3;
    D.at(1, 1) = 1;
    CHECK(sigma_max(D) == doctest::Approx(3.0));
}

TEST_CASE("sigma_max agrees with the dense eigensolver oracle") {
    Rng rng(19);
    for (int t = 0; t < 30; ++t) {
        size_t rows = 4 + rng.uniform_below(61), cols = 2 + rng.uniform_below(7);
        if (cols > rows) std::swap(rows, cols);
        IntMatrix R(rows, cols);
        for (auto& v : R.data) v = rng.uniform_int(-9, 9);
        double got = sigma_max(R);
        double want = oracle_sigma_max(R);
        if (want > 0) CHECK(std::fabs(got - want) / want <= 1e-6);
    }
    // full 64x64
    for (int t = 0; t < 3; ++t) {
        IntMatrix R(64, 64);
        for (auto& v : R.data) v = rng.uniform_int(-5, 5);
        double got = sigma_max(R);
        double want = oracle_sigma_max(R);
        CHECK(std::fabs(got - want) / want <= 1e-6);
    }
}

TEST_CASE("certified comparison includes the residual") {
    IntMatrix D(3, 3);
    D.at(0, 0) = 4;
    D.at(1, 1) = 2;
    D.at(2, 2) = 1;
    // sigma = 4, sqrt(17) ~ 4.1231
    CHECK(sigma_sq_plus_one_leq(D, 4.2));
    CHECK_FALSE(sigma_sq_plus_one_leq(D, 4.1));
    IntMatrix Z(4, 4);
    CHECK(sigma_sq_plus_one_leq(Z, 1.0));
    CHECK_FALSE(sigma_sq_plus_one_leq(Z, 0.999));
}

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hghz/rng.hpp"

namespace hghz {

// Modulus q = 2^k. Residues live in [0, q) as 64-bit words, so k <= 62 for
// anything materialized; the planner handles larger k in log domain.
struct Modulus {
    uint32_t k = 1;
    uint64_t q = 2;

    Modulus() = default;
    explicit Modulus(uint32_t k_) : k(k_), q(1ULL << k_) {
        if (k_ < 1 || k_ > 62) throw std::invalid_argument("Modulus: need 1 <= k <= 62");
    }
    friend bool operator==(const Modulus& a, const Modulus& b) { return a.k == b.k; }
};

using ZqVector = std::vector<uint64_t>;

struct ZqMatrix {
    size_t rows = 0, cols = 0;
    std::vector<uint64_t> data; // row-major

    ZqMatrix() = default;
    ZqMatrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0) {}
    uint64_t& at(size_t r, size_t c) { return data[r * cols + c]; }
    uint64_t at(size_t r, size_t c) const { return data[r * cols + c]; }
    friend bool operator==(const ZqMatrix& a, const ZqMatrix& b) {
        return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
    }
};

// Signed integer matrix (not reduced mod q); used for Gaussian trapdoors R
// whose real-valued singular values are meaningful.
struct IntMatrix {
    size_t rows = 0, cols = 0;
    std::vector<int64_t> data;

    IntMatrix() = default;
    IntMatrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0) {}
    int64_t& at(size_t r, size_t c) { return data[r * cols + c]; }
    int64_t at(size_t r, size_t c) const { return data[r * cols + c]; }
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
    }
};

// representant of x in [-q/2, q/2)
inline int64_t center(uint64_t x, const Modulus& q) {
    return x >= q.q / 2 ? static_cast<int64_t>(x) - static_cast<int64_t>(q.q)
                        : static_cast<int64_t>(x);
}

inline uint64_t reduce_signed(int64_t v, const Modulus& q) {
    int64_t m = v % static_cast<int64_t>(q.q);
    if (m < 0) m += static_cast<int64_t>(q.q);
    return static_cast<uint64_t>(m);
}

// RoundMod_q: 0 iff the centered representant lies in [-q/4, q/4).
// The interval test is done as -q <= 4*center < q, exact in integers for all k >= 1.
inline int round_mod(uint64_t x, const Modulus& q) {
    int64_t c4 = 4 * center(x, q);
    return (c4 >= -static_cast<int64_t>(q.q) && c4 < static_cast<int64_t>(q.q)) ? 0 : 1;
}

double norm2_mod(const ZqVector& v, const Modulus& q);
int64_t norm_inf_mod(const ZqVector& v, const Modulus& q);

// squared modular 2-norm of the concatenation of two vectors, as a double
double norm2_sq_mod2(const ZqVector& a, const ZqVector& b, const Modulus& q);

ZqVector matvec(const ZqMatrix& A, const ZqVector& x, const Modulus& q);
ZqMatrix matmul(const ZqMatrix& A, const ZqMatrix& B, const Modulus& q);
ZqVector add(const ZqVector& a, const ZqVector& b, const Modulus& q);
ZqVector sub(const ZqVector& a, const ZqVector& b, const Modulus& q);
ZqVector scale(const ZqVector& a, uint64_t c, const Modulus& q);

ZqMatrix random_matrix(size_t rows, size_t cols, const Modulus& q, Rng& rng);
ZqMatrix lift_mod(const IntMatrix& R, const Modulus& q);

} // namespace hghz

#include "hghz/modq.hpp"

#include <cmath>

namespace hghz {

double norm2_mod(const ZqVector& v, const Modulus& q) {
    double s = 0;
    for (uint64_t x : v) {
        double c = static_cast<double>(center(x, q));
        s += c * c;
    }
    return std::sqrt(s);
}

int64_t norm_inf_mod(const ZqVector& v, const Modulus& q) {
    int64_t m = 0;
    for (uint64_t x : v) {
        int64_t c = center(x, q);
        if (c < 0) c = -c;
        if (c > m) m = c;
    }
    return m;
}

double norm2_sq_mod2(const ZqVector& a, const ZqVector& b, const Modulus& q) {
    double s = 0;
    for (uint64_t x : a) {
        double c = static_cast<double>(center(x, q));
        s += c * c;
    }
    for (uint64_t x : b) {
        double c = static_cast<double>(center(x, q));
        s += c * c;
    }
    return s;
}

// Products are reduced before accumulation; with dims <= ~2^10 and q <= 2^62
// the 128-bit accumulator cannot overflow.
ZqVector matvec(const ZqMatrix& A, const ZqVector& x, const Modulus& q) {
    if (A.cols != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    ZqVector y(A.rows, 0);
    for (size_t r = 0; r < A.rows; ++r) {
        unsigned __int128 acc = 0;
        const uint64_t* row = &A.data[r * A.cols];
        for (size_t c = 0; c < A.cols; ++c)
            acc += static_cast<unsigned __int128>(row[c]) * x[c] % q.q;
        y[r] = static_cast<uint64_t>(acc % q.q);
    }
    return y;
}

ZqMatrix matmul(const ZqMatrix& A, const ZqMatrix& B, const Modulus& q) {
    if (A.cols != B.rows) throw std::invalid_argument("matmul: dimension mismatch");
    ZqMatrix C(A.rows, B.cols);
    for (size_t r = 0; r < A.rows; ++r)
        for (size_t c = 0; c < B.cols; ++c) {
            unsigned __int128 acc = 0;
            for (size_t t = 0; t < A.cols; ++t)
                acc += static_cast<unsigned __int128>(A.at(r, t)) * B.at(t, c) % q.q;
            C.at(r, c) = static_cast<uint64_t>(acc % q.q);
        }
    return C;
}

ZqVector add(const ZqVector& a, const ZqVector& b, const Modulus& q) {
    if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
    ZqVector y(a.size());
    for (size_t i = 0; i < a.size(); ++i) y[i] = (a[i] + b[i]) % q.q;
    return y;
}

ZqVector sub(const ZqVector& a, const ZqVector& b, const Modulus& q) {
    if (a.size() != b.size()) throw std::invalid_argument("sub: dimension mismatch");
    ZqVector y(a.size());
    for (size_t i = 0; i < a.size(); ++i) y[i] = (a[i] + q.q - b[i]) % q.q;
    return y;
}

ZqVector scale(const ZqVector& a, uint64_t c, const Modulus& q) {
    ZqVector y(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        y[i] = static_cast<uint64_t>(static_cast<unsigned __int128>(a[i]) * (c % q.q) % q.q);
    return y;
}

ZqMatrix random_matrix(size_t rows, size_t cols, const Modulus& q, Rng& rng) {
    ZqMatrix A(rows, cols);
    for (auto& v : A.data) v = rng.uniform_below(q.q);
    return A;
}

ZqMatrix lift_mod(const IntMatrix& R, const Modulus& q) {
    ZqMatrix A(R.rows, R.cols);
    for (size_t i = 0; i < R.data.size(); ++i) A.data[i] = reduce_signed(R.data[i], q);
    return A;
}

} // namespace hghz

#include "hghz/mp_trapdoor.hpp"

#include <cmath>
#include <stdexcept>

namespace hghz {

// C ~= 1/sqrt(2*pi), the universal subgaussian constant
static constexpr double kC = 0.39894228;

ZqVector gadget_vec(uint32_t k) {
    ZqVector g(k);
    for (uint32_t i = 0; i < k; ++i) g[i] = 1ULL << i;
    return g;
}

ZqMatrix gadget_mat(uint64_t N, uint32_t k) {
    ZqMatrix G(N * k, N);
    for (uint64_t i = 0; i < N; ++i)
        for (uint32_t j = 0; j < k; ++j) G.at(i * k + j, i) = 1ULL << j;
    return G;
}

ZqMatrix mp_assemble(const ZqMatrix& A_hat, const IntMatrix& R, uint32_t k, const Modulus& q) {
    uint64_t N = A_hat.rows;
    uint64_t Nk = N * k;
    if (R.rows != Nk || R.cols != 2 * N) throw std::invalid_argument("mp_assemble: bad R dims");

    // split R = [R_1 | R_2]
    ZqMatrix R1(Nk, N), R2(Nk, N);
    for (size_t r = 0; r < Nk; ++r)
        for (size_t c = 0; c < N; ++c) {
            R1.at(r, c) = reduce_signed(R.at(r, c), q);
            R2.at(r, c) = reduce_signed(R.at(r, c + N), q);
        }

    ZqMatrix G = gadget_mat(N, k);
    ZqMatrix R2A = matmul(R2, A_hat, q);
    ZqMatrix A_u(N + Nk, N);
    for (size_t r = 0; r < N; ++r)
        for (size_t c = 0; c < N; ++c) A_u.at(r, c) = A_hat.at(r, c);
    for (size_t r = 0; r < Nk; ++r)
        for (size_t c = 0; c < N; ++c) {
            uint64_t v = (G.at(r, c) + 2 * q.q - R2A.at(r, c) - R1.at(r, c)) % q.q;
            A_u.at(N + r, c) = v;
        }
    return A_u;
}

MpKeyPair mp_gen(const MpParams& p, Rng& rng) {
    Modulus q = p.q();
    MpKeyPair kp;
    kp.A_hat = random_matrix(p.N, p.N, q, rng);
    DiscreteGaussian dg({p.alpha_q});
    kp.R = IntMatrix(p.N * p.k, 2 * p.N);
    for (auto& v : kp.R.data) v = dg.sample(rng);
    kp.A_u = mp_assemble(kp.A_hat, kp.R, p.k, q);
    return kp;
}

ZqVector g_eval(const ZqMatrix& A, const ZqVector& s, const ZqVector& e, const Modulus& q) {
    return add(matvec(A, s, q), e, q);
}

uint64_t invert_small_gadget(const ZqVector& y, const Modulus& q) {
    uint32_t k = q.k;
    if (y.size() != k) throw std::invalid_argument("invert_small_gadget: length != k");
    uint64_t s = 0;
    for (int i = static_cast<int>(k) - 1; i >= 0; --i) {
        uint64_t t = (y[static_cast<size_t>(i)] +
                      q.q - (static_cast<unsigned __int128>(1ULL << i) * s % q.q) % q.q) % q.q;
        int64_t c4 = 4 * center(t, q);
        bool inside = c4 >= -static_cast<int64_t>(q.q) && c4 < static_cast<int64_t>(q.q);
        if (!inside) s += 1ULL << (k - 1 - static_cast<uint32_t>(i));
    }
    return s % q.q;
}

ZqVector invert_gadget(const ZqVector& y, uint64_t N, const Modulus& q) {
    if (y.size() != N * q.k) throw std::invalid_argument("invert_gadget: length != N*k");
    ZqVector s(N);
    for (uint64_t i = 0; i < N; ++i) {
        ZqVector block(y.begin() + static_cast<long>(i * q.k),
                       y.begin() + static_cast<long>((i + 1) * q.k));
        s[i] = invert_small_gadget(block, q);
    }
    return s;
}

std::optional<std::pair<ZqVector, ZqVector>>
mp_invert(const IntMatrix& R, const ZqMatrix& A_u, const ZqVector& y, const MpParams& p) {
    Modulus q = p.q();
    uint64_t N = p.N, Nk = N * p.k;
    if (A_u.rows != p.M() || A_u.cols != N) throw std::invalid_argument("mp_invert: bad A dims");
    if (y.size() != p.M()) throw std::invalid_argument("mp_invert: bad y length");

    // [R_2 | I_{Nk}] y = R_2 y_top + y_bottom over Z_q
    ZqVector gy(Nk, 0);
    for (size_t r = 0; r < Nk; ++r) {
        unsigned __int128 acc = y[N + r];
        for (size_t c = 0; c < N; ++c)
            acc += static_cast<unsigned __int128>(reduce_signed(R.at(r, c + N), q)) * y[c] % q.q;
        gy[r] = static_cast<uint64_t>(acc % q.q);
    }

    ZqVector s = invert_gadget(gy, N, q);
    ZqVector e = sub(y, matvec(A_u, s, q), q);
    double n2 = norm2_sq_mod2(s, e, q);
    if (n2 > p.r_max * p.r_max) return std::nullopt;
    return std::make_pair(std::move(s), std::move(e));
}

double mp_sigma_bound(const MpParams& p) {
    return kC * p.alpha_q * std::sqrt(static_cast<double>(p.N)) *
           (std::sqrt(static_cast<double>(p.k)) + std::sqrt(2.0) + 1.0);
}

} // namespace hghz

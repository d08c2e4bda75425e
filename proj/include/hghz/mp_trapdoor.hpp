#pragma once

#include <optional>
#include <utility>

#include "hghz/gauss.hpp"
#include "hghz/modq.hpp"

namespace hghz {

// Gadget trapdoor construction: key generation, evaluation g_A(s,e) = As + e,
// and noise-tolerant inversion via bitwise rounding.
struct MpParams {
    uint32_t k;
    uint64_t N;
    double alpha_q; // Gaussian width for the trapdoor entries
    double r_max;   // norm bound on accepted preimages; r_max < q/4 is forced
                    // by the injectivity inequality since sigma_max >= 0

    Modulus q() const { return Modulus(k); }
    uint64_t M() const { return N * (1 + k); }
};

// A_u = [A_hat ; G - R_2 A_hat - R_1] with R = [R_1 | R_2] Gaussian, Nk x 2N.
struct MpKeyPair {
    ZqMatrix A_u;   // M x N
    IntMatrix R;    // Nk x 2N
    ZqMatrix A_hat; // N x N
};

// g = (1, 2, 4, ..., 2^{k-1})^T
ZqVector gadget_vec(uint32_t k);
// G = I_N (x) g, Nk x N block diagonal
ZqMatrix gadget_mat(uint64_t N, uint32_t k);

MpKeyPair mp_gen(const MpParams& p, Rng& rng);

// rebuild [A_hat ; G - R_2 A_hat - R_1] from the pieces; used by structural checks
ZqMatrix mp_assemble(const ZqMatrix& A_hat, const IntMatrix& R, uint32_t k, const Modulus& q);

ZqVector g_eval(const ZqMatrix& A, const ZqVector& s, const ZqVector& e, const Modulus& q);

// One gadget block: returns s with g s + e = y exactly recovered whenever every
// centered noise entry lies in [-q/8, q/8) (conservative; the rounding test
// itself tolerates up to q/4).
uint64_t invert_small_gadget(const ZqVector& y, const Modulus& q);

ZqVector invert_gadget(const ZqVector& y, uint64_t N, const Modulus& q);

// MP.Invert: s~ = InvertGadget([R_2 | I_{Nk}] y), e~ = y - A s~; the pair is
// returned only if ||(s~, e~)||_2 <= r_max (modular norms), else nothing.
std::optional<std::pair<ZqVector, ZqVector>>
mp_invert(const IntMatrix& R, const ZqMatrix& A_u, const ZqVector& y, const MpParams& p);

// sqrt((C alpha_q sqrt(N) (sqrt(k) + sqrt(2) + 1))^2 + 1) <= q / (4 r_max),
// the keygen-time form of the injectivity inequality
double mp_sigma_bound(const MpParams& p);

} // namespace hghz

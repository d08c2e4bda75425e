#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hghz/mp_trapdoor.hpp"

namespace hghz {

enum class Regime : uint8_t { Toy = 0, Secure = 1 };

// Parameter tuple P = (k, N, alpha, r_max, n, mu). r_safe and the dimension
// helpers are derived. In the toy regime only mu >= 1 and the injectivity
// inequality are required; security there is explicitly vacuous.
struct Params {
    uint32_t k = 4;
    uint64_t N = 1;
    uint64_t n = 1;
    double alpha_q = 0.3;
    double r_max = 0;
    double r_safe = 0;
    uint64_t mu = 1;
    Regime regime = Regime::Toy;

    Modulus q() const { return Modulus(k); }
    uint64_t M() const { return N * (1 + k); }
    uint64_t dims() const { return N + M() + n; } // coordinate count of (s, e)
    double sqrt_dims() const;
    MpParams mp() const { return MpParams{k, N, alpha_q, r_max}; }

    friend bool operator==(const Params& a, const Params& b);
};

// Toy parameters: r_max from the keygen inequality, mu capped by
// r_safe / sqrt(N+M+n). mu_override, when nonzero, must stay below the cap.
Params make_toy_params(uint64_t N, uint32_t k, uint64_t n, double alpha_q,
                       uint64_t mu_override = 0);

// public key k = (A, y0)
struct HghzKey {
    Params p;
    ZqMatrix A;  // (M+n) x N
    ZqVector y0; // length M+n
};

// trapdoor t_k = (R, d0, s0, e0, A)
struct HghzTrapdoor {
    Params p;
    IntMatrix R;             // Nk x 2N
    std::vector<uint8_t> d0; // n bits
    ZqVector s0;             // length N
    ZqVector e0;             // length M+n
    ZqMatrix A;              // (M+n) x N
};

// x = (s, e, c, d); s, e stored as residues in [0, q)
struct DomainPoint {
    ZqVector s;
    ZqVector e;
    uint8_t c = 0;
    std::vector<uint8_t> d;

    friend bool operator==(const DomainPoint& a, const DomainPoint& b) {
        return a.s == b.s && a.e == b.e && a.c == b.c && a.d == b.d;
    }
};

bool in_domain(const Params& p, const DomainPoint& x);

std::pair<HghzKey, HghzTrapdoor> gen(const Params& p, const std::vector<uint8_t>& d0, Rng& rng);

// Generation with a caller-chosen secret shift (s0, e0). Used to pin exact
// twin fractions and to craft malicious keys in harnesses.
std::pair<HghzKey, HghzTrapdoor> gen_planted(const Params& p, const std::vector<uint8_t>& d0,
                                             const ZqVector& s0, const ZqVector& e0, Rng& rng);

// f_k(x) = A s + e + (q/2)[0^M; d] + c y0. Rejects x outside the domain.
ZqVector eval(const HghzKey& k, const DomainPoint& x);
// same formula without the domain check (twin partners may leave the domain)
ZqVector eval_raw(const HghzKey& k, const DomainPoint& x);

std::vector<uint8_t> h(const DomainPoint& x);

// Returns the full preimage pair {x, x'} of y when y has exactly two
// preimages in the domain, nothing otherwise. x is the c = 0 preimage.
std::optional<std::pair<DomainPoint, DomainPoint>> invert(const HghzTrapdoor& t, const ZqVector& y);

// partner of x under the trapdoor shift; may leave the domain
DomainPoint twin_partner(const HghzTrapdoor& t, const DomainPoint& x);

bool check_trapdoor(const std::vector<uint8_t>& d0, const HghzTrapdoor& t, const HghzKey& k);

struct DeltaEstimate {
    uint64_t trials = 0;
    uint64_t non_twin = 0;
    double delta_hat = 0;
    double ci_low = 0;  // 99% Clopper-Pearson
    double ci_high = 0;
};

DeltaEstimate estimate_delta(const HghzKey& k, const HghzTrapdoor& t, uint64_t trials,
                             uint64_t seed, unsigned threads = 1);

// worst-case delta bound (alpha q + 1)(N+M+n)^{3/2} / (mu + 1/2)
double delta_m_bound(const Params& p);

// exact per-key twin fraction of the hypercube domain for the shift (s0, e0)
double exact_twin_fraction(const Params& p, const ZqVector& s0, const ZqVector& e0);

DomainPoint sample_domain(const Params& p, Rng& rng);
// uniform with ||(s,e)||_inf <= mu - margin
DomainPoint sample_domain_margin(const Params& p, uint64_t margin, Rng& rng);

} // namespace hghz

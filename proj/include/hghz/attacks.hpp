#pragma once

#include "hghz/protocol.hpp"

namespace hghz {

struct AttackStats {
    uint64_t trials = 0;
    uint64_t wins = 0;
    double win_rate = 0;
    double exact = 0; // enumerated value for the same decision rule
    double sigma = 0; // binomial std dev at the exact value
};

// The distinguishing attack on any correct BLIND_can protocol: submit
// d0^(0) = 1^n and d0^(1) = 1...10...0, measure the honest output state in the
// computational basis, guess 1 unless all outcomes agree. The exact rate is
// enumerated over all measurement patterns of both branches.
AttackStats attack_blind_can(size_t n, uint64_t trials, uint64_t seed, unsigned threads = 1,
                             bool equal_d0_sanity = false);

double attack_blind_can_exact(size_t n);

struct AlphaLeakStats {
    AttackStats unprotected_variant; // per-party alpha part revealed directly
    AttackStats protected_variant;   // MPC keeps the part hidden
    uint64_t resampled_non_twin = 0;
};

// Malicious server runs the circuit on one applicant's key alone, obtaining a
// BB84-type state in basis d0, Hadamard-measures it and compares against the
// leaked PartAlpha_Loc part (unprotected) or a fresh random bit (MPC view).
AlphaLeakStats attack_alpha_leak(uint64_t trials, uint64_t seed, unsigned threads = 1);

} // namespace hghz

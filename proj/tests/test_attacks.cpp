#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hghz/attacks.hpp"

using namespace hghz;

TEST_CASE("blind_can exact oracle values") {
    // enumeration: p* = 3/4 - 2^-(n - ceil(n/2)) / 4
    CHECK(attack_blind_can_exact(2) == doctest::Approx(0.625));
    CHECK(attack_blind_can_exact(4) == doctest::Approx(0.6875));
    CHECK(attack_blind_can_exact(6) == doctest::Approx(0.71875));
    CHECK(attack_blind_can_exact(4) > 0.55);
}

TEST_CASE("blind_can attack matches its enumerated rate") {
    AttackStats st = attack_blind_can(4, 20000, 3, 2);
    CHECK(st.exact == doctest::Approx(0.6875));
    CHECK(std::fabs(st.win_rate - st.exact) <= 3 * st.sigma);
}

TEST_CASE("blind_can with equal d0 wins exactly half the time") {
    AttackStats st = attack_blind_can(4, 20000, 7, 2, true);
    CHECK(st.exact == 0.5);
    CHECK(std::fabs(st.win_rate - 0.5) <= 3 * st.sigma);
}

TEST_CASE("alpha leak: unprotected advantage appears, MPC removes it") {
    AlphaLeakStats st = attack_alpha_leak(20000, 11, 2);
    CHECK(st.unprotected_variant.exact == doctest::Approx(0.625));
    CHECK(std::fabs(st.unprotected_variant.win_rate - st.unprotected_variant.exact) <=
          3 * st.unprotected_variant.sigma);
    CHECK(st.protected_variant.exact == doctest::Approx(0.5));
    CHECK(std::fabs(st.protected_variant.win_rate - 0.5) <= 3 * st.protected_variant.sigma);
}

TEST_CASE("oracle adversary with known d0 wins always (harness sanity)") {
    // if d0 is fixed and known, guessing it directly wins with probability 1;
    // the stochastic harness above is only meaningful because d0 is drawn fresh
    Rng rng(13);
    Params p = make_toy_params(2, 12, 1, 1.0);
    int wins = 0;
    for (int t = 0; t < 200; ++t) {
        uint8_t d0 = static_cast<uint8_t>(rng.bit());
        auto [k, tr] = gen_loc(p, d0, rng);
        uint8_t guess = tr.d0[0]; // out-of-band trapdoor access
        if (guess == d0) ++wins;
    }
    CHECK(wins == 200);
}

TEST_CASE("attack determinism") {
    AttackStats a = attack_blind_can(4, 2000, 5, 1);
    AttackStats b = attack_blind_can(4, 2000, 5, 4);
    CHECK(a.wins == b.wins);
}

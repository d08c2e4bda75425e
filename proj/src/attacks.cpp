#include "hghz/attacks.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace hghz {

namespace {

Params attack_local_params() { return make_toy_params(2, 12, 1, 1.0); }

// local keys with a zero secret shift: every image is a twin, so the honest
// protocol below is exactly correct and the enumeration oracle is exact
std::pair<LocalKey, LocalTrapdoor> gen_loc_zero_shift(const Params& p, uint8_t d0, Rng& rng) {
    ZqVector s0(p.N, 0), e0(p.M() + p.n, 0);
    return gen_planted(p, {static_cast<uint8_t>(d0 & 1)}, s0, e0, rng);
}

uint64_t batch(const std::function<bool(Rng&)>& trial, uint64_t trials, uint64_t seed,
               unsigned threads) {
    if (threads == 0) threads = 1;
    std::vector<uint64_t> wins(threads, 0);
    auto worker = [&](unsigned id) {
        uint64_t lo = trials * id / threads, hi = trials * (id + 1) / threads;
        uint64_t w = 0;
        for (uint64_t t = lo; t < hi; ++t) {
            Rng rng(seed, 5000 + t);
            if (trial(rng)) ++w;
        }
        wins[id] = w;
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker, i);
        for (auto& th : pool) th.join();
    }
    uint64_t total = 0;
    for (uint64_t w : wins) total += w;
    return total;
}

} // namespace

double attack_blind_can_exact(size_t n) {
    size_t s = (n + 1) / 2;
    // enumerate all measurement patterns of both branches under the decision
    // rule: all-equal -> random guess, otherwise guess c = 1
    double win = 0;
    for (int c = 0; c < 2; ++c) {
        size_t sup = c == 0 ? n : s;
        size_t off = n - sup;
        double p_win_c = 0;
        for (uint64_t u = 0; u < (uint64_t{1} << off); ++u) {
            double pu = 1.0 / static_cast<double>(uint64_t{1} << off);
            for (int g = 0; g < 2; ++g) {
                // pattern = [g...g | bits of u]
                bool all_equal = true;
                for (size_t i = 0; i < off; ++i)
                    if (static_cast<int>((u >> i) & 1) != g) all_equal = false;
                double guess1 = all_equal ? 0.5 : 1.0; // P[guess = 1]
                p_win_c += pu * 0.5 * (c == 1 ? guess1 : 1.0 - guess1);
            }
        }
        win += 0.5 * p_win_c;
    }
    return win;
}

AttackStats attack_blind_can(size_t n, uint64_t trials, uint64_t seed, unsigned threads,
                             bool equal_d0_sanity) {
    if (n < 2) throw std::invalid_argument("attack_blind_can: n >= 2");
    Params p = attack_local_params();
    std::vector<uint8_t> d0_all(n, 1);
    std::vector<uint8_t> d0_half(n, 0);
    for (size_t i = 0; i < (n + 1) / 2; ++i) d0_half[i] = 1;
    if (equal_d0_sanity) d0_half = d0_all;

    auto trial = [&](Rng& rng) {
        int c = rng.bit();
        const auto& d0 = c ? d0_half : d0_all;
        DistKey key;
        DistTrapdoor trap;
        for (uint8_t bit : d0) {
            auto [k, t] = gen_loc_zero_shift(p, bit, rng);
            key.parties.push_back(std::move(k));
            trap.parties.push_back(std::move(t));
        }
        DistCircuitFunction f(key, trap);
        CircuitOutcome oc = run_server_circuit_exact(f, rng);
        if (oc.kind != CircuitOutcome::Kind::Twin)
            return rng.bit() == c; // zero-shift keys never take this path

        // honest corrections, as in the hypothetical BLIND_can run
        ZqVector y(oc.y.size() / 8);
        for (size_t i = 0; i < y.size(); ++i) {
            uint64_t v = 0;
            for (int j = 0; j < 8; ++j)
                v |= static_cast<uint64_t>(static_cast<uint8_t>(oc.y[8 * i + static_cast<size_t>(j)]))
                     << (8 * j);
            y[i] = v;
        }
        std::vector<PartInfoSymbol> v(n);
        for (size_t i = 0; i < n; ++i) v[i] = part_info_loc(i, trap.parties[i], y);
        int alpha = 0;
        for (size_t i = 0; i < n; ++i) {
            auto part = part_alpha_loc(i, trap.parties[i], y, oc.b);
            alpha ^= part.value_or(0);
        }
        std::vector<uint8_t> shares(n, 0);
        std::vector<size_t> sup;
        for (size_t i = 0; i < n; ++i)
            if (d0[i]) sup.push_back(i);
        for (size_t i = 0; i + 1 < sup.size(); ++i) shares[sup[i]] = static_cast<uint8_t>(rng.bit());
        if (!sup.empty()) {
            uint8_t acc = 0;
            for (size_t i = 0; i + 1 < sup.size(); ++i) acc ^= shares[sup[i]];
            shares[sup.back()] = static_cast<uint8_t>(alpha) ^ acc;
        }
        HiddenGhzDescription desc = apply_corrections(oc.state, v, shares);

        // computational measurement of the final state
        const std::vector<uint8_t>& pattern = rng.bit() ? desc.d_prime : desc.d;
        bool all_equal = true;
        for (size_t i = 1; i < n; ++i)
            if (pattern[i] != pattern[0]) all_equal = false;
        int guess = all_equal ? rng.bit() : 1;
        return guess == c;
    };

    AttackStats st;
    st.trials = trials;
    st.wins = batch(trial, trials, seed, threads);
    st.win_rate = trials ? static_cast<double>(st.wins) / static_cast<double>(trials) : 0;
    st.exact = equal_d0_sanity ? 0.5 : attack_blind_can_exact(n);
    st.sigma = std::sqrt(st.exact * (1 - st.exact) / static_cast<double>(trials));
    return st;
}

AlphaLeakStats attack_alpha_leak(uint64_t trials, uint64_t seed, unsigned threads) {
    Params p = attack_local_params();
    AlphaLeakStats out;

    // One harness per variant so the two estimates use independent streams.
    auto make_trial = [&](bool mpc_protected) {
        return [&, mpc_protected](Rng& rng) {
            for (int attempt = 0; attempt < 64; ++attempt) {
                uint8_t d0 = static_cast<uint8_t>(rng.bit());
                auto [k, t] = gen_loc(p, d0, rng);
                DistKey key;
                key.parties.push_back(k);
                DistTrapdoor trap;
                trap.parties.push_back(t);
                DistCircuitFunction f(key, trap);
                CircuitOutcome oc = run_server_circuit_exact(f, rng);
                if (oc.kind != CircuitOutcome::Kind::Twin) continue; // condition on a twin run

                ZqVector y(oc.y.size() / 8);
                for (size_t i = 0; i < y.size(); ++i) {
                    uint64_t v = 0;
                    for (int j = 0; j < 8; ++j)
                        v |= static_cast<uint64_t>(
                                 static_cast<uint8_t>(oc.y[8 * i + static_cast<size_t>(j)]))
                             << (8 * j);
                    y[i] = v;
                }
                auto part = part_alpha_loc(0, trap.parties[0], y, oc.b);
                if (!part) continue;

                // Hadamard measurement of the BB84-type state
                int m;
                if (oc.state.d[0] != oc.state.d_prime[0])
                    m = oc.state.alpha; // |0> + (-1)^alpha |1>, basis outcome = alpha
                else
                    m = rng.bit(); // computational-basis qubit, Hadamard outcome uniform

                int reference = mpc_protected ? rng.bit() : *part;
                int guess = (m != reference) ? 0 : rng.bit();
                return guess == d0;
            }
            return rng.bit() == 1; // out of attempts (never at these params)
        };
    };

    auto fill = [&](AttackStats& st, bool prot, uint64_t stream) {
        st.trials = trials;
        st.wins = batch(make_trial(prot), trials, seed + stream, threads);
        st.win_rate = trials ? static_cast<double>(st.wins) / static_cast<double>(trials) : 0;
        // exact case analysis: deterministic match when d0 = 1, coin-flip when 0
        st.exact = prot ? 0.5 : 0.625;
        st.sigma = std::sqrt(st.exact * (1 - st.exact) / static_cast<double>(trials));
    };
    fill(out.unprotected_variant, false, 0);
    fill(out.protected_variant, true, 1);
    return out;
}

} // namespace hghz

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "hghz/qsim.hpp"
#include "hghz/stats.hpp"
#include "hghz/util.hpp"

using namespace hghz;

namespace {

Params local_toy() { return make_toy_params(2, 12, 1, 1.0); }

std::pair<DistKey, DistTrapdoor> gen_compiled(const Params& p, const std::vector<uint8_t>& d0,
                                              Rng& rng) {
    DistKey K;
    DistTrapdoor T;
    for (uint8_t bit : d0) {
        auto [k, t] = gen_loc(p, bit, rng);
        K.parties.push_back(std::move(k));
        T.parties.push_back(std::move(t));
    }
    return {std::move(K), std::move(T)};
}

uint64_t pack_bits(const Bits& b) {
    uint64_t v = 0;
    for (size_t i = 0; i < b.size(); ++i) v |= static_cast<uint64_t>(b[i] & 1) << i;
    return v;
}

} // namespace

TEST_CASE("hghz description support and canonical predicate") {
    HiddenGhzDescription d{0, {0, 0}, {1, 1}};
    CHECK(d.support() == std::vector<uint8_t>{1, 1});
    CHECK(is_canonical_ghz(d));
    CHECK_FALSE(is_canonical_ghz({1, {0, 0}, {1, 1}}));
    CHECK(is_canonical_ghz({0, {0, 0, 1}, {1, 1, 1}})); // third qubit fixed |1>
    CHECK(is_canonical_ghz({0, {1, 1, 0}, {0, 0, 0}})); // swapped roles
    CHECK_FALSE(is_canonical_ghz({0, {0, 1}, {1, 0}})); // d not constant on support
    CHECK(is_canonical_ghz({0, {1, 0, 1}, {1, 0, 1}})); // empty support, alpha 0
}

TEST_CASE("apply_corrections") {
    // (1, 01, 10) with v = (0,1) and shares XORing to 1
    HiddenGhzDescription d{1, {0, 1}, {1, 0}};
    std::vector<PartInfoSymbol> v{PartInfoSymbol::Zero, PartInfoSymbol::One};
    HiddenGhzDescription out = apply_corrections(d, v, {0, 1});
    CHECK(out.alpha == 0);
    CHECK(out.d == std::vector<uint8_t>{0, 0});
    CHECK(out.d_prime == std::vector<uint8_t>{1, 1});
    CHECK(is_canonical_ghz(out));

    // all-cross v leaves the description unchanged
    HiddenGhzDescription flat{1, {1, 0}, {1, 0}};
    std::vector<PartInfoSymbol> crosses{PartInfoSymbol::NotSupported,
                                        PartInfoSymbol::NotSupported};
    CHECK(apply_corrections(flat, crosses, {1, 1}) == flat);

    // inconsistent v is rejected
    CHECK_THROWS_AS(apply_corrections(flat, v, {0, 1}), std::invalid_argument);
}

TEST_CASE("randomized corrections always canonicalize") {
    Rng rng(3);
    for (int t = 0; t < 2000; ++t) {
        size_t n = 2 + rng.uniform_below(5);
        HiddenGhzDescription d;
        d.alpha = static_cast<uint8_t>(rng.bit());
        d.d.resize(n);
        d.d_prime.resize(n);
        for (size_t i = 0; i < n; ++i) {
            d.d[i] = static_cast<uint8_t>(rng.bit());
            d.d_prime[i] = static_cast<uint8_t>(rng.bit());
        }
        auto sup = d.support();
        std::vector<PartInfoSymbol> v(n, PartInfoSymbol::NotSupported);
        std::vector<uint8_t> shares(n);
        for (auto& s : shares) s = static_cast<uint8_t>(rng.bit());
        // v = u restricted to the support, u = d; shares XOR to alpha over it
        std::vector<size_t> s_idx;
        for (size_t i = 0; i < n; ++i)
            if (sup[i]) {
                v[i] = d.d[i] ? PartInfoSymbol::One : PartInfoSymbol::Zero;
                s_idx.push_back(i);
            }
        if (!s_idx.empty()) {
            uint8_t acc = 0;
            for (size_t i : s_idx)
                if (i != s_idx.back()) acc ^= shares[i];
            shares[s_idx.back()] = d.alpha ^ acc;
        } else if (d.alpha) {
            continue; // |d> + (-1)|d> is not a state; skip the non-physical combo
        }
        CHECK(is_canonical_ghz(apply_corrections(d, v, shares)));
    }
}

TEST_CASE("exact sampler on the LWE instance") {
    Params p = local_toy();
    Rng rng(5);
    std::vector<uint8_t> d0{1, 0, 1, 1};
    auto [K, T] = gen_compiled(p, d0, rng);
    DistCircuitFunction f(K, T);

    uint64_t twins = 0, singles = 0;
    const int shots = 2000;
    std::vector<uint64_t> bit_ones(f.input_bits(), 0);
    for (int s = 0; s < shots; ++s) {
        CircuitOutcome oc = run_server_circuit_exact(f, rng);
        REQUIRE(oc.kind != CircuitOutcome::Kind::Abort);
        for (size_t i = 0; i < oc.b.size(); ++i) bit_ones[i] += oc.b[i];
        if (oc.kind == CircuitOutcome::Kind::Twin) {
            ++twins;
            // support law: d xor d' = d0 on every twin outcome
            CHECK(oc.state.support() == d0);
        } else {
            ++singles;
        }
    }
    CHECK(twins + singles == shots);
    CHECK(twins > singles); // delta is small at these params

    // b-bit marginals are unbiased
    double worst = 0;
    for (uint64_t ones : bit_ones)
        worst = std::max(worst, std::fabs(static_cast<double>(ones) / shots - 0.5));
    CHECK(worst < 0.06);

    // twin frequency tracks the estimate from the trapdoor shifts
    double exact = 1.0;
    for (const auto& t : T.parties) exact *= exact_twin_fraction(p, t.s0, t.e0);
    auto ci = clopper_pearson(twins, shots, 0.99);
    CHECK(ci.first <= exact);
    CHECK(exact <= ci.second);
}

TEST_CASE("synthetic functions stay consistent") {
    Rng rng(7);
    SyntheticFunction f = SyntheticFunction::random(8, 3, 0.75, rng);
    size_t dom = 1u << 8;
    const auto& pre = f.preimage_table();
    size_t total = 0, twins = 0;
    for (const auto& xs : pre) {
        REQUIRE(xs.size() <= 2);
        REQUIRE(xs.size() >= 1);
        total += xs.size();
        twins += xs.size() == 2 ? 2 : 0;
    }
    CHECK(total == dom);
    CHECK(twins == static_cast<size_t>(0.75 * dom));
}

TEST_CASE("dense simulator equals the exact sampler") {
    Rng gen_rng(11);
    // L in {6..12}, mixtures of twin fractions; every fourth pair h-collides
    struct Cfg {
        size_t L, h;
        double twin;
    };
    std::vector<Cfg> cfgs{{6, 2, 1.0}, {7, 3, 0.8}, {8, 3, 0.5}, {9, 4, 0.9}, {10, 4, 0.7}};
    for (const auto& cfg : cfgs) {
        CAPTURE(cfg.L);
        SyntheticFunction f = SyntheticFunction::random(cfg.L, cfg.h, cfg.twin, gen_rng);

        // exact joint distributions coincide
        JointDist dd = exact_joint_dense(f);
        JointDist ds = exact_joint_sampler(f);
        CHECK(tv_distance(dd.p, ds.p) < 1e-9);

        // branch-conditional residuals match the closed form on every branch
        double worst_fid = 1.0;
        for (const auto& [yb, prob] : dd.p) {
            auto residual = dense_branch_residual(f, yb.first, yb.second);
            const auto& xs = f.preimage_table()[yb.first];
            std::map<uint32_t, double> closed;
            if (xs.size() == 1) {
                closed[f.h_of_index(xs[0])] = 1.0;
            } else {
                uint64_t delta = xs[0] ^ xs[1];
                int par = __builtin_popcountll(yb.second & delta) & 1;
                uint32_t h0 = f.h_of_index(xs[0]), h1 = f.h_of_index(xs[1]);
                if (h0 == h1) {
                    closed[h0] = 1.0; // surviving branches always have parity 0
                    REQUIRE(par == 0);
                } else {
                    closed[h0] = 1.0 / std::sqrt(2.0);
                    closed[h1] = (par ? -1.0 : 1.0) / std::sqrt(2.0);
                }
            }
            double dot = 0;
            for (const auto& [hv, amp] : closed) {
                auto it = residual.find(hv);
                dot += amp * (it == residual.end() ? 0.0 : it->second);
            }
            worst_fid = std::min(worst_fid, dot * dot);
        }
        CHECK(worst_fid >= 1.0 - 1e-9);
    }
}

TEST_CASE("shot sampling follows the exact distribution") {
    Rng gen_rng(13);
    SyntheticFunction f = SyntheticFunction::random(6, 2, 0.75, gen_rng);
    JointDist exact = exact_joint_sampler(f);

    auto empirical = [&](bool dense, uint64_t seed, int shots) {
        std::map<std::pair<uint32_t, uint64_t>, double> e;
        Rng rng(seed);
        for (int s = 0; s < shots; ++s) {
            if (dense) {
                DenseOutcome oc = run_server_circuit_dense(f, rng);
                e[{oc.y_id, pack_bits(oc.b)}] += 1.0 / shots;
            } else {
                CircuitOutcome oc = run_server_circuit_exact(f, rng);
                uint32_t y_id = 0;
                for (int i = 0; i < 4; ++i)
                    y_id |= static_cast<uint32_t>(static_cast<uint8_t>(oc.y[static_cast<size_t>(i)]))
                            << (8 * i);
                e[{y_id, pack_bits(oc.b)}] += 1.0 / shots;
            }
        }
        return e;
    };

    const int shots = 100000;
    auto es = empirical(false, 17, shots);
    auto ed = empirical(true, 19, shots);
    // each empirical distribution sits within sampling noise of the exact one;
    // the expected TV of an S-cell histogram at this sample size is about
    // sqrt(S / (2 pi shots))
    double noise = std::sqrt(static_cast<double>(exact.p.size()) /
                             (2 * 3.14159 * static_cast<double>(shots)));
    CHECK(tv_distance(es, exact.p) < 3.0 * noise + 0.01);
    CHECK(tv_distance(ed, exact.p) < 3.0 * noise + 0.01);
    CHECK(tv_distance(es, ed) < 4.5 * noise + 0.01);
}

TEST_CASE("b-bit marginals are unbiased for both simulators") {
    Rng gen_rng(41);
    SyntheticFunction f = SyntheticFunction::random(7, 3, 0.8, gen_rng);
    const int shots = 20000;
    std::vector<uint64_t> ones_exact(7, 0), ones_dense(7, 0);
    Rng rs(43), rd(47);
    for (int s = 0; s < shots; ++s) {
        CircuitOutcome oe = run_server_circuit_exact(f, rs);
        DenseOutcome od = run_server_circuit_dense(f, rd);
        for (size_t i = 0; i < 7; ++i) {
            ones_exact[i] += oe.b[i];
            ones_dense[i] += od.b[i];
        }
    }
    auto chi2 = [&](const std::vector<uint64_t>& ones) {
        double stat = 0;
        for (uint64_t v : ones) {
            double d = static_cast<double>(v) - shots / 2.0;
            stat += d * d / (shots / 4.0);
        }
        return stat;
    };
    CHECK(chi2_sf(chi2(ones_exact), 7.0) > 1e-6);
    CHECK(chi2_sf(chi2(ones_dense), 7.0) > 1e-6);
}

TEST_CASE("hghz_from_preimages phase") {
    Params p = local_toy();
    Rng rng(23);
    auto [K, T] = gen_compiled(p, {1, 1}, rng);
    DistCircuitFunction f(K, T);

    // build a twin pair directly through the trapdoor shift
    DistCodec codec(p, 2);
    uint64_t margin = static_cast<uint64_t>(std::ceil(p.alpha_q * p.sqrt_dims()));
    DistPoint a;
    a.c = 0;
    for (const auto& k : K.parties) {
        DomainPoint xi = sample_domain_margin(k.p, margin, rng);
        xi.c = 0;
        a.parts.push_back(domain_to_local(xi));
    }
    DistPoint b = dist_twin_partner(T, a);
    REQUIRE(dist_in_domain(K, b));
    Bits x = codec.encode(a), xp = codec.encode(b);

    Bits zero(f.input_bits(), 0);
    HiddenGhzDescription d = hghz_from_preimages(f, x, xp, zero);
    CHECK(d.alpha == 0); // b = 0...0 forces alpha = 0

    // flipping one b bit where the encodings differ flips alpha
    Bits delta = xor_bits(x, xp);
    size_t pos = 0;
    while (!delta[pos]) ++pos;
    Bits one = zero;
    one[pos] = 1;
    CHECK(hghz_from_preimages(f, x, xp, one).alpha == 1);
}

TEST_CASE("shot log lines are valid JSON with the documented shape") {
    Rng gen_rng(29);
    SyntheticFunction f = SyntheticFunction::random(6, 2, 0.5, gen_rng);
    Rng rng(31);
    for (int s = 0; s < 50; ++s) {
        CircuitOutcome oc = run_server_circuit_exact(f, rng);
        auto j = nlohmann::json::parse(oc.to_json_line());
        CHECK(j.contains("y"));
        CHECK(j.contains("b"));
        CHECK(j.contains("state"));
        if (oc.kind == CircuitOutcome::Kind::Twin) {
            CHECK(j["state"].contains("alpha"));
            CHECK(j["state"].contains("d"));
            CHECK(j["state"].contains("d_prime"));
        }
    }
}

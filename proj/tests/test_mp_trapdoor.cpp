#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "hghz/mp_trapdoor.hpp"
#include "hghz/sigma.hpp"

using namespace hghz;

namespace {
MpParams toy_mp() {
    MpParams p{12, 2, 1.0, 0.0};
    double T = mp_sigma_bound(p);
    p.r_max = static_cast<double>(p.q().q) / (4.0 * std::sqrt(T * T + 1.0));
    return p;
}
} // namespace

TEST_CASE("gadget vector and matrix") {
    CHECK(gadget_vec(3) == ZqVector{1, 2, 4});
    ZqMatrix G = gadget_mat(2, 2);
    REQUIRE(G.rows == 4);
    REQUIRE(G.cols == 2);
    CHECK(G.at(0, 0) == 1);
    CHECK(G.at(1, 0) == 2);
    CHECK(G.at(2, 1) == 1);
    CHECK(G.at(3, 1) == 2);
    CHECK(G.at(0, 1) == 0);
    CHECK(G.at(2, 0) == 0);

    // (G s)[(i-1)k + j] = 2^j s_i mod q
    Modulus q(5);
    ZqMatrix G2 = gadget_mat(3, 5);
    ZqVector s{7, 13, 2};
    ZqVector y = matvec(G2, s, q);
    for (size_t i = 0; i < 3; ++i)
        for (uint32_t j = 0; j < 5; ++j)
            CHECK(y[i * 5 + j] == ((1ULL << j) * s[i]) % q.q);
}

TEST_CASE("invert_small_gadget recovers exhaustively") {
    Modulus q8(3);
    CHECK(invert_small_gadget({5, 2, 4}, q8) == 5); // g*5, zero noise
    CHECK(invert_small_gadget({0, 0, 0}, q8) == 0);
    CHECK(invert_small_gadget({6, 1, 5}, q8) == 5); // g*5 + (1, -1, 1)

    // exhaustive: all s in Z_8, zero noise
    ZqVector g3 = gadget_vec(3);
    for (uint64_t s = 0; s < 8; ++s) {
        ZqVector y(3);
        for (size_t i = 0; i < 3; ++i) y[i] = g3[i] * s % q8.q;
        CHECK(invert_small_gadget(y, q8) == s);
    }

    // exhaustive: q=8, all s, all noise with ||e||_inf <= 1
    for (uint64_t s = 0; s < 8; ++s)
        for (int e0 = -1; e0 <= 1; ++e0)
            for (int e1 = -1; e1 <= 1; ++e1)
                for (int e2 = -1; e2 <= 1; ++e2) {
                    ZqVector y{reduce_signed(static_cast<int64_t>(g3[0] * s) + e0, q8),
                               reduce_signed(static_cast<int64_t>(g3[1] * s) + e1, q8),
                               reduce_signed(static_cast<int64_t>(g3[2] * s) + e2, q8)};
                    CHECK(invert_small_gadget(y, q8) == s);
                }
}

TEST_CASE("invert_gadget works block-wise") {
    Modulus q16(4);
    ZqVector g = gadget_vec(4);
    CHECK(invert_gadget(ZqVector(8, 0), 2, q16) == ZqVector{0, 0});

    // N=2 concatenation of two solved blocks
    for (uint64_t s0 : {3ULL, 9ULL, 15ULL})
        for (uint64_t s1 : {0ULL, 7ULL, 12ULL}) {
            ZqVector y(8);
            for (size_t i = 0; i < 4; ++i) {
                y[i] = g[i] * s0 % q16.q;
                y[4 + i] = g[i] * s1 % q16.q;
            }
            CHECK(invert_gadget(y, 2, q16) == ZqVector{s0, s1});
        }
}

TEST_CASE("mp_gen structural invariant and determinism") {
    MpParams p = toy_mp();
    Rng rng(23);
    MpKeyPair kp = mp_gen(p, rng);
    REQUIRE(kp.A_u.rows == p.M());
    REQUIRE(kp.A_u.cols == p.N);
    CHECK(mp_assemble(kp.A_hat, kp.R, p.k, p.q()) == kp.A_u);

    Rng r1(99), r2(99);
    MpKeyPair a = mp_gen(p, r1), b = mp_gen(p, r2);
    CHECK(a.A_u == b.A_u);
    CHECK(a.R == b.R);
}

TEST_CASE("sigma_max of honest trapdoors stays under the keygen bound") {
    MpParams p = toy_mp();
    double bound = mp_sigma_bound(p);
    Rng rng(29);
    int ok = 0;
    const int runs = 200;
    for (int t = 0; t < runs; ++t) {
        MpKeyPair kp = mp_gen(p, rng);
        if (sigma_max(kp.R) <= bound) ++ok;
    }
    // the tail bound is 2 e^-N; empirically a wide margin at these params
    CHECK(ok >= static_cast<int>(runs * 0.9));
}

TEST_CASE("g_eval linearity and zero") {
    MpParams p = toy_mp();
    Modulus q = p.q();
    Rng rng(31);
    MpKeyPair kp = mp_gen(p, rng);
    ZqVector zs(p.N, 0), ze(p.M(), 0);
    CHECK(g_eval(kp.A_u, zs, ze, q) == ZqVector(p.M(), 0));

    ZqVector s1{3, 5}, s2{11, 2}, e1(p.M()), e2(p.M());
    for (auto& v : e1) v = rng.uniform_below(3);
    for (auto& v : e2) v = rng.uniform_below(3);
    ZqVector lhs = g_eval(kp.A_u, add(s1, s2, q), add(e1, e2, q), q);
    ZqVector rhs = add(g_eval(kp.A_u, s1, e1, q), g_eval(kp.A_u, s2, e2, q), q);
    CHECK(lhs == rhs);
}

TEST_CASE("mp_invert round-trips in-bound points") {
    MpParams p = toy_mp();
    Modulus q = p.q();
    Rng rng(37);
    MpKeyPair kp = mp_gen(p, rng);
    if (!sigma_sq_plus_one_leq(kp.R, static_cast<double>(q.q) / (4 * p.r_max)))
        return; // sigma tail draw; other seeds cover the check

    // (0,0) -> y = 0 -> (0,0)
    auto z = mp_invert(kp.R, kp.A_u, ZqVector(p.M(), 0), p);
    REQUIRE(z.has_value());
    CHECK(z->first == ZqVector(p.N, 0));
    CHECK(z->second == ZqVector(p.M(), 0));

    int fails = 0;
    const int runs = 10000;
    int64_t box = static_cast<int64_t>(p.r_max / std::sqrt(static_cast<double>(p.N + p.M())));
    for (int t = 0; t < runs; ++t) {
        ZqVector s(p.N), e(p.M());
        for (auto& v : s) v = reduce_signed(rng.uniform_int(-box, box), q);
        for (auto& v : e) v = reduce_signed(rng.uniform_int(-box, box), q);
        ZqVector y = g_eval(kp.A_u, s, e, q);
        auto se = mp_invert(kp.R, kp.A_u, y, p);
        if (!se || se->first != s || se->second != e) ++fails;
    }
    CHECK(fails == 0);

    // uniform y inverts to bottom almost always
    int bottoms = 0;
    for (int t = 0; t < 2000; ++t) {
        ZqVector y(p.M());
        for (auto& v : y) v = rng.uniform_below(q.q);
        if (!mp_invert(kp.R, kp.A_u, y, p)) ++bottoms;
    }
    CHECK(bottoms >= 1990);
}

TEST_CASE("g_eval restricted to the r_max ball has no observable collisions") {
    MpParams p = toy_mp();
    Modulus q = p.q();
    Rng rng(41);
    MpKeyPair kp = mp_gen(p, rng);
    int64_t box = static_cast<int64_t>(p.r_max / std::sqrt(static_cast<double>(p.N + p.M())));
    std::map<ZqVector, std::pair<ZqVector, ZqVector>> seen;
    for (int t = 0; t < 100000; ++t) {
        ZqVector s(p.N), e(p.M());
        for (auto& v : s) v = reduce_signed(rng.uniform_int(-box, box), q);
        for (auto& v : e) v = reduce_signed(rng.uniform_int(-box, box), q);
        ZqVector y = g_eval(kp.A_u, s, e, q);
        auto it = seen.find(y);
        if (it != seen.end()) {
            CHECK(it->second.first == s);
            CHECK(it->second.second == e);
        } else {
            seen.emplace(std::move(y), std::make_pair(std::move(s), std::move(e)));
        }
    }
}

TEST_CASE("exhaustive micro injectivity, N=1 k=4, tight noise box") {
    MpParams p{4, 1, 0.3, 0.0};
    double T = mp_sigma_bound(p);
    p.r_max = static_cast<double>(p.q().q) / (4.0 * std::sqrt(T * T + 1.0));
    Modulus q = p.q();
    Rng rng(43);
    MpKeyPair kp = mp_gen(p, rng);
    REQUIRE(sigma_sq_plus_one_leq(kp.R, static_cast<double>(q.q) / (4 * p.r_max)));

    std::map<ZqVector, std::pair<uint64_t, ZqVector>> image;
    int64_t box = 1;
    // all s in Z_16, all e with ||e||_inf <= box and ||(s,e)||_2 <= r_max
    size_t dims = p.M();
    std::vector<int64_t> e(dims, -box);
    for (uint64_t s = 0; s < q.q; ++s) {
        std::fill(e.begin(), e.end(), -box);
        for (;;) {
            double nrm = static_cast<double>(center(s, q)) * static_cast<double>(center(s, q));
            for (int64_t v : e) nrm += static_cast<double>(v * v);
            if (nrm <= p.r_max * p.r_max) {
                ZqVector ev(dims);
                for (size_t i = 0; i < dims; ++i) ev[i] = reduce_signed(e[i], q);
                ZqVector y = g_eval(kp.A_u, {s}, ev, q);
                auto it = image.find(y);
                if (it != image.end()) {
                    CHECK(it->second.first == s);
                    CHECK(it->second.second == ev);
                } else {
                    image.emplace(y, std::make_pair(s, ev));
                }
                auto back = mp_invert(kp.R, kp.A_u, y, p);
                REQUIRE(back.has_value());
                CHECK(back->first == ZqVector{s});
                CHECK(back->second == ev);
            }
            size_t i = 0;
            while (i < dims && e[i] == box) e[i++] = -box;
            if (i == dims) break;
            ++e[i];
        }
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "hghz/dist_family.hpp"

using namespace hghz;

namespace {

Params local_toy() { return make_toy_params(2, 12, 1, 1.0); }
Params local_micro() { return make_toy_params(1, 4, 1, 0.3); }

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

DistPoint sample_dist(const DistKey& K, Rng& rng) {
    DistPoint x;
    x.c = static_cast<uint8_t>(rng.bit());
    for (const auto& k : K.parties) {
        DomainPoint xi = sample_domain(k.p, rng);
        xi.c = x.c;
        x.parts.push_back(domain_to_local(xi));
    }
    return x;
}

// exhaustive local preimage counts per (y, c), via eval only
struct LocalCounts {
    std::map<ZqVector, std::array<uint64_t, 2>> by_y;
    uint64_t domain_half = 0; // points per c slice
};

LocalCounts enumerate_local(const LocalKey& key) {
    const Params& p = key.p;
    LocalCounts out;
    int64_t mu = static_cast<int64_t>(p.mu);
    size_t dims = p.dims();
    std::vector<int64_t> coords(dims, -mu);
    Modulus q = p.q();
    for (;;) {
        DomainPoint x;
        x.s.resize(p.N);
        x.e.resize(p.M() + p.n);
        for (size_t i = 0; i < p.N; ++i) x.s[i] = reduce_signed(coords[i], q);
        for (size_t i = 0; i < dims - p.N; ++i) x.e[i] = reduce_signed(coords[p.N + i], q);
        for (int c = 0; c < 2; ++c) {
            x.c = static_cast<uint8_t>(c);
            for (uint8_t d = 0; d < 2; ++d) {
                x.d = {d};
                ++out.by_y[eval(key, x)][static_cast<size_t>(c)];
            }
        }
        size_t i = 0;
        while (i < dims && coords[i] == mu) coords[i++] = -mu;
        if (i == dims) break;
        ++coords[i];
    }
    out.domain_half = 0;
    for (auto& [y, cnt] : out.by_y) out.domain_half += cnt[0];
    return out;
}

} // namespace

TEST_CASE("gen_loc delegates and stays independent across calls") {
    Params p = local_toy();
    Rng rng(3);
    auto [k1, t1] = gen_loc(p, 1, rng);
    CHECK(t1.d0 == std::vector<uint8_t>{1});
    CHECK(check_trapdoor_dist(1, t1, k1));
    auto [k2, t2] = gen_loc(p, 1, rng);
    CHECK_FALSE(k1.A == k2.A);

    Params p3 = make_toy_params(2, 12, 3, 1.0);
    CHECK_THROWS_AS(gen_loc(p3, 1, rng), std::invalid_argument);
}

TEST_CASE("eval_dist with one party reduces to the underlying eval") {
    Params p = local_toy();
    Rng rng(5);
    auto [K, T] = gen_compiled(p, {1}, rng);
    for (int t = 0; t < 100; ++t) {
        DistPoint x = sample_dist(K, rng);
        ZqVector y = eval_dist(K, x);
        CHECK(y == eval(K.parties[0], local_to_domain(x.parts[0], x.c)));
    }
}

TEST_CASE("flipping c and shifting every party preserves the image") {
    Params p = local_toy();
    Rng rng(7);
    auto [K, T] = gen_compiled(p, {1, 0, 1}, rng);
    for (int t = 0; t < 100; ++t) {
        DistPoint x = sample_dist(K, rng);
        DistPoint partner = dist_twin_partner(T, x);
        // bypass the domain check: partners may exit the hypercube
        ZqVector y1, y2;
        for (size_t i = 0; i < K.n_parties(); ++i) {
            ZqVector a = eval_raw(K.parties[i], local_to_domain(x.parts[i], x.c));
            ZqVector b = eval_raw(K.parties[i], local_to_domain(partner.parts[i], partner.c));
            y1.insert(y1.end(), a.begin(), a.end());
            y2.insert(y2.end(), b.begin(), b.end());
        }
        CHECK(y1 == y2);
        // h-concatenation XOR equals d0
        for (size_t i = 0; i < K.n_parties(); ++i)
            CHECK((x.parts[i].d ^ partner.parts[i].d) == T.parties[i].d0[0]);
    }
}

TEST_CASE("part_info_loc follows the figure") {
    Params p = local_toy();
    Rng rng(9);
    auto [K, T] = gen_compiled(p, {1, 0}, rng);
    for (int t = 0; t < 200; ++t) {
        DistPoint x = sample_dist(K, rng);
        ZqVector y = eval_dist(K, x);
        // unsupported party sees the cross no matter what
        CHECK(part_info_loc(1, T.parties[1], y) == PartInfoSymbol::NotSupported);
        PartInfoSymbol v0 = part_info_loc(0, T.parties[0], y);
        if (is_correction(v0)) {
            auto pair = invert(T.parties[0], ZqVector(y.begin(), y.begin() + 27));
            REQUIRE(pair.has_value());
            CHECK((v0 == PartInfoSymbol::One) == (pair->first.d[0] == 1));
        }
    }
    // junk y block aborts locally for the supported party
    int bottoms = 0;
    for (int t = 0; t < 500; ++t) {
        ZqVector y(K.n_parties() * K.local_y_len());
        for (auto& v : y) v = rng.uniform_below(p.q().q);
        if (part_info_loc(0, T.parties[0], y) == PartInfoSymbol::LocalAbort) ++bottoms;
        CHECK(part_info_loc(1, T.parties[1], y) == PartInfoSymbol::NotSupported);
    }
    CHECK(bottoms == 500);
}

TEST_CASE("part_alpha_loc shares XOR to the global inner product") {
    Params p = local_toy();
    Rng rng(11);
    auto [K, T] = gen_compiled(p, {1, 0, 1}, rng);
    DistCodec codec(p, 3);
    uint64_t margin = static_cast<uint64_t>(std::ceil(p.alpha_q * p.sqrt_dims()));
    int checked = 0;
    for (int t = 0; t < 10000; ++t) {
        DistPoint x;
        x.c = static_cast<uint8_t>(rng.bit());
        for (const auto& k : K.parties) {
            DomainPoint xi = sample_domain_margin(k.p, margin, rng);
            xi.c = x.c;
            x.parts.push_back(domain_to_local(xi));
        }
        ZqVector y = eval_dist(K, x);
        Bits b(codec.total_bits());
        for (auto& bit : b) bit = static_cast<uint8_t>(rng.bit());

        auto pair = invert_dist(T, y);
        REQUIRE(pair.has_value());
        int direct = parity_dot(b, xor_bits(codec.encode(pair->first), codec.encode(pair->second)));
        int shares = 0;
        for (size_t i = 0; i < 3; ++i) {
            auto part = part_alpha_loc(i, T.parties[i], y, b);
            REQUIRE(part.has_value());
            shares ^= *part;
        }
        CHECK(shares == direct);
        ++checked;
    }
    CHECK(checked == 10000);
}

TEST_CASE("part_alpha_loc with one party equals the inner product plus b_c") {
    Params p = local_toy();
    Rng rng(13);
    auto [K, T] = gen_compiled(p, {1}, rng);
    DistCodec codec(p, 1);
    uint64_t margin = static_cast<uint64_t>(std::ceil(p.alpha_q * p.sqrt_dims()));
    for (int t = 0; t < 500; ++t) {
        DistPoint x;
        x.c = static_cast<uint8_t>(rng.bit());
        DomainPoint xi = sample_domain_margin(p, margin, rng);
        xi.c = x.c;
        x.parts.push_back(domain_to_local(xi));
        ZqVector y = eval_dist(K, x);
        Bits b(codec.total_bits());
        for (auto& bit : b) bit = static_cast<uint8_t>(rng.bit());
        auto pair = invert_dist(T, y);
        REQUIRE(pair.has_value());
        int global = parity_dot(b, xor_bits(codec.encode(pair->first), codec.encode(pair->second)));
        auto part = part_alpha_loc(0, T.parties[0], y, b);
        REQUIRE(part.has_value());
        CHECK(*part == global);
    }
}

TEST_CASE("delta_compose") {
    CHECK(delta_compose(0.0, 5) == 0.0);
    CHECK(delta_compose(0.1, 2) == doctest::Approx(0.19));
    CHECK(delta_compose(0.1, 5) == doctest::Approx(0.40951));
    CHECK(delta_compose(0.1, 5) <= 0.5); // delta * n bound
    CHECK_THROWS_AS(delta_compose(1.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(delta_compose(0.1, 0), std::invalid_argument);
}

TEST_CASE("exhaustive micro compiler law and Def 4.2 bullets, n = 2") {
    Params p = local_micro();
    Rng rng(17);
    // party 1 supported with a planted nonzero shift, party 2 unsupported with
    // a zero shift (its image blocks are always twins)
    ZqVector s0_1{1}, e0_1(p.M() + 1, 0);
    auto [k1, t1] = gen_planted(p, {1}, s0_1, e0_1, rng);
    ZqVector s0_2{0}, e0_2(p.M() + 1, 0);
    auto [k2, t2] = gen_planted(p, {0}, s0_2, e0_2, rng);
    DistKey K;
    K.parties = {k1, k2};
    DistTrapdoor T;
    T.parties = {t1, t2};

    LocalCounts c1 = enumerate_local(k1), c2 = enumerate_local(k2);

    // local injectivity per c slice, observed from the eval enumeration
    for (const auto& [y, cnt] : c1.by_y) {
        CHECK(cnt[0] <= 1);
        CHECK(cnt[1] <= 1);
    }

    // local twin fractions from the enumeration
    auto twin_fraction = [](const LocalCounts& c) {
        uint64_t twins = 0;
        for (const auto& [y, cnt] : c.by_y)
            if (cnt[0] == 1 && cnt[1] == 1) twins += 2;
        return static_cast<double>(twins) / static_cast<double>(2 * c.domain_half);
    };
    double f1 = twin_fraction(c1), f2 = twin_fraction(c2);
    CHECK(f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(f2 == doctest::Approx(1.0).epsilon(1e-12));

    // compiled twin fraction equals the product of local twin fractions:
    // count global images with exactly two preimages through the local counts
    double twin_points = 0, domain = 0;
    for (const auto& [y1, cnt1] : c1.by_y)
        for (const auto& [y2, cnt2] : c2.by_y) {
            uint64_t pre = cnt1[0] * cnt2[0] + cnt1[1] * cnt2[1];
            domain += static_cast<double>(pre);
            if (pre == 2) twin_points += 2;
        }
    CHECK(domain == 2.0 * static_cast<double>(c1.domain_half) *
                        static_cast<double>(c2.domain_half));
    double compiled_fraction = twin_points / domain;
    CHECK(compiled_fraction == doctest::Approx(f1 * f2).epsilon(1e-12));
    // with delta = max_i delta_i the compiler bound reads prod(1-delta_i) >= 1-delta'
    CHECK(compiled_fraction >= 1.0 - delta_compose(1.0 - f1, 2) - 1e-12);

    // equal per-party deltas make the compiler law an exact equality
    {
        Rng rng2(18);
        auto [k1e, t1e] = gen_planted(p, {1}, s0_1, e0_1, rng2);
        auto [k2e, t2e] = gen_planted(p, {1}, s0_1, e0_1, rng2);
        LocalCounts e1 = enumerate_local(k1e), e2 = enumerate_local(k2e);
        double g1 = twin_fraction(e1), g2 = twin_fraction(e2);
        CHECK(g1 == doctest::Approx(g2).epsilon(1e-12));
        CHECK(g1 * g2 == doctest::Approx(1.0 - delta_compose(1.0 - g1, 2)).epsilon(1e-12));
    }

    // the preimage factorization matches direct global evaluation on a sample
    for (int t = 0; t < 2000; ++t) {
        DistPoint x = sample_dist(K, rng);
        ZqVector y = eval_dist(K, x);
        ZqVector y1(y.begin(), y.begin() + static_cast<long>(K.local_y_len()));
        ZqVector y2(y.begin() + static_cast<long>(K.local_y_len()), y.end());
        uint64_t want = c1.by_y.at(y1)[0] * c2.by_y.at(y2)[0] +
                        c1.by_y.at(y1)[1] * c2.by_y.at(y2)[1];
        auto pair = invert_dist(T, y);
        CHECK((want == 2) == pair.has_value());

        // Def 4.2 bullets over the image
        std::vector<PartInfoSymbol> v{part_info_loc(0, t1, y), part_info_loc(1, t2, y)};
        bool has_bottom = v[0] == PartInfoSymbol::LocalAbort || v[1] == PartInfoSymbol::LocalAbort;
        CHECK((want == 2) == !has_bottom);           // bullet 1 on the image
        CHECK(v[1] == PartInfoSymbol::NotSupported); // bullet 2, d0[2] = 0
        if (is_correction(v[0])) CHECK(t1.d0[0] == 1);
        if (want == 2) {
            // bullet 3: v agrees with u = h(x_{c=0}) on the support
            REQUIRE(pair.has_value());
            uint8_t u0 = pair->first.parts[0].d;
            CHECK((v[0] == PartInfoSymbol::One) == (u0 == 1));
        }
    }
}

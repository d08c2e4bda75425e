#include "hghz/hghz_family.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "hghz/sigma.hpp"
#include "hghz/stats.hpp"

namespace hghz {

double Params::sqrt_dims() const { return std::sqrt(static_cast<double>(dims())); }

bool operator==(const Params& a, const Params& b) {
    return a.k == b.k && a.N == b.N && a.n == b.n && a.alpha_q == b.alpha_q &&
           a.r_max == b.r_max && a.r_safe == b.r_safe && a.mu == b.mu && a.regime == b.regime;
}

Params make_toy_params(uint64_t N, uint32_t k, uint64_t n, double alpha_q, uint64_t mu_override) {
    if (k < 2 || k > 20) throw std::invalid_argument("toy params: need 2 <= k <= 20");
    Params p;
    p.k = k;
    p.N = N;
    p.n = n;
    p.alpha_q = alpha_q;
    p.regime = Regime::Toy;
    MpParams mp{k, N, alpha_q, 0.0};
    double T = mp_sigma_bound(mp);
    p.r_max = static_cast<double>(p.q().q) / (4.0 * std::sqrt(T * T + 1.0));
    p.r_safe = p.r_max - alpha_q * p.sqrt_dims();
    uint64_t cap = p.r_safe > 0 ? static_cast<uint64_t>(std::floor(p.r_safe / p.sqrt_dims())) : 0;
    p.mu = mu_override == 0 ? cap : mu_override;
    if (p.mu < 1 || p.mu > cap)
        throw std::invalid_argument("toy params: mu out of range (infeasible toy choice)");
    return p;
}

bool in_domain(const Params& p, const DomainPoint& x) {
    if (x.s.size() != p.N || x.e.size() != p.M() + p.n || x.d.size() != p.n) return false;
    if (x.c > 1) return false;
    Modulus q = p.q();
    int64_t mu = static_cast<int64_t>(p.mu);
    for (uint64_t v : x.s) {
        int64_t c = center(v, q);
        if (c < -mu || c > mu) return false;
    }
    for (uint64_t v : x.e) {
        int64_t c = center(v, q);
        if (c < -mu || c > mu) return false;
    }
    for (uint8_t b : x.d)
        if (b > 1) return false;
    return true;
}

static ZqVector shift_vec(const Params& p, const std::vector<uint8_t>& d) {
    // (q/2) [0^M ; d]
    ZqVector v(p.M() + p.n, 0);
    uint64_t half = p.q().q / 2;
    for (uint64_t i = 0; i < p.n; ++i) v[p.M() + i] = d[i] ? half : 0;
    return v;
}

std::pair<HghzKey, HghzTrapdoor> gen(const Params& p, const std::vector<uint8_t>& d0, Rng& rng) {
    DiscreteGaussian dg({p.alpha_q});
    ZqVector s0(p.N), e0(p.M() + p.n);
    Modulus q = p.q();
    for (auto& v : s0) v = reduce_signed(dg.sample(rng), q);
    for (auto& v : e0) v = reduce_signed(dg.sample(rng), q);
    return gen_planted(p, d0, s0, e0, rng);
}

std::pair<HghzKey, HghzTrapdoor> gen_planted(const Params& p, const std::vector<uint8_t>& d0,
                                             const ZqVector& s0, const ZqVector& e0, Rng& rng) {
    if (d0.size() != p.n) throw std::invalid_argument("gen: d0 length != n");
    if (p.k > 62) throw std::invalid_argument("gen: regime too large to materialize");
    if (s0.size() != p.N || e0.size() != p.M() + p.n)
        throw std::invalid_argument("gen: bad (s0, e0) dims");
    Modulus q = p.q();

    MpKeyPair mp = mp_gen(p.mp(), rng);
    ZqMatrix A_l = random_matrix(p.n, p.N, q, rng);

    HghzKey key;
    key.p = p;
    key.A = ZqMatrix(p.M() + p.n, p.N);
    for (size_t r = 0; r < p.M(); ++r)
        for (size_t c = 0; c < p.N; ++c) key.A.at(r, c) = mp.A_u.at(r, c);
    for (size_t r = 0; r < p.n; ++r)
        for (size_t c = 0; c < p.N; ++c) key.A.at(p.M() + r, c) = A_l.at(r, c);

    key.y0 = add(add(matvec(key.A, s0, q), e0, q), shift_vec(p, d0), q);

    HghzTrapdoor t;
    t.p = p;
    t.R = mp.R;
    t.d0 = d0;
    t.s0 = s0;
    t.e0 = e0;
    t.A = key.A;
    return {std::move(key), std::move(t)};
}

ZqVector eval_raw(const HghzKey& k, const DomainPoint& x) {
    Modulus q = k.p.q();
    ZqVector y = add(matvec(k.A, x.s, q), x.e, q);
    y = add(y, shift_vec(k.p, x.d), q);
    if (x.c) y = add(y, k.y0, q);
    return y;
}

ZqVector eval(const HghzKey& k, const DomainPoint& x) {
    if (!in_domain(k.p, x)) throw std::invalid_argument("eval: x outside the domain");
    return eval_raw(k, x);
}

std::vector<uint8_t> h(const DomainPoint& x) { return x.d; }

DomainPoint twin_partner(const HghzTrapdoor& t, const DomainPoint& x) {
    Modulus q = t.p.q();
    DomainPoint y;
    y.c = x.c ^ 1;
    y.d.resize(t.p.n);
    for (uint64_t i = 0; i < t.p.n; ++i) y.d[i] = x.d[i] ^ t.d0[i];
    if (x.c == 0) {
        y.s = sub(x.s, t.s0, q);
        y.e = sub(x.e, t.e0, q);
    } else {
        y.s = add(x.s, t.s0, q);
        y.e = add(x.e, t.e0, q);
    }
    return y;
}

std::optional<std::pair<DomainPoint, DomainPoint>> invert(const HghzTrapdoor& t,
                                                          const ZqVector& y) {
    const Params& p = t.p;
    Modulus q = p.q();
    if (y.size() != p.M() + p.n) throw std::invalid_argument("invert: bad y length");

    ZqVector y_u(y.begin(), y.begin() + static_cast<long>(p.M()));
    ZqVector y_l(y.begin() + static_cast<long>(p.M()), y.end());

    ZqMatrix A_u(p.M(), p.N), A_l(p.n, p.N);
    for (size_t r = 0; r < p.M(); ++r)
        for (size_t c = 0; c < p.N; ++c) A_u.at(r, c) = t.A.at(r, c);
    for (size_t r = 0; r < p.n; ++r)
        for (size_t c = 0; c < p.N; ++c) A_l.at(r, c) = t.A.at(p.M() + r, c);

    auto se = mp_invert(t.R, A_u, y_u, p.mp());
    if (!se) return std::nullopt;

    DomainPoint x;
    x.c = 0;
    x.s = se->first;
    ZqVector rest = sub(y_l, matvec(A_l, x.s, q), q);
    x.d.resize(p.n);
    uint64_t half = q.q / 2;
    ZqVector e_l(p.n);
    for (uint64_t i = 0; i < p.n; ++i) {
        x.d[i] = static_cast<uint8_t>(round_mod(rest[i], q));
        e_l[i] = (rest[i] + q.q - (x.d[i] ? half : 0)) % q.q;
    }
    x.e = se->second;
    x.e.insert(x.e.end(), e_l.begin(), e_l.end());

    DomainPoint xp = twin_partner(t, x);
    if (!in_domain(p, x) || !in_domain(p, xp)) return std::nullopt;
    return std::make_pair(std::move(x), std::move(xp));
}

bool check_trapdoor(const std::vector<uint8_t>& d0, const HghzTrapdoor& t, const HghzKey& k) {
    const Params& p = k.p;
    if (!(t.p == p)) return false;
    if (d0.size() != p.n || t.d0 != d0) return false;
    if (t.A.rows != k.A.rows || !(t.A == k.A)) return false;
    if (t.R.rows != p.N * p.k || t.R.cols != 2 * p.N) return false;
    if (t.s0.size() != p.N || t.e0.size() != p.M() + p.n) return false;
    Modulus q = p.q();

    // A_u structurally equals [A_hat ; G - R_2 A_hat - R_1]
    ZqMatrix A_hat(p.N, p.N);
    for (size_t r = 0; r < p.N; ++r)
        for (size_t c = 0; c < p.N; ++c) A_hat.at(r, c) = k.A.at(r, c);
    ZqMatrix A_u = mp_assemble(A_hat, t.R, p.k, q);
    for (size_t r = 0; r < p.M(); ++r)
        for (size_t c = 0; c < p.N; ++c)
            if (A_u.at(r, c) != k.A.at(r, c)) return false;

    // y0 = A s0 + e0 + (q/2)[0^M; d0], exactly
    ZqVector y0 = add(add(matvec(k.A, t.s0, q), t.e0, q), shift_vec(p, d0), q);
    if (y0 != k.y0) return false;

    // sqrt(sigma_max(R)^2 + 1) <= q / (4 r_max), certified
    double bound = static_cast<double>(q.q) / (4.0 * p.r_max);
    if (!sigma_sq_plus_one_leq(t.R, bound)) return false;

    // ||(s0, e0)||_2 <= alpha q sqrt(N+M+n)
    double budget = p.alpha_q * p.sqrt_dims();
    if (norm2_sq_mod2(t.s0, t.e0, q) > budget * budget) return false;

    // mu sqrt(N+M+n) <= r_safe
    if (static_cast<double>(p.mu) * p.sqrt_dims() > p.r_safe) return false;

    return true;
}

double delta_m_bound(const Params& p) {
    double d = static_cast<double>(p.dims());
    return (p.alpha_q + 1.0) * d * std::sqrt(d) / (static_cast<double>(p.mu) + 0.5);
}

double exact_twin_fraction(const Params& p, const ZqVector& s0, const ZqVector& e0) {
    Modulus q = p.q();
    int64_t mu = static_cast<int64_t>(p.mu);
    // hypercube overlap: prod_i max(0, 2 mu + 1 - |c_i|) / (2 mu + 1), no wraparound
    double frac = 1.0;
    auto fold = [&](uint64_t v) {
        int64_t c = center(v, q);
        if (c < 0) c = -c;
        if (2 * mu + c >= static_cast<int64_t>(q.q))
            throw std::invalid_argument("exact_twin_fraction: shift wraps the torus");
        int64_t num = 2 * mu + 1 - c;
        frac *= num > 0 ? static_cast<double>(num) / static_cast<double>(2 * mu + 1) : 0.0;
    };
    for (uint64_t v : s0) fold(v);
    for (uint64_t v : e0) fold(v);
    return frac;
}

DomainPoint sample_domain_margin(const Params& p, uint64_t margin, Rng& rng) {
    if (margin >= p.mu) throw std::invalid_argument("sample_domain: margin >= mu");
    Modulus q = p.q();
    int64_t m = static_cast<int64_t>(p.mu - margin);
    DomainPoint x;
    x.s.resize(p.N);
    x.e.resize(p.M() + p.n);
    for (auto& v : x.s) v = reduce_signed(rng.uniform_int(-m, m), q);
    for (auto& v : x.e) v = reduce_signed(rng.uniform_int(-m, m), q);
    x.c = static_cast<uint8_t>(rng.bit());
    x.d.resize(p.n);
    for (auto& b : x.d) b = static_cast<uint8_t>(rng.bit());
    return x;
}

DomainPoint sample_domain(const Params& p, Rng& rng) { return sample_domain_margin(p, 0, rng); }

DeltaEstimate estimate_delta(const HghzKey& k, const HghzTrapdoor& t, uint64_t trials,
                             uint64_t seed, unsigned threads) {
    if (threads == 0) threads = 1;
    const Params& p = k.p;
    std::vector<uint64_t> miss(threads, 0);
    auto worker = [&](unsigned id) {
        Rng rng(seed, id);
        uint64_t lo = trials * id / threads, hi = trials * (id + 1) / threads;
        uint64_t m = 0;
        for (uint64_t i = lo; i < hi; ++i) {
            DomainPoint x = sample_domain(p, rng);
            if (!in_domain(p, twin_partner(t, x))) ++m;
        }
        miss[id] = m;
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker, i);
        for (auto& th : pool) th.join();
    }
    uint64_t non_twin = 0;
    for (uint64_t m : miss) non_twin += m;
    DeltaEstimate e;
    e.trials = trials;
    e.non_twin = non_twin;
    e.delta_hat = trials ? static_cast<double>(non_twin) / static_cast<double>(trials) : 0.0;
    auto ci = clopper_pearson(non_twin, trials, 0.99);
    e.ci_low = ci.first;
    e.ci_high = ci.second;
    return e;
}

} // namespace hghz

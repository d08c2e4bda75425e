#include "hghz/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hghz/util.hpp"

namespace hghz {

std::vector<uint8_t> HiddenGhzDescription::support() const {
    std::vector<uint8_t> s(d.size());
    for (size_t i = 0; i < d.size(); ++i) s[i] = (d[i] ^ d_prime[i]) & 1;
    return s;
}

static std::string bits_to_string(const std::vector<uint8_t>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (uint8_t b : bits) s.push_back(b ? '1' : '0');
    return s;
}

std::string CircuitOutcome::to_json_line() const {
    nlohmann::json j;
    j["y"] = base64_encode(y);
    j["b"] = bits_to_string(b);
    switch (kind) {
        case Kind::Twin:
            j["state"] = {{"alpha", state.alpha},
                          {"d", bits_to_string(state.d)},
                          {"d_prime", bits_to_string(state.d_prime)}};
            break;
        case Kind::Singleton:
            j["state"] = {{"singleton", bits_to_string(singleton_d)}};
            break;
        case Kind::Abort:
            j["state"] = "abort";
            break;
    }
    return j.dump();
}

HiddenGhzDescription hghz_from_preimages(const CircuitFunction& f, const Bits& x, const Bits& xp,
                                         const Bits& b) {
    if (x == xp) throw std::invalid_argument("hghz_from_preimages: x == x'");
    HiddenGhzDescription desc;
    desc.alpha = static_cast<uint8_t>(parity_dot(b, xor_bits(x, xp)));
    desc.d = f.h_of(x);
    desc.d_prime = f.h_of(xp);
    return desc;
}

CircuitOutcome run_server_circuit_exact(const CircuitFunction& f, Rng& rng) {
    Bits x = f.sample_input(rng);
    CircuitOutcome out;
    out.y = f.eval_bits(x);

    auto pre = f.preimages(out.y, x);
    if (!pre) {
        out.kind = CircuitOutcome::Kind::Abort;
        return out;
    }

    size_t L = f.input_bits();
    out.b.resize(L);
    for (auto& bit : out.b) bit = static_cast<uint8_t>(rng.bit());

    if (pre->size() == 1) {
        out.kind = CircuitOutcome::Kind::Singleton;
        out.singleton_d = f.h_of((*pre)[0]);
        return out;
    }
    if (pre->size() != 2) {
        out.kind = CircuitOutcome::Kind::Abort;
        return out;
    }

    const Bits& x0 = (*pre)[0];
    const Bits& x1 = (*pre)[1];
    Bits delta = xor_bits(x0, x1);
    if (f.h_of(x0) == f.h_of(x1)) {
        // The two branches interfere: only b with <b, delta> = 0 survive the
        // Hadamard measurement. Flip one in-delta position to stay uniform on
        // that subspace.
        if (parity_dot(out.b, delta) == 1) {
            for (size_t i = 0; i < delta.size(); ++i)
                if (delta[i]) {
                    out.b[i] ^= 1;
                    break;
                }
        }
    }
    out.kind = CircuitOutcome::Kind::Twin;
    out.state = hghz_from_preimages(f, x0, x1, out.b);
    return out;
}

HiddenGhzDescription apply_corrections(const HiddenGhzDescription& desc,
                                       const std::vector<PartInfoSymbol>& v,
                                       const std::vector<uint8_t>& alpha_shares) {
    size_t n = desc.d.size();
    if (v.size() != n) throw std::invalid_argument("apply_corrections: bad v length");
    std::vector<uint8_t> sup = desc.support();
    for (size_t i = 0; i < n; ++i) {
        bool corr = is_correction(v[i]);
        if (corr != (sup[i] == 1))
            throw std::invalid_argument("apply_corrections: v inconsistent with the support");
    }
    if (alpha_shares.size() != n) throw std::invalid_argument("apply_corrections: bad shares");

    HiddenGhzDescription out = desc;
    for (size_t i = 0; i < n; ++i) {
        if (!is_correction(v[i])) continue;
        uint8_t xbit = v[i] == PartInfoSymbol::One ? 1 : 0;
        out.d[i] ^= xbit;
        out.d_prime[i] ^= xbit;
        // Z^{share} on qubit i flips alpha iff the qubit is in the support
        out.alpha ^= alpha_shares[i] & sup[i];
    }
    return out;
}

bool is_canonical_ghz(const HiddenGhzDescription& desc) {
    if (desc.alpha != 0) return false;
    std::vector<uint8_t> sup = desc.support();
    bool first = true;
    uint8_t d_on_support = 0;
    for (size_t i = 0; i < sup.size(); ++i) {
        if (!sup[i]) {
            if (desc.d[i] != desc.d_prime[i]) return false;
            continue;
        }
        if (first) {
            d_on_support = desc.d[i];
            first = false;
        }
        // all supported bits of d equal, and d' is the complement there
        if (desc.d[i] != d_on_support || desc.d_prime[i] != (d_on_support ^ 1)) return false;
    }
    return true;
}

// ---- LWE-family instances ------------------------------------------------

static std::string residues_to_bytes(const ZqVector& y) {
    std::string s;
    s.reserve(y.size() * 8);
    for (uint64_t v : y)
        for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    return s;
}

static ZqVector bytes_to_residues(const std::string& s) {
    if (s.size() % 8) throw std::invalid_argument("bad image bytes");
    ZqVector y(s.size() / 8);
    for (size_t i = 0; i < y.size(); ++i) {
        uint64_t v = 0;
        for (int j = 0; j < 8; ++j)
            v |= static_cast<uint64_t>(static_cast<uint8_t>(s[8 * i + static_cast<size_t>(j)]))
                 << (8 * j);
        y[i] = v;
    }
    return y;
}

HghzCircuitFunction::HghzCircuitFunction(HghzKey key, HghzTrapdoor trapdoor)
    : key_(std::move(key)), trapdoor_(std::move(trapdoor)), codec_(key_.p) {}

Bits HghzCircuitFunction::sample_input(Rng& rng) const {
    return codec_.encode(sample_domain(key_.p, rng));
}

std::string HghzCircuitFunction::eval_bits(const Bits& x) const {
    return residues_to_bytes(eval(key_, codec_.decode(x)));
}

std::vector<uint8_t> HghzCircuitFunction::h_of(const Bits& x) const {
    return h(codec_.decode(x));
}

std::optional<std::vector<Bits>> HghzCircuitFunction::preimages(const std::string& y,
                                                                const Bits& hint) const {
    ZqVector yv = bytes_to_residues(y);
    auto pair = invert(trapdoor_, yv);
    if (pair) {
        Bits a = codec_.encode(pair->first), b = codec_.encode(pair->second);
        if (a != hint && b != hint) return std::nullopt; // inversion inconsistent
        if (eval_raw(key_, pair->first) != yv || eval_raw(key_, pair->second) != yv)
            return std::nullopt;
        return std::vector<Bits>{a, b};
    }
    // no in-domain twin: the sampled preimage stands alone
    DomainPoint xh = codec_.decode(hint);
    if (eval_raw(key_, xh) != yv) return std::nullopt;
    return std::vector<Bits>{hint};
}

DistCircuitFunction::DistCircuitFunction(DistKey key, DistTrapdoor trapdoor)
    : key_(std::move(key)), trapdoor_(std::move(trapdoor)),
      codec_(key_.local_params(), key_.n_parties()) {}

Bits DistCircuitFunction::sample_input(Rng& rng) const {
    DistPoint x;
    x.c = static_cast<uint8_t>(rng.bit());
    x.parts.resize(key_.n_parties());
    for (size_t i = 0; i < key_.n_parties(); ++i) {
        DomainPoint xi = sample_domain(key_.parties[i].p, rng);
        xi.c = x.c;
        x.parts[i] = domain_to_local(xi);
    }
    return codec_.encode(x);
}

std::string DistCircuitFunction::eval_bits(const Bits& x) const {
    return residues_to_bytes(eval_dist(key_, codec_.decode(x)));
}

std::vector<uint8_t> DistCircuitFunction::h_of(const Bits& x) const {
    DistPoint p = codec_.decode(x);
    std::vector<uint8_t> out(p.parts.size());
    for (size_t i = 0; i < p.parts.size(); ++i) out[i] = p.parts[i].d;
    return out;
}

std::optional<std::vector<Bits>> DistCircuitFunction::preimages(const std::string& y,
                                                                const Bits& hint) const {
    ZqVector yv = bytes_to_residues(y);
    auto pair = invert_dist(trapdoor_, yv);
    if (pair) {
        Bits a = codec_.encode(pair->first), b = codec_.encode(pair->second);
        if (a != hint && b != hint) return std::nullopt;
        if (eval_dist(key_, pair->first) != yv || eval_dist(key_, pair->second) != yv)
            return std::nullopt;
        return std::vector<Bits>{a, b};
    }
    DistPoint xh = codec_.decode(hint);
    if (eval_dist(key_, xh) != yv) return std::nullopt;
    return std::vector<Bits>{hint};
}

// ---- synthetic functions --------------------------------------------------

SyntheticFunction SyntheticFunction::random(size_t L, size_t h_len, double twin_fraction,
                                            Rng& rng) {
    if (L < 2 || L > 14) throw std::invalid_argument("SyntheticFunction: need 2 <= L <= 14");
    if (h_len < 1 || h_len > 16) throw std::invalid_argument("SyntheticFunction: h_len");
    SyntheticFunction f;
    f.L_ = L;
    f.h_len_ = h_len;
    size_t dom = size_t{1} << L;
    std::vector<uint32_t> perm(dom);
    for (size_t i = 0; i < dom; ++i) perm[i] = static_cast<uint32_t>(i);
    for (size_t i = dom - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.uniform_below(i + 1)]);

    size_t pairs = static_cast<size_t>(twin_fraction * static_cast<double>(dom) / 2.0);
    f.f_.assign(dom, 0);
    f.h_.assign(dom, 0);
    uint32_t y_id = 0;
    size_t pos = 0;
    for (size_t p = 0; p < pairs; ++p) {
        uint32_t a = perm[pos++], b = perm[pos++];
        f.f_[a] = y_id;
        f.f_[b] = y_id;
        ++y_id;
        uint32_t ha = static_cast<uint32_t>(rng.uniform_below(uint64_t{1} << h_len));
        // every fourth pair collides under h to exercise the interference branch
        uint32_t hb = (p % 4 == 0) ? ha : static_cast<uint32_t>(
                                              rng.uniform_below(uint64_t{1} << h_len));
        f.h_[a] = ha;
        f.h_[b] = hb;
    }
    while (pos < dom) {
        uint32_t a = perm[pos++];
        f.f_[a] = y_id++;
        f.h_[a] = static_cast<uint32_t>(rng.uniform_below(uint64_t{1} << h_len));
    }
    f.pre_.assign(y_id, {});
    for (size_t x = 0; x < dom; ++x) f.pre_[f.f_[x]].push_back(static_cast<uint32_t>(x));
    return f;
}

static size_t bits_to_index(const Bits& x) {
    size_t v = 0;
    for (size_t i = 0; i < x.size(); ++i) v |= static_cast<size_t>(x[i] & 1) << i;
    return v;
}

static Bits index_to_bits(size_t v, size_t L) {
    Bits x(L);
    for (size_t i = 0; i < L; ++i) x[i] = static_cast<uint8_t>((v >> i) & 1);
    return x;
}

Bits SyntheticFunction::sample_input(Rng& rng) const {
    return index_to_bits(rng.uniform_below(uint64_t{1} << L_), L_);
}

std::string SyntheticFunction::eval_bits(const Bits& x) const {
    uint32_t y = f_.at(bits_to_index(x));
    std::string s(4, '\0');
    for (int i = 0; i < 4; ++i) s[static_cast<size_t>(i)] = static_cast<char>((y >> (8 * i)) & 0xff);
    return s;
}

std::optional<std::vector<Bits>> SyntheticFunction::preimages(const std::string& y,
                                                              const Bits&) const {
    uint32_t id = 0;
    for (int i = 0; i < 4; ++i)
        id |= static_cast<uint32_t>(static_cast<uint8_t>(y.at(static_cast<size_t>(i)))) << (8 * i);
    if (id >= pre_.size()) return std::nullopt;
    std::vector<Bits> out;
    for (uint32_t x : pre_[id]) out.push_back(index_to_bits(x, L_));
    return out;
}

std::vector<uint8_t> SyntheticFunction::h_of(const Bits& x) const {
    uint32_t packed = h_.at(bits_to_index(x));
    std::vector<uint8_t> out(h_len_);
    for (size_t i = 0; i < h_len_; ++i) out[i] = static_cast<uint8_t>((packed >> i) & 1);
    return out;
}

// ---- dense simulator -------------------------------------------------------

namespace {

int popcount_parity(uint64_t v) { return __builtin_popcountll(v) & 1; }

} // namespace

std::map<uint32_t, double> dense_branch_residual(const SyntheticFunction& f, uint32_t y_id,
                                                 uint64_t b_packed) {
    std::map<uint32_t, double> amp;
    for (uint32_t x : f.preimage_table().at(y_id)) {
        double sign = popcount_parity(b_packed & x) ? -1.0 : 1.0;
        amp[f.h_of_index(x)] += sign;
    }
    double norm = 0;
    for (auto& [h, a] : amp) norm += a * a;
    if (norm <= 0) return {};
    norm = std::sqrt(norm);
    for (auto& [h, a] : amp) a /= norm;
    for (auto it = amp.begin(); it != amp.end();)
        it = it->second == 0.0 ? amp.erase(it) : std::next(it);
    return amp;
}

DenseOutcome run_server_circuit_dense(const SyntheticFunction& f, Rng& rng) {
    size_t L = f.input_bits();
    size_t dom = size_t{1} << L;

    // measure register 3: P(y) = |f^{-1}(y)| / 2^L
    double u = rng.real01() * static_cast<double>(dom);
    uint32_t y_id = 0;
    {
        double acc = 0;
        for (size_t id = 0; id < f.preimage_table().size(); ++id) {
            acc += static_cast<double>(f.preimage_table()[id].size());
            if (u < acc) {
                y_id = static_cast<uint32_t>(id);
                break;
            }
        }
    }

    // Hadamard register 1 and measure: P(b) = sum_h amp(b,h)^2. Amplitudes are
    // computed literally from the collapsed superposition.
    const auto& pre = f.preimage_table()[y_id];
    size_t nb = size_t{1} << L;
    std::vector<double> pb(nb, 0.0);
    for (uint64_t b = 0; b < nb; ++b) {
        std::map<uint32_t, double> amp;
        for (uint32_t x : pre) {
            double sign = popcount_parity(b & x) ? -1.0 : 1.0;
            amp[f.h_of_index(x)] += sign;
        }
        double s = 0;
        for (auto& [h, a] : amp) s += a * a;
        pb[b] = s;
    }
    double total = 0;
    for (double v : pb) total += v;
    double ub = rng.real01() * total;
    uint64_t b_chosen = 0;
    {
        double acc = 0;
        for (uint64_t b = 0; b < nb; ++b) {
            acc += pb[b];
            if (ub < acc) {
                b_chosen = b;
                break;
            }
        }
    }

    DenseOutcome out;
    out.y_id = y_id;
    out.b = index_to_bits(b_chosen, L);
    out.residual = dense_branch_residual(f, y_id, b_chosen);
    return out;
}

JointDist exact_joint_dense(const SyntheticFunction& f) {
    JointDist d;
    size_t L = f.input_bits();
    size_t dom = size_t{1} << L;
    size_t nb = dom;
    for (size_t id = 0; id < f.preimage_table().size(); ++id) {
        const auto& pre = f.preimage_table()[id];
        double py = static_cast<double>(pre.size()) / static_cast<double>(dom);
        std::vector<double> pb(nb, 0.0);
        double total = 0;
        for (uint64_t b = 0; b < nb; ++b) {
            std::map<uint32_t, double> amp;
            for (uint32_t x : pre) {
                double sign = popcount_parity(b & x) ? -1.0 : 1.0;
                amp[f.h_of_index(x)] += sign;
            }
            double s = 0;
            for (auto& [h, a] : amp) s += a * a;
            pb[b] = s;
            total += s;
        }
        for (uint64_t b = 0; b < nb; ++b)
            if (pb[b] > 0)
                d.p[{static_cast<uint32_t>(id), b}] = py * pb[b] / total;
    }
    return d;
}

JointDist exact_joint_sampler(const SyntheticFunction& f) {
    // closed form of run_server_circuit_exact's distribution
    JointDist d;
    size_t L = f.input_bits();
    size_t dom = size_t{1} << L;
    size_t nb = dom;
    for (size_t id = 0; id < f.preimage_table().size(); ++id) {
        const auto& pre = f.preimage_table()[id];
        double py = static_cast<double>(pre.size()) / static_cast<double>(dom);
        if (pre.size() == 1) {
            double pb = py / static_cast<double>(nb);
            for (uint64_t b = 0; b < nb; ++b) d.p[{static_cast<uint32_t>(id), b}] = pb;
            continue;
        }
        // twins
        uint32_t x0 = pre[0], x1 = pre[1];
        uint64_t delta = x0 ^ x1;
        bool collide = f.h_of_index(x0) == f.h_of_index(x1);
        if (!collide) {
            double pb = py / static_cast<double>(nb);
            for (uint64_t b = 0; b < nb; ++b) d.p[{static_cast<uint32_t>(id), b}] = pb;
        } else {
            double pb = py / (static_cast<double>(nb) / 2.0);
            for (uint64_t b = 0; b < nb; ++b)
                if (popcount_parity(b & delta) == 0) d.p[{static_cast<uint32_t>(id), b}] = pb;
        }
    }
    return d;
}

double tv_distance(const std::map<std::pair<uint32_t, uint64_t>, double>& p,
                   const std::map<std::pair<uint32_t, uint64_t>, double>& q) {
    double tv = 0;
    for (const auto& [k, v] : p) {
        auto it = q.find(k);
        tv += std::fabs(v - (it == q.end() ? 0.0 : it->second));
    }
    for (const auto& [k, v] : q)
        if (!p.count(k)) tv += v;
    return tv / 2.0;
}

} // namespace hghz

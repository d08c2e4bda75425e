#include "hghz/dist_family.hpp"

#include <cmath>
#include <stdexcept>

namespace hghz {

std::pair<LocalKey, LocalTrapdoor> gen_loc(const Params& p_local, uint8_t d0_bit, Rng& rng) {
    if (p_local.n != 1) throw std::invalid_argument("gen_loc: local params need n = 1");
    return gen(p_local, {static_cast<uint8_t>(d0_bit & 1)}, rng);
}

DomainPoint local_to_domain(const LocalPart& part, uint8_t c) {
    DomainPoint x;
    x.s = part.s;
    x.e = part.e;
    x.c = c;
    x.d = {part.d};
    return x;
}

LocalPart domain_to_local(const DomainPoint& x) {
    LocalPart p;
    p.s = x.s;
    p.e = x.e;
    p.d = x.d.at(0);
    return p;
}

ZqVector eval_dist(const DistKey& K, const DistPoint& x) {
    if (x.parts.size() != K.n_parties()) throw std::invalid_argument("eval_dist: party count");
    ZqVector y;
    y.reserve(K.n_parties() * K.local_y_len());
    for (size_t i = 0; i < K.n_parties(); ++i) {
        ZqVector yi = eval(K.parties[i], local_to_domain(x.parts[i], x.c));
        y.insert(y.end(), yi.begin(), yi.end());
    }
    return y;
}

bool dist_in_domain(const DistKey& K, const DistPoint& x) {
    if (x.parts.size() != K.n_parties() || x.c > 1) return false;
    for (size_t i = 0; i < K.n_parties(); ++i)
        if (!in_domain(K.parties[i].p, local_to_domain(x.parts[i], x.c))) return false;
    return true;
}

DistPoint dist_twin_partner(const DistTrapdoor& T, const DistPoint& x) {
    DistPoint y;
    y.c = x.c ^ 1;
    y.parts.resize(x.parts.size());
    for (size_t i = 0; i < x.parts.size(); ++i)
        y.parts[i] = domain_to_local(twin_partner(T.parties[i], local_to_domain(x.parts[i], x.c)));
    return y;
}

static ZqVector slice_block(const ZqVector& y, size_t party, uint64_t len) {
    if (y.size() < (party + 1) * len) throw std::invalid_argument("bad y length");
    return ZqVector(y.begin() + static_cast<long>(party * len),
                    y.begin() + static_cast<long>((party + 1) * len));
}

std::optional<std::pair<DistPoint, DistPoint>> invert_dist(const DistTrapdoor& T,
                                                           const ZqVector& y) {
    size_t n = T.parties.size();
    uint64_t len = T.parties.at(0).p.M() + T.parties.at(0).p.n;
    if (y.size() != n * len) throw std::invalid_argument("invert_dist: bad y length");
    DistPoint x0, x1;
    x0.c = 0;
    x1.c = 1;
    x0.parts.resize(n);
    x1.parts.resize(n);
    for (size_t i = 0; i < n; ++i) {
        auto pair = invert(T.parties[i], slice_block(y, i, len));
        if (!pair) return std::nullopt;
        x0.parts[i] = domain_to_local(pair->first);
        x1.parts[i] = domain_to_local(pair->second);
    }
    return std::make_pair(std::move(x0), std::move(x1));
}

PartInfoSymbol part_info_loc(size_t party, const LocalTrapdoor& t, const ZqVector& y) {
    if (t.d0.at(0) == 0) return PartInfoSymbol::NotSupported;
    uint64_t len = t.p.M() + t.p.n;
    auto pair = invert(t, slice_block(y, party, len));
    if (!pair) return PartInfoSymbol::LocalAbort;
    // h-bit of the c = 0 preimage
    return pair->first.d[0] ? PartInfoSymbol::One : PartInfoSymbol::Zero;
}

std::optional<int> part_alpha_loc(size_t party, const LocalTrapdoor& t, const ZqVector& y,
                                  const Bits& b) {
    uint64_t len = t.p.M() + t.p.n;
    auto pair = invert(t, slice_block(y, party, len));
    if (!pair) return std::nullopt;
    DistCodec codec(t.p, y.size() / len);
    if (b.size() != codec.total_bits()) throw std::invalid_argument("part_alpha_loc: bad b");
    Bits bi = codec.party_slice(b, party);
    Bits dx = xor_bits(codec.local_rest(domain_to_local(pair->first)),
                       codec.local_rest(domain_to_local(pair->second)));
    int v = parity_dot(bi, dx);
    if (party == 0) v ^= b[0] & 1; // party 1 absorbs b_c
    return v;
}

bool check_trapdoor_dist(uint8_t d0_bit, const LocalTrapdoor& t, const LocalKey& k) {
    return check_trapdoor({static_cast<uint8_t>(d0_bit & 1)}, t, k);
}

double delta_compose(double delta, uint64_t n) {
    if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("delta_compose: delta in [0,1]");
    if (n < 1) throw std::invalid_argument("delta_compose: n >= 1");
    return 1.0 - std::pow(1.0 - delta, static_cast<double>(n));
}

DistCodec::DistCodec(const Params& local, size_t n_parties) : local_(local), n_(n_parties) {
    if (local.n != 1) throw std::invalid_argument("DistCodec: local params need n = 1");
    rest_bits_ = BitCodec(local).total_bits() - 1; // drop the shared c bit
}

Bits DistCodec::local_rest(const LocalPart& part) const {
    BitCodec codec(local_);
    Bits full = codec.encode(local_to_domain(part, 0));
    return Bits(full.begin() + 1, full.end());
}

Bits DistCodec::encode(const DistPoint& x) const {
    if (x.parts.size() != n_) throw std::invalid_argument("DistCodec: party count");
    Bits out;
    out.reserve(total_bits());
    out.push_back(x.c & 1);
    for (const auto& part : x.parts) {
        Bits r = local_rest(part);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

DistPoint DistCodec::decode(const Bits& bits) const {
    if (bits.size() != total_bits()) throw std::invalid_argument("DistCodec: bad length");
    DistPoint x;
    x.c = bits[0] & 1;
    x.parts.resize(n_);
    BitCodec codec(local_);
    for (size_t i = 0; i < n_; ++i) {
        Bits full;
        full.push_back(0);
        auto begin = bits.begin() + static_cast<long>(1 + i * rest_bits_);
        full.insert(full.end(), begin, begin + static_cast<long>(rest_bits_));
        x.parts[i] = domain_to_local(codec.decode(full));
    }
    return x;
}

Bits DistCodec::party_slice(const Bits& b, size_t party) const {
    if (b.size() != total_bits() || party >= n_) throw std::invalid_argument("party_slice");
    auto begin = b.begin() + static_cast<long>(1 + party * rest_bits_);
    return Bits(begin, begin + static_cast<long>(rest_bits_));
}

} // namespace hghz

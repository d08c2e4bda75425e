#include "hghz/codec.hpp"

#include <stdexcept>

namespace hghz {

static void push_residue(Bits& out, uint64_t v, uint32_t k, uint64_t q) {
    if (v >= q) throw std::invalid_argument("encode: out-of-range coordinate");
    for (uint32_t i = 0; i < k; ++i) out.push_back(static_cast<uint8_t>((v >> i) & 1));
}

Bits BitCodec::encode(const DomainPoint& x) const {
    if (x.s.size() != p_.N || x.e.size() != p_.M() + p_.n || x.d.size() != p_.n)
        throw std::invalid_argument("encode: bad dims");
    Bits out;
    out.reserve(total_bits());
    out.push_back(x.c & 1);
    for (uint8_t b : x.d) out.push_back(b & 1);
    uint64_t q = p_.q().q;
    for (uint64_t v : x.s) push_residue(out, v, p_.k, q);
    for (uint64_t v : x.e) push_residue(out, v, p_.k, q);
    return out;
}

DomainPoint BitCodec::decode(const Bits& bits) const {
    if (bits.size() != total_bits()) throw std::invalid_argument("decode: bad length");
    DomainPoint x;
    size_t pos = 0;
    x.c = bits[pos++] & 1;
    x.d.resize(p_.n);
    for (uint64_t i = 0; i < p_.n; ++i) x.d[i] = bits[pos++] & 1;
    auto read_residue = [&]() {
        uint64_t v = 0;
        for (uint32_t i = 0; i < p_.k; ++i) v |= static_cast<uint64_t>(bits[pos++] & 1) << i;
        return v;
    };
    x.s.resize(p_.N);
    for (auto& v : x.s) v = read_residue();
    x.e.resize(p_.M() + p_.n);
    for (auto& v : x.e) v = read_residue();
    return x;
}

Bits xor_bits(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
    Bits out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = (a[i] ^ b[i]) & 1;
    return out;
}

int parity_dot(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) throw std::invalid_argument("parity_dot: length mismatch");
    int p = 0;
    for (size_t i = 0; i < a.size(); ++i) p ^= (a[i] & b[i]) & 1;
    return p;
}

} // namespace hghz

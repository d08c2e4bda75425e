#pragma once

#include "hghz/hghz_family.hpp"

namespace hghz {

using Bits = std::vector<uint8_t>; // one bit per byte, values 0/1

// Canonical bit layout of a domain point, the register the Hadamard
// measurement acts on: [c:1][d:n][s coords: N*k][e coords: (M+n)*k], each Z_q
// coordinate as a k-bit little-endian residue. This order is normative for
// this artifact; alpha's value (not its distribution) depends on it.
class BitCodec {
  public:
    explicit BitCodec(const Params& p) : p_(p) {}

    size_t total_bits() const { return 1 + p_.n + (p_.N + p_.M() + p_.n) * p_.k; }

    Bits encode(const DomainPoint& x) const;
    DomainPoint decode(const Bits& bits) const;

    const Params& params() const { return p_; }

  private:
    Params p_;
};

Bits xor_bits(const Bits& a, const Bits& b);
int parity_dot(const Bits& a, const Bits& b); // <a, b> over GF(2)

} // namespace hghz

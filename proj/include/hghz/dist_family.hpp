#pragma once

#include "hghz/codec.hpp"
#include "hghz/hghz_family.hpp"

namespace hghz {

// One single-bit instance per party; the compiled function is the
// concatenation f'(c, x1..xn) = f_1(c, x1) | ... | f_n(c, xn) with the bit c
// shared across parties.
using LocalKey = HghzKey;           // underlying n = 1
using LocalTrapdoor = HghzTrapdoor; // underlying n = 1

struct DistKey {
    std::vector<LocalKey> parties;

    const Params& local_params() const { return parties.at(0).p; }
    size_t n_parties() const { return parties.size(); }
    uint64_t local_y_len() const { return local_params().M() + local_params().n; }
};

struct DistTrapdoor {
    std::vector<LocalTrapdoor> parties;
};

enum class PartInfoSymbol : uint8_t {
    Zero = 0,         // correction bit 0 (supported)
    One = 1,          // correction bit 1 (supported)
    NotSupported = 2, // the cross: d0[i] = 0
    LocalAbort = 3,   // bottom: not exactly two local preimages
};

inline bool is_correction(PartInfoSymbol s) {
    return s == PartInfoSymbol::Zero || s == PartInfoSymbol::One;
}

// per-party slice of the compiled domain point
struct LocalPart {
    ZqVector s, e;
    uint8_t d = 0; // single h-bit
};

struct DistPoint {
    uint8_t c = 0;
    std::vector<LocalPart> parts;
};

std::pair<LocalKey, LocalTrapdoor> gen_loc(const Params& p_local, uint8_t d0_bit, Rng& rng);

ZqVector eval_dist(const DistKey& K, const DistPoint& x);

// twin partner of a compiled point under the per-party shifts
DistPoint dist_twin_partner(const DistTrapdoor& T, const DistPoint& x);
bool dist_in_domain(const DistKey& K, const DistPoint& x);

// full preimage pair of a compiled image, c = 0 preimage first
std::optional<std::pair<DistPoint, DistPoint>> invert_dist(const DistTrapdoor& T,
                                                           const ZqVector& y);

PartInfoSymbol part_info_loc(size_t party, const LocalTrapdoor& t, const ZqVector& y);

// b splits as (b_c, b^(1), ..., b^(n)) following the global bit encoding;
// party 1 absorbs b_c.
std::optional<int> part_alpha_loc(size_t party, const LocalTrapdoor& t, const ZqVector& y,
                                  const Bits& b);

bool check_trapdoor_dist(uint8_t d0_bit, const LocalTrapdoor& t, const LocalKey& k);

// delta' = 1 - (1 - delta)^n
double delta_compose(double delta, uint64_t n);

// Global bit layout: [c][local-rest of party 1]...[local-rest of party n],
// local rest = [d:1][s: N*k][e: (M+1)*k].
class DistCodec {
  public:
    DistCodec(const Params& local, size_t n_parties);

    size_t total_bits() const { return 1 + n_ * rest_bits_; }
    size_t rest_bits() const { return rest_bits_; }

    Bits encode(const DistPoint& x) const;
    DistPoint decode(const Bits& bits) const;
    Bits local_rest(const LocalPart& part) const;

    // slice of b belonging to party i (0-based), excluding b_c
    Bits party_slice(const Bits& b, size_t party) const;

  private:
    Params local_;
    size_t n_;
    size_t rest_bits_;
};

DomainPoint local_to_domain(const LocalPart& part, uint8_t c);
LocalPart domain_to_local(const DomainPoint& x);

} // namespace hghz

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hghz/dist_family.hpp"

namespace hghz {

// classical description of |d> + (-1)^alpha |d'>
struct HiddenGhzDescription {
    uint8_t alpha = 0;
    std::vector<uint8_t> d, d_prime;

    std::vector<uint8_t> support() const; // bit i set iff d[i] != d'[i]
    friend bool operator==(const HiddenGhzDescription& a, const HiddenGhzDescription& b) {
        return a.alpha == b.alpha && a.d == b.d && a.d_prime == b.d_prime;
    }
};

struct CircuitOutcome {
    enum class Kind : uint8_t { Twin, Singleton, Abort };
    Kind kind = Kind::Abort;
    std::string y;             // serialized image
    Bits b;                    // Hadamard outcome, length L
    HiddenGhzDescription state; // twin outcomes
    std::vector<uint8_t> singleton_d;

    std::string to_json_line() const; // shot-log record
};

// What the exact sampler needs from a 2-to-1-style instance: a uniform domain
// sampler, eval, h, and an oracle for the full preimage set of an image.
class CircuitFunction {
  public:
    virtual ~CircuitFunction() = default;
    virtual size_t input_bits() const = 0;
    virtual size_t h_bits() const = 0;
    virtual Bits sample_input(Rng& rng) const = 0;
    virtual std::string eval_bits(const Bits& x) const = 0;
    // full preimage set of y; `hint` is the sampled preimage. nullopt = oracle failure.
    virtual std::optional<std::vector<Bits>> preimages(const std::string& y,
                                                       const Bits& hint) const = 0;
    virtual std::vector<uint8_t> h_of(const Bits& x) const = 0;
};

// The measurement-statistics sampler. Its joint distribution over
// (y, b, post-measurement state) equals the quantum circuit's; when the two
// preimages collide under h the surviving b are those with <b, x xor x'> = 0.
CircuitOutcome run_server_circuit_exact(const CircuitFunction& f, Rng& rng);

// (alpha, h(x), h(x')) with alpha = <b, enc(x) xor enc(x')>
HiddenGhzDescription hghz_from_preimages(const CircuitFunction& f, const Bits& x, const Bits& xp,
                                         const Bits& b);

// X^{v[i]} toggles bit i of both d and d'; the Z shares of supported parties
// fold into alpha.
HiddenGhzDescription apply_corrections(const HiddenGhzDescription& desc,
                                       const std::vector<PartInfoSymbol>& v,
                                       const std::vector<uint8_t>& alpha_shares);

// true iff alpha = 0, the support rows read 0...0 / 1...1 (or swapped) and
// off-support bits agree
bool is_canonical_ghz(const HiddenGhzDescription& desc);

// ---- instances ----------------------------------------------------------

class HghzCircuitFunction : public CircuitFunction {
  public:
    HghzCircuitFunction(HghzKey key, HghzTrapdoor trapdoor);

    size_t input_bits() const override { return codec_.total_bits(); }
    size_t h_bits() const override { return key_.p.n; }
    Bits sample_input(Rng& rng) const override;
    std::string eval_bits(const Bits& x) const override;
    std::optional<std::vector<Bits>> preimages(const std::string& y,
                                               const Bits& hint) const override;
    std::vector<uint8_t> h_of(const Bits& x) const override;

    const HghzKey& key() const { return key_; }
    const HghzTrapdoor& trapdoor() const { return trapdoor_; }

  private:
    HghzKey key_;
    HghzTrapdoor trapdoor_;
    BitCodec codec_;
};

class DistCircuitFunction : public CircuitFunction {
  public:
    DistCircuitFunction(DistKey key, DistTrapdoor trapdoor);

    size_t input_bits() const override { return codec_.total_bits(); }
    size_t h_bits() const override { return key_.n_parties(); }
    Bits sample_input(Rng& rng) const override;
    std::string eval_bits(const Bits& x) const override;
    std::optional<std::vector<Bits>> preimages(const std::string& y,
                                               const Bits& hint) const override;
    std::vector<uint8_t> h_of(const Bits& x) const override;

    const DistKey& key() const { return key_; }
    const DistTrapdoor& trapdoor() const { return trapdoor_; }
    const DistCodec& codec() const { return codec_; }

  private:
    DistKey key_;
    DistTrapdoor trapdoor_;
    DistCodec codec_;
};

// Table-backed toy function on {0,1}^L, a mixture of 2-to-1 and injective
// points, with an arbitrary h. Drives both simulators in the equivalence
// tests.
class SyntheticFunction : public CircuitFunction {
  public:
    // twin_fraction of the domain is paired up; some twin pairs collide under h
    static SyntheticFunction random(size_t L, size_t h_len, double twin_fraction, Rng& rng);

    size_t input_bits() const override { return L_; }
    size_t h_bits() const override { return h_len_; }
    Bits sample_input(Rng& rng) const override;
    std::string eval_bits(const Bits& x) const override;
    std::optional<std::vector<Bits>> preimages(const std::string& y,
                                               const Bits& hint) const override;
    std::vector<uint8_t> h_of(const Bits& x) const override;

    uint32_t y_of_index(size_t idx) const { return f_[idx]; }
    uint32_t h_of_index(size_t idx) const { return h_[idx]; }
    const std::vector<std::vector<uint32_t>>& preimage_table() const { return pre_; }

  private:
    size_t L_ = 0, h_len_ = 0;
    std::vector<uint32_t> f_; // x index -> y id
    std::vector<uint32_t> h_; // x index -> packed h bits
    std::vector<std::vector<uint32_t>> pre_;
};

// ---- dense state-vector simulator (synthetic instances only) ------------

struct DenseOutcome {
    uint32_t y_id = 0;
    Bits b;
    // residual register-2 state: amplitude per packed h value
    std::map<uint32_t, double> residual;
};

DenseOutcome run_server_circuit_dense(const SyntheticFunction& f, Rng& rng);

// exact joint distributions over (y_id, b) for the equivalence tests
struct JointDist {
    std::map<std::pair<uint32_t, uint64_t>, double> p;
};

JointDist exact_joint_dense(const SyntheticFunction& f);
JointDist exact_joint_sampler(const SyntheticFunction& f);

// exact residual state of the dense circuit on branch (y, b); empty if the
// branch has probability zero
std::map<uint32_t, double> dense_branch_residual(const SyntheticFunction& f, uint32_t y_id,
                                                 uint64_t b_packed);

double tv_distance(const std::map<std::pair<uint32_t, uint64_t>, double>& p,
                   const std::map<std::pair<uint32_t, uint64_t>, double>& q);

} // namespace hghz

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hghz/qsim.hpp"
#include "hghz/util.hpp"

namespace hghz {

// ---- messages & transcripts ------------------------------------------------

// Within a round every serialized message has the same length; the bus pads
// the shorter ones (secure channels may still leak lengths).
struct Message {
    int round = 0;
    std::string sender, receiver;
    std::string type;
    nlohmann::json payload;
    std::string pad;

    std::string wire() const; // serialized JSON body, including the pad
    nlohmann::json to_json() const;
};

enum class SchedulerMode { RoundRobin, SeededRandom };

class Transcript {
  public:
    explicit Transcript(SchedulerMode mode = SchedulerMode::RoundRobin, uint64_t seed = 0)
        : mode_(mode), shuffle_rng_(seed, 0xb05) {}

    void post(int round, const std::string& from, const std::string& to, const std::string& type,
              nlohmann::json payload);
    // equalize lengths and fix delivery order for the round
    void seal_round(int round);

    const std::vector<Message>& messages() const { return messages_; }
    std::string to_jsonl() const;

  private:
    SchedulerMode mode_;
    Rng shuffle_rng_;
    std::vector<Message> messages_;
    std::vector<size_t> open_; // indices of the un-sealed round
};

// ---- authorization and the pluggable NIZK ----------------------------------

struct AuthPredicate {
    std::string name;
    // d0 is an n-bit string; single-bit variants pass length 1
    std::function<int(const std::vector<uint8_t>& d0, const std::string& witness)> fn;

    static AuthPredicate allow_all();
    // support has weight 2 and contains qubit 1
    static AuthPredicate hamming2_first();
    // supported only if fnv1a64(witness) == target
    static AuthPredicate hash_preimage(uint64_t target);
    static AuthPredicate by_name(const std::string& name);
};

struct NizkStatement {
    std::string key_bytes; // serialized public key
    std::string auth_name;
};

struct NizkWitness {
    std::vector<uint8_t> d0;
    std::string trapdoor_bytes;
    std::string auth_witness;
};

class NizkBackend {
  public:
    virtual ~NizkBackend() = default;
    // nullopt when the witness does not satisfy the relation
    virtual std::optional<std::string> prove(const NizkStatement& st, const NizkWitness& w) = 0;
    virtual bool verify(const NizkStatement& st, const std::string& proof) = 0;
};

// Transparent stub: the relation CheckTrapdoor(d0, t, k) && Auth(d0, w) = 1 is
// evaluated inside the trusted boundary at prove time; the proof is an opaque
// commitment-sized token and the witness never enters the transcript.
class TransparentNizkStub : public NizkBackend {
  public:
    explicit TransparentNizkStub(uint64_t seed) : rng_(seed, 0x2172) {}
    std::optional<std::string> prove(const NizkStatement& st, const NizkWitness& w) override;
    bool verify(const NizkStatement& st, const std::string& proof) override;

  private:
    Rng rng_;
    std::map<std::string, uint64_t> issued_; // token -> statement digest
};

// ---- party outputs ----------------------------------------------------------

struct ApplicantOutput {
    bool got_qubit = false;
    bool correction_applied = false;
    std::optional<uint8_t> support_bit; // learned only in the ^sup protocols
    bool local_abort = false;           // never transmitted
};

struct ProtocolResult {
    Transcript transcript{SchedulerMode::RoundRobin, 0};
    std::vector<ApplicantOutput> applicants;
    bool server_abort = false;
    bool mpc_bottom = false;
    std::vector<size_t> malicious_ids;
    std::optional<CircuitOutcome> outcome;           // raw circuit outcome
    std::optional<HiddenGhzDescription> final_state; // engine-held, post-corrections
    std::vector<uint8_t> final_singleton;            // singleton runs, post-corrections
    bool aborted() const;
};

struct EngineConfig {
    uint64_t seed = 1;
    SchedulerMode scheduler = SchedulerMode::RoundRobin;
};

// ---- protocols ---------------------------------------------------------------

// Cupid generates (k, t), the server runs the circuit, applicants store qubits.
ProtocolResult run_blind(const Params& p, const std::vector<uint8_t>& d0, const EngineConfig& cfg);

// BLIND, then Cupid reveals each support bit.
ProtocolResult run_blind_sup(const Params& p, const std::vector<uint8_t>& d0,
                             const EngineConfig& cfg);

// Compiled family: Cupid computes v and XOR-shares of alpha; supported
// applicants correct to a canonical GHZ.
ProtocolResult run_blind_can_sup(const Params& p_local, const std::vector<uint8_t>& d0,
                                 const EngineConfig& cfg);

struct BlindZkResult {
    bool accepted = false;
    std::optional<CircuitOutcome> outcome;
    Transcript transcript{SchedulerMode::RoundRobin, 0};
};

// Alice proves CheckTrapdoor && Auth over the key; Bob verifies and runs the
// circuit. Honest Alice resamples keys until the relation holds.
BlindZkResult run_blind_zk(const Params& p, const std::vector<uint8_t>& d0,
                           const std::string& witness, const AuthPredicate& auth,
                           NizkBackend& nizk, const EngineConfig& cfg);

// Bob's side alone, callable with an adversarial (key, proof) pair.
BlindZkResult blind_zk_bob(const Params& p, const std::string& key_bytes,
                           const std::string& proof, const AuthPredicate& auth, NizkBackend& nizk,
                           const HghzTrapdoor* preimage_oracle, const EngineConfig& cfg);

// ---- CombineAlpha (ideal functionality) --------------------------------------

struct CombineAlphaServerInput {
    std::vector<std::string> k_blobs;
    ZqVector y;
    Bits b;
};

struct CombineAlphaApplicantInput {
    LocalTrapdoor t;
    uint8_t d0_bit = 0;
    std::string k_blob;
    ZqVector y;
    Bits b;
    std::vector<uint8_t> r; // n random bits supplied by this applicant
};

// Returns the per-applicant shares, or nothing for the bottom^{n+1} outcome.
// When some PartAlpha_Loc is a local bottom, alpha is drawn uniformly.
std::optional<std::vector<uint8_t>> combine_alpha(const CombineAlphaServerInput& server,
                                                  const std::vector<CombineAlphaApplicantInput>& in,
                                                  Rng& rng);

struct AuthApplicantInput {
    uint8_t d0_bit = 0;
    std::string witness;
};

// Protocol with per-applicant key generation, NIZK authorization, and the MPC
// share distribution. ZK rejection aborts after a bottom broadcast and reports
// the offending identities.
ProtocolResult run_auth_blind_dist_can(const Params& p_local,
                                       const std::vector<AuthApplicantInput>& applicants,
                                       const std::vector<AuthPredicate>& auths, NizkBackend& nizk,
                                       const EngineConfig& cfg);

} // namespace hghz

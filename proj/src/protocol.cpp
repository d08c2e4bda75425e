#include "hghz/protocol.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "hghz/serialize.hpp"

namespace hghz {

// ---- transcript -------------------------------------------------------------

std::string Message::wire() const { return to_json().dump(); }

nlohmann::json Message::to_json() const {
    return nlohmann::json{{"round", round},   {"from", sender},  {"to", receiver},
                          {"type", type},     {"payload", payload}, {"pad", pad}};
}

void Transcript::post(int round, const std::string& from, const std::string& to,
                      const std::string& type, nlohmann::json payload) {
    Message m;
    m.round = round;
    m.sender = from;
    m.receiver = to;
    m.type = type;
    m.payload = std::move(payload);
    open_.push_back(messages_.size());
    messages_.push_back(std::move(m));
}

void Transcript::seal_round(int round) {
    if (open_.empty()) return;
    size_t max_len = 0;
    for (size_t idx : open_) {
        if (messages_[idx].round != round) throw std::logic_error("seal_round: round mismatch");
        max_len = std::max(max_len, messages_[idx].wire().size());
    }
    for (size_t idx : open_) {
        size_t len = messages_[idx].wire().size();
        if (len < max_len) messages_[idx].pad = std::string(max_len - len, '0');
    }
    if (mode_ == SchedulerMode::SeededRandom && open_.size() > 1) {
        // seeded interleaving: permute delivery order inside the round
        std::vector<size_t> order(open_.begin(), open_.end());
        for (size_t i = order.size() - 1; i > 0; --i)
            std::swap(order[i], order[shuffle_rng_.uniform_below(i + 1)]);
        std::vector<Message> block;
        block.reserve(order.size());
        for (size_t idx : order) block.push_back(std::move(messages_[idx]));
        size_t base = open_.front();
        std::sort(open_.begin(), open_.end());
        for (size_t i = 0; i < block.size(); ++i) messages_[open_[i]] = std::move(block[i]);
        (void)base;
    }
    open_.clear();
}

std::string Transcript::to_jsonl() const {
    std::ostringstream os;
    for (const auto& m : messages_) os << m.to_json().dump() << '\n';
    return os.str();
}

// ---- auth predicates ----------------------------------------------------------

AuthPredicate AuthPredicate::allow_all() {
    return {"allow_all", [](const std::vector<uint8_t>&, const std::string&) { return 1; }};
}

AuthPredicate AuthPredicate::hamming2_first() {
    return {"hamming2_first", [](const std::vector<uint8_t>& d0, const std::string&) {
                if (d0.empty() || d0[0] != 1) return 0;
                size_t w = 0;
                for (uint8_t b : d0) w += b;
                return w == 2 ? 1 : 0;
            }};
}

AuthPredicate AuthPredicate::hash_preimage(uint64_t target) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "hash_preimage:%016llx", static_cast<unsigned long long>(target));
    return {buf, [target](const std::vector<uint8_t>& d0, const std::string& w) {
                bool supported = false;
                for (uint8_t b : d0) supported |= b == 1;
                if (!supported) return 1; // only supported choices need the secret
                return fnv1a64(w) == target ? 1 : 0;
            }};
}

AuthPredicate AuthPredicate::by_name(const std::string& name) {
    if (name == "allow_all") return allow_all();
    if (name == "hamming2_first") return hamming2_first();
    if (name.rfind("hash_preimage:", 0) == 0) {
        uint64_t target = std::stoull(name.substr(14), nullptr, 16);
        return hash_preimage(target);
    }
    throw std::invalid_argument("unknown auth predicate: " + name);
}

// ---- transparent NIZK stub ------------------------------------------------------

static uint64_t statement_digest(const NizkStatement& st) {
    return fnv1a64(st.key_bytes + "|" + st.auth_name);
}

std::optional<std::string> TransparentNizkStub::prove(const NizkStatement& st,
                                                      const NizkWitness& w) {
    HghzKey key;
    HghzTrapdoor t;
    try {
        key = parse_key(st.key_bytes);
        t = parse_trapdoor(w.trapdoor_bytes);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    AuthPredicate auth = AuthPredicate::by_name(st.auth_name);
    if (!check_trapdoor(w.d0, t, key)) return std::nullopt;
    if (auth.fn(w.d0, w.auth_witness) != 1) return std::nullopt;
    std::string token;
    for (int i = 0; i < 4; ++i) {
        uint64_t v = rng_.next_u64();
        for (int j = 0; j < 8; ++j) token.push_back(static_cast<char>((v >> (8 * j)) & 0xff));
    }
    std::string hex = base64_encode(token);
    issued_[hex] = statement_digest(st);
    return hex;
}

bool TransparentNizkStub::verify(const NizkStatement& st, const std::string& proof) {
    auto it = issued_.find(proof);
    return it != issued_.end() && it->second == statement_digest(st);
}

// ---- engine-held quantum state ----------------------------------------------------

namespace {

struct EngineState {
    CircuitOutcome::Kind kind = CircuitOutcome::Kind::Abort;
    HiddenGhzDescription desc;
    std::vector<uint8_t> comp_basis;

    void apply_x(size_t i) {
        if (kind == CircuitOutcome::Kind::Twin) {
            desc.d[i] ^= 1;
            desc.d_prime[i] ^= 1;
        } else if (kind == CircuitOutcome::Kind::Singleton) {
            comp_basis[i] ^= 1;
        }
    }
    void apply_z(size_t i, uint8_t e) {
        if (kind == CircuitOutcome::Kind::Twin)
            desc.alpha ^= e & (desc.d[i] ^ desc.d_prime[i]);
        // on a computational-basis qubit Z is a global phase
    }
};

EngineState state_from_outcome(const CircuitOutcome& oc) {
    EngineState st;
    st.kind = oc.kind;
    if (oc.kind == CircuitOutcome::Kind::Twin) st.desc = oc.state;
    if (oc.kind == CircuitOutcome::Kind::Singleton) st.comp_basis = oc.singleton_d;
    return st;
}

nlohmann::json yb_payload(const CircuitOutcome& oc) {
    std::string bstr;
    for (uint8_t bit : oc.b) bstr.push_back(bit ? '1' : '0');
    return {{"y", base64_encode(oc.y)}, {"b", bstr}};
}

const char* part_info_wire(PartInfoSymbol s) {
    switch (s) {
        case PartInfoSymbol::Zero: return "0";
        case PartInfoSymbol::One: return "1";
        case PartInfoSymbol::NotSupported: return "x";
        case PartInfoSymbol::LocalAbort: return "bottom";
    }
    return "?";
}

std::string party_name(size_t i) { return "applicant" + std::to_string(i + 1); }

} // namespace

bool ProtocolResult::aborted() const {
    if (server_abort || mpc_bottom) return true;
    for (const auto& a : applicants)
        if (a.local_abort) return true;
    return false;
}

// ---- BLIND --------------------------------------------------------------------

static ProtocolResult blind_core(const Params& p, const std::vector<uint8_t>& d0,
                                 const EngineConfig& cfg, bool reveal_support) {
    if (d0.size() != p.n) throw std::invalid_argument("run_blind: d0 length != n");
    ProtocolResult res;
    res.transcript = Transcript(cfg.scheduler, cfg.seed);
    res.applicants.resize(p.n);

    Rng cupid_rng(cfg.seed, 1), server_rng(cfg.seed, 2);
    auto [key, trap] = gen(p, d0, cupid_rng);

    res.transcript.post(1, "cupid", "server", "Key",
                        {{"key", base64_encode(serialize_key(key))}});
    res.transcript.seal_round(1);

    HghzCircuitFunction f(key, trap);
    CircuitOutcome oc = run_server_circuit_exact(f, server_rng);
    res.outcome = oc;
    if (oc.kind == CircuitOutcome::Kind::Abort) {
        res.server_abort = true;
        return res;
    }

    res.transcript.post(2, "server", "cupid", "YB", yb_payload(oc));
    for (size_t i = 0; i < p.n; ++i) {
        res.transcript.post(2, "server", party_name(i), "QubitRef",
                            {{"state_id", 0}, {"qubit", i}});
        res.applicants[i].got_qubit = true;
    }
    res.transcript.seal_round(2);

    if (reveal_support) {
        for (size_t i = 0; i < p.n; ++i) {
            res.transcript.post(3, "cupid", party_name(i), "SupportBit", {{"bit", d0[i]}});
            res.applicants[i].support_bit = d0[i];
        }
        res.transcript.seal_round(3);
    }

    EngineState st = state_from_outcome(oc);
    if (st.kind == CircuitOutcome::Kind::Twin)
        res.final_state = st.desc;
    else
        res.final_singleton = st.comp_basis;
    return res;
}

ProtocolResult run_blind(const Params& p, const std::vector<uint8_t>& d0,
                         const EngineConfig& cfg) {
    return blind_core(p, d0, cfg, false);
}

ProtocolResult run_blind_sup(const Params& p, const std::vector<uint8_t>& d0,
                             const EngineConfig& cfg) {
    return blind_core(p, d0, cfg, true);
}

// ---- BLIND^sup_can (compiled family) ---------------------------------------------

ProtocolResult run_blind_can_sup(const Params& p_local, const std::vector<uint8_t>& d0,
                                 const EngineConfig& cfg) {
    size_t n = d0.size();
    ProtocolResult res;
    res.transcript = Transcript(cfg.scheduler, cfg.seed);
    res.applicants.resize(n);

    Rng cupid_rng(cfg.seed, 1), server_rng(cfg.seed, 2);
    DistKey key;
    DistTrapdoor trap;
    for (size_t i = 0; i < n; ++i) {
        auto [k, t] = gen_loc(p_local, d0[i], cupid_rng);
        key.parties.push_back(std::move(k));
        trap.parties.push_back(std::move(t));
    }

    nlohmann::json kpayload = nlohmann::json::array();
    for (const auto& k : key.parties) kpayload.push_back(base64_encode(serialize_key(k)));
    res.transcript.post(1, "cupid", "server", "Key", {{"local_keys", kpayload}});
    res.transcript.seal_round(1);

    DistCircuitFunction f(key, trap);
    CircuitOutcome oc = run_server_circuit_exact(f, server_rng);
    res.outcome = oc;
    if (oc.kind == CircuitOutcome::Kind::Abort) {
        res.server_abort = true;
        return res;
    }

    res.transcript.post(2, "server", "cupid", "YB", yb_payload(oc));
    for (size_t i = 0; i < n; ++i) {
        res.transcript.post(2, "server", party_name(i), "QubitRef",
                            {{"state_id", 0}, {"qubit", i}});
        res.applicants[i].got_qubit = true;
    }
    res.transcript.seal_round(2);

    // Cupid: v per party, alpha from the twin pair (uniform when no twin),
    // then XOR shares of alpha over the supported set
    ZqVector y;
    {
        std::string raw = oc.y;
        y.resize(raw.size() / 8);
        for (size_t i = 0; i < y.size(); ++i) {
            uint64_t v = 0;
            for (int j = 0; j < 8; ++j)
                v |= static_cast<uint64_t>(static_cast<uint8_t>(raw[8 * i + static_cast<size_t>(j)]))
                     << (8 * j);
            y[i] = v;
        }
    }
    std::vector<PartInfoSymbol> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = part_info_loc(i, trap.parties[i], y);

    uint8_t alpha;
    bool twin = oc.kind == CircuitOutcome::Kind::Twin;
    if (twin) {
        int a = 0;
        bool ok = true;
        for (size_t i = 0; i < n; ++i) {
            auto part = part_alpha_loc(i, trap.parties[i], y, oc.b);
            if (!part) {
                ok = false;
                break;
            }
            a ^= *part;
        }
        alpha = ok ? static_cast<uint8_t>(a) : static_cast<uint8_t>(cupid_rng.bit());
    } else {
        alpha = static_cast<uint8_t>(cupid_rng.bit());
    }

    std::vector<uint8_t> shares(n);
    std::vector<size_t> supported;
    for (size_t i = 0; i < n; ++i)
        if (d0[i]) supported.push_back(i);
    for (auto& s : shares) s = static_cast<uint8_t>(cupid_rng.bit());
    if (!supported.empty()) {
        uint8_t acc = 0;
        for (size_t i : supported)
            if (i != supported.back()) acc ^= shares[i];
        shares[supported.back()] = alpha ^ acc;
    }

    for (size_t i = 0; i < n; ++i)
        res.transcript.post(3, "cupid", party_name(i), "AlphaShareAndV",
                            {{"alpha_share", shares[i]}, {"v", part_info_wire(v[i])}});
    res.transcript.seal_round(3);

    EngineState st = state_from_outcome(oc);
    for (size_t i = 0; i < n; ++i) {
        auto& out = res.applicants[i];
        out.support_bit = d0[i];
        if (v[i] == PartInfoSymbol::LocalAbort) {
            out.local_abort = true; // never transmitted further
            continue;
        }
        if (is_correction(v[i])) {
            if (v[i] == PartInfoSymbol::One) st.apply_x(i);
            st.apply_z(i, shares[i]);
            out.correction_applied = true;
        }
    }
    if (st.kind == CircuitOutcome::Kind::Twin)
        res.final_state = st.desc;
    else
        res.final_singleton = st.comp_basis;
    return res;
}

// ---- BLIND-ZK --------------------------------------------------------------------

BlindZkResult blind_zk_bob(const Params&, const std::string& key_bytes,
                           const std::string& proof, const AuthPredicate& auth, NizkBackend& nizk,
                           const HghzTrapdoor* preimage_oracle, const EngineConfig& cfg) {
    BlindZkResult res;
    res.transcript = Transcript(cfg.scheduler, cfg.seed);
    res.transcript.post(1, "alice", "bob", "KeyAndProof",
                        {{"key", base64_encode(key_bytes)}, {"proof", base64_encode(proof)}});
    res.transcript.seal_round(1);

    NizkStatement st{key_bytes, auth.name};
    if (!nizk.verify(st, proof)) {
        res.accepted = false;
        return res;
    }
    res.accepted = true;
    HghzKey key = parse_key(key_bytes);
    Rng bob_rng(cfg.seed, 7);
    if (preimage_oracle) {
        HghzCircuitFunction f(key, *preimage_oracle);
        res.outcome = run_server_circuit_exact(f, bob_rng);
    }
    return res;
}

BlindZkResult run_blind_zk(const Params& p, const std::vector<uint8_t>& d0,
                           const std::string& witness, const AuthPredicate& auth,
                           NizkBackend& nizk, const EngineConfig& cfg) {
    Rng alice_rng(cfg.seed, 3);
    // honest prover needs a key that satisfies the proven relation; resample
    // past the sigma_max tail
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto [key, trap] = gen(p, d0, alice_rng);
        if (!check_trapdoor(d0, trap, key)) continue;
        if (auth.fn(d0, witness) != 1) break; // unauthorized support choice
        NizkStatement st{serialize_key(key), auth.name};
        NizkWitness w{d0, serialize_trapdoor(trap), witness};
        auto proof = nizk.prove(st, w);
        if (!proof) break;
        return blind_zk_bob(p, st.key_bytes, *proof, auth, nizk, &trap, cfg);
    }
    // no valid proof: send an empty token, Bob rejects
    auto [key, trap] = gen(p, d0, alice_rng);
    return blind_zk_bob(p, serialize_key(key), "", auth, nizk, &trap, cfg);
}

// ---- CombineAlpha ideal functionality ----------------------------------------------

std::optional<std::vector<uint8_t>> combine_alpha(const CombineAlphaServerInput& server,
                                                  const std::vector<CombineAlphaApplicantInput>& in,
                                                  Rng& rng) {
    size_t n = in.size();
    if (server.k_blobs.size() != n) return std::nullopt;
    for (size_t i = 0; i < n; ++i) {
        const auto& a = in[i];
        if (a.k_blob != server.k_blobs[i]) return std::nullopt;
        if (a.y != server.y || a.b != server.b) return std::nullopt;
        LocalKey k;
        try {
            k = parse_key(a.k_blob);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        if (!check_trapdoor_dist(a.d0_bit, a.t, k)) return std::nullopt;
        if (a.r.size() != n) return std::nullopt;
    }

    int alpha = 0;
    bool all_parts = true;
    for (size_t i = 0; i < n; ++i) {
        auto part = part_alpha_loc(i, in[i].t, server.y, server.b);
        if (!part) {
            all_parts = false;
            break;
        }
        alpha ^= *part;
    }
    if (!all_parts) alpha = rng.bit();

    std::vector<uint8_t> shares(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < n; ++l) shares[i] ^= in[l].r[i] & 1;

    std::vector<size_t> supported;
    for (size_t i = 0; i < n; ++i)
        if (in[i].d0_bit) supported.push_back(i);
    if (!supported.empty()) {
        size_t j = supported.back(); // max of the supported set
        uint8_t acc = 0;
        for (size_t i : supported)
            if (i != j) acc ^= shares[i];
        shares[j] = static_cast<uint8_t>(alpha) ^ acc;
    }
    return shares;
}

// ---- AUTH-BLIND^dist_can ------------------------------------------------------------

ProtocolResult run_auth_blind_dist_can(const Params& p_local,
                                       const std::vector<AuthApplicantInput>& applicants,
                                       const std::vector<AuthPredicate>& auths, NizkBackend& nizk,
                                       const EngineConfig& cfg) {
    size_t n = applicants.size();
    if (auths.size() != n) throw std::invalid_argument("auth count != applicant count");
    ProtocolResult res;
    res.transcript = Transcript(cfg.scheduler, cfg.seed);
    res.applicants.resize(n);

    Rng server_rng(cfg.seed, 2), func_rng(cfg.seed, 9);

    // round 1: every applicant generates a local key and proves the relation
    DistKey key;
    DistTrapdoor trap;
    std::vector<std::string> k_blobs(n), proofs(n);
    for (size_t i = 0; i < n; ++i) {
        Rng rng_i(cfg.seed, 100 + i);
        std::vector<uint8_t> d0i{static_cast<uint8_t>(applicants[i].d0_bit & 1)};
        LocalKey k;
        LocalTrapdoor t;
        bool have_witness = auths[i].fn(d0i, applicants[i].witness) == 1;
        for (int attempt = 0; attempt < 64; ++attempt) {
            std::tie(k, t) = gen_loc(p_local, applicants[i].d0_bit, rng_i);
            if (check_trapdoor_dist(applicants[i].d0_bit, t, k)) break;
        }
        k_blobs[i] = serialize_key(k);
        if (have_witness) {
            NizkStatement st{k_blobs[i], auths[i].name};
            NizkWitness w{d0i, serialize_trapdoor(t), applicants[i].witness};
            auto proof = nizk.prove(st, w);
            proofs[i] = proof ? *proof : "";
        }
        key.parties.push_back(std::move(k));
        trap.parties.push_back(std::move(t));
        res.transcript.post(1, party_name(i), "server", "LocalKeyAndProof",
                            {{"key", base64_encode(k_blobs[i])},
                             {"proof", base64_encode(proofs[i])}});
    }
    res.transcript.seal_round(1);

    // round 2: verification; on failure the server broadcasts bottom and stops
    for (size_t i = 0; i < n; ++i) {
        NizkStatement st{k_blobs[i], auths[i].name};
        if (!nizk.verify(st, proofs[i])) res.malicious_ids.push_back(i);
    }
    if (!res.malicious_ids.empty()) {
        for (size_t i = 0; i < n; ++i)
            res.transcript.post(2, "server", party_name(i), "Abort", {{"reason", "zk_reject"}});
        res.transcript.seal_round(2);
        res.server_abort = true;
        return res;
    }

    // round 3: circuit on the concatenated key, qubits + (y, b) to everyone
    DistCircuitFunction f(key, trap);
    CircuitOutcome oc = run_server_circuit_exact(f, server_rng);
    res.outcome = oc;
    if (oc.kind == CircuitOutcome::Kind::Abort) {
        res.server_abort = true;
        return res;
    }
    for (size_t i = 0; i < n; ++i) {
        nlohmann::json payload = yb_payload(oc);
        payload["state_id"] = 0;
        payload["qubit"] = i;
        res.transcript.post(3, "server", party_name(i), "QubitRefAndYB", payload);
        res.applicants[i].got_qubit = true;
    }
    res.transcript.seal_round(3);

    ZqVector y;
    {
        y.resize(oc.y.size() / 8);
        for (size_t i = 0; i < y.size(); ++i) {
            uint64_t v = 0;
            for (int j = 0; j < 8; ++j)
                v |= static_cast<uint64_t>(
                         static_cast<uint8_t>(oc.y[8 * i + static_cast<size_t>(j)]))
                     << (8 * j);
            y[i] = v;
        }
    }

    // round 4: the CombineAlpha functionality (trusted in-engine component)
    CombineAlphaServerInput sin{k_blobs, y, oc.b};
    std::vector<CombineAlphaApplicantInput> ain(n);
    for (size_t i = 0; i < n; ++i) {
        Rng rng_i(cfg.seed, 200 + i);
        ain[i].t = trap.parties[i];
        ain[i].d0_bit = applicants[i].d0_bit;
        ain[i].k_blob = k_blobs[i];
        ain[i].y = y;
        ain[i].b = oc.b;
        ain[i].r.resize(n);
        for (auto& bit : ain[i].r) bit = static_cast<uint8_t>(rng_i.bit());
        res.transcript.post(4, party_name(i), "mpc", "MpcInput", {{"committed", true}});
    }
    res.transcript.post(4, "server", "mpc", "MpcInput", {{"committed", true}});
    res.transcript.seal_round(4);

    auto shares = combine_alpha(sin, ain, func_rng);
    if (!shares) {
        for (size_t i = 0; i < n; ++i)
            res.transcript.post(5, "mpc", party_name(i), "MpcOutput", {{"result", "bottom"}});
        res.transcript.post(5, "mpc", "server", "MpcOutput", {{"result", "bottom"}});
        res.transcript.seal_round(5);
        res.mpc_bottom = true;
        return res;
    }
    for (size_t i = 0; i < n; ++i)
        res.transcript.post(5, "mpc", party_name(i), "MpcOutput",
                            {{"result", "share"}, {"alpha_share", (*shares)[i]}});
    res.transcript.post(5, "mpc", "server", "MpcOutput", {{"result", "top"}});
    res.transcript.seal_round(5);

    // local corrections; a bottom from PartInfo_Loc stays local, by design
    EngineState st = state_from_outcome(oc);
    for (size_t i = 0; i < n; ++i) {
        PartInfoSymbol v = part_info_loc(i, trap.parties[i], y);
        auto& out = res.applicants[i];
        if (v == PartInfoSymbol::LocalAbort) {
            out.local_abort = true;
            continue;
        }
        if (is_correction(v)) {
            if (v == PartInfoSymbol::One) st.apply_x(i);
            st.apply_z(i, (*shares)[i]);
            out.correction_applied = true;
        }
    }
    if (st.kind == CircuitOutcome::Kind::Twin)
        res.final_state = st.desc;
    else
        res.final_singleton = st.comp_basis;
    return res;
}

} // namespace hghz

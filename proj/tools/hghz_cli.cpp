// Command-line front door: parameter planning, keygen, delta estimation,
// protocol runs, game/attack batches, machine-readable reports.
//
// Exit codes: 0 ok, 2 infeasible, 3 validation error, 4 protocol abort.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hghz/attacks.hpp"
#include "hghz/games.hpp"
#include "hghz/planner.hpp"
#include "hghz/report.hpp"
#include "hghz/serialize.hpp"
#include "hghz/stats.hpp"

using namespace hghz;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitValidation = 3;
constexpr int kExitProtocolAbort = 4;

uint64_t default_seed() {
    if (const char* env = std::getenv("HGHZ_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

void emit(const nlohmann::json& report, const std::string& out_path) {
    std::string text = report.dump(2) + "\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot write " + out_path);
        f << text;
    }
}

std::vector<uint8_t> parse_bits(const std::string& s) {
    std::vector<uint8_t> v;
    for (char c : s) {
        if (c != '0' && c != '1') throw std::runtime_error("bit string must be 0/1");
        v.push_back(static_cast<uint8_t>(c - '0'));
    }
    return v;
}

std::string bits_str(const std::vector<uint8_t>& v) {
    std::string s;
    for (uint8_t b : v) s.push_back(b ? '1' : '0');
    return s;
}

Params toy_from_options(uint64_t N, uint32_t k, uint64_t n, double alpha_q) {
    return make_toy_params(N, k, n, alpha_q);
}

int cmd_plan(uint64_t N, double eps, uint64_t n, uint64_t seed, const std::string& out) {
    PlanReport rep = plan_params(N, eps, n);
    nlohmann::json j = report_base("plan", seed, "secure");
    j.update(plan_to_json(rep));
    stamp_time(j);
    emit(j, out);
    return rep.feasible ? kExitOk : kExitInfeasible;
}

int cmd_keygen(const Params& p, const std::string& d0s, uint64_t seed, const std::string& key_path,
               const std::string& trap_path, const std::string& out) {
    std::vector<uint8_t> d0 = parse_bits(d0s);
    if (d0.size() != p.n) throw std::runtime_error("d0 length must equal n");
    Rng rng(seed, 0);
    auto [key, trap] = gen(p, d0, rng);
    write_file(key_path, serialize_key(key));
    write_file(trap_path, serialize_trapdoor(trap));
    nlohmann::json j = report_base("keygen", seed, "toy");
    j["key_file"] = key_path;
    j["trapdoor_file"] = trap_path;
    j["check_trapdoor"] = check_trapdoor(d0, trap, key);
    j["d0"] = d0s;
    stamp_time(j);
    emit(j, out);
    return kExitOk;
}

int cmd_eval(const std::string& key_path, uint64_t seed, const std::string& out) {
    HghzKey key = parse_key(read_file(key_path));
    Rng rng(seed, 0);
    DomainPoint x = sample_domain(key.p, rng);
    ZqVector y = eval(key, x);
    nlohmann::json j = report_base("eval", seed, "toy");
    j["y"] = y;
    j["x"] = {{"s", x.s}, {"e", x.e}, {"c", x.c}, {"d", bits_str(x.d)}};
    stamp_time(j);
    emit(j, out);
    return kExitOk;
}

int cmd_invert(const std::string& trap_path, const std::string& y_json, uint64_t seed,
               const std::string& out) {
    HghzTrapdoor trap = parse_trapdoor(read_file(trap_path));
    ZqVector y = nlohmann::json::parse(y_json).get<ZqVector>();
    auto pair = invert(trap, y);
    nlohmann::json j = report_base("invert", seed, "toy");
    if (pair) {
        j["preimages"] = {{{"s", pair->first.s},
                           {"e", pair->first.e},
                           {"c", pair->first.c},
                           {"d", bits_str(pair->first.d)}},
                          {{"s", pair->second.s},
                           {"e", pair->second.e},
                           {"c", pair->second.c},
                           {"d", bits_str(pair->second.d)}}};
    } else {
        j["preimages"] = nullptr;
    }
    stamp_time(j);
    emit(j, out);
    return kExitOk;
}

int cmd_estimate_delta(const std::string& key_path, const std::string& trap_path, uint64_t trials,
                       uint64_t seed, unsigned threads, const std::string& out) {
    HghzKey key = parse_key(read_file(key_path));
    HghzTrapdoor trap = parse_trapdoor(read_file(trap_path));
    DeltaEstimate e = estimate_delta(key, trap, trials, seed, threads);
    double dm = delta_m_bound(key.p);
    nlohmann::json j = report_base("estimate_delta", seed, "toy");
    j["trials"] = e.trials;
    j["non_twin"] = e.non_twin;
    j["delta_hat"] = e.delta_hat;
    j["ci99"] = {{"low", e.ci_low}, {"high", e.ci_high}};
    j["delta_m"] = dm;
    j["within_delta_m"] = e.ci_high <= dm;
    stamp_time(j);
    emit(j, out);
    return kExitOk;
}

int cmd_run(const std::string& protocol, const Params& p_local, const std::string& d0s,
            uint64_t trials, uint64_t seed, const std::string& out,
            const std::string& transcript_path, const std::string& scheduler) {
    std::vector<uint8_t> d0 = parse_bits(d0s);
    EngineConfig cfg;
    cfg.scheduler =
        scheduler == "random" ? SchedulerMode::SeededRandom : SchedulerMode::RoundRobin;

    uint64_t aborts = 0, canonical = 0, twin_runs = 0;
    std::string first_transcript;
    for (uint64_t t = 0; t < trials; ++t) {
        cfg.seed = seed + t;
        ProtocolResult res;
        if (protocol == "blind") {
            Params p = make_toy_params(p_local.N, p_local.k, d0.size(), p_local.alpha_q);
            res = run_blind(p, d0, cfg);
        } else if (protocol == "blind-sup") {
            Params p = make_toy_params(p_local.N, p_local.k, d0.size(), p_local.alpha_q);
            res = run_blind_sup(p, d0, cfg);
        } else if (protocol == "blind-can-sup") {
            res = run_blind_can_sup(p_local, d0, cfg);
        } else if (protocol == "auth-dist") {
            std::vector<AuthApplicantInput> inputs;
            std::vector<AuthPredicate> auths;
            for (uint8_t bit : d0) {
                inputs.push_back({bit, ""});
                auths.push_back(AuthPredicate::allow_all());
            }
            TransparentNizkStub nizk(cfg.seed);
            res = run_auth_blind_dist_can(p_local, inputs, auths, nizk, cfg);
        } else if (protocol == "blind-zk") {
            Params p = make_toy_params(p_local.N, p_local.k, d0.size(), p_local.alpha_q);
            TransparentNizkStub nizk(cfg.seed);
            BlindZkResult zk =
                run_blind_zk(p, d0, "", AuthPredicate::allow_all(), nizk, cfg);
            res.transcript = zk.transcript;
            res.server_abort = !zk.accepted;
            res.outcome = zk.outcome;
            if (zk.outcome && zk.outcome->kind == CircuitOutcome::Kind::Twin)
                res.final_state = zk.outcome->state;
        } else {
            throw std::runtime_error("unknown protocol: " + protocol);
        }
        if (res.aborted()) {
            ++aborts;
        } else if (res.final_state) {
            ++twin_runs;
            if (is_canonical_ghz(*res.final_state)) ++canonical;
        }
        if (t == 0) first_transcript = res.transcript.to_jsonl();
    }
    if (!transcript_path.empty()) {
        std::ofstream f(transcript_path);
        f << first_transcript;
    }

    nlohmann::json j = report_base("run", seed, "toy");
    j["protocol"] = protocol;
    j["n"] = d0.size();
    j["d0"] = d0s;
    j["trials"] = trials;
    j["aborts"] = aborts;
    j["twin_runs"] = twin_runs;
    bool canonical_expected = protocol == "blind-can-sup" || protocol == "auth-dist";
    j["canonical_ghz"] = canonical_expected ? nlohmann::json(twin_runs > 0 && canonical == twin_runs)
                                            : nlohmann::json(nullptr);
    stamp_time(j);
    emit(j, out);
    return aborts == trials && trials > 0 ? kExitProtocolAbort : kExitOk;
}

int cmd_games(const std::string& name, const std::string& adversary, const Params& p_local,
              size_t n, uint64_t trials, uint64_t seed, unsigned threads, const std::string& out) {
    AdversaryKind kind;
    if (adversary == "random")
        kind = AdversaryKind::Random;
    else if (adversary == "oracle")
        kind = AdversaryKind::Oracle;
    else if (adversary == "violating")
        kind = AdversaryKind::Violating;
    else
        throw std::runtime_error("unknown adversary: " + adversary);

    GameBatch b = game_batch_by_name(name, kind, p_local, n, trials, seed, threads);
    auto ci = clopper_pearson(b.wins, b.trials, 0.99);
    nlohmann::json j = report_base("games", seed, "toy");
    j["game"] = name;
    j["adversary"] = adversary;
    j["trials"] = b.trials;
    j["wins"] = b.wins;
    j["win_rate"] = b.win_rate;
    j["ci99"] = {{"low", ci.first}, {"high", ci.second}};
    stamp_time(j);
    emit(j, out);
    return kExitOk;
}

int cmd_attacks(const std::string& name, size_t n, uint64_t trials, uint64_t seed,
                unsigned threads, const std::string& out) {
    nlohmann::json j = report_base("attacks", seed, "toy");
    j["attack"] = name;
    j["trials"] = trials;
    if (name == "blind-can") {
        AttackStats st = attack_blind_can(n, trials, seed, threads);
        j["n"] = n;
        j["win_rate"] = st.win_rate;
        j["exact"] = st.exact;
        j["sigma"] = st.sigma;
        j["within_3_sigma"] = std::fabs(st.win_rate - st.exact) <= 3 * st.sigma;
    } else if (name == "alpha-leak") {
        AlphaLeakStats st = attack_alpha_leak(trials, seed, threads);
        j["unprotected"] = {{"win_rate", st.unprotected_variant.win_rate},
                            {"exact", st.unprotected_variant.exact},
                            {"sigma", st.unprotected_variant.sigma}};
        j["protected"] = {{"win_rate", st.protected_variant.win_rate},
                          {"exact", st.protected_variant.exact},
                          {"sigma", st.protected_variant.sigma}};
    } else {
        throw std::runtime_error("unknown attack: " + name);
    }
    stamp_time(j);
    emit(j, out);
    return kExitOk;
}

int cmd_report(const std::string& in_path, const std::string& schema_dir) {
    std::ifstream f(in_path);
    if (!f) {
        std::cerr << "cannot read " << in_path << "\n";
        return kExitValidation;
    }
    nlohmann::json rep;
    try {
        rep = nlohmann::json::parse(f);
    } catch (const std::exception& e) {
        std::cerr << "bad JSON: " << e.what() << "\n";
        return kExitValidation;
    }
    std::string err;
    if (!validate_report(rep, schema_dir, &err)) {
        std::cerr << "schema validation failed: " << err << "\n";
        return kExitValidation;
    }
    std::cout << "valid " << rep["kind"].get<std::string>() << " report";
    if (rep.contains("seed")) std::cout << " (seed " << rep["seed"] << ")";
    std::cout << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hidden-GHZ trapdoor workbench"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand

    uint64_t seed = default_seed();
    app.add_option("--seed", seed, "RNG seed (default from HGHZ_SEED)");
    unsigned threads = 1;
    app.add_option("--threads", threads, "worker threads for batch subcommands");
    std::string out = "-";
    app.add_option("--out", out, "report path (default stdout)");

    // toy parameter options shared by materializing subcommands
    uint64_t N = 2, n = 3;
    uint32_t k = 12;
    double alpha_q = 1.0;
    auto add_toy = [&](CLI::App* c) {
        c->add_option("--N", N, "LWE dimension");
        c->add_option("--k", k, "log2 q");
        c->add_option("--n", n, "number of h bits / applicants");
        c->add_option("--alpha-q", alpha_q, "Gaussian width");
    };

    auto* plan = app.add_subcommand("plan", "secure-regime feasibility planner");
    uint64_t plan_N = 0, plan_n = 3;
    double plan_eps = 1.0 / 3.0;
    plan->add_option("--N", plan_N, "LWE dimension")->required();
    plan->add_option("--eps", plan_eps, "exponent in k = floor(N^eps)");
    plan->add_option("--n", plan_n, "number of applicants");

    auto* keygen = app.add_subcommand("keygen", "generate a toy key/trapdoor pair");
    std::string d0s = "101", key_path = "key.hghzk", trap_path = "trapdoor.hghzt";
    add_toy(keygen);
    keygen->add_option("--d0", d0s, "support bit string");
    keygen->add_option("--key", key_path, "output key file");
    keygen->add_option("--trapdoor", trap_path, "output trapdoor file");

    auto* evalc = app.add_subcommand("eval", "evaluate f_k on a sampled domain point");
    evalc->add_option("--key", key_path, "key file")->required();

    auto* invertc = app.add_subcommand("invert", "invert an image vector");
    std::string y_json;
    invertc->add_option("--trapdoor", trap_path, "trapdoor file")->required();
    invertc->add_option("--y", y_json, "image vector as a JSON array")->required();

    auto* est = app.add_subcommand("estimate-delta", "Monte-Carlo twin-fraction estimate");
    uint64_t trials = 10000;
    est->add_option("--key", key_path, "key file")->required();
    est->add_option("--trapdoor", trap_path, "trapdoor file")->required();
    est->add_option("--trials", trials, "number of trials");

    auto* runc = app.add_subcommand("run", "protocol runs with summary");
    std::string protocol = "blind", transcript_path, scheduler = "round-robin";
    add_toy(runc);
    runc->add_option("--protocol", protocol, "blind|blind-sup|blind-can-sup|auth-dist|blind-zk");
    runc->add_option("--d0", d0s, "support bit string (one bit per applicant)");
    runc->add_option("--trials", trials, "number of runs");
    runc->add_option("--transcript", transcript_path, "write the first run's transcript (JSONL)");
    runc->add_option("--scheduler", scheduler, "round-robin|random");

    auto* gamesc = app.add_subcommand("games", "security-game batches");
    std::string game_name = "ind-d0", adversary = "random";
    add_toy(gamesc);
    gamesc->add_option("--name", game_name,
                       "ind-d0|ind-partial|ind-blind|ind-blind-sup|ind-blind-can-sup");
    gamesc->add_option("--adversary", adversary, "random|oracle|violating");
    gamesc->add_option("--trials", trials, "number of trials");

    auto* attacksc = app.add_subcommand("attacks", "concrete attack batches");
    std::string attack_name = "blind-can";
    uint64_t attack_n = 4;
    attacksc->add_option("--name", attack_name, "blind-can|alpha-leak");
    attacksc->add_option("--n", attack_n, "applicants (blind-can)");
    attacksc->add_option("--trials", trials, "number of trials");

    auto* reportc = app.add_subcommand("report", "validate a report file against its schema");
    std::string in_path, schema_dir = "schemas";
    reportc->add_option("--in", in_path, "report JSON file")->required();
    reportc->add_option("--schemas", schema_dir, "schema directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan->parsed()) return cmd_plan(plan_N, plan_eps, plan_n, seed, out);
        if (keygen->parsed())
            return cmd_keygen(toy_from_options(N, k, n, alpha_q), d0s, seed, key_path, trap_path,
                              out);
        if (evalc->parsed()) return cmd_eval(key_path, seed, out);
        if (invertc->parsed()) return cmd_invert(trap_path, y_json, seed, out);
        if (est->parsed()) return cmd_estimate_delta(key_path, trap_path, trials, seed, threads, out);
        if (runc->parsed()) {
            Params p_local = make_toy_params(N, k, 1, alpha_q);
            return cmd_run(protocol, p_local, d0s, trials, seed, out, transcript_path, scheduler);
        }
        if (gamesc->parsed()) {
            Params p_local = make_toy_params(N, k, 1, alpha_q);
            return cmd_games(game_name, adversary, p_local, n, trials, seed, threads, out);
        }
        if (attacksc->parsed()) return cmd_attacks(attack_name, attack_n, trials, seed, threads, out);
        if (reportc->parsed()) return cmd_report(in_path, schema_dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

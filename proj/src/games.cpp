#include "hghz/games.hpp"

#include <stdexcept>
#include <thread>

namespace hghz {

namespace {

std::vector<uint8_t> random_bits(size_t n, Rng& rng) {
    std::vector<uint8_t> v(n);
    for (auto& b : v) b = static_cast<uint8_t>(rng.bit());
    return v;
}

DistKey gen_dist(const Params& p_local, const std::vector<uint8_t>& d0, Rng& rng,
                 DistTrapdoor* trap_out) {
    DistKey key;
    DistTrapdoor trap;
    for (uint8_t bit : d0) {
        auto [k, t] = gen_loc(p_local, bit, rng);
        key.parties.push_back(std::move(k));
        trap.parties.push_back(std::move(t));
    }
    if (trap_out) *trap_out = std::move(trap);
    return key;
}

} // namespace

bool game_ind_d0(const Params& p, const IndD0Adversary& adv, bool hand_trapdoor, Rng& rng) {
    auto [d0_0, d0_1] = adv.choose(rng);
    if (d0_0.size() != p.n || d0_1.size() != p.n) return false; // malformed output loses
    int c = rng.bit();
    auto [key, trap] = gen(p, c ? d0_1 : d0_0, rng);
    int guess = adv.guess(key, hand_trapdoor ? &trap : nullptr, rng);
    return guess == c;
}

bool game_ind_partial(const Params& p_local, size_t n, const IndPartialAdversary& adv,
                      bool hand_trapdoor, Rng& rng) {
    auto [mal, d0_0, d0_1] = adv.choose(rng);
    if (d0_0.size() != n || d0_1.size() != n) return false;
    for (size_t i : mal)
        if (i >= n || d0_0[i] != d0_1[i]) return false; // game line: return false
    int c = rng.bit();
    DistTrapdoor trap;
    DistKey key = gen_dist(p_local, c ? d0_1 : d0_0, rng, &trap);
    ZqVector y = adv.query_y(key, rng);
    if (y.size() != key.n_parties() * key.local_y_len()) return false;
    std::vector<std::pair<size_t, PartInfoSymbol>> view;
    for (size_t i : mal) view.emplace_back(i, part_info_loc(i, trap.parties[i], y));
    int guess = adv.guess(view, hand_trapdoor ? &trap : nullptr, rng);
    return guess == c;
}

bool game_ind_blind(const Params& p, const IndBlindAdversary& adv, bool hand_trapdoor, Rng& rng) {
    auto [d0_0, d0_1] = adv.choose(rng);
    if (d0_0.size() != p.n || d0_1.size() != p.n) return false;
    int c = rng.bit();
    auto [key, trap] = gen(p, c ? d0_1 : d0_0, rng);
    // the adversary's (y, b) are not used by the game
    int guess = adv.respond(key, hand_trapdoor ? &trap : nullptr, rng);
    return guess == c;
}

bool game_ind_blind_sup(const Params& p, const IndBlindSupAdversary& adv, bool hand_trapdoor,
                        Rng& rng) {
    auto [mal, d0_0, d0_1] = adv.choose(rng);
    if (d0_0.size() != p.n || d0_1.size() != p.n) return false;
    for (size_t i : mal)
        if (i >= p.n || d0_0[i] != d0_1[i]) return false;
    int c = rng.bit();
    const auto& d0c = c ? d0_1 : d0_0;
    auto [key, trap] = gen(p, d0c, rng);
    adv.respond(key, rng);
    std::vector<std::pair<size_t, uint8_t>> view;
    for (size_t i : mal) view.emplace_back(i, d0c[i]);
    int guess = adv.guess(view, hand_trapdoor ? &trap : nullptr, rng);
    return guess == c;
}

bool game_ind_blind_can_sup(const Params& p_local, size_t n, const IndBlindCanSupAdversary& adv,
                            bool hand_trapdoor, Rng& rng) {
    auto [mal, d0_0, d0_1] = adv.choose(rng);
    if (d0_0.size() != n || d0_1.size() != n) return false;
    for (size_t i : mal)
        if (i >= n || d0_0[i] != d0_1[i]) return false;
    // second condition line: a corrupted supported party plus a branch with no
    // honest supported party is a trivial win, so the game forbids it
    bool corrupted_supported = false;
    for (size_t i : mal) corrupted_supported |= d0_0[i] == 1;
    auto no_honest_support = [&](const std::vector<uint8_t>& d0) {
        for (size_t i = 0; i < n; ++i)
            if (!mal.count(i) && d0[i] == 1) return false;
        return true;
    };
    if (corrupted_supported && (no_honest_support(d0_0) || no_honest_support(d0_1))) return false;

    int c = rng.bit();
    const auto& d0c = c ? d0_1 : d0_0;
    DistTrapdoor trap;
    DistKey key = gen_dist(p_local, d0c, rng, &trap);

    auto [y, b] = adv.respond(key, rng);
    DistCodec codec(p_local, n);
    if (y.size() != key.n_parties() * key.local_y_len() || b.size() != codec.total_bits())
        return false;

    std::vector<PartInfoSymbol> v(n);
    bool bottom = false;
    for (size_t i = 0; i < n; ++i) {
        v[i] = part_info_loc(i, trap.parties[i], y);
        bottom |= v[i] == PartInfoSymbol::LocalAbort;
    }

    uint8_t alpha;
    if (!bottom) {
        // alpha := <b, x xor x'> with (x, x') from inverting the challenge y
        auto pair = invert_dist(trap, y);
        if (pair) {
            Bits ex = codec.encode(pair->first), exp = codec.encode(pair->second);
            alpha = static_cast<uint8_t>(parity_dot(b, xor_bits(ex, exp)));
        } else {
            // unsupported parties can hide a non-twin block from v; no twin pair exists
            alpha = static_cast<uint8_t>(rng.bit());
        }
    } else {
        alpha = static_cast<uint8_t>(rng.bit());
    }

    std::vector<uint8_t> shares = random_bits(n, rng);
    std::vector<size_t> supported;
    for (size_t i = 0; i < n; ++i)
        if (d0c[i]) supported.push_back(i);
    if (!supported.empty()) {
        uint8_t acc = 0;
        for (size_t i : supported)
            if (i != supported.back()) acc ^= shares[i];
        shares[supported.back()] = alpha ^ acc;
    }

    std::vector<IndBlindCanSupAdversary::View> view;
    for (size_t i : mal) view.push_back({i, shares[i], v[i]});
    int guess = adv.guess(view, hand_trapdoor ? &trap : nullptr, rng);
    return guess == c;
}

GameBatch run_game_batch(const std::function<bool(Rng&)>& one_trial, uint64_t trials,
                         uint64_t seed, unsigned threads) {
    if (threads == 0) threads = 1;
    std::vector<uint64_t> wins(threads, 0);
    auto worker = [&](unsigned id) {
        uint64_t lo = trials * id / threads, hi = trials * (id + 1) / threads;
        uint64_t w = 0;
        for (uint64_t t = lo; t < hi; ++t) {
            Rng rng(seed, 1000 + t); // per-trial stream
            if (one_trial(rng)) ++w;
        }
        wins[id] = w;
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker, i);
        for (auto& th : pool) th.join();
    }
    GameBatch b;
    b.trials = trials;
    for (uint64_t w : wins) b.wins += w;
    b.win_rate = trials ? static_cast<double>(b.wins) / static_cast<double>(trials) : 0.0;
    return b;
}

// ---- canned adversaries -----------------------------------------------------

namespace {

std::pair<std::vector<uint8_t>, std::vector<uint8_t>> distinct_d0(size_t n, Rng& rng) {
    std::vector<uint8_t> a = random_bits(n, rng), b = random_bits(n, rng);
    if (a == b) b[0] ^= 1;
    return {a, b};
}

int d0_match(const std::vector<uint8_t>& d0, const std::vector<uint8_t>& a,
             const std::vector<uint8_t>& b) {
    if (d0 == a) return 0;
    if (d0 == b) return 1;
    return 0;
}

} // namespace

GameBatch game_batch_by_name(const std::string& game, AdversaryKind kind, const Params& p_local,
                             size_t n, uint64_t trials, uint64_t seed, unsigned threads) {
    bool oracle = kind == AdversaryKind::Oracle;

    std::function<bool(Rng&)> trial;
    if (game == "ind-d0" || game == "ind-blind") {
        // the monolithic family backs IND-D0 / IND-BLIND
        Params p = make_toy_params(p_local.N, p_local.k, n, p_local.alpha_q);
        auto choose = [n](Rng& rng) { return distinct_d0(n, rng); };
        trial = [=](Rng& rng) {
            std::pair<std::vector<uint8_t>, std::vector<uint8_t>> pick;
            IndD0Adversary adv;
            adv.choose = [&](Rng& r) {
                pick = kind == AdversaryKind::Violating
                           ? std::make_pair(std::vector<uint8_t>(n + 1, 0),
                                            std::vector<uint8_t>(n + 1, 1))
                           : choose(r);
                return pick;
            };
            adv.guess = [&](const HghzKey&, const HghzTrapdoor* t, Rng& r) {
                if (t) return d0_match(t->d0, pick.first, pick.second);
                return r.bit();
            };
            if (game == "ind-d0") return game_ind_d0(p, adv, oracle, rng);
            IndBlindAdversary badv;
            badv.choose = adv.choose;
            badv.respond = adv.guess;
            return game_ind_blind(p, badv, oracle, rng);
        };
    } else if (game == "ind-partial") {
        trial = [=](Rng& rng) {
            std::pair<std::vector<uint8_t>, std::vector<uint8_t>> pick;
            IndPartialAdversary adv;
            adv.choose = [&](Rng& r) {
                pick = distinct_d0(n, rng);
                std::set<size_t> mal{0};
                if (kind == AdversaryKind::Violating) {
                    pick.second = pick.first;
                    pick.second[0] ^= 1; // differs on the corrupted party
                } else {
                    pick.second[0] = pick.first[0];
                    if (pick.first == pick.second) pick.second[n - 1] ^= 1;
                }
                (void)r;
                return std::make_tuple(mal, pick.first, pick.second);
            };
            adv.query_y = [&](const DistKey& k, Rng& r) {
                ZqVector y(k.n_parties() * k.local_y_len());
                for (auto& v : y) v = r.uniform_below(k.local_params().q().q);
                return y;
            };
            adv.guess = [&](const std::vector<std::pair<size_t, PartInfoSymbol>>&,
                            const DistTrapdoor* t, Rng& r) {
                if (t) {
                    std::vector<uint8_t> d0(n);
                    for (size_t i = 0; i < n; ++i) d0[i] = t->parties[i].d0[0];
                    return d0_match(d0, pick.first, pick.second);
                }
                return r.bit();
            };
            return game_ind_partial(p_local, n, adv, oracle, rng);
        };
    } else if (game == "ind-blind-sup") {
        Params p = make_toy_params(p_local.N, p_local.k, n, p_local.alpha_q);
        trial = [=](Rng& rng) {
            std::pair<std::vector<uint8_t>, std::vector<uint8_t>> pick;
            IndBlindSupAdversary adv;
            adv.choose = [&](Rng& r) {
                pick = distinct_d0(n, r);
                std::set<size_t> mal{0};
                if (kind == AdversaryKind::Violating) {
                    pick.second = pick.first;
                    pick.second[0] ^= 1;
                } else {
                    pick.second[0] = pick.first[0];
                    if (pick.first == pick.second) pick.second[n - 1] ^= 1;
                }
                return std::make_tuple(mal, pick.first, pick.second);
            };
            adv.respond = [](const HghzKey&, Rng&) {};
            adv.guess = [&](const std::vector<std::pair<size_t, uint8_t>>&, const HghzTrapdoor* t,
                            Rng& r) {
                if (t) return d0_match(t->d0, pick.first, pick.second);
                return r.bit();
            };
            return game_ind_blind_sup(p, adv, oracle, rng);
        };
    } else if (game == "ind-blind-can-sup") {
        trial = [=](Rng& rng) {
            std::pair<std::vector<uint8_t>, std::vector<uint8_t>> pick;
            IndBlindCanSupAdversary adv;
            adv.choose = [&](Rng& r) {
                std::set<size_t> mal{0};
                if (kind == AdversaryKind::Violating) {
                    pick.first = random_bits(n, r);
                    pick.second = pick.first;
                    pick.second[0] ^= 1;
                } else {
                    // corrupted party 1 unsupported in both branches, honest support differs
                    pick.first = random_bits(n, r);
                    pick.first[0] = 0;
                    pick.second = pick.first;
                    pick.second[n - 1] ^= 1;
                }
                return std::make_tuple(mal, pick.first, pick.second);
            };
            adv.respond = [&](const DistKey& k, Rng& r) {
                // honest-shaped response: run the circuit on the challenge key
                ZqVector y(k.n_parties() * k.local_y_len());
                for (auto& v : y) v = r.uniform_below(k.local_params().q().q);
                DistCodec codec(k.local_params(), k.n_parties());
                Bits b(codec.total_bits());
                for (auto& bit : b) bit = static_cast<uint8_t>(r.bit());
                return std::make_pair(y, b);
            };
            adv.guess = [&](const std::vector<IndBlindCanSupAdversary::View>&,
                            const DistTrapdoor* t, Rng& r) {
                if (t) {
                    std::vector<uint8_t> d0(n);
                    for (size_t i = 0; i < n; ++i) d0[i] = t->parties[i].d0[0];
                    return d0_match(d0, pick.first, pick.second);
                }
                return r.bit();
            };
            return game_ind_blind_can_sup(p_local, n, adv, oracle, rng);
        };
    } else {
        throw std::invalid_argument("unknown game: " + game);
    }
    return run_game_batch(trial, trials, seed, threads);
}

} // namespace hghz

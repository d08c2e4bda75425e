#pragma once

#include <functional>
#include <set>

#include "hghz/dist_family.hpp"
#include "hghz/protocol.hpp"

namespace hghz {

// Adversaries are in-process callables following each game figure. The
// trapdoor pointer is non-null only for the out-of-band oracle harness; the
// games themselves never hand it out.

struct IndD0Adversary {
    std::function<std::pair<std::vector<uint8_t>, std::vector<uint8_t>>(Rng&)> choose;
    std::function<int(const HghzKey&, const HghzTrapdoor*, Rng&)> guess;
};

bool game_ind_d0(const Params& p, const IndD0Adversary& adv, bool hand_trapdoor, Rng& rng);

struct IndPartialAdversary {
    std::function<std::tuple<std::set<size_t>, std::vector<uint8_t>, std::vector<uint8_t>>(Rng&)>
        choose;
    std::function<ZqVector(const DistKey&, Rng&)> query_y;
    std::function<int(const std::vector<std::pair<size_t, PartInfoSymbol>>&, const DistTrapdoor*,
                      Rng&)>
        guess;
};

bool game_ind_partial(const Params& p_local, size_t n, const IndPartialAdversary& adv,
                      bool hand_trapdoor, Rng& rng);

struct IndBlindAdversary {
    std::function<std::pair<std::vector<uint8_t>, std::vector<uint8_t>>(Rng&)> choose;
    // returns (y, b, guess); y and b are discarded by the game
    std::function<int(const HghzKey&, const HghzTrapdoor*, Rng&)> respond;
};

bool game_ind_blind(const Params& p, const IndBlindAdversary& adv, bool hand_trapdoor, Rng& rng);

struct IndBlindSupAdversary {
    std::function<std::tuple<std::set<size_t>, std::vector<uint8_t>, std::vector<uint8_t>>(Rng&)>
        choose;
    std::function<void(const HghzKey&, Rng&)> respond;
    std::function<int(const std::vector<std::pair<size_t, uint8_t>>&, const HghzTrapdoor*, Rng&)>
        guess;
};

bool game_ind_blind_sup(const Params& p, const IndBlindSupAdversary& adv, bool hand_trapdoor,
                        Rng& rng);

struct IndBlindCanSupAdversary {
    std::function<std::tuple<std::set<size_t>, std::vector<uint8_t>, std::vector<uint8_t>>(Rng&)>
        choose;
    std::function<std::pair<ZqVector, Bits>(const DistKey&, Rng&)> respond;
    struct View {
        size_t party;
        uint8_t alpha_share;
        PartInfoSymbol v;
    };
    std::function<int(const std::vector<View>&, const DistTrapdoor*, Rng&)> guess;
};

bool game_ind_blind_can_sup(const Params& p_local, size_t n, const IndBlindCanSupAdversary& adv,
                            bool hand_trapdoor, Rng& rng);

// batch runner with per-trial RNG streams
struct GameBatch {
    uint64_t trials = 0;
    uint64_t wins = 0;
    double win_rate = 0;
};

GameBatch run_game_batch(const std::function<bool(Rng&)>& one_trial, uint64_t trials,
                         uint64_t seed, unsigned threads = 1);

// prebuilt adversaries for the CLI and the harness-sanity tests
enum class AdversaryKind { Random, Oracle, Violating };

GameBatch game_batch_by_name(const std::string& game, AdversaryKind kind, const Params& p_local,
                             size_t n, uint64_t trials, uint64_t seed, unsigned threads);

} // namespace hghz

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wcg/rational.hpp"

namespace wcg {

// Default cap on exhaustively enumerated state spaces.
constexpr std::size_t kDefaultStateCap = 100000;

struct Player {
    int id = 0;
    Rational weight;  // > 0

    friend bool operator==(const Player&, const Player&) = default;
};

struct Resource {
    int id = 0;
    Rational coefficient;  // a_e > 0
    int degree = 1;        // k_e >= 1

    friend bool operator==(const Resource&, const Resource&) = default;
};

// A strategy is a sorted set of distinct resource ids.
using Strategy = std::vector<int>;

/// One strategy choice per player, indexing into that player's strategy list.
struct State {
    std::vector<int> choice;

    friend bool operator==(const State&, const State&) = default;
    friend auto operator<=>(const State&, const State&) = default;
};

/// A weighted congestion game with polynomial latencies. Immutable after
/// construction; construction canonicalizes (strategies sorted, deduplicated)
/// and validates every structural invariant.
class GameInstance {
public:
    GameInstance(std::vector<Player> players, std::vector<Resource> resources,
                 std::vector<std::vector<Strategy>> strategies);

    std::size_t numPlayers() const { return players_.size(); }
    std::size_t numResources() const { return resources_.size(); }
    const std::vector<Player>& players() const { return players_; }
    const std::vector<Resource>& resources() const { return resources_; }
    const Player& player(int id) const;
    const Resource& resource(int id) const;

    const std::vector<Strategy>& strategies(int playerId) const;
    const Strategy& strategy(int playerId, int strategyIndex) const;

    /// Max resource degree d.
    int maxDegree() const { return maxDegree_; }

    /// Number of states, saturated at 2^64-1 on overflow.
    unsigned long long stateCountSaturated() const;

    bool isValidState(const State& s) const;
    void requireValidState(const State& s) const;

    friend bool operator==(const GameInstance&, const GameInstance&) = default;

private:
    std::vector<Player> players_;
    std::vector<Resource> resources_;
    std::vector<std::vector<Strategy>> strategies_;
    int maxDegree_ = 1;
};

/// Per-resource user sets and congestion (total user weight) for one state.
struct LoadProfile {
    std::vector<std::vector<int>> users;  // per resource, ascending player ids
    std::vector<Rational> congestion;     // per resource, sum of user weights
};

LoadProfile computeLoads(const GameInstance& game, const State& s);

/// l_e(P) = a_e * (sum of weights in P)^{k_e}; 0 for the empty set.
Rational latency(const GameInstance& game, int resourceId, const std::vector<int>& userSet);

/// Latency value from a precomputed congestion.
Rational latencyAtCongestion(const Resource& resource, const Rational& congestion);

/// c_i(s): sum of latencies on the resources of i's chosen strategy.
Rational playerCost(const GameInstance& game, const State& s, int playerId);
Rational playerCost(const GameInstance& game, const State& s, const LoadProfile& loads, int playerId);

/// Cost player i would incur by unilaterally switching to strategy
/// strategyIndex while everyone else keeps the choices in s.
Rational deviationCost(const GameInstance& game, const State& s, const LoadProfile& loads,
                       int playerId, int strategyIndex);

/// C(s), computed both as the weighted player sum and as the resource sum
/// (the two forms are cross-checked for exact equality on every call).
Rational socialCost(const GameInstance& game, const State& s);

/// Largest tau > 0 such that on every resource of every state, each user's
/// co-users weigh at least tau * k_e times the user's own weight. Empty when
/// some state leaves a player alone on a resource. Enumerates all states.
std::optional<Rational> tauCongestedness(const GameInstance& game,
                                         std::size_t stateCap = kDefaultStateCap);

}  // namespace wcg

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wcg/game.hpp"
#include "wcg/rational.hpp"

namespace wcg {

struct InstanceMetadata {
    std::optional<std::string> name;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> generator;

    friend bool operator==(const InstanceMetadata&, const InstanceMetadata&) = default;
};

struct ParsedInstance {
    GameInstance game;
    InstanceMetadata meta;
};

/// Parses the line-oriented instance document (see docs/FORMAT.md). All
/// numbers are exact rationals; diagnostics carry 1-based line numbers.
ParsedInstance parseInstance(std::string_view text);

/// Canonical serialization: sorted ids, lowest-terms "num/den" rationals,
/// strategies in the instance's canonical order. parse + serialize is a
/// byte-level fixpoint.
std::string serializeInstance(const GameInstance& game, const InstanceMetadata& meta = {});

ParsedInstance loadInstanceFile(const std::string& path);
void saveInstanceFile(const std::string& path, const GameInstance& game,
                      const InstanceMetadata& meta = {});

struct NetworkArc {
    int id = 0;
    int from = 0;
    int to = 0;
    Rational coefficient;
    int degree = 1;
};

struct NetworkPlayerSpec {
    Rational weight;
    int source = 0;
    int target = 0;
};

/// A routing game on a directed graph: strategies are the simple
/// source-to-target paths, arcs are the resources.
struct NetworkGameSpec {
    int nodeCount = 0;
    std::vector<NetworkArc> arcs;
    std::vector<NetworkPlayerSpec> players;
    std::size_t pathCap = 1000;  // max simple paths per player
};

/// Compiles a network game to explicit strategy sets. Paths are enumerated
/// by depth-first search with ascending arc ids; more than pathCap paths for
/// one player raises CapacityError, an unreachable target raises
/// InfeasiblePlayerError.
GameInstance compileNetworkGame(const NetworkGameSpec& spec);

/// Parses the network document (see docs/FORMAT.md).
NetworkGameSpec parseNetworkSpec(std::string_view text);

struct RandomGameParams {
    std::uint64_t seed = 1;
    int nPlayers = 3;
    int nResources = 4;
    int maxDegree = 2;
    int strategyCount = 2;  // distinct strategies drawn per player (best effort)
    int strategySize = 2;   // resources per strategy (capped at nResources)
    long weightRange = 4;   // numerators and denominators drawn from [1, weightRange]
};

/// Seed-deterministic random instance. The max degree is always attained by
/// some resource, weights and coefficients are positive rationals with
/// bounded numerator and denominator.
GameInstance generateRandom(const RandomGameParams& params);

/// A game certified tau-congested: a block of ceil(tau*degree)+1 anchor
/// players pinned to every resource keeps each resource's co-usage above the
/// bound in every state, while the remaining players route freely between
/// single-resource strategies. The construction is re-checked with
/// tauCongestedness before being returned.
GameInstance generateTauCongested(std::uint64_t seed, const Rational& tau, int nPlayers, int degree);

}  // namespace wcg

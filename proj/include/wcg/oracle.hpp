#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "wcg/dynamics.hpp"
#include "wcg/game.hpp"
#include "wcg/potential.hpp"
#include "wcg/rational.hpp"

namespace wcg {

/// Number of states, throwing CapacityError (with the product) beyond cap.
std::size_t checkedStateCount(const GameInstance& game, std::size_t cap = kDefaultStateCap);

/// Visits every state exactly once in lexicographic order of the choice
/// vector (player 0 most significant).
void forEachState(const GameInstance& game, std::size_t cap,
                  const std::function<void(const State&)>& visit);

std::vector<State> enumerateStates(const GameInstance& game, std::size_t cap = kDefaultStateCap);

/// Lexicographic rank of a state, inverse of the enumeration order.
std::size_t stateIndex(const GameInstance& game, const State& s);

struct OptimaResult {
    std::vector<State> states;  // all social-cost minimizers, enumeration order
    Rational cost;
};

OptimaResult exactOptima(const GameInstance& game, std::size_t cap = kDefaultStateCap);

/// E(alpha): all alpha-approximate equilibria, exact deviation checks.
std::vector<State> equilibriumSet(const GameInstance& game, const Rational& alpha,
                                  std::size_t cap = kDefaultStateCap);

/// PoS(alpha) = min over E(alpha) of C(e)/C(o). Empty when E(alpha) is empty
/// (possible for alpha < d), which is "undefined" rather than an error.
std::optional<Rational> exactPoS(const GameInstance& game, const Rational& alpha,
                                 std::size_t cap = kDefaultStateCap);

struct EdgeWitness {
    State from;
    Move move;
    Rational potentialBefore;
    Rational potentialAfter;
};

struct GraphVerification {
    bool pass = true;
    std::size_t statesChecked = 0;
    std::size_t edgesChecked = 0;
    std::optional<EdgeWitness> violation;
};

/// Checks that the profile's potential strictly decreases on every
/// alpha-improvement edge of the full state graph. Returns the first
/// violating edge when it fails.
GraphVerification verifyPotentialOnGraph(const GameInstance& game, const GammaProfile& profile,
                                         const Rational& alpha, std::size_t cap = kDefaultStateCap);

/// Depth-first cycle search on the alpha-improvement graph. Empty result
/// means every alpha-improvement sequence terminates. A returned cycle lists
/// states s_0, ..., s_{r-1} where each s_{j+1 mod r} is one improvement move
/// from s_j.
std::optional<std::vector<State>> findImprovementCycle(const GameInstance& game,
                                                       const Rational& alpha,
                                                       std::size_t cap = kDefaultStateCap);

/// Exhaustive ground truth for a batch of alpha values.
struct OracleReport {
    std::size_t stateCount = 0;
    OptimaResult optima;
    std::map<Rational, std::vector<State>> equilibria;
    std::map<Rational, std::optional<Rational>> priceOfStability;
    std::map<Rational, std::size_t> improvementGraphEdges;
};

OracleReport buildOracleReport(const GameInstance& game, const std::vector<Rational>& alphas,
                               std::size_t cap = kDefaultStateCap);

}  // namespace wcg

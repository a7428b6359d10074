#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "wcg/game.hpp"
#include "wcg/potential.hpp"
#include "wcg/rational.hpp"

namespace wcg {

// Default cap on improvement-move sequences.
constexpr std::size_t kDefaultMaxSteps = 1000000;

/// A unilateral deviation that strictly improves the mover's cost.
struct Move {
    int playerId = -1;
    int fromStrategy = -1;
    int toStrategy = -1;
    Rational oldCost;
    Rational newCost;
    Rational improvementFactor;  // oldCost / newCost, > alpha for an alpha-improvement

    friend bool operator==(const Move&, const Move&) = default;
};

/// All alpha-improvement moves available in s: deviations with
/// alpha * newCost < oldCost, strict, exact arithmetic. Ordered by
/// (playerId, toStrategy).
std::vector<Move> improvingMoves(const GameInstance& game, const State& s, const Rational& alpha);

/// True iff no player has an alpha-improvement move.
bool isEquilibrium(const GameInstance& game, const State& s, const Rational& alpha);

enum class SchedulerPolicy {
    BestResponse,  // lowest-id mover plays its cheapest deviation
    MaxGain,       // the move with the largest improvement factor anywhere
    RoundRobin,    // cyclic scan from the last mover
    Random,        // uniform over all improvement moves, seeded
};

struct Scheduler {
    SchedulerPolicy policy = SchedulerPolicy::BestResponse;
    std::uint64_t seed = 0;

    static Scheduler bestResponse() { return {SchedulerPolicy::BestResponse, 0}; }
    static Scheduler maxGain() { return {SchedulerPolicy::MaxGain, 0}; }
    static Scheduler roundRobin() { return {SchedulerPolicy::RoundRobin, 0}; }
    static Scheduler random(std::uint64_t seed) { return {SchedulerPolicy::Random, seed}; }
};

struct TraceStep {
    Move move;
    std::optional<Rational> potentialAfter;  // set when a profile is attached
    Rational socialCostAfter;
};

struct MoveTrace {
    State initialState;
    std::vector<TraceStep> steps;
    State terminal;
    bool converged = false;
    std::size_t stepsTaken = 0;
    bool cycleDetected = false;  // some state was visited twice
};

/// Applies scheduler-chosen alpha-improvement moves until none exist or
/// maxSteps is hit. With a profile attached whose guaranteed factor is
/// <= alpha, the potential must strictly decrease every step; a violation
/// throws InvariantViolationError. Deterministic given identical inputs.
MoveTrace runDynamics(const GameInstance& game, const State& start, const Rational& alpha,
                      const Scheduler& scheduler, std::size_t maxSteps = kDefaultMaxSteps,
                      const GammaProfile* profile = nullptr);

/// The price-of-stability walk: (d+delta)-improvement moves from a social
/// optimum under the stability profile. The terminal state is a
/// (d+delta)-approximate equilibrium of cost at most (d+1)/(d+delta) times
/// the optimum.
MoveTrace convergeFromOptimum(const GameInstance& game, const Rational& delta,
                              std::size_t stateCap = kDefaultStateCap,
                              std::size_t maxSteps = kDefaultMaxSteps);

}  // namespace wcg

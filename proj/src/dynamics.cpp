#include "wcg/dynamics.hpp"

#include <random>
#include <set>
#include <string>

#include "wcg/errors.hpp"
#include "wcg/oracle.hpp"

namespace wcg {

namespace {

void requireAlpha(const Rational& alpha) {
    if (alpha < Rational(1)) throw PreconditionError("alpha must be >= 1, got " + alpha.str());
}

// Best alpha-improvement move for one player: cheapest deviation, lowest
// strategy index on ties. Empty when the player has none.
std::optional<Move> bestMoveForPlayer(const GameInstance& game, const State& s,
                                      const LoadProfile& loads, const Rational& alpha,
                                      int playerId) {
    const int current = s.choice[static_cast<std::size_t>(playerId)];
    const Rational oldCost = playerCost(game, s, loads, playerId);
    std::optional<Move> best;
    const auto& list = game.strategies(playerId);
    for (int t = 0; t < static_cast<int>(list.size()); ++t) {
        if (t == current) continue;
        const Rational newCost = deviationCost(game, s, loads, playerId, t);
        if (alpha * newCost < oldCost && (!best || newCost < best->newCost))
            best = Move{playerId, current, t, oldCost, newCost, oldCost / newCost};
    }
    return best;
}

}  // namespace

std::vector<Move> improvingMoves(const GameInstance& game, const State& s, const Rational& alpha) {
    requireAlpha(alpha);
    game.requireValidState(s);
    const LoadProfile loads = computeLoads(game, s);
    std::vector<Move> moves;
    for (std::size_t i = 0; i < game.numPlayers(); ++i) {
        const int playerId = static_cast<int>(i);
        const int current = s.choice[i];
        const Rational oldCost = playerCost(game, s, loads, playerId);
        const auto& list = game.strategies(playerId);
        for (int t = 0; t < static_cast<int>(list.size()); ++t) {
            if (t == current) continue;
            const Rational newCost = deviationCost(game, s, loads, playerId, t);
            if (alpha * newCost < oldCost)
                moves.push_back(Move{playerId, current, t, oldCost, newCost, oldCost / newCost});
        }
    }
    return moves;
}

bool isEquilibrium(const GameInstance& game, const State& s, const Rational& alpha) {
    requireAlpha(alpha);
    game.requireValidState(s);
    const LoadProfile loads = computeLoads(game, s);
    for (std::size_t i = 0; i < game.numPlayers(); ++i)
        if (bestMoveForPlayer(game, s, loads, alpha, static_cast<int>(i))) return false;
    return true;
}

namespace {

std::optional<Move> chooseMove(const GameInstance& game, const State& s, const Rational& alpha,
                               const Scheduler& scheduler, std::mt19937_64& rng, int& cursor) {
    const std::size_t n = game.numPlayers();
    switch (scheduler.policy) {
        case SchedulerPolicy::BestResponse: {
            const LoadProfile loads = computeLoads(game, s);
            for (std::size_t i = 0; i < n; ++i)
                if (auto m = bestMoveForPlayer(game, s, loads, alpha, static_cast<int>(i))) return m;
            return std::nullopt;
        }
        case SchedulerPolicy::RoundRobin: {
            const LoadProfile loads = computeLoads(game, s);
            for (std::size_t step = 0; step < n; ++step) {
                const int pid = static_cast<int>((static_cast<std::size_t>(cursor) + step) % n);
                if (auto m = bestMoveForPlayer(game, s, loads, alpha, pid)) {
                    cursor = (pid + 1) % static_cast<int>(n);
                    return m;
                }
            }
            return std::nullopt;
        }
        case SchedulerPolicy::MaxGain: {
            const auto moves = improvingMoves(game, s, alpha);
            if (moves.empty()) return std::nullopt;
            std::size_t best = 0;
            for (std::size_t i = 1; i < moves.size(); ++i)
                if (moves[i].improvementFactor > moves[best].improvementFactor) best = i;
            return moves[best];  // list order already breaks ties by (player, strategy)
        }
        case SchedulerPolicy::Random: {
            const auto moves = improvingMoves(game, s, alpha);
            if (moves.empty()) return std::nullopt;
            return moves[static_cast<std::size_t>(rng() % moves.size())];
        }
    }
    return std::nullopt;
}

}  // namespace

MoveTrace runDynamics(const GameInstance& game, const State& start, const Rational& alpha,
                      const Scheduler& scheduler, std::size_t maxSteps, const GammaProfile* profile) {
    requireAlpha(alpha);
    game.requireValidState(start);
    if (maxSteps == 0) throw PreconditionError("maxSteps must be positive");

    const bool certified = profile && profile->guaranteedFactor(game) <= alpha;
    std::optional<Rational> potential;
    if (profile) potential = potentialValue(game, *profile, start);

    MoveTrace trace;
    trace.initialState = start;
    State s = start;

    std::mt19937_64 rng(scheduler.seed);
    int cursor = 0;
    std::set<State> visited;
    visited.insert(s);

    while (trace.stepsTaken < maxSteps) {
        const auto move = chooseMove(game, s, alpha, scheduler, rng, cursor);
        if (!move) {
            trace.converged = true;
            break;
        }
        s.choice[static_cast<std::size_t>(move->playerId)] = move->toStrategy;
        ++trace.stepsTaken;

        TraceStep step;
        step.move = *move;
        step.socialCostAfter = socialCost(game, s);
        if (profile) {
            const Rational after = potentialValue(game, *profile, s);
            if (certified && !(after < *potential))
                throw InvariantViolationError(
                    "potential did not decrease on a certified move: " + potential->str() + " -> " +
                    after.str() + " (player " + std::to_string(move->playerId) + ")");
            potential = after;
            step.potentialAfter = after;
        }
        trace.steps.push_back(std::move(step));

        if (!visited.insert(s).second) {
            trace.cycleDetected = true;
            // A deterministic scheduler revisiting a state is looping forever.
            if (scheduler.policy != SchedulerPolicy::Random) break;
        }
    }
    trace.terminal = s;
    return trace;
}

MoveTrace convergeFromOptimum(const GameInstance& game, const Rational& delta,
                              std::size_t stateCap, std::size_t maxSteps) {
    if (delta.isNegative() || delta > Rational(1))
        throw PreconditionError("delta = " + delta.str() + " outside [0, 1]");
    const OptimaResult optima = exactOptima(game, stateCap);
    const Rational alpha = Rational(game.maxDegree()) + delta;
    const GammaProfile profile = GammaProfile::forStability(game, delta);
    return runDynamics(game, optima.states.front(), alpha, Scheduler::bestResponse(), maxSteps,
                       &profile);
}

}  // namespace wcg

#include "wcg/oracle.hpp"

#include <algorithm>
#include <string>

#include "wcg/errors.hpp"

namespace wcg {

std::size_t checkedStateCount(const GameInstance& game, std::size_t cap) {
    const unsigned long long product = game.stateCountSaturated();
    if (product > cap)
        throw CapacityError("state space has " + std::to_string(product) + " states, cap is " +
                            std::to_string(cap));
    return static_cast<std::size_t>(product);
}

void forEachState(const GameInstance& game, std::size_t cap,
                  const std::function<void(const State&)>& visit) {
    checkedStateCount(game, cap);
    const std::size_t n = game.numPlayers();
    State s;
    s.choice.assign(n, 0);
    while (true) {
        visit(s);
        // Odometer increment, last player fastest: lexicographic order.
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++s.choice[i] < static_cast<int>(game.strategies(static_cast<int>(i)).size())) break;
            s.choice[i] = 0;
            if (i == 0) return;
        }
    }
}

std::vector<State> enumerateStates(const GameInstance& game, std::size_t cap) {
    std::vector<State> states;
    states.reserve(checkedStateCount(game, cap));
    forEachState(game, cap, [&](const State& s) { states.push_back(s); });
    return states;
}

std::size_t stateIndex(const GameInstance& game, const State& s) {
    game.requireValidState(s);
    std::size_t index = 0;
    for (std::size_t i = 0; i < game.numPlayers(); ++i) {
        index = index * game.strategies(static_cast<int>(i)).size() +
                static_cast<std::size_t>(s.choice[i]);
    }
    return index;
}

OptimaResult exactOptima(const GameInstance& game, std::size_t cap) {
    OptimaResult result;
    bool first = true;
    forEachState(game, cap, [&](const State& s) {
        const Rational cost = socialCost(game, s);
        if (first || cost < result.cost) {
            result.cost = cost;
            result.states.clear();
            first = false;
        }
        if (cost == result.cost) result.states.push_back(s);
    });
    return result;
}

std::vector<State> equilibriumSet(const GameInstance& game, const Rational& alpha, std::size_t cap) {
    std::vector<State> equilibria;
    forEachState(game, cap, [&](const State& s) {
        if (isEquilibrium(game, s, alpha)) equilibria.push_back(s);
    });
    return equilibria;
}

std::optional<Rational> exactPoS(const GameInstance& game, const Rational& alpha, std::size_t cap) {
    const OptimaResult optima = exactOptima(game, cap);
    std::optional<Rational> best;
    forEachState(game, cap, [&](const State& s) {
        if (!isEquilibrium(game, s, alpha)) return;
        const Rational ratio = socialCost(game, s) / optima.cost;
        if (!best || ratio < *best) best = ratio;
    });
    return best;
}

GraphVerification verifyPotentialOnGraph(const GameInstance& game, const GammaProfile& profile,
                                         const Rational& alpha, std::size_t cap) {
    const std::size_t total = checkedStateCount(game, cap);

    // One potential evaluation per state, indexed by lexicographic rank.
    std::vector<Rational> potentials;
    potentials.reserve(total);
    forEachState(game, cap, [&](const State& s) {
        potentials.push_back(potentialValue(game, profile, s));
    });

    GraphVerification report;
    forEachState(game, cap, [&](const State& s) {
        if (!report.pass) return;
        ++report.statesChecked;
        const Rational& before = potentials[stateIndex(game, s)];
        for (const Move& move : improvingMoves(game, s, alpha)) {
            State next = s;
            next.choice[static_cast<std::size_t>(move.playerId)] = move.toStrategy;
            const Rational& after = potentials[stateIndex(game, next)];
            ++report.edgesChecked;
            if (!(after < before)) {
                report.pass = false;
                report.violation = EdgeWitness{s, move, before, after};
                return;
            }
        }
    });
    return report;
}

std::optional<std::vector<State>> findImprovementCycle(const GameInstance& game,
                                                       const Rational& alpha, std::size_t cap) {
    const std::size_t total = checkedStateCount(game, cap);
    const std::vector<State> states = enumerateStates(game, cap);

    enum : unsigned char { White, Gray, Black };
    std::vector<unsigned char> color(total, White);

    struct Frame {
        std::size_t node;
        std::vector<std::size_t> next;  // successor indices, reverse order
    };

    auto successors = [&](std::size_t u) {
        std::vector<std::size_t> out;
        for (const Move& move : improvingMoves(game, states[u], alpha)) {
            State next = states[u];
            next.choice[static_cast<std::size_t>(move.playerId)] = move.toStrategy;
            out.push_back(stateIndex(game, next));
        }
        std::reverse(out.begin(), out.end());
        return out;
    };

    for (std::size_t root = 0; root < total; ++root) {
        if (color[root] != White) continue;
        std::vector<Frame> stack;
        stack.push_back({root, successors(root)});
        color[root] = Gray;
        while (!stack.empty()) {
            Frame& frame = stack.back();
            if (frame.next.empty()) {
                color[frame.node] = Black;
                stack.pop_back();
                continue;
            }
            const std::size_t v = frame.next.back();
            frame.next.pop_back();
            if (color[v] == Gray) {
                // Gray node on the stack: unwind the cycle v -> ... -> v.
                std::vector<State> cycle;
                std::size_t at = stack.size();
                while (at > 0 && stack[at - 1].node != v) --at;
                for (std::size_t i = at - 1; i < stack.size(); ++i)
                    cycle.push_back(states[stack[i].node]);
                return cycle;
            }
            if (color[v] == White) {
                color[v] = Gray;
                stack.push_back({v, successors(v)});
            }
        }
    }
    return std::nullopt;
}

OracleReport buildOracleReport(const GameInstance& game, const std::vector<Rational>& alphas,
                               std::size_t cap) {
    OracleReport report;
    report.stateCount = checkedStateCount(game, cap);
    report.optima = exactOptima(game, cap);
    for (const Rational& alpha : alphas) {
        report.equilibria[alpha] = equilibriumSet(game, alpha, cap);
        std::optional<Rational> pos;
        for (const State& e : report.equilibria[alpha]) {
            const Rational ratio = socialCost(game, e) / report.optima.cost;
            if (!pos || ratio < *pos) pos = ratio;
        }
        report.priceOfStability[alpha] = pos;
        std::size_t edges = 0;
        forEachState(game, cap, [&](const State& s) { edges += improvingMoves(game, s, alpha).size(); });
        report.improvementGraphEdges[alpha] = edges;
    }
    return report;
}

}  // namespace wcg

#include "wcg/game.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "wcg/errors.hpp"
#include "wcg/oracle.hpp"

namespace wcg {

GameInstance::GameInstance(std::vector<Player> players, std::vector<Resource> resources,
                           std::vector<std::vector<Strategy>> strategies)
    : players_(std::move(players)), resources_(std::move(resources)), strategies_(std::move(strategies)) {
    if (players_.empty()) throw PreconditionError("a game needs at least one player");
    if (resources_.empty()) throw PreconditionError("a game needs at least one resource");

    for (std::size_t i = 0; i < players_.size(); ++i) {
        if (players_[i].id != static_cast<int>(i))
            throw InvalidReferenceError("player ids must be dense and ordered 0..n-1, got id " +
                                        std::to_string(players_[i].id) + " at position " + std::to_string(i));
        if (!players_[i].weight.isPositive())
            throw DomainError("player " + std::to_string(i) + " has non-positive weight " +
                              players_[i].weight.str());
    }
    maxDegree_ = 1;
    for (std::size_t e = 0; e < resources_.size(); ++e) {
        if (resources_[e].id != static_cast<int>(e))
            throw InvalidReferenceError("resource ids must be dense and ordered 0..m-1, got id " +
                                        std::to_string(resources_[e].id) + " at position " + std::to_string(e));
        if (!resources_[e].coefficient.isPositive())
            throw DomainError("resource " + std::to_string(e) + " has non-positive coefficient " +
                              resources_[e].coefficient.str());
        if (resources_[e].degree < 1)
            throw DomainError("resource " + std::to_string(e) + " has degree " +
                              std::to_string(resources_[e].degree) + " < 1");
        maxDegree_ = std::max(maxDegree_, resources_[e].degree);
    }

    if (strategies_.size() != players_.size())
        throw InvalidReferenceError("strategy table has " + std::to_string(strategies_.size()) +
                                    " entries for " + std::to_string(players_.size()) + " players");
    for (std::size_t i = 0; i < strategies_.size(); ++i) {
        auto& list = strategies_[i];
        if (list.empty())
            throw PreconditionError("player " + std::to_string(i) + " has no strategies");
        for (auto& strat : list) {
            if (strat.empty())
                throw PreconditionError("player " + std::to_string(i) + " has an empty strategy");
            std::sort(strat.begin(), strat.end());
            strat.erase(std::unique(strat.begin(), strat.end()), strat.end());
            for (int e : strat)
                if (e < 0 || e >= static_cast<int>(resources_.size()))
                    throw InvalidReferenceError("player " + std::to_string(i) +
                                                " strategy references unknown resource " + std::to_string(e));
        }
        // Canonical order and no duplicate strategies.
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
}

const Player& GameInstance::player(int id) const {
    if (id < 0 || id >= static_cast<int>(players_.size()))
        throw InvalidReferenceError("unknown player id " + std::to_string(id));
    return players_[static_cast<std::size_t>(id)];
}

const Resource& GameInstance::resource(int id) const {
    if (id < 0 || id >= static_cast<int>(resources_.size()))
        throw InvalidReferenceError("unknown resource id " + std::to_string(id));
    return resources_[static_cast<std::size_t>(id)];
}

const std::vector<Strategy>& GameInstance::strategies(int playerId) const {
    player(playerId);
    return strategies_[static_cast<std::size_t>(playerId)];
}

const Strategy& GameInstance::strategy(int playerId, int strategyIndex) const {
    const auto& list = strategies(playerId);
    if (strategyIndex < 0 || strategyIndex >= static_cast<int>(list.size()))
        throw InvalidReferenceError("player " + std::to_string(playerId) + " has no strategy index " +
                                    std::to_string(strategyIndex));
    return list[static_cast<std::size_t>(strategyIndex)];
}

unsigned long long GameInstance::stateCountSaturated() const {
    constexpr unsigned long long kMax = std::numeric_limits<unsigned long long>::max();
    unsigned long long product = 1;
    for (const auto& list : strategies_) {
        const unsigned long long n = list.size();
        if (product > kMax / n) return kMax;
        product *= n;
    }
    return product;
}

bool GameInstance::isValidState(const State& s) const {
    if (s.choice.size() != players_.size()) return false;
    for (std::size_t i = 0; i < s.choice.size(); ++i)
        if (s.choice[i] < 0 || s.choice[i] >= static_cast<int>(strategies_[i].size())) return false;
    return true;
}

void GameInstance::requireValidState(const State& s) const {
    if (!isValidState(s)) throw PreconditionError("state does not match the instance");
}

LoadProfile computeLoads(const GameInstance& game, const State& s) {
    game.requireValidState(s);
    LoadProfile loads;
    loads.users.resize(game.numResources());
    loads.congestion.assign(game.numResources(), Rational(0));
    for (std::size_t i = 0; i < game.numPlayers(); ++i) {
        const Strategy& strat = game.strategy(static_cast<int>(i), s.choice[i]);
        for (int e : strat) {
            loads.users[static_cast<std::size_t>(e)].push_back(static_cast<int>(i));
            loads.congestion[static_cast<std::size_t>(e)] += game.players()[i].weight;
        }
    }
    return loads;
}

Rational latencyAtCongestion(const Resource& resource, const Rational& congestion) {
    if (congestion.isZero()) return Rational(0);
    return resource.coefficient * congestion.pow(static_cast<unsigned long>(resource.degree));
}

Rational latency(const GameInstance& game, int resourceId, const std::vector<int>& userSet) {
    const Resource& res = game.resource(resourceId);
    Rational total(0);
    for (int pid : userSet) total += game.player(pid).weight;
    return latencyAtCongestion(res, total);
}

Rational playerCost(const GameInstance& game, const State& s, const LoadProfile& loads, int playerId) {
    const Strategy& strat = game.strategy(playerId, s.choice[static_cast<std::size_t>(playerId)]);
    Rational cost(0);
    for (int e : strat)
        cost += latencyAtCongestion(game.resources()[static_cast<std::size_t>(e)],
                                    loads.congestion[static_cast<std::size_t>(e)]);
    return cost;
}

Rational playerCost(const GameInstance& game, const State& s, int playerId) {
    game.player(playerId);
    return playerCost(game, s, computeLoads(game, s), playerId);
}

Rational deviationCost(const GameInstance& game, const State& s, const LoadProfile& loads,
                       int playerId, int strategyIndex) {
    const Strategy& current = game.strategy(playerId, s.choice[static_cast<std::size_t>(playerId)]);
    const Strategy& target = game.strategy(playerId, strategyIndex);
    const Rational& w = game.player(playerId).weight;
    Rational cost(0);
    for (int e : target) {
        Rational congestion = loads.congestion[static_cast<std::size_t>(e)];
        if (!std::binary_search(current.begin(), current.end(), e)) congestion += w;
        cost += latencyAtCongestion(game.resources()[static_cast<std::size_t>(e)], congestion);
    }
    return cost;
}

Rational socialCost(const GameInstance& game, const State& s) {
    const LoadProfile loads = computeLoads(game, s);

    Rational playerSum(0);
    for (std::size_t i = 0; i < game.numPlayers(); ++i)
        playerSum += game.players()[i].weight * playerCost(game, s, loads, static_cast<int>(i));

    Rational resourceSum(0);
    for (std::size_t e = 0; e < game.numResources(); ++e) {
        const Rational& congestion = loads.congestion[e];
        if (congestion.isZero()) continue;
        resourceSum += game.resources()[e].coefficient *
                       congestion.pow(static_cast<unsigned long>(game.resources()[e].degree) + 1);
    }

    if (playerSum != resourceSum)
        throw InvariantViolationError("social cost forms disagree: player sum " + playerSum.str() +
                                      " vs resource sum " + resourceSum.str());
    return playerSum;
}

std::optional<Rational> tauCongestedness(const GameInstance& game, std::size_t stateCap) {
    std::optional<Rational> best;
    bool soloUser = false;
    forEachState(game, stateCap, [&](const State& s) {
        if (soloUser) return;
        const LoadProfile loads = computeLoads(game, s);
        for (std::size_t e = 0; e < game.numResources(); ++e) {
            const auto& users = loads.users[e];
            if (users.empty()) continue;
            if (users.size() == 1) {
                soloUser = true;
                return;
            }
            const int k = game.resources()[e].degree;
            for (int pid : users) {
                const Rational& w = game.players()[static_cast<std::size_t>(pid)].weight;
                const Rational others = loads.congestion[e] - w;
                const Rational bound = others / (Rational(k) * w);
                if (!best || bound < *best) best = bound;
            }
        }
    });
    if (soloUser) return std::nullopt;
    return best;
}

}  // namespace wcg

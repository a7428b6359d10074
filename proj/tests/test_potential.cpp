#include <doctest.h>

#include <cmath>
#include <random>

#include "wcg/errors.hpp"
#include "wcg/game.hpp"
#include "wcg/instance_io.hpp"
#include "wcg/oracle.hpp"
#include "wcg/potential.hpp"

using namespace wcg;

namespace {

GameInstance makeGame(std::vector<Rational> weights,
                      std::vector<std::pair<Rational, int>> resourceSpecs,
                      std::vector<std::vector<Strategy>> strategyLists) {
    std::vector<Player> players;
    for (std::size_t i = 0; i < weights.size(); ++i)
        players.push_back(Player{static_cast<int>(i), weights[i]});
    std::vector<Resource> resources;
    for (std::size_t e = 0; e < resourceSpecs.size(); ++e)
        resources.push_back(Resource{static_cast<int>(e), resourceSpecs[e].first, resourceSpecs[e].second});
    return GameInstance(std::move(players), std::move(resources), std::move(strategyLists));
}

// Independent oracle: the classic unweighted potential
//   sum_e sum_{j=1..n_e} l_e({1..j})
// where n_e is the number of users of e. Valid only when all weights are 1.
Rational rosenthalPotential(const GameInstance& game, const State& s) {
    const LoadProfile loads = computeLoads(game, s);
    Rational total(0);
    for (std::size_t e = 0; e < game.numResources(); ++e) {
        const auto& res = game.resources()[e];
        for (std::size_t j = 1; j <= loads.users[e].size(); ++j)
            total += res.coefficient * Rational(static_cast<long>(j)).pow(
                                           static_cast<unsigned long>(res.degree));
    }
    return total;
}

RandomGameParams smallParams(std::uint64_t seed, int maxDegree = 3) {
    RandomGameParams params;
    params.seed = seed;
    params.nPlayers = 3;
    params.nResources = 4;
    params.maxDegree = maxDegree;
    params.strategyCount = 3;
    params.strategySize = 2;
    params.weightRange = 4;
    return params;
}

Rational drawGamma(std::mt19937_64& rng, int degree) {
    // Uniform-ish rational in [1, degree+1].
    const long den = 1 + static_cast<long>(rng() % 6);
    const long num = static_cast<long>(rng() % static_cast<std::uint64_t>(degree * den + 1));
    return Rational(1) + Rational(num, den);
}

}  // namespace

TEST_SUITE("potential") {

TEST_CASE("resource potential: singleton collapses to w^(k+1)") {
    const auto game = makeGame({Rational(3, 2)}, {{Rational(1), 1}, {Rational(1), 2}, {Rational(1), 3}},
                               {{{0, 1, 2}}});
    std::mt19937_64 rng(11);
    for (int e = 0; e < 3; ++e) {
        const int k = game.resources()[static_cast<std::size_t>(e)].degree;
        for (int trial = 0; trial < 20; ++trial) {
            const Rational gamma = drawGamma(rng, k);
            CHECK(resourcePotential(game, e, gamma, {0}) ==
                  Rational(3, 2).pow(static_cast<unsigned long>(k) + 1));
        }
    }
}

TEST_CASE("resource potential: frozen hand values") {
    // k=1, gamma=1, weights {1,2}: (1/2)*9 + (1/2)*(1+4) = 7.
    const auto game = makeGame({Rational(1), Rational(2)}, {{Rational(1), 1}}, {{{0}}, {{0}}});
    CHECK(resourcePotential(game, 0, Rational(1), {0, 1}) == Rational(7));
    CHECK(resourcePotential(game, 0, Rational(1), {}) == Rational(0));
    CHECK_THROWS_AS(resourcePotential(game, 0, Rational(1, 2), {0}), DomainError);
    CHECK_THROWS_AS(resourcePotential(game, 0, Rational(3), {0}), DomainError);
}

TEST_CASE("all-ones potential matches the Rosenthal sum on unweighted games") {
    // Hand case first: a=1, k=1, three unit users: 1 + 2 + 3 = 6.
    const auto three = makeGame({Rational(1), Rational(1), Rational(1)}, {{Rational(1), 1}},
                                {{{0}}, {{0}}, {{0}}});
    CHECK(resourcePotential(three, 0, Rational(1), {0, 1, 2}) == Rational(6));

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RandomGameParams params = smallParams(seed, 1);
        params.weightRange = 1;  // unit weights
        const GameInstance game = generateRandom(params);
        const GammaProfile profile = GammaProfile::allOnes(game);
        forEachState(game, kDefaultStateCap, [&](const State& s) {
            CHECK(potentialValue(game, profile, s) == rosenthalPotential(game, s));
        });
    }
}

TEST_CASE("social profile equals the social cost on every state") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const GameInstance game = generateRandom(smallParams(seed));
        const GammaProfile profile = GammaProfile::social(game);
        forEachState(game, kDefaultStateCap, [&](const State& s) {
            CHECK(potentialValue(game, profile, s) == socialCost(game, s));
        });
    }
}

TEST_CASE("potential value: frozen hand values") {
    const auto single = makeGame({Rational(2)}, {{Rational(1), 2}}, {{{0}}});
    CHECK(potentialValue(single, GammaProfile::allOnes(single), State{{0}}) == Rational(8));

    const auto shared = makeGame({Rational(1), Rational(2)}, {{Rational(1), 1}}, {{{0}}, {{0}}});
    CHECK(potentialValue(shared, GammaProfile::allOnes(shared), State{{0, 0}}) == Rational(7));

    // Mismatched profile.
    const auto other = makeGame({Rational(1)}, {{Rational(1), 1}, {Rational(1), 1}}, {{{0}, {1}}});
    CHECK_THROWS_AS(potentialValue(other, GammaProfile::allOnes(shared), State{{0}}),
                    InvalidReferenceError);
}

TEST_CASE("telescoping: marginals over any order sum to the potential") {
    std::mt19937_64 rng(23);
    const auto game = makeGame(
        {Rational(1, 2), Rational(2), Rational(3, 4), Rational(5), Rational(1)},
        {{Rational(2, 3), 1}, {Rational(1), 2}, {Rational(3), 3}},
        {{{0}}, {{1}}, {{2}}, {{0, 1, 2}}, {{0}}});
    for (int e = 0; e < 3; ++e) {
        const int k = game.resources()[static_cast<std::size_t>(e)].degree;
        for (int trial = 0; trial < 30; ++trial) {
            const Rational gamma = drawGamma(rng, k);
            std::vector<int> order{0, 1, 2, 3, 4};
            for (std::size_t j = order.size(); j > 1; --j)
                std::swap(order[j - 1], order[rng() % j]);
            Rational sum(0);
            std::vector<int> prefix;
            for (int pid : order) {
                const Rational before = resourcePotential(game, e, gamma, prefix);
                prefix.push_back(pid);
                sum += resourcePotential(game, e, gamma, prefix) - before;
            }
            CHECK(sum == resourcePotential(game, e, gamma, prefix));
        }
    }
}

TEST_CASE("local ratio: linear resources give exactly 1") {
    const auto game = makeGame({Rational(1), Rational(5, 3), Rational(7, 2)}, {{Rational(4, 5), 1}},
                               {{{0}}, {{0}}, {{0}}});
    CHECK(localRatio(game, 0, {0, 1, 2}, 0, Rational(1)) == Rational(1));
    CHECK(localRatio(game, 0, {0, 1}, 1, Rational(1)) == Rational(1));
    CHECK(localRatio(game, 0, {2}, 2, Rational(1)) == Rational(1));
}

TEST_CASE("local ratio: frozen quadratic values") {
    // k=2, gamma=1, both weights 1 (mu = 1): ratio 4/3, the worst case for
    // degree 2. Alone (mu = 0): ratio 1.
    const auto game = makeGame({Rational(1), Rational(1)}, {{Rational(3), 2}}, {{{0}}, {{0}}});
    CHECK(localRatio(game, 0, {0, 1}, 0, Rational(1)) == Rational(4, 3));
    CHECK(localRatio(game, 0, {0}, 0, Rational(1)) == Rational(1));
    CHECK_THROWS_AS(localRatio(game, 0, {1}, 0, Rational(1)), PreconditionError);
}

TEST_CASE("local ratio cross-checks its two routes on random input") {
    // localRatio verifies raw form == reduced form internally on every call;
    // drive it across random weights, degrees, gammas, and subsets.
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rational> weights;
        const int n = 2 + static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i)
            weights.emplace_back(1 + static_cast<long>(rng() % 9), 1 + static_cast<long>(rng() % 5));
        const int degree = 1 + static_cast<int>(rng() % 4);
        std::vector<std::vector<Strategy>> strategyLists(static_cast<std::size_t>(n),
                                                         std::vector<Strategy>{{0}});
        const auto game = makeGame(weights, {{Rational(1 + static_cast<long>(rng() % 4)), degree}},
                                   strategyLists);
        std::vector<int> subset;
        for (int i = 0; i < n; ++i)
            if (rng() % 2) subset.push_back(i);
        if (subset.empty()) subset.push_back(static_cast<int>(rng() % n));
        const int mover = subset[rng() % subset.size()];
        const Rational gamma = drawGamma(rng, degree);
        const Rational ratio = localRatio(game, 0, subset, mover, gamma);
        CHECK(ratio.isPositive());
    }
}

TEST_CASE("reduced ratio: frozen values and domain checks") {
    CHECK(reducedRatio(Rational(0), 5, Rational(2)) == Rational(1));
    CHECK(reducedRatio(Rational(7, 3), 1, Rational(1)) == Rational(1));
    CHECK(reducedRatio(Rational(1), 2, Rational(1)) == Rational(4, 3));
    CHECK_THROWS_AS(reducedRatio(Rational(-1), 2, Rational(1)), DomainError);
    CHECK_THROWS_AS(reducedRatio(Rational(1), 0, Rational(1)), PreconditionError);
    CHECK_THROWS_AS(reducedRatio(Rational(1), 2, Rational(0)), PreconditionError);
}

TEST_CASE("reduced ratio stays inside [1/beta, max(1, h/beta)]") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 10000; ++trial) {
        const int h = 1 + static_cast<int>(rng() % 6);
        // x spans tiny through large magnitudes.
        const Rational x(static_cast<long>(rng() % 10000), 1 + static_cast<long>(rng() % 100));
        const long den = 1 + static_cast<long>(rng() % 8);
        const Rational beta =
            Rational(1) + Rational(static_cast<long>(rng() % static_cast<std::uint64_t>(h * den + 1)), den);
        const Rational value = reducedRatio(x, h, beta);
        CHECK(value >= Rational(1) / beta);
        CHECK(value <= max(Rational(1), Rational(h) / beta));
    }
}

TEST_CASE("gamma profiles validate their range") {
    const auto game = makeGame({Rational(1)}, {{Rational(1), 2}}, {{{0}}});
    CHECK_THROWS_AS(GammaProfile(game, {Rational(1, 2)}), DomainError);
    CHECK_THROWS_AS(GammaProfile(game, {Rational(4)}), DomainError);
    CHECK_THROWS_AS(GammaProfile(game, {Rational(1), Rational(1)}), InvalidReferenceError);
    CHECK(GammaProfile::social(game).maxGamma() == Rational(3));
    CHECK(GammaProfile::allOnes(game).guaranteedFactor(game) == Rational(2));
    CHECK(GammaProfile::social(game).guaranteedFactor(game) == Rational(3));
    CHECK_THROWS_AS(GammaProfile::forStability(game, Rational(-1, 2)), PreconditionError);
    CHECK_THROWS_AS(GammaProfile::forStability(game, Rational(3, 2)), PreconditionError);
}

TEST_CASE("stability profile caps gamma at d + delta") {
    const auto game = makeGame({Rational(1), Rational(1)},
                               {{Rational(1), 1}, {Rational(1), 3}},
                               {{{0}, {1}}, {{0, 1}}});
    const GammaProfile profile = GammaProfile::forStability(game, Rational(1, 2));
    CHECK(profile[0] == Rational(2));     // min{1+1, 3+1/2}
    CHECK(profile[1] == Rational(7, 2));  // min{3+1, 3+1/2}
    CHECK(profile.guaranteedFactor(game) == Rational(7, 2));
}

TEST_CASE("certificate: all-linear games imply factor exactly 1") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const GameInstance game = generateRandom(smallParams(seed, 1));
        const RatioCertificate cert = certifyPotential(game, GammaProfile::allOnes(game));
        CHECK(cert.impliedFactor == Rational(1));
        CHECK(cert.minRatio == Rational(1));
        CHECK(cert.maxRatio == Rational(1));
    }
}

TEST_CASE("certificate: degree-2 games stay within 4/3") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const GameInstance game = generateRandom(smallParams(seed, 2));
        const RatioCertificate cert = certifyPotential(game, GammaProfile::allOnes(game));
        CHECK(cert.impliedFactor <= Rational(4, 3));
        CHECK(cert.minRatio >= Rational(1));
    }
}

TEST_CASE("certificate: observed ratios honor the per-resource range") {
    std::mt19937_64 rng(53);
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const GameInstance game = generateRandom(smallParams(seed, 4));
        std::vector<Rational> gammas;
        for (const auto& res : game.resources()) gammas.push_back(drawGamma(rng, res.degree));
        const GammaProfile profile(game, gammas);
        const RatioCertificate cert = certifyPotential(game, profile);
        for (std::size_t e = 0; e < game.numResources(); ++e) {
            REQUIRE(cert.perResource[e].has_value());
            const int k = game.resources()[e].degree;
            CHECK(cert.perResource[e]->minRatio >= Rational(1) / profile[e]);
            CHECK(cert.perResource[e]->maxRatio <= max(Rational(1), Rational(k) / profile[e]));
        }
    }
}

TEST_CASE("certificate soundness: the full graph respects the implied factor") {
    // Wherever the certificate reports factor f, every f-improvement edge of
    // the exhaustive state graph must strictly decrease the potential.
    std::mt19937_64 rng(59);
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const GameInstance game = generateRandom(smallParams(seed, 3));
        std::vector<Rational> gammas;
        for (const auto& res : game.resources()) gammas.push_back(drawGamma(rng, res.degree));
        const GammaProfile profile(game, gammas);
        const RatioCertificate cert = certifyPotential(game, profile);
        const GraphVerification check =
            verifyPotentialOnGraph(game, profile, cert.impliedFactor, kDefaultStateCap);
        CHECK(check.pass);
    }
}

TEST_CASE("certificate: reachable-only restricts to realized user sets") {
    // Both players are pinned to the one resource, so the only reachable user
    // set is the pair; the exhaustive scan also scores the two singletons.
    const auto game = makeGame({Rational(1), Rational(2)}, {{Rational(1), 2}}, {{{0}}, {{0}}});
    const GammaProfile ones = GammaProfile::allOnes(game);
    const RatioCertificate all = certifyPotential(game, ones, -1, false);
    const RatioCertificate reachable = certifyPotential(game, ones, -1, true);
    CHECK(reachable.triplesChecked == 2);
    CHECK(all.triplesChecked == 4);
    CHECK(reachable.minRatio >= all.minRatio);
    CHECK(reachable.maxRatio <= all.maxRatio);
}

TEST_CASE("certificate: subset cap validation") {
    const auto game = makeGame({Rational(1)}, {{Rational(1), 1}}, {{{0}}});
    CHECK_THROWS_AS(certifyPotential(game, GammaProfile::allOnes(game), 0), PreconditionError);
}

TEST_CASE("rho values match the reported table") {
    const RhoResult r1 = rhoBound(1, 1e-9);
    CHECK(r1.rho == doctest::Approx(1.0).epsilon(1e-9));

    const RhoResult r2 = rhoBound(2, 1e-9);
    CHECK(std::abs(r2.rho - 4.0 / 3.0) < 1e-6);
    CHECK(std::abs(r2.argmaxX - 1.0) < 1e-3);

    const RhoResult r3 = rhoBound(3, 1e-9);
    CHECK(std::abs(r3.rho - 1.7848) < 1e-3);

    const RhoResult r4 = rhoBound(4, 1e-9);
    CHECK(std::abs(r4.rho - 2.326) < 1e-3);

    for (int d = 1; d <= 20; ++d) {
        const RhoResult r = rhoBound(d, 1e-9);
        CHECK(r.rho <= d + 1e-6);
        CHECK(r.rho >= 1.0 - 1e-12);
        CHECK(!r.gridFallback);
    }
}

TEST_CASE("tau-restricted rho stays under exp(1/tau)") {
    const RhoResult t1 = rhoBoundTau(3, Rational(1), 1e-9);
    CHECK(t1.rho <= std::exp(1.0) + 1e-6);
    CHECK(t1.rho == doctest::Approx(1.438202).epsilon(1e-3));

    const RhoResult t2 = rhoBoundTau(4, Rational(100), 1e-9);
    CHECK(t2.rho <= std::exp(0.01) + 1e-6);

    const RhoResult t3 = rhoBoundTau(1, Rational(1), 1e-9);
    CHECK(t3.rho == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(rhoBoundTau(2, Rational(0), 1e-9), PreconditionError);
    CHECK_THROWS_AS(rhoBound(0, 1e-9), PreconditionError);
    CHECK_THROWS_AS(rhoBound(3, 0.0), PreconditionError);
}

TEST_CASE("sandwich: stability potential brackets the social cost") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const GameInstance game = generateRandom(smallParams(seed));
        const Rational d(game.maxDegree());
        for (const Rational& delta : {Rational(0), Rational(1, 2), Rational(1)}) {
            const GammaProfile profile = GammaProfile::forStability(game, delta);
            const Rational bound = (d + Rational(1)) / (d + delta);
            forEachState(game, kDefaultStateCap, [&](const State& s) {
                const Rational pot = potentialValue(game, profile, s);
                const Rational cost = socialCost(game, s);
                CHECK(pot <= cost);
                CHECK(cost <= bound * pot);
            });
        }
    }
}

}  // TEST_SUITE

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "wcg/errors.hpp"
#include "wcg/experiment.hpp"
#include "wcg/instance_io.hpp"

using namespace wcg;

namespace {

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

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("alpha specs parse absolute and degree-relative forms") {
    CHECK(AlphaSpec::parse("3/2").resolve(4) == Rational(3, 2));
    CHECK(AlphaSpec::parse("d").resolve(4) == Rational(4));
    CHECK(AlphaSpec::parse("d+1").resolve(4) == Rational(5));
    CHECK(AlphaSpec::parse("d+1/2").resolve(3) == Rational(7, 2));
    CHECK(AlphaSpec::parse("d").str() == "d");
    CHECK(AlphaSpec::parse("d+1/2").str() == "d+1/2");
    CHECK(AlphaSpec::parse("7/4").str() == "7/4");
    CHECK_THROWS_AS(AlphaSpec::parse("d-1"), ParseError);
    CHECK_THROWS_AS(AlphaSpec::parse("x"), ParseError);
}

TEST_CASE("profile selector") {
    const GameInstance game = generateRandom(smallParams(1));
    CHECK(profileByName(game, "all-ones").maxGamma() == Rational(1));
    CHECK(profileByName(game, "social").maxGamma() == Rational(game.maxDegree() + 1));
    CHECK(profileByName(game, "pos:1/2").maxGamma() ==
          Rational(game.maxDegree()) + Rational(1, 2));
    CHECK_THROWS_AS(profileByName(game, "bogus"), ParseError);
}

TEST_CASE("rho command reproduces the table") {
    RhoCommand command;
    command.dMax = 4;
    command.tol = 1e-9;
    const RhoCommandResult result = cmdRho(command);
    CHECK(result.withinBound);
    REQUIRE(result.rows.size() == 4);
    CHECK(std::abs(result.rows[0].rho - 1.0) < 1e-9);
    CHECK(std::abs(result.rows[1].rho - 4.0 / 3.0) < 1e-6);
    CHECK(std::abs(result.rows[2].rho - 1.7848) < 1e-3);
    CHECK(std::abs(result.rows[3].rho - 2.326) < 1e-3);
    CHECK(result.table.rows.size() == 4);
    CHECK(result.table.header.front() == "d");

    // Identical command, identical bytes.
    CHECK(cmdRho(command).table.toString() == result.table.toString());

    RhoCommand congested;
    congested.dMax = 3;
    congested.tau = Rational(1);
    const RhoCommandResult tauResult = cmdRho(congested);
    CHECK(tauResult.withinBound);
    for (const auto& row : tauResult.rows) CHECK(row.rho <= std::exp(1.0) + 1e-6);
}

TEST_CASE("verify command flags monotone graphs and witnesses") {
    const GameInstance game = generateRandom(smallParams(2));
    const VerifyCommandResult good =
        cmdVerify(game, GammaProfile::allOnes(game), Rational(game.maxDegree()));
    CHECK(good.verification.pass);
    CHECK(good.table.rows.size() == 2);

    // Scan for a violation at alpha = 1 on degree-2 games.
    bool foundViolation = false;
    for (std::uint64_t seed = 1; seed <= 60 && !foundViolation; ++seed) {
        const GameInstance candidate = generateRandom(smallParams(seed, 2));
        const VerifyCommandResult report =
            cmdVerify(candidate, GammaProfile::allOnes(candidate), Rational(1));
        if (!report.verification.pass) {
            foundViolation = true;
            CHECK(report.verification.violation.has_value());
        }
    }
    CHECK(foundViolation);
}

TEST_CASE("pos command bounds the walk and the oracle") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const GameInstance game = generateRandom(smallParams(seed));
        const Rational d(game.maxDegree());
        for (const Rational& delta : {Rational(0), Rational(1, 2), Rational(1)}) {
            const PosCommandResult result = cmdPoS(game, delta);
            CHECK(result.withinBound);
            CHECK(result.bound == (d + Rational(1)) / (d + delta));
            CHECK(result.ratio <= result.bound);
            REQUIRE(result.oraclePoS.has_value());
            CHECK(*result.oraclePoS <= result.bound);
            if (delta == Rational(1)) CHECK(result.ratio == Rational(1));
        }
    }
}

TEST_CASE("csv rows keep exact and float columns consistent") {
    const GameInstance game = generateRandom(smallParams(3));
    const PosCommandResult result = cmdPoS(game, Rational(1, 2));
    for (const auto& row : result.table.rows) {
        const Rational exact = Rational::fromString(row[4]);
        const double asFloat = std::strtod(row[5].c_str(), nullptr);
        CHECK(std::abs(exact.toDouble() - asFloat) <= 1e-12 * std::max(1.0, std::abs(asFloat)));
    }
}

TEST_CASE("sweep command is deterministic and certifies convergence at d") {
    SweepCommand command;
    command.base = smallParams(100);
    command.trials = 5;
    command.alphaGrid = {AlphaSpec::parse("d"), AlphaSpec::parse("d+1")};

    const CsvTable table = cmdSweep(command);
    CHECK(table.rows.size() == 10);
    const std::string bytes = table.toString();
    CHECK(cmdSweep(command).toString() == bytes);

    // Columns: ..., alpha(4), equilibrium_exists(5), cycle_found(6), ...
    for (const auto& row : table.rows) {
        CHECK(row[5] == "1");
        CHECK(row[6] == "0");
    }

    command.trials = 0;
    const CsvTable empty = cmdSweep(command);
    CHECK(empty.rows.empty());
    CHECK(empty.toString() ==
          "trial,seed,d,states,alpha,equilibrium_exists,cycle_found,certificate_factor_exact,"
          "certificate_factor_float\n");
}

}  // TEST_SUITE

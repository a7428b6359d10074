#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wcg/instance_io.hpp"
#include "wcg/oracle.hpp"
#include "wcg/potential.hpp"
#include "wcg/rational.hpp"

namespace wcg {

/// Plain CSV with comma-free cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string toString() const;
};

/// Fixed-format float rendering used in every CSV (17 significant digits,
/// round-trip exact and byte-stable for identical inputs).
std::string formatDouble(double value);

/// An alpha (or delta) that may be given relative to the instance degree:
/// "d", "d+1/2", or an absolute rational like "7/4".
struct AlphaSpec {
    bool relativeToDegree = false;
    Rational value;

    static AlphaSpec parse(std::string_view text);
    Rational resolve(int degree) const;
    std::string str() const;
};

/// Gamma profile selector: "all-ones", "social", or "pos:<delta>".
GammaProfile profileByName(const GameInstance& game, std::string_view name);

struct RhoCommand {
    int dMax = 4;
    double tol = 1e-9;
    std::optional<Rational> tau;  // restrict to the tau-congested regime
};

struct RhoCommandResult {
    std::vector<RhoResult> rows;
    CsvTable table;
    bool withinBound = true;  // rho(d) <= d (or <= exp(1/tau) + tol with tau)
};

RhoCommandResult cmdRho(const RhoCommand& command);

struct VerifyCommandResult {
    GraphVerification verification;
    CsvTable table;
};

/// Full improvement-graph monotonicity check for one instance and profile.
VerifyCommandResult cmdVerify(const GameInstance& game, const GammaProfile& profile,
                              const Rational& alpha, std::size_t stateCap = kDefaultStateCap);

struct PosCommandResult {
    Rational optimumCost;
    Rational terminalCost;
    Rational ratio;           // terminal / optimum
    Rational bound;           // (d+1)/(d+delta)
    std::optional<Rational> oraclePoS;
    std::size_t stepsTaken = 0;
    bool withinBound = true;
    CsvTable table;
};

/// Price-of-stability walk plus the oracle's exact PoS at alpha = d + delta.
PosCommandResult cmdPoS(const GameInstance& game, const Rational& delta,
                        std::size_t stateCap = kDefaultStateCap,
                        std::size_t maxSteps = kDefaultMaxSteps);

struct SweepCommand {
    RandomGameParams base;        // per-trial seed is base.seed + trial index
    int trials = 10;
    std::vector<AlphaSpec> alphaGrid;
    std::size_t stateCap = kDefaultStateCap;
};

/// Per trial and alpha: equilibrium existence, improvement-cycle witness
/// flag, and the observed all-ones certificate factor. Deterministic under
/// the seed.
CsvTable cmdSweep(const SweepCommand& command);

}  // namespace wcg

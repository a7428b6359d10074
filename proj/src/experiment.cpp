#include "wcg/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "wcg/dynamics.hpp"
#include "wcg/errors.hpp"

namespace wcg {

std::string CsvTable::toString() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

std::string formatDouble(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

AlphaSpec AlphaSpec::parse(std::string_view text) {
    AlphaSpec spec;
    if (!text.empty() && text.front() == 'd') {
        spec.relativeToDegree = true;
        text.remove_prefix(1);
        if (text.empty()) {
            spec.value = Rational(0);
            return spec;
        }
        if (text.front() != '+') throw ParseError(0, "expected 'd', 'd+<rational>', or a rational");
        text.remove_prefix(1);
    }
    spec.value = Rational::fromString(text);
    return spec;
}

Rational AlphaSpec::resolve(int degree) const {
    return relativeToDegree ? Rational(degree) + value : value;
}

std::string AlphaSpec::str() const {
    if (!relativeToDegree) return value.str();
    if (value.isZero()) return "d";
    return "d+" + value.str();
}

GammaProfile profileByName(const GameInstance& game, std::string_view name) {
    if (name == "all-ones") return GammaProfile::allOnes(game);
    if (name == "social") return GammaProfile::social(game);
    constexpr std::string_view kPosPrefix = "pos:";
    if (name.substr(0, kPosPrefix.size()) == kPosPrefix)
        return GammaProfile::forStability(game, Rational::fromString(name.substr(kPosPrefix.size())));
    throw ParseError(0, "unknown profile '" + std::string(name) +
                            "' (expected all-ones, social, or pos:<delta>)");
}

RhoCommandResult cmdRho(const RhoCommand& command) {
    if (command.dMax < 1) throw PreconditionError("dMax must be >= 1");
    RhoCommandResult result;
    result.table.header = {"d", "rho", "argmax_x", "tolerance"};
    for (int d = 1; d <= command.dMax; ++d) {
        const RhoResult row = command.tau ? rhoBoundTau(d, *command.tau, command.tol)
                                          : rhoBound(d, command.tol);
        const double bound = command.tau ? std::exp(1.0 / command.tau->toDouble())
                                         : static_cast<double>(d);
        if (row.rho > bound + row.tolerance) result.withinBound = false;
        result.table.rows.push_back({std::to_string(d), formatDouble(row.rho),
                                     formatDouble(row.argmaxX), formatDouble(row.tolerance)});
        result.rows.push_back(row);
    }
    return result;
}

namespace {

std::string stateLabel(const State& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.choice.size(); ++i) {
        if (i) out += " ";
        out += std::to_string(s.choice[i]);
    }
    return out + ")";
}

void pushMetric(CsvTable& table, const std::string& instance, int degree, const std::string& alpha,
                const std::string& metric, const Rational& exact, const std::string& witness) {
    table.rows.push_back({instance, std::to_string(degree), alpha, metric, exact.str(),
                          formatDouble(exact.toDouble()), witness});
}

CsvTable metricTable() {
    CsvTable table;
    table.header = {"instance", "d", "alpha_or_delta", "metric", "exact", "float", "witness"};
    return table;
}

}  // namespace

VerifyCommandResult cmdVerify(const GameInstance& game, const GammaProfile& profile,
                              const Rational& alpha, std::size_t stateCap) {
    VerifyCommandResult result;
    result.verification = verifyPotentialOnGraph(game, profile, alpha, stateCap);
    result.table = metricTable();
    const int d = game.maxDegree();
    pushMetric(result.table, "-", d, alpha.str(), "edges_checked",
               Rational(static_cast<long>(result.verification.edgesChecked)), "-");
    pushMetric(result.table, "-", d, alpha.str(), "monotone",
               Rational(result.verification.pass ? 1 : 0),
               result.verification.violation
                   ? stateLabel(result.verification.violation->from) + "->player" +
                         std::to_string(result.verification.violation->move.playerId)
                   : "-");
    return result;
}

PosCommandResult cmdPoS(const GameInstance& game, const Rational& delta, std::size_t stateCap,
                        std::size_t maxSteps) {
    PosCommandResult result;
    const int d = game.maxDegree();
    const Rational alpha = Rational(d) + delta;
    result.bound = Rational(d + 1) / (Rational(d) + delta);

    const OptimaResult optima = exactOptima(game, stateCap);
    result.optimumCost = optima.cost;

    const MoveTrace trace = convergeFromOptimum(game, delta, stateCap, maxSteps);
    if (!trace.converged)
        throw InvariantViolationError("price-of-stability walk did not converge within " +
                                      std::to_string(maxSteps) + " steps");
    result.terminalCost = socialCost(game, trace.terminal);
    result.ratio = result.terminalCost / result.optimumCost;
    result.stepsTaken = trace.stepsTaken;
    result.oraclePoS = exactPoS(game, alpha, stateCap);
    result.withinBound = result.ratio <= result.bound &&
                         (!result.oraclePoS || *result.oraclePoS <= result.bound);

    result.table = metricTable();
    const std::string ds = delta.str();
    pushMetric(result.table, "-", d, ds, "optimum_cost", result.optimumCost, "-");
    pushMetric(result.table, "-", d, ds, "terminal_cost", result.terminalCost,
               stateLabel(trace.terminal));
    pushMetric(result.table, "-", d, ds, "ratio", result.ratio, "-");
    pushMetric(result.table, "-", d, ds, "bound", result.bound, "-");
    if (result.oraclePoS)
        pushMetric(result.table, "-", d, ds, "exact_pos", *result.oraclePoS, "-");
    return result;
}

CsvTable cmdSweep(const SweepCommand& command) {
    if (command.trials < 0) throw PreconditionError("trials must be >= 0");
    CsvTable table;
    table.header = {"trial", "seed", "d", "states", "alpha", "equilibrium_exists", "cycle_found",
                    "certificate_factor_exact", "certificate_factor_float"};
    for (int trial = 0; trial < command.trials; ++trial) {
        RandomGameParams params = command.base;
        params.seed = command.base.seed + static_cast<std::uint64_t>(trial);
        const GameInstance game = generateRandom(params);
        const std::size_t states = checkedStateCount(game, command.stateCap);
        const RatioCertificate certificate =
            certifyPotential(game, GammaProfile::allOnes(game), -1, false, command.stateCap);
        for (const AlphaSpec& spec : command.alphaGrid) {
            const Rational alpha = spec.resolve(game.maxDegree());
            const bool hasEquilibrium = !equilibriumSet(game, alpha, command.stateCap).empty();
            const bool cycle = findImprovementCycle(game, alpha, command.stateCap).has_value();
            table.rows.push_back({std::to_string(trial), std::to_string(params.seed),
                                  std::to_string(game.maxDegree()), std::to_string(states),
                                  spec.str(), hasEquilibrium ? "1" : "0", cycle ? "1" : "0",
                                  certificate.impliedFactor.str(),
                                  formatDouble(certificate.impliedFactor.toDouble())});
        }
    }
    return table;
}

}  // namespace wcg

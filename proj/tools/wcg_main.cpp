// wcg: weighted congestion games with polynomial latencies.
//
// Subcommands: rho, verify, pos, sweep, gen, fmt. Exit status is 0 on
// success, 1 when a guaranteed property is observed violated, 2 on
// operational errors (bad input, capacity, I/O). Exploratory findings such
// as cycles below alpha = d exit 0.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wcg/dynamics.hpp"
#include "wcg/errors.hpp"
#include "wcg/experiment.hpp"
#include "wcg/instance_io.hpp"
#include "wcg/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitError = 2;

std::size_t envSizeT(const char* name, std::size_t fallback) {
    const char* raw = std::getenv(name);
    if (!raw || !*raw) return fallback;
    try {
        return static_cast<std::size_t>(std::stoull(raw));
    } catch (const std::exception&) {
        throw wcg::Error(std::string(name) + " is not a valid integer: " + raw);
    }
}

void writeOutput(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw wcg::Error("cannot write " + path);
    out << content;
}

struct InstanceSource {
    std::string file;
    bool genRandom = false;
    bool genTau = false;
    wcg::RandomGameParams params;
    std::string tau = "1";
    int tauPlayers = 5;
    int tauDegree = 2;

    void addOptions(CLI::App* cmd) {
        cmd->add_option("--instance", file, "Instance file");
        cmd->add_flag("--gen-random", genRandom, "Generate a random instance instead of reading one");
        cmd->add_flag("--gen-tau", genTau, "Generate a tau-congested instance instead");
        cmd->add_option("--seed", params.seed, "Generator seed");
        cmd->add_option("--players", params.nPlayers, "Players (random generator)");
        cmd->add_option("--resources", params.nResources, "Resources (random generator)");
        cmd->add_option("--max-degree", params.maxDegree, "Max latency degree (random generator)");
        cmd->add_option("--strategies", params.strategyCount, "Strategies per player (random generator)");
        cmd->add_option("--strategy-size", params.strategySize, "Resources per strategy (random generator)");
        cmd->add_option("--weight-range", params.weightRange, "Weight numerator/denominator bound");
        cmd->add_option("--tau", tau, "Congestion level (tau generator)");
        cmd->add_option("--tau-players", tauPlayers, "Players (tau generator)");
        cmd->add_option("--tau-degree", tauDegree, "Degree (tau generator)");
    }

    wcg::GameInstance load() const {
        const int sources = (file.empty() ? 0 : 1) + (genRandom ? 1 : 0) + (genTau ? 1 : 0);
        if (sources != 1)
            throw wcg::Error("exactly one instance source required: --instance, --gen-random, or --gen-tau");
        if (!file.empty()) return wcg::loadInstanceFile(file).game;
        if (genRandom) return wcg::generateRandom(params);
        return wcg::generateTauCongested(params.seed, wcg::Rational::fromString(tau), tauPlayers,
                                         tauDegree);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted congestion games with polynomial latencies"};
    app.require_subcommand(1);

    std::size_t stateCap = 0;
    std::size_t maxSteps = 0;
    try {
        stateCap = envSizeT("WCG_STATE_CAP", wcg::kDefaultStateCap);
        maxSteps = envSizeT("WCG_MAX_STEPS", wcg::kDefaultMaxSteps);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    app.add_option("--state-cap", stateCap, "Max enumerated states (env WCG_STATE_CAP)");
    app.add_option("--max-steps", maxSteps, "Max dynamics steps (env WCG_MAX_STEPS)");

    // rho
    auto* rho = app.add_subcommand("rho", "Approximation-factor table rho(d) with argmax");
    int dMax = 4;
    double tol = 1e-9;
    std::string rhoTau;
    std::string rhoOut;
    rho->add_option("--dmax", dMax, "Largest degree to tabulate");
    rho->add_option("--tol", tol, "Search tolerance");
    rho->add_option("--tau", rhoTau, "Restrict to the tau-congested regime (rational)");
    rho->add_option("-o,--output", rhoOut, "Output CSV path (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "Check potential monotonicity on the full improvement graph");
    InstanceSource verifySource;
    verifySource.addOptions(verify);
    std::string verifyProfile = "all-ones";
    std::string verifyAlpha = "d";
    std::string verifyOut;
    verify->add_option("--profile", verifyProfile, "all-ones | social | pos:<delta>");
    verify->add_option("--alpha", verifyAlpha, "Improvement threshold: rational, 'd', or 'd+<rational>'");
    verify->add_option("-o,--output", verifyOut, "Output CSV path");

    // pos
    auto* pos = app.add_subcommand("pos", "Price-of-stability walk from a social optimum");
    InstanceSource posSource;
    posSource.addOptions(pos);
    std::string posDelta = "0";
    std::string posOut;
    pos->add_option("--delta", posDelta, "delta in [0,1] (rational)");
    pos->add_option("-o,--output", posOut, "Output CSV path");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Random-instance sweep: equilibria, cycles, certificates");
    wcg::SweepCommand sweepCommand;
    int sweepTrials = 10;
    std::string sweepAlphas = "d";
    std::string sweepOut;
    sweep->add_option("--trials", sweepTrials, "Number of instances");
    sweep->add_option("--seed", sweepCommand.base.seed, "Base seed (trial t uses seed+t)");
    sweep->add_option("--players", sweepCommand.base.nPlayers, "Players per instance");
    sweep->add_option("--resources", sweepCommand.base.nResources, "Resources per instance");
    sweep->add_option("--max-degree", sweepCommand.base.maxDegree, "Max latency degree");
    sweep->add_option("--strategies", sweepCommand.base.strategyCount, "Strategies per player");
    sweep->add_option("--strategy-size", sweepCommand.base.strategySize, "Resources per strategy");
    sweep->add_option("--weight-range", sweepCommand.base.weightRange, "Weight bound");
    sweep->add_option("--alpha-grid", sweepAlphas, "Comma list of alphas ('d', 'd+1/2', '3/2', ...)");
    sweep->add_option("-o,--output", sweepOut, "Output CSV path");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate an instance file");
    auto* genRandom = gen->add_subcommand("random", "Seeded random instance");
    wcg::RandomGameParams genParams;
    std::string genOut;
    genRandom->add_option("--seed", genParams.seed, "Seed");
    genRandom->add_option("--players", genParams.nPlayers, "Players");
    genRandom->add_option("--resources", genParams.nResources, "Resources");
    genRandom->add_option("--max-degree", genParams.maxDegree, "Max latency degree");
    genRandom->add_option("--strategies", genParams.strategyCount, "Strategies per player");
    genRandom->add_option("--strategy-size", genParams.strategySize, "Resources per strategy");
    genRandom->add_option("--weight-range", genParams.weightRange, "Weight bound");
    genRandom->add_option("-o,--output", genOut, "Output path (default stdout)");
    auto* genTau = gen->add_subcommand("tau", "Certified tau-congested instance");
    std::uint64_t tauSeed = 1;
    std::string tauValue = "1";
    int tauPlayers = 5;
    int tauDegree = 2;
    genTau->add_option("--seed", tauSeed, "Seed");
    genTau->add_option("--tau", tauValue, "Congestion level (rational)");
    genTau->add_option("--players", tauPlayers, "Players");
    genTau->add_option("--degree", tauDegree, "Latency degree");
    genTau->add_option("-o,--output", genOut, "Output path (default stdout)");
    auto* genNetwork = gen->add_subcommand("network", "Compile a network routing game");
    std::string networkGraph;
    genNetwork->add_option("--graph", networkGraph, "Network document")->required();
    genNetwork->add_option("-o,--output", genOut, "Output path (default stdout)");
    gen->require_subcommand(1);

    // fmt
    auto* fmt = app.add_subcommand("fmt", "Canonicalize an instance file");
    std::string fmtIn;
    std::string fmtOut;
    fmt->add_option("--instance", fmtIn, "Instance file")->required();
    fmt->add_option("-o,--output", fmtOut, "Output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rho->parsed()) {
            wcg::RhoCommand command;
            command.dMax = dMax;
            command.tol = tol;
            if (!rhoTau.empty()) command.tau = wcg::Rational::fromString(rhoTau);
            const wcg::RhoCommandResult result = wcg::cmdRho(command);
            writeOutput(rhoOut, result.table.toString());
            if (!result.withinBound) {
                std::cerr << "violation: rho exceeded its bound\n";
                return kExitViolation;
            }
            return kExitOk;
        }

        if (verify->parsed()) {
            const wcg::GameInstance game = verifySource.load();
            const wcg::GammaProfile profile = wcg::profileByName(game, verifyProfile);
            const wcg::Rational alpha =
                wcg::AlphaSpec::parse(verifyAlpha).resolve(game.maxDegree());
            const wcg::VerifyCommandResult result = wcg::cmdVerify(game, profile, alpha, stateCap);
            writeOutput(verifyOut, result.table.toString());
            if (!result.verification.pass) {
                const auto& witness = *result.verification.violation;
                std::cerr << "violation: potential did not decrease when player "
                          << witness.move.playerId << " moved (factor "
                          << witness.move.improvementFactor.str() << ")\n";
                return kExitViolation;
            }
            std::cerr << "pass: " << result.verification.edgesChecked
                      << " improvement edges all decrease the potential\n";
            return kExitOk;
        }

        if (pos->parsed()) {
            const wcg::GameInstance game = posSource.load();
            const wcg::PosCommandResult result =
                wcg::cmdPoS(game, wcg::Rational::fromString(posDelta), stateCap, maxSteps);
            writeOutput(posOut, result.table.toString());
            if (!result.withinBound) {
                std::cerr << "violation: ratio " << result.ratio.str() << " above bound "
                          << result.bound.str() << "\n";
                return kExitViolation;
            }
            return kExitOk;
        }

        if (sweep->parsed()) {
            sweepCommand.trials = sweepTrials;
            sweepCommand.stateCap = stateCap;
            sweepCommand.alphaGrid.clear();
            std::istringstream in(sweepAlphas);
            std::string item;
            while (std::getline(in, item, ','))
                if (!item.empty()) sweepCommand.alphaGrid.push_back(wcg::AlphaSpec::parse(item));
            if (sweepCommand.alphaGrid.empty()) throw wcg::Error("empty --alpha-grid");
            writeOutput(sweepOut, wcg::cmdSweep(sweepCommand).toString());
            return kExitOk;
        }

        if (gen->parsed()) {
            wcg::InstanceMetadata meta;
            std::optional<wcg::GameInstance> game;
            if (genRandom->parsed()) {
                game = wcg::generateRandom(genParams);
                meta.seed = genParams.seed;
                meta.generator = "random";
            } else if (genTau->parsed()) {
                game = wcg::generateTauCongested(tauSeed, wcg::Rational::fromString(tauValue),
                                                 tauPlayers, tauDegree);
                meta.seed = tauSeed;
                meta.generator = "tau-congested";
            } else {
                std::ifstream in(networkGraph);
                if (!in) throw wcg::Error("cannot open network file " + networkGraph);
                std::ostringstream buffer;
                buffer << in.rdbuf();
                game = wcg::compileNetworkGame(wcg::parseNetworkSpec(buffer.str()));
                meta.generator = "network";
            }
            writeOutput(genOut, wcg::serializeInstance(*game, meta));
            return kExitOk;
        }

        if (fmt->parsed()) {
            const wcg::ParsedInstance parsed = wcg::loadInstanceFile(fmtIn);
            writeOutput(fmtOut, wcg::serializeInstance(parsed.game, parsed.meta));
            return kExitOk;
        }
    } catch (const wcg::InvariantViolationError& e) {
        std::cerr << "violation: " << e.what() << "\n";
        return kExitViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

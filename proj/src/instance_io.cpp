#include "wcg/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "wcg/errors.hpp"

namespace wcg {

namespace {

constexpr std::string_view kInstanceHeader = "wcg-instance v1";
constexpr std::string_view kNetworkHeader = "wcg-network v1";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> tokens;
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

// Content lines with their 1-based numbers: comments and blanks dropped.
std::vector<std::pair<int, std::string>> contentLines(std::string_view text) {
    std::vector<std::pair<int, std::string>> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (!raw.empty()) lines.emplace_back(number, std::string(raw));
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return lines;
}

int parseInt(const std::string& tok, int line, const std::string& field) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return value;
    } catch (const std::exception&) {
        throw ParseError(line, "malformed integer '" + tok + "' in " + field);
    }
}

std::uint64_t parseU64(const std::string& tok, int line, const std::string& field) {
    try {
        std::size_t used = 0;
        const unsigned long long value = std::stoull(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return value;
    } catch (const std::exception&) {
        throw ParseError(line, "malformed integer '" + tok + "' in " + field);
    }
}

Rational parseRationalField(const std::string& tok, int line, const std::string& field) {
    try {
        return Rational::fromString(tok);
    } catch (const ParseError& e) {
        throw ParseError(line, std::string(e.what()) + " in " + field);
    }
}

}  // namespace

ParsedInstance parseInstance(std::string_view text) {
    const auto lines = contentLines(text);
    if (lines.empty() || lines.front().second != kInstanceHeader)
        throw ParseError(lines.empty() ? 1 : lines.front().first,
                         "expected header '" + std::string(kInstanceHeader) + "'");

    InstanceMetadata meta;
    std::map<int, std::pair<int, Rational>> players;        // id -> (line, weight)
    std::map<int, std::tuple<int, Rational, int>> resources;  // id -> (line, coeff, degree)
    std::map<int, std::vector<Strategy>> strategies;          // player id -> strategies
    std::vector<std::pair<int, std::vector<std::string>>> strategyLines;

    enum class Section { None, Meta, Players, Resources, Strategies };
    Section section = Section::None;
    std::set<std::string> seenSections;

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto& [line, content] = lines[li];
        if (content.front() == '[') {
            if (content == "[meta]") section = Section::Meta;
            else if (content == "[players]") section = Section::Players;
            else if (content == "[resources]") section = Section::Resources;
            else if (content == "[strategies]") section = Section::Strategies;
            else throw ParseError(line, "unknown section " + content);
            if (!seenSections.insert(content).second)
                throw ParseError(line, "duplicate section " + content);
            continue;
        }
        switch (section) {
            case Section::None:
                throw ParseError(line, "content before any section");
            case Section::Meta: {
                const auto space = content.find(' ');
                const std::string key = content.substr(0, space);
                const std::string value =
                    space == std::string::npos ? "" : std::string(trim(content.substr(space + 1)));
                if (value.empty()) throw ParseError(line, "meta entry '" + key + "' has no value");
                if (key == "name") meta.name = value;
                else if (key == "seed") meta.seed = parseU64(value, line, "meta seed");
                else if (key == "generator") meta.generator = value;
                else throw ParseError(line, "unknown meta key '" + key + "'");
                break;
            }
            case Section::Players: {
                const auto tokens = tokenize(content);
                if (tokens.size() != 2)
                    throw ParseError(line, "player line needs 'id weight', got '" + content + "'");
                const int id = parseInt(tokens[0], line, "player id");
                const Rational weight = parseRationalField(tokens[1], line, "player weight");
                if (!weight.isPositive())
                    throw ParseError(line, "player " + std::to_string(id) + " weight " + weight.str() +
                                                " must be positive");
                if (!players.emplace(id, std::make_pair(line, weight)).second)
                    throw ParseError(line, "duplicate player id " + std::to_string(id));
                break;
            }
            case Section::Resources: {
                const auto tokens = tokenize(content);
                if (tokens.size() != 3)
                    throw ParseError(line, "resource line needs 'id coefficient degree', got '" +
                                               content + "'");
                const int id = parseInt(tokens[0], line, "resource id");
                const Rational coeff = parseRationalField(tokens[1], line, "resource coefficient");
                const int degree = parseInt(tokens[2], line, "resource degree");
                if (!coeff.isPositive())
                    throw ParseError(line, "resource " + std::to_string(id) + " coefficient " +
                                               coeff.str() + " must be positive");
                if (degree < 1)
                    throw ParseError(line, "resource " + std::to_string(id) + " degree " +
                                               std::to_string(degree) + " must be >= 1");
                if (!resources.emplace(id, std::make_tuple(line, coeff, degree)).second)
                    throw ParseError(line, "duplicate resource id " + std::to_string(id));
                break;
            }
            case Section::Strategies: {
                auto tokens = tokenize(content);
                if (tokens.size() < 3 || tokens[1] != ":")
                    throw ParseError(line, "strategy line needs 'player : resource...', got '" +
                                               content + "'");
                strategyLines.emplace_back(line, std::move(tokens));
                break;
            }
        }
    }

    if (players.empty()) throw ParseError(0, "missing or empty [players] section");
    if (resources.empty()) throw ParseError(0, "missing or empty [resources] section");
    if (strategyLines.empty()) throw ParseError(0, "missing or empty [strategies] section");

    std::vector<Player> playerList;
    int expected = 0;
    for (const auto& [id, entry] : players) {
        if (id != expected)
            throw ParseError(entry.first, "player ids must cover 0..n-1, missing " +
                                              std::to_string(expected));
        playerList.push_back(Player{id, entry.second});
        ++expected;
    }
    std::vector<Resource> resourceList;
    expected = 0;
    for (const auto& [id, entry] : resources) {
        if (id != expected)
            throw ParseError(std::get<0>(entry), "resource ids must cover 0..m-1, missing " +
                                                     std::to_string(expected));
        resourceList.push_back(Resource{id, std::get<1>(entry), std::get<2>(entry)});
        ++expected;
    }

    std::vector<std::vector<Strategy>> strategyTable(playerList.size());
    for (const auto& [line, tokens] : strategyLines) {
        const int pid = parseInt(tokens[0], line, "strategy player id");
        if (pid < 0 || pid >= static_cast<int>(playerList.size()))
            throw ParseError(line, "strategy references unknown player " + std::to_string(pid));
        Strategy strat;
        for (std::size_t t = 2; t < tokens.size(); ++t) {
            const int rid = parseInt(tokens[t], line, "strategy resource id");
            if (rid < 0 || rid >= static_cast<int>(resourceList.size()))
                throw ParseError(line, "strategy references unknown resource " + std::to_string(rid));
            strat.push_back(rid);
        }
        strategyTable[static_cast<std::size_t>(pid)].push_back(std::move(strat));
    }
    for (std::size_t i = 0; i < strategyTable.size(); ++i)
        if (strategyTable[i].empty())
            throw ParseError(0, "player " + std::to_string(i) + " has no strategy line");

    return ParsedInstance{GameInstance(std::move(playerList), std::move(resourceList),
                                       std::move(strategyTable)),
                          std::move(meta)};
}

std::string serializeInstance(const GameInstance& game, const InstanceMetadata& meta) {
    std::ostringstream out;
    out << kInstanceHeader << "\n";
    if (meta.name || meta.seed || meta.generator) {
        out << "[meta]\n";
        if (meta.name) out << "name " << *meta.name << "\n";
        if (meta.seed) out << "seed " << *meta.seed << "\n";
        if (meta.generator) out << "generator " << *meta.generator << "\n";
    }
    out << "[players]\n";
    for (const auto& p : game.players()) out << p.id << " " << p.weight.str() << "\n";
    out << "[resources]\n";
    for (const auto& r : game.resources())
        out << r.id << " " << r.coefficient.str() << " " << r.degree << "\n";
    out << "[strategies]\n";
    for (std::size_t i = 0; i < game.numPlayers(); ++i) {
        for (const auto& strat : game.strategies(static_cast<int>(i))) {
            out << i << " :";
            for (int e : strat) out << " " << e;
            out << "\n";
        }
    }
    return out.str();
}

ParsedInstance loadInstanceFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open instance file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parseInstance(buffer.str());
}

void saveInstanceFile(const std::string& path, const GameInstance& game,
                      const InstanceMetadata& meta) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write instance file " + path);
    out << serializeInstance(game, meta);
}

GameInstance compileNetworkGame(const NetworkGameSpec& spec) {
    if (spec.nodeCount < 1) throw PreconditionError("network needs at least one node");
    std::vector<Resource> resources;
    std::vector<std::vector<int>> outgoing(static_cast<std::size_t>(spec.nodeCount));
    for (std::size_t a = 0; a < spec.arcs.size(); ++a) {
        const NetworkArc& arc = spec.arcs[a];
        if (arc.id != static_cast<int>(a))
            throw InvalidReferenceError("arc ids must be dense and ordered, got " +
                                        std::to_string(arc.id) + " at position " + std::to_string(a));
        if (arc.from < 0 || arc.from >= spec.nodeCount || arc.to < 0 || arc.to >= spec.nodeCount)
            throw InvalidReferenceError("arc " + std::to_string(arc.id) + " references unknown node");
        resources.push_back(Resource{arc.id, arc.coefficient, arc.degree});
        outgoing[static_cast<std::size_t>(arc.from)].push_back(arc.id);
    }
    for (auto& arcs : outgoing) std::sort(arcs.begin(), arcs.end());

    std::vector<Player> players;
    std::vector<std::vector<Strategy>> strategies;
    for (std::size_t i = 0; i < spec.players.size(); ++i) {
        const NetworkPlayerSpec& ps = spec.players[i];
        if (ps.source < 0 || ps.source >= spec.nodeCount || ps.target < 0 || ps.target >= spec.nodeCount)
            throw InvalidReferenceError("player " + std::to_string(i) + " references unknown node");
        players.push_back(Player{static_cast<int>(i), ps.weight});

        // All simple source->target paths, depth-first, ascending arc ids.
        std::vector<Strategy> paths;
        std::vector<bool> onPath(static_cast<std::size_t>(spec.nodeCount), false);
        std::vector<int> arcStack;
        auto dfs = [&](auto&& self, int node) -> void {
            if (node == ps.target) {
                if (paths.size() >= spec.pathCap)
                    throw CapacityError("player " + std::to_string(i) + " exceeds path cap of " +
                                        std::to_string(spec.pathCap));
                paths.emplace_back(arcStack);
                return;
            }
            onPath[static_cast<std::size_t>(node)] = true;
            for (int arcId : outgoing[static_cast<std::size_t>(node)]) {
                const int to = spec.arcs[static_cast<std::size_t>(arcId)].to;
                if (onPath[static_cast<std::size_t>(to)]) continue;
                arcStack.push_back(arcId);
                self(self, to);
                arcStack.pop_back();
            }
            onPath[static_cast<std::size_t>(node)] = false;
        };
        if (ps.source == ps.target)
            throw InfeasiblePlayerError("player " + std::to_string(i) +
                                        " has source == target, which yields the empty path");
        dfs(dfs, ps.source);
        if (paths.empty())
            throw InfeasiblePlayerError("player " + std::to_string(i) + " has no path from node " +
                                        std::to_string(ps.source) + " to node " +
                                        std::to_string(ps.target));
        strategies.push_back(std::move(paths));
    }
    return GameInstance(std::move(players), std::move(resources), std::move(strategies));
}

NetworkGameSpec parseNetworkSpec(std::string_view text) {
    const auto lines = contentLines(text);
    if (lines.empty() || lines.front().second != kNetworkHeader)
        throw ParseError(lines.empty() ? 1 : lines.front().first,
                         "expected header '" + std::string(kNetworkHeader) + "'");
    NetworkGameSpec spec;
    enum class Section { None, Nodes, Arcs, Players, PathCap };
    Section section = Section::None;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto& [line, content] = lines[li];
        if (content == "[nodes]") { section = Section::Nodes; continue; }
        if (content == "[arcs]") { section = Section::Arcs; continue; }
        if (content == "[players]") { section = Section::Players; continue; }
        if (content == "[pathcap]") { section = Section::PathCap; continue; }
        if (content.front() == '[') throw ParseError(line, "unknown section " + content);
        const auto tokens = tokenize(content);
        switch (section) {
            case Section::None:
                throw ParseError(line, "content before any section");
            case Section::Nodes:
                spec.nodeCount = parseInt(tokens[0], line, "node count");
                break;
            case Section::Arcs: {
                if (tokens.size() != 5)
                    throw ParseError(line, "arc line needs 'id from to coefficient degree'");
                NetworkArc arc;
                arc.id = parseInt(tokens[0], line, "arc id");
                arc.from = parseInt(tokens[1], line, "arc source node");
                arc.to = parseInt(tokens[2], line, "arc target node");
                arc.coefficient = parseRationalField(tokens[3], line, "arc coefficient");
                arc.degree = parseInt(tokens[4], line, "arc degree");
                spec.arcs.push_back(std::move(arc));
                break;
            }
            case Section::Players: {
                if (tokens.size() != 3)
                    throw ParseError(line, "player line needs 'weight source target'");
                NetworkPlayerSpec ps;
                ps.weight = parseRationalField(tokens[0], line, "player weight");
                ps.source = parseInt(tokens[1], line, "player source node");
                ps.target = parseInt(tokens[2], line, "player target node");
                if (!ps.weight.isPositive())
                    throw ParseError(line, "player weight must be positive");
                spec.players.push_back(std::move(ps));
                break;
            }
            case Section::PathCap:
                spec.pathCap = parseU64(tokens[0], line, "path cap");
                break;
        }
    }
    return spec;
}

namespace {

// Bounded draw from the raw engine; bias is irrelevant here, determinism is
// what matters.
long drawRange(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Rational drawRational(std::mt19937_64& rng, long range) {
    const long num = drawRange(rng, 1, range);
    const long den = drawRange(rng, 1, range);
    return Rational(num, den);
}

}  // namespace

GameInstance generateRandom(const RandomGameParams& params) {
    if (params.nPlayers < 1 || params.nResources < 1 || params.maxDegree < 1 ||
        params.strategyCount < 1 || params.strategySize < 1 || params.weightRange < 1)
        throw PreconditionError("all generator parameters must be >= 1");

    std::mt19937_64 rng(params.seed);

    std::vector<Player> players;
    for (int i = 0; i < params.nPlayers; ++i)
        players.push_back(Player{i, drawRational(rng, params.weightRange)});

    std::vector<Resource> resources;
    bool maxAttained = false;
    for (int e = 0; e < params.nResources; ++e) {
        const int degree = static_cast<int>(drawRange(rng, 1, params.maxDegree));
        maxAttained = maxAttained || degree == params.maxDegree;
        resources.push_back(Resource{e, drawRational(rng, params.weightRange), degree});
    }
    if (!maxAttained)
        resources[static_cast<std::size_t>(drawRange(rng, 0, params.nResources - 1))].degree =
            params.maxDegree;

    const int size = std::min(params.strategySize, params.nResources);
    std::vector<std::vector<Strategy>> strategies(static_cast<std::size_t>(params.nPlayers));
    std::vector<int> ids(static_cast<std::size_t>(params.nResources));
    for (int e = 0; e < params.nResources; ++e) ids[static_cast<std::size_t>(e)] = e;

    for (auto& list : strategies) {
        std::set<Strategy> distinct;
        // Best-effort distinct draws; collisions simply retry a bounded
        // number of times.
        const int attempts = 50 * params.strategyCount;
        for (int a = 0; a < attempts && static_cast<int>(distinct.size()) < params.strategyCount; ++a) {
            for (int j = 0; j < size; ++j) {
                const long k = drawRange(rng, j, params.nResources - 1);
                std::swap(ids[static_cast<std::size_t>(j)], ids[static_cast<std::size_t>(k)]);
            }
            Strategy strat(ids.begin(), ids.begin() + size);
            std::sort(strat.begin(), strat.end());
            distinct.insert(std::move(strat));
        }
        list.assign(distinct.begin(), distinct.end());
    }

    return GameInstance(std::move(players), std::move(resources), std::move(strategies));
}

GameInstance generateTauCongested(std::uint64_t seed, const Rational& tau, int nPlayers, int degree) {
    if (!tau.isPositive()) throw PreconditionError("tau must be positive");
    if (nPlayers < 1 || degree < 1) throw PreconditionError("nPlayers and degree must be >= 1");

    const Rational tk = tau * Rational(degree);
    const mpz_class anchorsNeeded = tk.ceil() + 1;
    if (anchorsNeeded > nPlayers)
        throw GeneratorError("tau-congested construction needs " + anchorsNeeded.get_str() +
                             " anchors but only " + std::to_string(nPlayers) + " players given");
    const int anchors = static_cast<int>(anchorsNeeded.get_si());
    const int freePlayers = nPlayers - anchors;

    constexpr int kResources = 3;
    std::mt19937_64 rng(seed);

    std::vector<Resource> resources;
    for (int e = 0; e < kResources; ++e)
        resources.push_back(Resource{e, Rational(drawRange(rng, 1, 3)), degree});

    std::vector<Player> players;
    std::vector<std::vector<Strategy>> strategies;
    Strategy everything;
    for (int e = 0; e < kResources; ++e) everything.push_back(e);

    for (int i = 0; i < anchors; ++i) {
        // Anchors weigh exactly 1 and are pinned to every resource.
        players.push_back(Player{i, Rational(1)});
        strategies.push_back({everything});
    }
    for (int i = anchors; i < nPlayers; ++i) {
        // Free players weigh slightly less than the anchors, so every bound
        // they must satisfy is slack.
        players.push_back(Player{i, Rational(100 - drawRange(rng, 0, 4), 100)});
        std::vector<Strategy> singles;
        for (int e = 0; e < kResources; ++e) singles.push_back(Strategy{e});
        strategies.push_back(std::move(singles));
    }

    GameInstance game(std::move(players), std::move(resources), std::move(strategies));

    unsigned long long states = 1;
    for (int i = 0; i < freePlayers; ++i) states *= kResources;
    if (states > kDefaultStateCap)
        throw GeneratorError("construction yields " + std::to_string(states) +
                             " states, above the verification cap");

    const auto observed = tauCongestedness(game);
    if (!observed || *observed < tau)
        throw InvariantViolationError("generated instance failed its tau check: observed " +
                                      (observed ? observed->str() : std::string("none")));
    return game;
}

}  // namespace wcg

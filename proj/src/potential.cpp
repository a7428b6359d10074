#include "wcg/potential.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "wcg/errors.hpp"
#include "wcg/oracle.hpp"

namespace wcg {

GammaProfile::GammaProfile(const GameInstance& game, std::vector<Rational> gamma)
    : gamma_(std::move(gamma)) {
    if (gamma_.size() != game.numResources())
        throw InvalidReferenceError("gamma profile has " + std::to_string(gamma_.size()) +
                                    " entries for " + std::to_string(game.numResources()) + " resources");
    maxGamma_ = gamma_.front();
    for (std::size_t e = 0; e < gamma_.size(); ++e) {
        const Rational upper(game.resources()[e].degree + 1);
        if (gamma_[e] < Rational(1) || gamma_[e] > upper)
            throw DomainError("gamma_" + std::to_string(e) + " = " + gamma_[e].str() +
                              " outside [1, " + upper.str() + "]");
        maxGamma_ = max(maxGamma_, gamma_[e]);
    }
}

GammaProfile GammaProfile::allOnes(const GameInstance& game) {
    return GammaProfile(game, std::vector<Rational>(game.numResources(), Rational(1)));
}

GammaProfile GammaProfile::social(const GameInstance& game) {
    std::vector<Rational> g;
    g.reserve(game.numResources());
    for (const auto& res : game.resources()) g.emplace_back(res.degree + 1);
    return GammaProfile(game, std::move(g));
}

GammaProfile GammaProfile::forStability(const GameInstance& game, const Rational& delta) {
    if (delta.isNegative() || delta > Rational(1))
        throw PreconditionError("delta = " + delta.str() + " outside [0, 1]");
    const Rational cap = Rational(game.maxDegree()) + delta;
    std::vector<Rational> g;
    g.reserve(game.numResources());
    for (const auto& res : game.resources()) g.push_back(min(Rational(res.degree + 1), cap));
    return GammaProfile(game, std::move(g));
}

Rational GammaProfile::guaranteedFactor(const GameInstance& game) const {
    return max(maxGamma_, Rational(game.maxDegree()));
}

namespace {

void requireGammaInRange(const Resource& res, const Rational& gammaE) {
    if (gammaE < Rational(1) || gammaE > Rational(res.degree + 1))
        throw DomainError("gamma = " + gammaE.str() + " outside [1, " +
                          std::to_string(res.degree + 1) + "] for resource " + std::to_string(res.id));
}

// Phi from a precomputed (total weight, sum of w^{k+1}) pair.
Rational phiFromSums(int degree, const Rational& gammaE, const Rational& total,
                     const Rational& powerSum) {
    const Rational blend = gammaE / Rational(degree + 1);
    return blend * total.pow(static_cast<unsigned long>(degree) + 1) +
           (Rational(1) - blend) * powerSum;
}

}  // namespace

Rational resourcePotential(const GameInstance& game, int resourceId, const Rational& gammaE,
                           const std::vector<int>& userSet) {
    const Resource& res = game.resource(resourceId);
    requireGammaInRange(res, gammaE);
    if (userSet.empty()) return Rational(0);
    Rational total(0), powerSum(0);
    for (int pid : userSet) {
        const Rational& w = game.player(pid).weight;
        total += w;
        powerSum += w.pow(static_cast<unsigned long>(res.degree) + 1);
    }
    return phiFromSums(res.degree, gammaE, total, powerSum);
}

Rational potentialValue(const GameInstance& game, const GammaProfile& profile, const LoadProfile& loads) {
    if (profile.size() != game.numResources())
        throw InvalidReferenceError("profile does not match the instance");
    Rational total(0);
    for (std::size_t e = 0; e < game.numResources(); ++e) {
        if (loads.users[e].empty()) continue;
        Rational powerSum(0);
        const int k = game.resources()[e].degree;
        for (int pid : loads.users[e])
            powerSum += game.players()[static_cast<std::size_t>(pid)].weight.pow(
                static_cast<unsigned long>(k) + 1);
        total += game.resources()[e].coefficient *
                 phiFromSums(k, profile[e], loads.congestion[e], powerSum);
    }
    return total;
}

Rational potentialValue(const GameInstance& game, const GammaProfile& profile, const State& s) {
    return potentialValue(game, profile, computeLoads(game, s));
}

Rational reducedRatio(const Rational& x, int h, const Rational& beta) {
    if (x.isNegative()) throw DomainError("reducedRatio requires x >= 0, got " + x.str());
    if (h < 1) throw PreconditionError("reducedRatio requires h >= 1, got " + std::to_string(h));
    if (!beta.isPositive()) throw PreconditionError("reducedRatio requires beta > 0, got " + beta.str());
    const Rational blend = beta / Rational(h + 1);
    const Rational onePlusX = Rational(1) + x;
    const Rational numerator = onePlusX.pow(static_cast<unsigned long>(h));
    const Rational denominator = blend * onePlusX.pow(static_cast<unsigned long>(h) + 1) +
                                 (Rational(1) - blend) -
                                 blend * x.pow(static_cast<unsigned long>(h) + 1);
    if (!denominator.isPositive())
        throw InvariantViolationError("non-positive denominator in reduced ratio at x = " + x.str());
    return numerator / denominator;
}

Rational localRatio(const GameInstance& game, int resourceId, const std::vector<int>& userSet,
                    int playerId, const Rational& gammaE) {
    const Resource& res = game.resource(resourceId);
    requireGammaInRange(res, gammaE);
    if (std::find(userSet.begin(), userSet.end(), playerId) == userSet.end())
        throw PreconditionError("player " + std::to_string(playerId) + " not in the user set");

    // Raw route: w_i * l_e(P) / (a_e * (Phi(P) - Phi(P \ {i}))).
    std::vector<int> without;
    without.reserve(userSet.size() - 1);
    for (int pid : userSet)
        if (pid != playerId) without.push_back(pid);

    const Rational& w = game.player(playerId).weight;
    const Rational marginal = resourcePotential(game, resourceId, gammaE, userSet) -
                              resourcePotential(game, resourceId, gammaE, without);
    if (!marginal.isPositive())
        throw InvariantViolationError("non-positive potential marginal on resource " +
                                      std::to_string(resourceId));
    const Rational raw = w * latency(game, resourceId, userSet) / (res.coefficient * marginal);

    // Reduced route in mu = (sum of the other weights) / w_i.
    Rational others(0);
    for (int pid : without) others += game.player(pid).weight;
    const Rational reduced = reducedRatio(others / w, res.degree, gammaE);

    if (raw != reduced)
        throw InvariantViolationError("local ratio routes disagree: " + raw.str() + " vs " +
                                      reduced.str());
    return raw;
}

namespace {

struct RatioScan {
    RatioCertificate cert;
    bool any = false;

    void feed(const GameInstance& game, const GammaProfile& profile, int resourceId,
              const std::vector<int>& subset) {
        auto& slot = cert.perResource[static_cast<std::size_t>(resourceId)];
        for (int pid : subset) {
            const Rational ratio = localRatio(game, resourceId, subset, pid, profile[static_cast<std::size_t>(resourceId)]);
            const RatioWitness witness{resourceId, subset, pid};
            if (!slot) {
                slot = RatioCertificate::PerResource{ratio, ratio, witness, witness, 0};
            } else {
                if (ratio < slot->minRatio) { slot->minRatio = ratio; slot->minWitness = witness; }
                if (ratio > slot->maxRatio) { slot->maxRatio = ratio; slot->maxWitness = witness; }
            }
            ++slot->triplesChecked;
            if (!any || ratio < cert.minRatio) { cert.minRatio = ratio; cert.minWitness = witness; }
            if (!any || ratio > cert.maxRatio) { cert.maxRatio = ratio; cert.maxWitness = witness; }
            any = true;
            ++cert.triplesChecked;
        }
    }
};

// Triples budget for the exhaustive certificate scan.
constexpr std::size_t kCertifyWorkCap = 20000000;

}  // namespace

RatioCertificate certifyPotential(const GameInstance& game, const GammaProfile& profile,
                                  int subsetCap, bool reachableOnly, std::size_t stateCap) {
    if (profile.size() != game.numResources())
        throw InvalidReferenceError("profile does not match the instance");
    const int n = static_cast<int>(game.numPlayers());
    if (subsetCap < 0 || subsetCap > n) subsetCap = n;
    if (subsetCap < 1) throw PreconditionError("subsetCap must allow at least singletons");

    RatioScan scan;
    scan.cert.perResource.assign(game.numResources(), std::nullopt);

    if (reachableOnly) {
        // Only the user sets that occur as L_e(s) in some state.
        std::vector<std::set<std::vector<int>>> seen(game.numResources());
        forEachState(game, stateCap, [&](const State& s) {
            const LoadProfile loads = computeLoads(game, s);
            for (std::size_t e = 0; e < game.numResources(); ++e)
                if (!loads.users[e].empty() &&
                    loads.users[e].size() <= static_cast<std::size_t>(subsetCap))
                    seen[e].insert(loads.users[e]);
        });
        for (std::size_t e = 0; e < game.numResources(); ++e)
            for (const auto& subset : seen[e])
                scan.feed(game, profile, static_cast<int>(e), subset);
    } else {
        if (n > 24) throw CapacityError("subset enumeration over " + std::to_string(n) + " players");
        std::size_t work = 0;
        std::vector<int> subset;
        for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
            if (static_cast<int>(__builtin_popcountl(mask)) > subsetCap) continue;
            subset.clear();
            for (int i = 0; i < n; ++i)
                if (mask & (1ul << i)) subset.push_back(i);
            work += subset.size() * game.numResources();
            if (work > kCertifyWorkCap)
                throw CapacityError("certificate scan exceeds work cap of " +
                                    std::to_string(kCertifyWorkCap) + " triples");
            for (std::size_t e = 0; e < game.numResources(); ++e)
                scan.feed(game, profile, static_cast<int>(e), subset);
        }
    }

    if (!scan.any)
        throw CapacityError("no (resource, subset, player) triples to certify");
    scan.cert.impliedFactor = scan.cert.maxRatio / scan.cert.minRatio;
    return scan.cert;
}

namespace {

// The gamma = 1 ratio evaluated through its binomial expansion
//   (sum_t C(k,t) x^t) / (1 + sum_{t>=1} C(k,t)/(k+1-t) x^t),
// which has positive terms only and so none of the cancellation the direct
// form suffers for large x. For k = 1 it is identically 1.
double ratioAllOnes(int k, double x) {
    double num = 1.0, den = 1.0, term = 1.0;
    for (int t = 1; t <= k; ++t) {
        term *= x * static_cast<double>(k - t + 1) / static_cast<double>(t);
        num += term;
        den += term / static_cast<double>(k + 1 - t);
    }
    return num / den;
}

struct PeakSearch {
    double value = 1.0;
    double argmax = 0.0;
    bool unimodal = true;
};

// Coarse geometric grid to bracket the maximum, then golden-section
// refinement. The grid spans [xmin, xmin + ~2e6] which safely covers the
// interior peak (always at x < 2 for k >= 2) and the decreasing tail.
PeakSearch supremumOverX(int k, double xmin, double tol) {
    std::vector<double> xs{xmin};
    const double scale = std::max(1.0, xmin);
    for (int j = 0; j <= 31; ++j) xs.push_back(xmin + 1e-3 * std::ldexp(scale, j));

    std::vector<double> fs(xs.size());
    std::size_t peak = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fs[i] = ratioAllOnes(k, xs[i]);
        if (!std::isfinite(fs[i])) throw NumericError("ratio overflow at x = " + std::to_string(xs[i]));
        if (fs[i] > fs[peak]) peak = i;
    }

    PeakSearch out;
    out.argmax = xs[peak];
    out.value = fs[peak];

    // Single-peaked on the grid? (non-decreasing up to the max, then
    // non-increasing, with a little slack for float noise)
    const double slack = 1e-12 * std::max(1.0, fs[peak]);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const bool rising = fs[i + 1] >= fs[i] - slack;
        const bool falling = fs[i + 1] <= fs[i] + slack;
        if ((i < peak && !rising) || (i >= peak && !falling)) out.unimodal = false;
    }
    if (!out.unimodal) return out;  // caller widens the tolerance

    double lo = peak == 0 ? xmin : xs[peak - 1];
    double hi = peak + 1 < xs.size() ? xs[peak + 1] : xs.back();
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = ratioAllOnes(k, c), fd = ratioAllOnes(k, d);
    for (int iter = 0; iter < 200 && (b - a) > tol * std::max(1.0, std::abs(a)); ++iter) {
        if (fc >= fd) {
            b = d; d = c; fd = fc;
            c = b - kInvPhi * (b - a);
            fc = ratioAllOnes(k, c);
        } else {
            a = c; c = d; fc = fd;
            d = a + kInvPhi * (b - a);
            fd = ratioAllOnes(k, d);
        }
        const double best = std::max(fc, fd);
        if (best > out.value) {
            out.value = best;
            out.argmax = fc >= fd ? c : d;
        }
    }
    return out;
}

RhoResult rhoOverDegrees(int d, double tol, double xminFactor) {
    if (d < 1) throw PreconditionError("degree must be >= 1");
    if (!(tol > 0)) throw PreconditionError("tolerance must be positive");
    RhoResult result;
    result.degree = d;
    result.tolerance = tol;
    result.rho = 0.0;
    for (int k = 1; k <= d; ++k) {
        PeakSearch peak = supremumOverX(k, xminFactor * k, tol);
        if (!peak.unimodal) {
            // Fall back to a dense geometric scan with a widened tolerance.
            const double xmin = xminFactor * k;
            double best = ratioAllOnes(k, xmin), bestX = xmin;
            for (double x = std::max(xmin, 1e-4); x < xmin + 2e6; x *= 1.0005) {
                const double f = ratioAllOnes(k, x);
                if (f > best) { best = f; bestX = x; }
            }
            peak.value = best;
            peak.argmax = bestX;
            result.gridFallback = true;
            result.tolerance = std::max(result.tolerance, 10 * tol);
        }
        if (peak.value > result.rho) {
            result.rho = peak.value;
            result.argmaxX = peak.argmax;
        }
    }
    return result;
}

}  // namespace

RhoResult rhoBound(int d, double tol) {
    return rhoOverDegrees(d, tol, 0.0);
}

RhoResult rhoBoundTau(int d, const Rational& tau, double tol) {
    if (!tau.isPositive()) throw PreconditionError("tau must be positive");
    return rhoOverDegrees(d, tol, tau.toDouble());
}

}  // namespace wcg

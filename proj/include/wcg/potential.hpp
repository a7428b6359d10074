#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wcg/game.hpp"
#include "wcg/rational.hpp"

namespace wcg {

/// Per-resource scaling vector gamma parameterizing the potential family.
/// Each entry must lie in [1, k_e + 1].
class GammaProfile {
public:
    GammaProfile(const GameInstance& game, std::vector<Rational> gamma);

    /// gamma_e = 1 everywhere. Approximation factor rho(d) <= d.
    static GammaProfile allOnes(const GameInstance& game);

    /// gamma_e = k_e + 1, which makes the potential equal the social cost.
    static GammaProfile social(const GameInstance& game);

    /// gamma_e = min{k_e + 1, d + delta}, the profile behind the
    /// (d+1)/(d+delta) price-of-stability bound. Requires delta in [0, 1].
    static GammaProfile forStability(const GameInstance& game, const Rational& delta);

    std::size_t size() const { return gamma_.size(); }
    const Rational& operator[](std::size_t e) const { return gamma_[e]; }
    const std::vector<Rational>& values() const { return gamma_; }

    /// gamma* = max_e gamma_e.
    const Rational& maxGamma() const { return maxGamma_; }

    /// The approximation factor this profile is guaranteed to certify on a
    /// game of max degree d: max{gamma*, d}. The potential strictly decreases
    /// on every alpha-improvement move with alpha >= this factor.
    Rational guaranteedFactor(const GameInstance& game) const;

private:
    std::vector<Rational> gamma_;
    Rational maxGamma_;
};

/// Per-resource potential term
///   Phi_e^g(P) = g/(k+1) * (sum w_j)^{k+1} + (1 - g/(k+1)) * sum w_j^{k+1},
/// with Phi_e^g(empty) = 0. Exact.
Rational resourcePotential(const GameInstance& game, int resourceId, const Rational& gammaE,
                           const std::vector<int>& userSet);

/// POT_gamma(s) = sum_e a_e * Phi_e^{gamma_e}(L_e(s)). Exact.
Rational potentialValue(const GameInstance& game, const GammaProfile& profile, const State& s);
Rational potentialValue(const GameInstance& game, const GammaProfile& profile, const LoadProfile& loads);

/// The local ratio
///   w_i * l_e(P) / (a_e * (Phi_e^g(P) - Phi_e^g(P \ {i})))
/// for i in P. Computed both from that raw definition and from the reduced
/// single-variable form in mu = (sum of the other weights) / w_i; the two
/// routes are cross-checked for exact equality.
Rational localRatio(const GameInstance& game, int resourceId, const std::vector<int>& userSet,
                    int playerId, const Rational& gammaE);

/// The scalar ratio
///   (1+x)^h / (b/(h+1)*(1+x)^{h+1} + (1 - b/(h+1)) - b/(h+1)*x^{h+1})
/// for x >= 0, integer h >= 1, b > 0. Exact. For b in [1, h+1] the value lies
/// in [1/b, max{1, h/b}].
Rational reducedRatio(const Rational& x, int h, const Rational& beta);

struct RatioWitness {
    int resourceId = -1;
    std::vector<int> subset;
    int playerId = -1;
};

/// Observed range of the local ratio over an enumerated family of
/// (resource, subset, player) triples. The instance then admits an
/// impliedFactor-approximate potential for the profile that produced it.
struct RatioCertificate {
    struct PerResource {
        Rational minRatio, maxRatio;
        RatioWitness minWitness, maxWitness;
        std::size_t triplesChecked = 0;
    };
    std::vector<std::optional<PerResource>> perResource;
    Rational minRatio, maxRatio;  // global [lambda, upsilon]
    Rational impliedFactor;       // upsilon / lambda
    RatioWitness minWitness, maxWitness;
    std::size_t triplesChecked = 0;
};

/// Enumerates local ratios and reports the observed range. By default every
/// non-empty subset P of the players with |P| <= subsetCap is checked (the
/// strong hypothesis); with reachableOnly, only user sets that actually occur
/// as L_e(s) in some state are checked, which is what tau-congested bounds
/// are about. Work beyond the caps raises CapacityError.
RatioCertificate certifyPotential(const GameInstance& game, const GammaProfile& profile,
                                  int subsetCap = -1, bool reachableOnly = false,
                                  std::size_t stateCap = kDefaultStateCap);

struct RhoResult {
    int degree = 1;
    double rho = 1.0;
    double argmaxX = 0.0;
    double tolerance = 0.0;
    bool gridFallback = false;  // set when the bracketing grid was not unimodal
};

/// Numeric supremum over x >= 0 of the degree-d reduced ratio with gamma = 1:
/// the approximation factor of the all-ones profile. The sup over degrees
/// k <= d is taken explicitly. Always <= d.
RhoResult rhoBound(int d, double tol);

/// Same supremum restricted to x >= tau * k, the regime a tau-congested game
/// confines its loads to. Always <= exp(1/tau).
RhoResult rhoBoundTau(int d, const Rational& tau, double tol);

}  // namespace wcg

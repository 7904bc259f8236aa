#pragma once

// Weight families on F_p (constants, polynomial and rational exponential
// phases, balanced indicators, random unit-modulus noise) and empirical
// profiling of how fast their degree-s correlation norm decays in p.

#include <cstdint>
#include <optional>
#include <vector>

#include "ffharm/ffcore.hpp"
#include "ffharm/fourier.hpp"
#include "ffharm/grid.hpp"

namespace ffharm {

enum class WeightKind {
    Constant,
    PolyPhase,          // y -> e_p(P(y))
    RationalPhase,      // y -> e_p(phi(y)) off the poles, 0 at poles
    BalancedIndicator,  // y -> 1_S(y) - |S|/p
    Random,             // seeded unit-modulus values
};

struct WeightSpec {
    WeightKind kind = WeightKind::Constant;
    Complex value{1.0, 0.0};                // Constant
    IntPolynomial poly;                     // PolyPhase
    std::optional<RationalFunction> phase;  // RationalPhase
    std::vector<Int> indices;               // BalancedIndicator, residues of S
    std::uint64_t seed = 0;                 // Random

    static WeightSpec constant(Complex value = Complex{1.0, 0.0});
    static WeightSpec poly_phase(IntPolynomial p);
    static WeightSpec rational_phase(RationalFunction phi);
    static WeightSpec balanced_indicator(std::vector<Int> s);
    static WeightSpec random(std::uint64_t seed);
};

// Instantiate a spec at a prime. Every output is 1-bounded; rational phases
// take the value 0 at poles of phi.
WeightFunction realize_weight(const WeightSpec& spec, const PrimeContext& ctx);

struct ProfileRow {
    Int p = 0;
    double value = 0.0;      // || theta - E theta ||_{u^s}
    bool exact_zero = false; // below 1e-12, excluded from the fit
};

// Per-prime norm of the mean-subtracted weight plus a least-squares power-law
// fit of value against p. slope_defined is false when fewer than two nonzero
// rows survive (e.g. a constant weight).
struct UniformityProfile {
    int s = 2;
    std::vector<ProfileRow> rows;  // sorted by p
    double fitted_slope = 0.0;
    double fitted_intercept = 0.0;
    bool slope_defined = false;
};

UniformityProfile uniformity_profile(const WeightSpec& spec, int s, std::vector<Int> primes,
                                     Int cap = kDefaultEnumerationCap);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    bool defined = false;
};

// Unweighted least squares of y against x for points (x, y) already in log
// scale. Undefined for fewer than two points or a degenerate x spread.
LogLogFit fit_log_log(const std::vector<std::pair<double, double>>& points);

}  // namespace ffharm

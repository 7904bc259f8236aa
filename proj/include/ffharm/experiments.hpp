#pragma once

// Prime-ladder campaigns: the exact-identity verification suite, decay scans
// of counting and averaging discrepancies, and the exhaustive configuration
// search inside indicator sets.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffharm/ffcore.hpp"
#include "ffharm/grid.hpp"
#include "ffharm/weights.hpp"

namespace ffharm {

// What a decay scan measures per prime and trial.
enum class DecayTarget {
    AverageL2,        // mean-square gap between the k-fold average and its structured term
    WeightedCount,    // |counting average - main term|, weight as given
    UnweightedCount,  // same with the weight forced to the constant 1
    RationalCount,    // counting through the rational substitution, poles excluded
};

std::string decay_target_name(DecayTarget target);
DecayTarget parse_decay_target(const std::string& name);  // ParseError on unknown

struct DecayRow {
    Int p = 0;
    int trials = 0;
    double max = 0.0;
    double mean = 0.0;
};

struct DecayReport {
    DecayTarget target = DecayTarget::WeightedCount;
    std::vector<DecayRow> rows;  // sorted by p
    double fitted_slope = 0.0;
    bool slope_defined = false;
    std::uint64_t seed = 0;
};

// Runs trials per prime on seeded random inputs: random unit-modulus
// functions for AverageL2, a single Bernoulli(density) indicator set filling
// every function slot for the counting targets. Fits log max against log p.
DecayReport scan_decay(DecayTarget target, const ConfigurationSystem& system,
                       const WeightSpec& weight, std::vector<Int> primes, int trials,
                       double density, std::uint64_t seed);

struct CheckResult {
    std::string name;
    double max_violation = 0.0;
    bool pass = false;
};

struct ExactSuiteReport {
    std::uint64_t seed = 0;
    std::vector<Int> primes;
    int trials = 0;
    std::vector<CheckResult> checks;
    double max_violation = 0.0;
    bool all_pass = false;
};

// Recomputes both sides of every exact identity and inequality the library
// relies on (Fourier inversion and Parseval, coset invariance of spectral
// moduli, correlation-norm enumeration against a direct transform, box norm
// against its collapsed closed form and its spectral bound, counting
// multilinearity, translation invariance, oracle agreement, the dual pairing
// identity, the Cauchy-Schwarz and base-case bounds, boundedness, and
// polynomial-substitution consistency) on seeded random inputs. A check
// passes when its worst violation stays at or below 1e-9.
ExactSuiteReport verify_exact_suite(std::uint64_t seed, const std::vector<Int>& primes,
                                    int trials_per_prime);

struct FoundConfiguration {
    Vec base;                 // x
    Int y = 0;                // progression parameter, a non-pole
    std::vector<Vec> points;  // x and the k shifted points, in slot order
    bool nontrivial = false;  // some shift is nonzero mod p
    bool all_distinct = false;
};

// First (x, y) in lexicographic order, poles skipped, whose full point set
// lies inside the indicator set and whose shifts are not all zero. Membership
// means a grid value with real part above 1/2.
std::optional<FoundConfiguration> find_configuration(const GridFunction& set,
                                                     const ConfigurationSystem& system,
                                                     const PrimeContext& ctx);

}  // namespace ffharm

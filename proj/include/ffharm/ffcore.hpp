#ifndef FFHARM_FFCORE_HPP
#define FFHARM_FFCORE_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffharm/errors.hpp"

namespace ffharm {

using Int = std::int64_t;
using Complex = std::complex<double>;

// Integer lattice vectors and points of F_p^D.
using Vec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;

bool is_prime(Int n) noexcept;

// Reduce into [0, p). Works for negative a.
inline Int mod_reduce(Int a, Int p) noexcept {
    Int r = a % p;
    return r < 0 ? r + p : r;
}

Int mod_inverse(Int a, Int p);  // a not divisible by p
Int mod_pow(Int base, Int exp, Int p) noexcept;

// The prime p together with the additive character table,
// char_table[x] = exp(2 pi i x / p).
struct PrimeContext {
    Int p = 0;
    Eigen::ArrayXcd char_table;

    const Complex& character(Int residue) const { return char_table[residue]; }
    Complex character_at(Int any) const { return char_table[mod_reduce(any, p)]; }
};

PrimeContext make_prime_context(Int p);

// Integer-coefficient univariate polynomial, ascending-degree storage with a
// nonzero trailing coefficient. The zero polynomial has no coefficients and
// degree -1.
class IntPolynomial {
   public:
    IntPolynomial() = default;
    IntPolynomial(std::initializer_list<Int> coeffs) : coeffs_(coeffs) { normalize(); }
    explicit IntPolynomial(std::vector<Int> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

    static IntPolynomial monomial(int degree, Int c = 1);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    Int coeff(int i) const noexcept {
        return (i >= 0 && i < static_cast<int>(coeffs_.size())) ? coeffs_[i] : 0;
    }
    Int constant_term() const noexcept { return coeff(0); }
    Int leading_coeff() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
    const std::vector<Int>& coeffs() const noexcept { return coeffs_; }

    // all coefficients divisible by p
    bool vanishes_mod(Int p) const noexcept;

    // q(y) = this(inner(y)), exact integer coefficients
    IntPolynomial compose(const IntPolynomial& inner) const;

    bool operator==(const IntPolynomial& other) const noexcept = default;

   private:
    void normalize() noexcept {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Int> coeffs_;
};

struct RationalFunction {
    IntPolynomial num;
    IntPolynomial den;

    RationalFunction(IntPolynomial n, IntPolynomial d) : num(std::move(n)), den(std::move(d)) {
        if (den.is_zero()) raise(Errc::InvalidSystem, "rational function with zero denominator");
    }
};

Int eval_poly(const IntPolynomial& poly, Int y, const PrimeContext& ctx) noexcept;

// num(y) * den(y)^{-1} mod p; nullopt marks a pole. Throws
// DegenerateDenominator when den vanishes identically mod p.
std::optional<Int> eval_rational(const RationalFunction& phi, Int y, const PrimeContext& ctx);

// Exact rank over the rationals of the coefficient matrix.
bool linearly_independent(const std::vector<IntPolynomial>& polys);

// The configuration data: directions v_i, polynomials P_i, and an optional
// rational reparameterization phi of the progression parameter.
struct ConfigurationSystem {
    int dimension = 1;  // D
    std::vector<Vec> vectors;
    std::vector<IntPolynomial> polys;
    std::optional<RationalFunction> phi;

    int count() const noexcept { return static_cast<int>(polys.size()); }
    int max_degree() const noexcept;  // d

    void validate() const;  // throws InvalidSystem / NonIndependentPolys
};

ConfigurationSystem make_configuration_system(int dimension, std::vector<Vec> vectors,
                                              std::vector<IntPolynomial> polys,
                                              std::optional<RationalFunction> phi = std::nullopt);

struct AdmissibilityReport {
    bool admissible = true;
    std::vector<std::string> reasons;
};

// Practical usability test of a system at a given prime: directions survive
// reduction, phi stays a genuine rational function mod p, p exceeds the degree
// bound, and no leading coefficient collapses.
AdmissibilityReport check_admissible(const ConfigurationSystem& system, const PrimeContext& ctx);

void require_admissible(const ConfigurationSystem& system, const PrimeContext& ctx);

// First coordinate where v is nonzero mod p; -1 when v vanishes mod p.
int pivot_index(const Vec& v, Int p) noexcept;

// x = coset_rep + line_coord * v (mod p), with coset_rep zero in the pivot
// coordinate. A bijection between F_p^D and (pivot-zero hyperplane) x F_p.
struct SpanDecomposition {
    Vec coset_rep;
    Int line_coord = 0;
    int pivot = 0;
};

SpanDecomposition span_decompose(const Vec& v, const Vec& x, const PrimeContext& ctx);

Vec reduce_vec(const Vec& v, Int p);

}  // namespace ffharm

#endif

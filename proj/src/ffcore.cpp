#include "ffharm/ffcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ffharm {

bool is_prime(Int n) noexcept {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (Int d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

Int mod_pow(Int base, Int exp, Int p) noexcept {
    Int acc = 1 % p;
    Int b = mod_reduce(base, p);
    while (exp > 0) {
        if (exp & 1) acc = acc * b % p;
        b = b * b % p;
        exp >>= 1;
    }
    return acc;
}

Int mod_inverse(Int a, Int p) {
    a = mod_reduce(a, p);
    if (a == 0) raise(Errc::NumericalCheck, "inverse of zero residue");
    // extended Euclid
    Int r0 = p, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        const Int q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        s0 -= q * s1;
        std::swap(s0, s1);
    }
    return mod_reduce(s0, p);
}

PrimeContext make_prime_context(Int p) {
    if (!is_prime(p)) raise(Errc::NotPrime, std::to_string(p) + " is not prime");
    PrimeContext ctx;
    ctx.p = p;
    ctx.char_table.resize(p);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(p);
    for (Int x = 0; x < p; ++x) {
        const double phase = step * static_cast<double>(x);
        ctx.char_table[x] = Complex(std::cos(phase), std::sin(phase));
    }
    return ctx;
}

IntPolynomial IntPolynomial::monomial(int degree, Int c) {
    std::vector<Int> coeffs(static_cast<std::size_t>(degree) + 1, 0);
    coeffs.back() = c;
    return IntPolynomial(std::move(coeffs));
}

bool IntPolynomial::vanishes_mod(Int p) const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [p](Int c) { return c % p == 0; });
}

IntPolynomial IntPolynomial::compose(const IntPolynomial& inner) const {
    // Horner over polynomial arithmetic
    IntPolynomial acc;
    for (int i = degree(); i >= 0; --i) {
        std::vector<Int> next(static_cast<std::size_t>(std::max(acc.degree() + inner.degree(), 0)) + 1, 0);
        for (int a = 0; a <= acc.degree(); ++a) {
            if (acc.coeff(a) == 0) continue;
            for (int b = 0; b <= inner.degree(); ++b)
                next[static_cast<std::size_t>(a + b)] += acc.coeff(a) * inner.coeff(b);
        }
        next[0] += coeff(i);
        acc = IntPolynomial(std::move(next));
    }
    return acc;
}

Int eval_poly(const IntPolynomial& poly, Int y, const PrimeContext& ctx) noexcept {
    const Int p = ctx.p;
    const Int yr = mod_reduce(y, p);
    Int acc = 0;
    for (int i = poly.degree(); i >= 0; --i) acc = (acc * yr + mod_reduce(poly.coeff(i), p)) % p;
    return acc;
}

std::optional<Int> eval_rational(const RationalFunction& phi, Int y, const PrimeContext& ctx) {
    if (phi.den.vanishes_mod(ctx.p))
        raise(Errc::DegenerateDenominator, "denominator vanishes identically mod " + std::to_string(ctx.p));
    const Int den = eval_poly(phi.den, y, ctx);
    if (den == 0) return std::nullopt;
    const Int num = eval_poly(phi.num, y, ctx);
    return num * mod_inverse(den, ctx.p) % ctx.p;
}

namespace {

// Fraction-free (Bareiss) rank of a small integer matrix. Intermediate values
// stay integral; __int128 covers the growth at the sizes we handle.
int exact_rank(std::vector<std::vector<__int128>> m) {
    const int rows = static_cast<int>(m.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(m[0].size());
    int rank = 0;
    __int128 prev = 1;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int r = rank + 1; r < rows; ++r) {
            for (int c = col + 1; c < cols; ++c)
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            m[r][col] = 0;
        }
        prev = m[rank][col];
        ++rank;
    }
    return rank;
}

}  // namespace

bool linearly_independent(const std::vector<IntPolynomial>& polys) {
    if (polys.empty()) return true;
    int maxdeg = 0;
    for (const auto& poly : polys) maxdeg = std::max(maxdeg, poly.degree());
    if (maxdeg < 0) return false;  // a zero polynomial is present
    std::vector<std::vector<__int128>> m;
    m.reserve(polys.size());
    for (const auto& poly : polys) {
        if (poly.is_zero()) return false;
        std::vector<__int128> row(static_cast<std::size_t>(maxdeg) + 1, 0);
        for (int i = 0; i <= poly.degree(); ++i) row[static_cast<std::size_t>(i)] = poly.coeff(i);
        m.push_back(std::move(row));
    }
    return exact_rank(std::move(m)) == static_cast<int>(polys.size());
}

int ConfigurationSystem::max_degree() const noexcept {
    int d = 0;
    for (const auto& poly : polys) d = std::max(d, poly.degree());
    return d;
}

void ConfigurationSystem::validate() const {
    if (dimension < 1) raise(Errc::InvalidSystem, "dimension must be positive");
    if (polys.empty()) raise(Errc::InvalidSystem, "empty polynomial collection");
    if (vectors.size() != polys.size())
        raise(Errc::InvalidSystem, "vector and polynomial counts differ");
    for (const auto& v : vectors) {
        if (v.size() != dimension) raise(Errc::InvalidSystem, "direction vector of wrong dimension");
        if (v.isZero()) raise(Errc::InvalidSystem, "zero direction vector");
    }
    for (const auto& poly : polys) {
        if (poly.is_zero()) raise(Errc::NonIndependentPolys, "zero polynomial in collection");
        if (poly.constant_term() != 0)
            raise(Errc::InvalidSystem, "polynomial with nonzero constant term");
    }
    if (!linearly_independent(polys))
        raise(Errc::NonIndependentPolys, "polynomials are linearly dependent");
    if (max_degree() < 1) raise(Errc::InvalidSystem, "maximum degree must be at least 1");
    if (phi && phi->num.is_zero()) raise(Errc::InvalidSystem, "phi is the zero rational function");
}

ConfigurationSystem make_configuration_system(int dimension, std::vector<Vec> vectors,
                                              std::vector<IntPolynomial> polys,
                                              std::optional<RationalFunction> phi) {
    ConfigurationSystem system;
    system.dimension = dimension;
    system.vectors = std::move(vectors);
    system.polys = std::move(polys);
    system.phi = std::move(phi);
    system.validate();
    return system;
}

AdmissibilityReport check_admissible(const ConfigurationSystem& system, const PrimeContext& ctx) {
    AdmissibilityReport report;
    const Int p = ctx.p;
    auto fail = [&report](const std::string& reason) {
        report.admissible = false;
        report.reasons.push_back(reason);
    };

    for (std::size_t i = 0; i < system.vectors.size(); ++i) {
        if (pivot_index(system.vectors[i], p) < 0)
            fail("vector v_" + std::to_string(i + 1) + " vanishes mod p");
    }
    for (std::size_t i = 0; i < system.polys.size(); ++i) {
        if (system.polys[i].leading_coeff() % p == 0)
            fail("leading coefficient of P_" + std::to_string(i + 1) + " divisible by p");
    }
    if (p <= system.max_degree()) fail("p too small for degree bound");
    if (system.phi) {
        if (system.phi->den.vanishes_mod(p)) fail("phi denominator identically zero mod p");
        if (system.phi->num.vanishes_mod(p)) fail("phi numerator identically zero mod p");
        if (system.phi->num.leading_coeff() % p == 0 && !system.phi->num.vanishes_mod(p))
            fail("leading coefficient of phi numerator divisible by p");
        if (system.phi->den.leading_coeff() % p == 0 && !system.phi->den.vanishes_mod(p))
            fail("leading coefficient of phi denominator divisible by p");
    }
    return report;
}

void require_admissible(const ConfigurationSystem& system, const PrimeContext& ctx) {
    const AdmissibilityReport report = check_admissible(system, ctx);
    if (report.admissible) return;
    std::ostringstream os;
    os << "system inadmissible at p=" << ctx.p << ":";
    for (const auto& reason : report.reasons) os << " [" << reason << "]";
    raise(Errc::Inadmissible, os.str());
}

int pivot_index(const Vec& v, Int p) noexcept {
    for (int i = 0; i < v.size(); ++i)
        if (mod_reduce(v[i], p) != 0) return i;
    return -1;
}

Vec reduce_vec(const Vec& v, Int p) {
    Vec r(v.size());
    for (int i = 0; i < v.size(); ++i) r[i] = mod_reduce(v[i], p);
    return r;
}

SpanDecomposition span_decompose(const Vec& v, const Vec& x, const PrimeContext& ctx) {
    const Int p = ctx.p;
    const int pivot = pivot_index(v, p);
    if (pivot < 0) raise(Errc::ZeroDirection, "direction vanishes mod " + std::to_string(p));

    SpanDecomposition out;
    out.pivot = pivot;
    const Int t = mod_reduce(x[pivot], p) * mod_inverse(v[pivot], p) % p;
    out.line_coord = t;
    out.coset_rep.resize(x.size());
    for (int i = 0; i < x.size(); ++i)
        out.coset_rep[i] = mod_reduce(x[i] - t * mod_reduce(v[i], p), p);
    return out;
}

}  // namespace ffharm

#ifndef FFHARM_FOURIER_HPP
#define FFHARM_FOURIER_HPP

#include <vector>

#include "ffharm/grid.hpp"

namespace ffharm {

// sup over polynomial phase enumeration stops here (effective phase count).
inline constexpr Int kDefaultEnumerationCap = 1'000'000;

// f_hat(x; v; xi) = E_n f(x + n v) e_p(-n xi)
Complex directional_fourier(const GridFunction& f, const Vec& x, const Vec& v, Int xi,
                            const PrimeContext& ctx);

// Full table of directional Fourier coefficients, one row per coset of <v>
// (represented by its pivot-zero point), one column per frequency.
struct DirectionalSpectrum {
    Int p = 0;
    int dims = 1;
    Vec direction;
    int pivot = 0;
    std::vector<Int> coset_reps;  // encoded, lexicographic
    Eigen::MatrixXcd table;       // coset_reps.size() x p

    // row index of the coset containing x
    Int coset_index_of(const Vec& x, const PrimeContext& ctx) const;
};

DirectionalSpectrum directional_spectrum(const GridFunction& f, const Vec& v,
                                         const PrimeContext& ctx);

// sup_xi E_x |f_hat(x; v; xi)|^2, the right side of the box-norm inverse bound.
double max_directional_energy(const GridFunction& f, const Vec& v, const PrimeContext& ctx);

// sup over polynomial phases P, deg P <= s-1, of |E_y theta(y) e_p(-P(y))|.
// The constant coefficient only rotates the correlation, so enumeration runs
// over the p^{s-1} remaining coefficient tuples.
double u_norm(const WeightFunction& theta, int s, const PrimeContext& ctx,
              Int cap = kDefaultEnumerationCap);

// f(x) * conj(f(x + h))
GridFunction mult_derivative(const GridFunction& f, const Vec& h);

struct Subspace {
    std::vector<Vec> generators;

    static Subspace full_space(int dims);
    static Subspace line(Vec v);
};

// All p^r elements of the span of the generators mod p (r = rank of the
// reduced basis). Throws ZeroDirection when the span is {0}.
std::vector<Vec> enumerate_subspace(const Subspace& subspace, Int p, int dims);

// Gowers box norm along a tuple of subspaces: the 2^s-fold average of the
// iterated multiplicative derivative, then the 2^s-th root. The inner average
// must come out real and nonnegative up to roundoff; it is clamped at zero
// after that check.
double box_norm(const GridFunction& f, const std::vector<Subspace>& subspaces,
                const PrimeContext& ctx);

// box norm along (whole space, <v>)
double box_norm_v(const GridFunction& f, const Vec& v, const PrimeContext& ctx);

}  // namespace ffharm

#endif

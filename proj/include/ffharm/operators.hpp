#pragma once

// Multilinear averaging along polynomial orbits, the associated dual
// function, weighted counting averages, and the L2 discrepancy against
// the fully structured term.

#include <vector>

#include "ffharm/ffcore.hpp"
#include "ffharm/grid.hpp"

namespace ffharm {

// Frequencies xi_{l+1..k} attached to the phase-only slots of a partially
// linearized average. Empty when every slot carries a function.
using FrequencyVector = std::vector<Int>;

// Cost guard for dual_function, measured in p^(D+2) elementary terms.
// The default admits p <= 61 on two-dimensional grids.
inline constexpr Int kDefaultDualBudget = 14'000'000;

// x -> E_y theta(y) prod_{i<=l} f_i(x + P_i(y) v_i) prod_{i>l} e_p(P_i(y) xi_i)
// with l = fs.size(). Requires 1 <= l <= k and freqs.size() == k - l.
GridFunction averaging_operator(const WeightFunction& theta,
                                const std::vector<GridFunction>& fs,
                                const FrequencyVector& freqs,
                                const ConfigurationSystem& system,
                                const PrimeContext& ctx);

// The double average over (y, y') pairing each orbit point against a
// reference orbit shifted to the l-th direction. Direct summation; the
// (y, y') loop runs sequentially for every grid point.
GridFunction dual_function(const WeightFunction& theta,
                           const std::vector<GridFunction>& fs,
                           const FrequencyVector& freqs,
                           const ConfigurationSystem& system,
                           const PrimeContext& ctx,
                           Int budget = kDefaultDualBudget);

// E_x E_y theta(y) f_0(x) prod_i f_i(x + P_i(a(y)) v_i) where fs lists
// f_0..f_k. With exclude_poles false, a(y) = y. With exclude_poles true,
// a(y) = phi(y) and the y-average runs over the non-poles only, divided
// by their count.
Complex counting_operator(const WeightFunction& theta,
                          const std::vector<GridFunction>& fs,
                          const ConfigurationSystem& system,
                          const PrimeContext& ctx,
                          bool exclude_poles = false);

// Same value as counting_operator, computed by plain nested loops with no
// shift tables, no shared summation helpers, and no parallelism. Ground
// truth for cross-checks.
Complex counting_operator_naive(const WeightFunction& theta,
                                const std::vector<GridFunction>& fs,
                                const ConfigurationSystem& system,
                                const PrimeContext& ctx,
                                bool exclude_poles = false);

// E_y theta(y) times E_x f_0(x) prod_i (E_n f_i(x + n v_i)), the value the
// counting average converges to for uniform weights. fs lists f_0..f_k.
Complex main_term(const WeightFunction& theta,
                  const std::vector<GridFunction>& fs,
                  const ConfigurationSystem& system,
                  const PrimeContext& ctx);

// E_x |G(x) - E_y theta(y) prod_i (E_n f_i(x + n v_i))|^2 where G is the
// fully functional average (l = k). fs lists f_1..f_k.
double l2_discrepancy(const WeightFunction& theta,
                      const std::vector<GridFunction>& fs,
                      const ConfigurationSystem& system,
                      const PrimeContext& ctx);

// x -> E_n f(x + n v). Constant on cosets of the line spanned by v.
GridFunction line_average(const GridFunction& f, const Vec& v, const PrimeContext& ctx);

}  // namespace ffharm

#include "ffharm/operators.hpp"

#include <cmath>
#include <memory>

#include "ffharm/parallel.hpp"
#include "ffharm/reduce.hpp"

namespace ffharm {

namespace {

void check_domains(const WeightFunction& theta, const std::vector<GridFunction>& fs,
                   const ConfigurationSystem& system, const PrimeContext& ctx) {
    require_admissible(system, ctx);
    if (theta.p != ctx.p) raise(Errc::InvalidSystem, "weight and context disagree on p");
    for (const auto& f : fs) {
        if (f.p != ctx.p) raise(Errc::InvalidSystem, "grid and context disagree on p");
        if (f.dims != system.dimension)
            raise(Errc::InvalidSystem, "grid dimension does not match the system");
    }
}

// P_i(y) mod p for i in [0, k), y in [0, p), flattened as values[i*p + y].
std::vector<Int> poly_value_table(const ConfigurationSystem& system, const PrimeContext& ctx) {
    const Int p = ctx.p;
    const int k = system.count();
    std::vector<Int> values(static_cast<std::size_t>(k) * static_cast<std::size_t>(p));
    for (int i = 0; i < k; ++i)
        for (Int y = 0; y < p; ++y)
            values[static_cast<std::size_t>(i) * p + y] = eval_poly(system.polys[i], y, ctx);
    return values;
}

// theta(y) * prod_{i>l} e_p(P_i(y) xi_i), the per-y scalar factor common to
// the averaging operator and (after conjugation at y') the dual function.
std::vector<Complex> phase_weights(const WeightFunction& theta, const FrequencyVector& freqs,
                                   std::size_t l, const std::vector<Int>& pvals,
                                   const PrimeContext& ctx) {
    const Int p = ctx.p;
    std::vector<Complex> w(static_cast<std::size_t>(p));
    for (Int y = 0; y < p; ++y) {
        Complex c = theta.values[y];
        for (std::size_t j = 0; j < freqs.size(); ++j) {
            const Int pv = pvals[(l + j) * static_cast<std::size_t>(p) + y];
            c *= ctx.character(mod_reduce(pv * freqs[j], p));
        }
        w[static_cast<std::size_t>(y)] = c;
    }
    return w;
}

std::vector<ShiftTable> direction_tables(const ConfigurationSystem& system, std::size_t count,
                                         const PrimeContext& ctx) {
    std::vector<ShiftTable> tables;
    tables.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        tables.emplace_back(system.vectors[i], ctx.p, system.dimension);
    return tables;
}

constexpr Int kChunk = 2048;  // grid points per parallel task

}  // namespace

GridFunction averaging_operator(const WeightFunction& theta, const std::vector<GridFunction>& fs,
                                const FrequencyVector& freqs, const ConfigurationSystem& system,
                                const PrimeContext& ctx) {
    check_domains(theta, fs, system, ctx);
    const std::size_t l = fs.size();
    const std::size_t k = static_cast<std::size_t>(system.count());
    if (l < 1 || l > k || freqs.size() != k - l)
        raise(Errc::ArityMismatch, "need 1 <= |fs| <= k functions and k - |fs| frequencies");

    const Int p = ctx.p;
    const Int n = grid_size(p, system.dimension);
    const auto pvals = poly_value_table(system, ctx);
    const auto w = phase_weights(theta, freqs, l, pvals, ctx);
    const auto tables = direction_tables(system, l, ctx);

    GridFunction out = GridFunction::zeros(p, system.dimension);
    Complex* acc = out.values.data();
    const Int chunks = (n + kChunk - 1) / kChunk;
    parallel_tasks(chunks, [&](Int c) {
        const Int lo = c * kChunk;
        const Int hi = std::min(n, lo + kChunk);
        std::vector<const std::int32_t*> perm(l);
        for (Int y = 0; y < p; ++y) {
            const Complex wy = w[static_cast<std::size_t>(y)];
            if (wy == Complex{0.0, 0.0}) continue;
            for (std::size_t i = 0; i < l; ++i)
                perm[i] = tables[i].perm(pvals[i * static_cast<std::size_t>(p) + y]).data();
            for (Int x = lo; x < hi; ++x) {
                Complex prod = wy;
                for (std::size_t i = 0; i < l; ++i) prod *= fs[i].values[perm[i][x]];
                acc[x] += prod;
            }
        }
        for (Int x = lo; x < hi; ++x) acc[x] /= static_cast<double>(p);
    });
    out.bounded = false;
    return out;
}

GridFunction dual_function(const WeightFunction& theta, const std::vector<GridFunction>& fs,
                           const FrequencyVector& freqs, const ConfigurationSystem& system,
                           const PrimeContext& ctx, Int budget) {
    check_domains(theta, fs, system, ctx);
    const std::size_t l = fs.size();
    const std::size_t k = static_cast<std::size_t>(system.count());
    if (l < 1 || l > k || freqs.size() != k - l)
        raise(Errc::ArityMismatch, "need 1 <= |fs| <= k functions and k - |fs| frequencies");

    const Int p = ctx.p;
    const Int n = grid_size(p, system.dimension);
    if (static_cast<double>(n) * static_cast<double>(p) * static_cast<double>(p) >
        static_cast<double>(budget))
        raise(Errc::BudgetExceeded, "dual function cost p^(D+2) exceeds the budget");

    const auto pvals = poly_value_table(system, ctx);
    const auto w = phase_weights(theta, freqs, l, pvals, ctx);
    const auto tables = direction_tables(system, l, ctx);
    const auto pv = [&](std::size_t i, Int y) { return pvals[i * static_cast<std::size_t>(p) + y]; };

    GridFunction out = GridFunction::zeros(p, system.dimension);
    Complex* acc = out.values.data();
    const Int chunks = (n + kChunk - 1) / kChunk;
    parallel_tasks(chunks, [&](Int c) {
        const Int lo = c * kChunk;
        const Int hi = std::min(n, lo + kChunk);
        // per (y', y): shift by P_i(.) v_i then by -P_l(y') v_l
        std::vector<const std::int32_t*> fwd(l);
        std::vector<const std::int32_t*> perm(l);
        for (Int yp = 0; yp < p; ++yp) {
            const Complex wyp = std::conj(w[static_cast<std::size_t>(yp)]);
            if (wyp == Complex{0.0, 0.0}) continue;
            const std::int32_t* back = tables[l - 1].perm((p - pv(l - 1, yp)) % p).data();
            for (std::size_t i = 0; i + 1 < l; ++i) fwd[i] = tables[i].perm(pv(i, yp)).data();
            for (Int y = 0; y < p; ++y) {
                const Complex wy = w[static_cast<std::size_t>(y)];
                if (wy == Complex{0.0, 0.0}) continue;
                for (std::size_t i = 0; i + 1 < l; ++i) perm[i] = tables[i].perm(pv(i, y)).data();
                const std::int32_t* last =
                    tables[l - 1].perm(mod_reduce(pv(l - 1, y) - pv(l - 1, yp), p)).data();
                const Complex pair_weight = wy * wyp;
                for (Int x = lo; x < hi; ++x) {
                    const Int shifted_x = back[x];
                    Complex prod = pair_weight;
                    for (std::size_t i = 0; i + 1 < l; ++i) {
                        prod *= fs[i].values[perm[i][shifted_x]];
                        prod *= std::conj(fs[i].values[fwd[i][shifted_x]]);
                    }
                    prod *= fs[l - 1].values[last[x]];
                    acc[x] += prod;
                }
            }
        }
        const double norm = static_cast<double>(p) * static_cast<double>(p);
        for (Int x = lo; x < hi; ++x) acc[x] /= norm;
    });
    out.bounded = false;
    return out;
}

namespace {

// Substituted progression parameters: a(y) = y, or phi(y) skipping poles.
struct ParameterTrack {
    std::vector<Int> value;   // a(y) for the retained y
    std::vector<Int> ys;      // the retained y themselves
};

ParameterTrack parameter_track(const ConfigurationSystem& system, const PrimeContext& ctx,
                               bool exclude_poles) {
    ParameterTrack track;
    const Int p = ctx.p;
    if (!exclude_poles) {
        for (Int y = 0; y < p; ++y) {
            track.value.push_back(y);
            track.ys.push_back(y);
        }
        return track;
    }
    if (!system.phi) raise(Errc::MissingPhi, "pole-excluding mode needs a rational substitution");
    for (Int y = 0; y < p; ++y) {
        const auto a = eval_rational(*system.phi, y, ctx);
        if (!a) continue;
        track.value.push_back(*a);
        track.ys.push_back(y);
    }
    return track;
}

}  // namespace

Complex counting_operator(const WeightFunction& theta, const std::vector<GridFunction>& fs,
                          const ConfigurationSystem& system, const PrimeContext& ctx,
                          bool exclude_poles) {
    check_domains(theta, fs, system, ctx);
    const int k = system.count();
    if (static_cast<int>(fs.size()) != k + 1)
        raise(Errc::ArityMismatch, "counting average needs k + 1 functions");

    const Int p = ctx.p;
    const Int n = grid_size(p, system.dimension);
    const auto track = parameter_track(system, ctx, exclude_poles);
    const Int terms = static_cast<Int>(track.ys.size());
    const auto tables = direction_tables(system, static_cast<std::size_t>(k), ctx);

    std::vector<Complex> slot(static_cast<std::size_t>(terms));
    parallel_tasks(terms, [&](Int t) {
        std::vector<const std::int32_t*> perm(static_cast<std::size_t>(k));
        const Int a = track.value[static_cast<std::size_t>(t)];
        for (int i = 0; i < k; ++i)
            perm[static_cast<std::size_t>(i)] = tables[static_cast<std::size_t>(i)]
                                                    .perm(eval_poly(system.polys[static_cast<std::size_t>(i)], a, ctx))
                                                    .data();
        const Complex x_avg = tree_sum(n, [&](Int x) {
                                  Complex prod = fs[0].values[x];
                                  for (int i = 0; i < k; ++i)
                                      prod *= fs[static_cast<std::size_t>(i) + 1]
                                                  .values[perm[static_cast<std::size_t>(i)][x]];
                                  return prod;
                              }) /
                              static_cast<double>(n);
        slot[static_cast<std::size_t>(t)] = theta.values[track.ys[static_cast<std::size_t>(t)]] * x_avg;
    });
    return tree_sum(slot.data(), terms) / static_cast<double>(terms);
}

Complex counting_operator_naive(const WeightFunction& theta, const std::vector<GridFunction>& fs,
                                const ConfigurationSystem& system, const PrimeContext& ctx,
                                bool exclude_poles) {
    check_domains(theta, fs, system, ctx);
    const int k = system.count();
    if (static_cast<int>(fs.size()) != k + 1)
        raise(Errc::ArityMismatch, "counting average needs k + 1 functions");
    if (exclude_poles && !system.phi)
        raise(Errc::MissingPhi, "pole-excluding mode needs a rational substitution");

    const Int p = ctx.p;
    const int D = system.dimension;
    Complex total{0.0, 0.0};
    Int y_count = 0;
    for (Int y = 0; y < p; ++y) {
        Int a = y;
        if (exclude_poles) {
            // evaluate phi(y) from scratch, skipping poles
            Int num = 0, den = 0;
            for (int j = system.phi->num.degree(); j >= 0; --j)
                num = mod_reduce(num * y + system.phi->num.coeff(j), p);
            for (int j = system.phi->den.degree(); j >= 0; --j)
                den = mod_reduce(den * y + system.phi->den.coeff(j), p);
            if (den == 0) continue;
            a = num * mod_pow(den, p - 2, p) % p;
        }
        ++y_count;
        Complex x_total{0.0, 0.0};
        Vec x = Vec::Zero(D);
        for (Int e = 0; e < grid_size(p, D); ++e) {
            Complex prod = fs[0].at(x);
            for (int i = 0; i < k; ++i) {
                Int pa = 0;
                for (int j = system.polys[static_cast<std::size_t>(i)].degree(); j >= 0; --j)
                    pa = mod_reduce(pa * a + system.polys[static_cast<std::size_t>(i)].coeff(j), p);
                Vec pt(D);
                for (int c = 0; c < D; ++c)
                    pt[c] = mod_reduce(x[c] + pa * system.vectors[static_cast<std::size_t>(i)][c], p);
                prod *= fs[static_cast<std::size_t>(i) + 1].at(pt);
            }
            x_total += prod;
            for (int c = D - 1; c >= 0; --c) {
                if (++x[c] < p) break;
                x[c] = 0;
            }
        }
        total += theta.values[y] * (x_total / static_cast<double>(grid_size(p, D)));
    }
    return total / static_cast<double>(y_count);
}

GridFunction line_average(const GridFunction& f, const Vec& v, const PrimeContext& ctx) {
    if (f.p != ctx.p) raise(Errc::InvalidSystem, "grid and context disagree on p");
    if (pivot_index(v, ctx.p) < 0) raise(Errc::ZeroDirection, "direction vanishes mod p");
    const Int p = ctx.p;
    const Int n = f.size();
    const ShiftTable shifts(v, p, f.dims);

    GridFunction out = GridFunction::zeros(p, f.dims);
    for (Int m = 0; m < p; ++m) {
        const std::int32_t* perm = shifts.perm(m).data();
        for (Int x = 0; x < n; ++x) out.values[x] += f.values[perm[x]];
    }
    out.values /= static_cast<double>(p);
    out.bounded = f.bounded;
    return out;
}

namespace {

// prod_i E_n f_i(x + n v_i) as a grid, shared by main_term and l2_discrepancy.
// fs here lists f_1..f_k only.
Eigen::ArrayXcd structured_product(const std::vector<GridFunction>& fs,
                                   const ConfigurationSystem& system, const PrimeContext& ctx) {
    const Int n = grid_size(ctx.p, system.dimension);
    Eigen::ArrayXcd prod = Eigen::ArrayXcd::Constant(n, Complex{1.0, 0.0});
    for (std::size_t i = 0; i < fs.size(); ++i)
        prod *= line_average(fs[i], system.vectors[i], ctx).values;
    return prod;
}

}  // namespace

Complex main_term(const WeightFunction& theta, const std::vector<GridFunction>& fs,
                  const ConfigurationSystem& system, const PrimeContext& ctx) {
    check_domains(theta, fs, system, ctx);
    const int k = system.count();
    if (static_cast<int>(fs.size()) != k + 1)
        raise(Errc::ArityMismatch, "main term needs k + 1 functions");

    const Int n = grid_size(ctx.p, system.dimension);
    const Eigen::ArrayXcd lines =
        structured_product({fs.begin() + 1, fs.end()}, system, ctx);
    const Complex x_avg =
        tree_sum(n, [&](Int x) { return fs[0].values[x] * lines[x]; }) / static_cast<double>(n);
    return theta.mean() * x_avg;
}

double l2_discrepancy(const WeightFunction& theta, const std::vector<GridFunction>& fs,
                      const ConfigurationSystem& system, const PrimeContext& ctx) {
    check_domains(theta, fs, system, ctx);
    const int k = system.count();
    if (static_cast<int>(fs.size()) != k)
        raise(Errc::ArityMismatch, "discrepancy needs exactly k functions");

    const GridFunction avg = averaging_operator(theta, fs, {}, system, ctx);
    const Eigen::ArrayXcd lines = structured_product(fs, system, ctx);
    const Complex theta_mean = theta.mean();
    const Int n = avg.size();
    return tree_sum_real(n, [&](Int x) { return std::norm(avg.values[x] - theta_mean * lines[x]); }) /
           static_cast<double>(n);
}

}  // namespace ffharm

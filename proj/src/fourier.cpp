#include "ffharm/fourier.hpp"

#include <cmath>

#include "ffharm/parallel.hpp"
#include "ffharm/reduce.hpp"

namespace ffharm {

namespace {

void require_same_domain(const GridFunction& f, const PrimeContext& ctx) {
    if (f.p != ctx.p) raise(Errc::InvalidSystem, "grid and context disagree on p");
}

}  // namespace

Complex directional_fourier(const GridFunction& f, const Vec& x, const Vec& v, Int xi,
                            const PrimeContext& ctx) {
    require_same_domain(f, ctx);
    const Int p = ctx.p;
    if (pivot_index(v, p) < 0) raise(Errc::ZeroDirection, "direction vanishes mod p");
    xi = mod_reduce(xi, p);

    Vec point = reduce_vec(x, p);
    const Vec vr = reduce_vec(v, p);
    Complex acc{0.0, 0.0};
    for (Int n = 0; n < p; ++n) {
        const Complex character = ctx.character(n * xi % p);  // e_p(n xi)
        acc += f.values[encode_point(point, p)] * std::conj(character);
        for (int i = 0; i < point.size(); ++i) point[i] = (point[i] + vr[i]) % p;
    }
    return acc / static_cast<double>(p);
}

DirectionalSpectrum directional_spectrum(const GridFunction& f, const Vec& v,
                                         const PrimeContext& ctx) {
    require_same_domain(f, ctx);
    const Int p = ctx.p;
    const int dims = f.dims;
    const int pivot = pivot_index(v, p);
    if (pivot < 0) raise(Errc::ZeroDirection, "direction vanishes mod p");

    DirectionalSpectrum spec;
    spec.p = p;
    spec.dims = dims;
    spec.direction = reduce_vec(v, p);
    spec.pivot = pivot;

    const Int reps = grid_size(p, dims) / p;
    spec.coset_reps.reserve(static_cast<std::size_t>(reps));
    spec.table.resize(reps, p);

    const ShiftTable shifts(spec.direction, p, dims);
    std::vector<Complex> line(static_cast<std::size_t>(p));

    // reps are the points with zero pivot coordinate, in lexicographic order
    Vec x = Vec::Zero(dims);
    for (Int r = 0; r < reps; ++r) {
        const Int base = encode_point(x, p);
        spec.coset_reps.push_back(base);
        for (Int n = 0; n < p; ++n)
            line[static_cast<std::size_t>(n)] = f.values[shifts.perm(n)[base]];
        for (Int xi = 0; xi < p; ++xi) {
            Complex acc{0.0, 0.0};
            for (Int n = 0; n < p; ++n)
                acc += line[static_cast<std::size_t>(n)] * std::conj(ctx.character(n * xi % p));
            spec.table(r, xi) = acc / static_cast<double>(p);
        }
        // odometer over the non-pivot coordinates
        for (int i = dims - 1; i >= 0; --i) {
            if (i == pivot) continue;
            if (++x[i] < p) break;
            x[i] = 0;
        }
    }
    return spec;
}

Int DirectionalSpectrum::coset_index_of(const Vec& x, const PrimeContext& ctx) const {
    const SpanDecomposition dec = span_decompose(direction, x, ctx);
    Int rank = 0;
    for (int i = 0; i < dims; ++i) {
        if (i == pivot) continue;
        rank = rank * p + dec.coset_rep[i];
    }
    return rank;
}

double max_directional_energy(const GridFunction& f, const Vec& v, const PrimeContext& ctx) {
    const DirectionalSpectrum spec = directional_spectrum(f, v, ctx);
    const Int reps = static_cast<Int>(spec.coset_reps.size());
    double best = 0.0;
    for (Int xi = 0; xi < spec.p; ++xi) {
        const double energy = tree_sum_real(reps, [&](Int r) { return std::norm(spec.table(r, xi)); }) /
                              static_cast<double>(reps);
        best = std::max(best, energy);
    }
    return best;
}

double u_norm(const WeightFunction& theta, int s, const PrimeContext& ctx, Int cap) {
    if (theta.p != ctx.p) raise(Errc::InvalidSystem, "weight and context disagree on p");
    if (s < 1 || s - 1 > 4) raise(Errc::BudgetExceeded, "phase degree outside enumeration budget");
    const Int p = ctx.p;

    Int effective = 1;
    for (int j = 1; j < s; ++j) {
        effective *= p;
        if (effective > cap) raise(Errc::BudgetExceeded, "phase enumeration exceeds cap");
    }

    const Complex* th = theta.values.data();
    if (s == 1) {
        Complex acc{0.0, 0.0};
        for (Int y = 0; y < p; ++y) acc += th[y];
        return std::abs(acc) / static_cast<double>(p);
    }

    // powers[y][j] = y^{j+2} mod p for the coefficients a_2..a_{s-1}
    const int high = s - 2;  // number of coefficients beyond the linear one
    std::vector<Int> powers(static_cast<std::size_t>(p) * static_cast<std::size_t>(std::max(high, 1)));
    if (high > 0) {
        for (Int y = 0; y < p; ++y) {
            Int pw = y * y % p;
            for (int j = 0; j < high; ++j) {
                powers[static_cast<std::size_t>(y) * high + static_cast<std::size_t>(j)] = pw;
                pw = pw * y % p;
            }
        }
    }

    std::vector<Int> digits(static_cast<std::size_t>(std::max(high, 1)), 0);
    std::vector<Complex> twisted(static_cast<std::size_t>(p));
    double best = 0.0;
    for (;;) {
        // g(y) = theta(y) e_p(-(a_2 y^2 + ... + a_{s-1} y^{s-1}))
        for (Int y = 0; y < p; ++y) {
            Int phase = 0;
            for (int j = 0; j < high; ++j)
                phase = (phase + digits[static_cast<std::size_t>(j)] *
                                     powers[static_cast<std::size_t>(y) * high + static_cast<std::size_t>(j)]) % p;
            twisted[static_cast<std::size_t>(y)] = th[y] * std::conj(ctx.character(phase));
        }
        // linear sweep: max over a_1 of |E_y g(y) e_p(-a_1 y)|
        for (Int a1 = 0; a1 < p; ++a1) {
            Complex acc{0.0, 0.0};
            for (Int y = 0; y < p; ++y)
                acc += twisted[static_cast<std::size_t>(y)] * std::conj(ctx.character(a1 * y % p));
            best = std::max(best, std::abs(acc) / static_cast<double>(p));
        }
        if (high == 0) break;
        int j = 0;
        while (j < high && ++digits[static_cast<std::size_t>(j)] == p) {
            digits[static_cast<std::size_t>(j)] = 0;
            ++j;
        }
        if (j == high) break;
    }
    return best;
}

GridFunction mult_derivative(const GridFunction& f, const Vec& h) {
    const auto perm = shift_permutation(h, f.p, f.dims);
    GridFunction g;
    g.p = f.p;
    g.dims = f.dims;
    g.bounded = f.bounded;
    g.values.resize(f.values.size());
    for (Int i = 0; i < f.values.size(); ++i)
        g.values[i] = f.values[i] * std::conj(f.values[perm[static_cast<std::size_t>(i)]]);
    return g;
}

Subspace Subspace::full_space(int dims) {
    Subspace s;
    for (int i = 0; i < dims; ++i) {
        Vec e = Vec::Zero(dims);
        e[i] = 1;
        s.generators.push_back(std::move(e));
    }
    return s;
}

Subspace Subspace::line(Vec v) {
    Subspace s;
    s.generators.push_back(std::move(v));
    return s;
}

std::vector<Vec> enumerate_subspace(const Subspace& subspace, Int p, int dims) {
    // row reduce the generators mod p
    std::vector<Vec> basis;
    for (const auto& g : subspace.generators) {
        if (g.size() != dims) raise(Errc::InvalidSystem, "generator of wrong dimension");
        Vec w = reduce_vec(g, p);
        for (const auto& b : basis) {
            // eliminate w's entry at b's pivot
            int bp = pivot_index(b, p);
            if (bp < 0) continue;
            const Int factor = w[bp] % p;
            if (factor == 0) continue;
            for (int i = 0; i < dims; ++i) w[i] = mod_reduce(w[i] - factor * b[i], p);
        }
        const int wp = pivot_index(w, p);
        if (wp < 0) continue;
        const Int inv = mod_inverse(w[wp], p);
        for (int i = 0; i < dims; ++i) w[i] = w[i] * inv % p;
        basis.push_back(std::move(w));
    }
    if (basis.empty()) raise(Errc::ZeroDirection, "generators span the zero subspace");

    const int rank = static_cast<int>(basis.size());
    Int count = 1;
    for (int i = 0; i < rank; ++i) count *= p;

    std::vector<Vec> elements;
    elements.reserve(static_cast<std::size_t>(count));
    std::vector<Int> digits(static_cast<std::size_t>(rank), 0);
    for (Int e = 0; e < count; ++e) {
        Vec w = Vec::Zero(dims);
        for (int j = 0; j < rank; ++j) {
            const Int c = digits[static_cast<std::size_t>(j)];
            if (c == 0) continue;
            for (int i = 0; i < dims; ++i) w[i] = (w[i] + c * basis[static_cast<std::size_t>(j)][i]) % p;
        }
        elements.push_back(std::move(w));
        for (int j = rank - 1; j >= 0; --j) {
            if (++digits[static_cast<std::size_t>(j)] < p) break;
            digits[static_cast<std::size_t>(j)] = 0;
        }
    }
    return elements;
}

namespace {

// Sum over the remaining derivative levels of sum_x of the iterated
// derivative, for the running derivative g at this level.
Complex box_sum_level(const std::vector<std::vector<std::vector<std::int32_t>>>& perms,
                      std::size_t level, const Complex* g, Int n,
                      std::vector<std::vector<Complex>>& scratch) {
    const auto& elems = perms[level];
    if (level + 1 == perms.size()) {
        return tree_sum(static_cast<Int>(elems.size()), [&](Int e) {
            const std::int32_t* perm = elems[static_cast<std::size_t>(e)].data();
            return tree_sum(n, [&](Int x) { return g[x] * std::conj(g[perm[x]]); });
        });
    }
    auto& buffer = scratch[level];
    Complex acc{0.0, 0.0};
    for (const auto& permv : elems) {
        const std::int32_t* perm = permv.data();
        for (Int x = 0; x < n; ++x) buffer[static_cast<std::size_t>(x)] = g[x] * std::conj(g[perm[x]]);
        acc += box_sum_level(perms, level + 1, buffer.data(), n, scratch);
    }
    return acc;
}

}  // namespace

double box_norm(const GridFunction& f, const std::vector<Subspace>& subspaces,
                const PrimeContext& ctx) {
    require_same_domain(f, ctx);
    if (subspaces.empty()) raise(Errc::InvalidSystem, "box norm needs at least one subspace");
    const Int p = ctx.p;
    const Int n = f.values.size();
    const int s = static_cast<int>(subspaces.size());

    std::vector<std::vector<std::vector<std::int32_t>>> perms;
    perms.reserve(subspaces.size());
    double denom = static_cast<double>(n);
    for (const auto& subspace : subspaces) {
        const auto elements = enumerate_subspace(subspace, p, f.dims);
        std::vector<std::vector<std::int32_t>> table;
        table.reserve(elements.size());
        for (const auto& w : elements) table.push_back(shift_permutation(w, p, f.dims));
        denom *= static_cast<double>(table.size());
        perms.push_back(std::move(table));
    }

    // Parallel over the first subspace's elements; each slot is an
    // independent subtree, combined afterwards in fixed pairwise order.
    const auto& first = perms.front();
    const Int slots = static_cast<Int>(first.size());
    std::vector<Complex> partial(static_cast<std::size_t>(slots));
    parallel_tasks(slots, [&](Int e) {
        std::vector<std::vector<Complex>> scratch(static_cast<std::size_t>(s));
        for (auto& buf : scratch) buf.resize(static_cast<std::size_t>(n));
        const std::int32_t* perm = first[static_cast<std::size_t>(e)].data();
        const Complex* base = f.values.data();
        auto& buffer = scratch[0];
        if (s == 1) {
            partial[static_cast<std::size_t>(e)] =
                tree_sum(n, [&](Int x) { return base[x] * std::conj(base[perm[x]]); });
            return;
        }
        for (Int x = 0; x < n; ++x) buffer[static_cast<std::size_t>(x)] = base[x] * std::conj(base[perm[x]]);
        partial[static_cast<std::size_t>(e)] = box_sum_level(perms, 1, buffer.data(), n, scratch);
    });

    const Complex inner = tree_sum(partial.data(), slots) / denom;
    if (std::abs(inner.imag()) > 1e-9)
        raise(Errc::NumericalCheck, "box norm inner average is not real");
    if (inner.real() < -1e-9)
        raise(Errc::NumericalCheck, "box norm inner average is negative beyond roundoff");
    const double clamped = std::max(inner.real(), 0.0);
    return std::pow(clamped, 1.0 / static_cast<double>(Int{1} << s));
}

double box_norm_v(const GridFunction& f, const Vec& v, const PrimeContext& ctx) {
    if (pivot_index(v, ctx.p) < 0) raise(Errc::ZeroDirection, "direction vanishes mod p");
    return box_norm(f, {Subspace::full_space(f.dims), Subspace::line(v)}, ctx);
}

}  // namespace ffharm

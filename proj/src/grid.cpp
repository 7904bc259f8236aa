#include "ffharm/grid.hpp"

#include <cmath>

#include "ffharm/reduce.hpp"

namespace ffharm {

Int grid_size(Int p, int dims) {
    if (p < 2 || dims < 1) raise(Errc::InvalidSystem, "grid needs p >= 2 and dims >= 1");
    Int n = 1;
    for (int i = 0; i < dims; ++i) {
        if (n > (Int{1} << 31) / p) raise(Errc::BudgetExceeded, "grid p^D exceeds index budget");
        n *= p;
    }
    return n;
}

Int encode_point(const Vec& x, Int p) {
    Int idx = 0;
    for (int i = 0; i < x.size(); ++i) idx = idx * p + mod_reduce(x[i], p);
    return idx;
}

Vec decode_point(Int idx, Int p, int dims) {
    Vec x(dims);
    for (int i = dims - 1; i >= 0; --i) {
        x[i] = idx % p;
        idx /= p;
    }
    return x;
}

GridFunction GridFunction::zeros(Int p, int dims) {
    GridFunction f;
    f.p = p;
    f.dims = dims;
    f.values = Eigen::ArrayXcd::Zero(grid_size(p, dims));
    f.bounded = true;
    return f;
}

GridFunction GridFunction::constant(Int p, int dims, Complex c) {
    GridFunction f = zeros(p, dims);
    f.values.setConstant(c);
    f.bounded = std::abs(c) <= 1.0 + 1e-12;
    return f;
}

Complex GridFunction::mean() const {
    return tree_sum(values.data(), values.size()) / static_cast<double>(values.size());
}

double GridFunction::l2_norm() const {
    const Complex* data = values.data();
    const double total =
        tree_sum_real(values.size(), [data](Int i) { return std::norm(data[i]); });
    return std::sqrt(total / static_cast<double>(values.size()));
}

WeightFunction WeightFunction::zeros(Int p) {
    WeightFunction w;
    w.p = p;
    w.values = Eigen::ArrayXcd::Zero(p);
    w.bounded = true;
    return w;
}

WeightFunction WeightFunction::constant(Int p, Complex c) {
    WeightFunction w = zeros(p);
    w.values.setConstant(c);
    w.bounded = std::abs(c) <= 1.0 + 1e-12;
    return w;
}

Complex WeightFunction::mean() const {
    return tree_sum(values.data(), values.size()) / static_cast<double>(values.size());
}

ShiftTable::ShiftTable(const Vec& v, Int p, int dims) : p_(p), n_(grid_size(p, dims)) {
    data_.resize(static_cast<std::size_t>(p) * static_cast<std::size_t>(n_));
    const Vec vr = reduce_vec(v, p);
    // stride of coordinate i in the row-major flat index
    std::vector<Int> stride(static_cast<std::size_t>(dims));
    Int s = 1;
    for (int i = dims - 1; i >= 0; --i) {
        stride[static_cast<std::size_t>(i)] = s;
        s *= p;
    }
    std::vector<Int> x(static_cast<std::size_t>(dims), 0);
    for (Int idx = 0; idx < n_; ++idx) {
        for (Int c = 0; c < p; ++c) {
            Int target = 0;
            for (int i = 0; i < dims; ++i) {
                const Int coord = (x[static_cast<std::size_t>(i)] + c * vr[i]) % p;
                target += coord * stride[static_cast<std::size_t>(i)];
            }
            data_[static_cast<std::size_t>(c) * static_cast<std::size_t>(n_) +
                  static_cast<std::size_t>(idx)] = static_cast<std::int32_t>(target);
        }
        // odometer increment
        for (int i = dims - 1; i >= 0; --i) {
            if (++x[static_cast<std::size_t>(i)] < p) break;
            x[static_cast<std::size_t>(i)] = 0;
        }
    }
}

std::vector<std::int32_t> shift_permutation(const Vec& w, Int p, int dims) {
    const Int n = grid_size(p, dims);
    std::vector<std::int32_t> perm(static_cast<std::size_t>(n));
    const Vec wr = reduce_vec(w, p);
    std::vector<Int> stride(static_cast<std::size_t>(dims));
    Int s = 1;
    for (int i = dims - 1; i >= 0; --i) {
        stride[static_cast<std::size_t>(i)] = s;
        s *= p;
    }
    std::vector<Int> x(static_cast<std::size_t>(dims), 0);
    for (Int idx = 0; idx < n; ++idx) {
        Int target = 0;
        for (int i = 0; i < dims; ++i)
            target += ((x[static_cast<std::size_t>(i)] + wr[i]) % p) * stride[static_cast<std::size_t>(i)];
        perm[static_cast<std::size_t>(idx)] = static_cast<std::int32_t>(target);
        for (int i = dims - 1; i >= 0; --i) {
            if (++x[static_cast<std::size_t>(i)] < p) break;
            x[static_cast<std::size_t>(i)] = 0;
        }
    }
    return perm;
}

GridFunction shifted(const GridFunction& f, const Vec& w) {
    const auto perm = shift_permutation(w, f.p, f.dims);
    GridFunction g;
    g.p = f.p;
    g.dims = f.dims;
    g.bounded = f.bounded;
    g.values.resize(f.values.size());
    for (Int i = 0; i < f.values.size(); ++i)
        g.values[i] = f.values[perm[static_cast<std::size_t>(i)]];
    return g;
}

GridFunction random_unit_grid(Int p, int dims, Rng& rng) {
    GridFunction f = GridFunction::zeros(p, dims);
    for (Int i = 0; i < f.values.size(); ++i) f.values[i] = rng.unit_modulus();
    f.bounded = true;
    return f;
}

GridFunction bernoulli_indicator(Int p, int dims, double density, Rng& rng) {
    GridFunction f = GridFunction::zeros(p, dims);
    for (Int i = 0; i < f.values.size(); ++i)
        f.values[i] = rng.bernoulli(density) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    f.bounded = true;
    return f;
}

WeightFunction random_unit_weight(Int p, Rng& rng) {
    WeightFunction theta = WeightFunction::zeros(p);
    for (Int y = 0; y < p; ++y) theta.values[y] = rng.unit_modulus();
    theta.bounded = true;
    return theta;
}

}  // namespace ffharm

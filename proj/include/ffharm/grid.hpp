#ifndef FFHARM_GRID_HPP
#define FFHARM_GRID_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ffharm/ffcore.hpp"
#include "ffharm/rng.hpp"

namespace ffharm {

// p^D with an overflow / size guard (index tables are 32-bit).
Int grid_size(Int p, int dims);

// Row-major point <-> flat index on F_p^D.
Int encode_point(const Vec& x, Int p);
Vec decode_point(Int idx, Int p, int dims);

// Dense complex-valued function on F_p^D, row-major. bounded marks functions
// constructed to satisfy sup |f| <= 1.
struct GridFunction {
    Int p = 0;
    int dims = 1;
    Eigen::ArrayXcd values;
    bool bounded = false;

    static GridFunction zeros(Int p, int dims);
    static GridFunction constant(Int p, int dims, Complex c);

    Int size() const noexcept { return values.size(); }
    Complex at(const Vec& x) const { return values[encode_point(x, p)]; }

    Complex mean() const;
    double sup_norm() const { return values.size() ? values.abs().maxCoeff() : 0.0; }
    double l2_norm() const;  // (E_x |f|^2)^{1/2}
};

// Dense complex weight on F_p.
struct WeightFunction {
    Int p = 0;
    Eigen::ArrayXcd values;
    bool bounded = false;

    static WeightFunction zeros(Int p);
    static WeightFunction constant(Int p, Complex c);

    Complex mean() const;
    double sup_norm() const { return values.size() ? values.abs().maxCoeff() : 0.0; }
};

// Index permutation tables for x -> x + c*v, one permutation per multiple c.
class ShiftTable {
   public:
    ShiftTable(const Vec& v, Int p, int dims);

    std::span<const std::int32_t> perm(Int multiple) const {
        return {data_.data() + static_cast<std::size_t>(multiple) * static_cast<std::size_t>(n_),
                static_cast<std::size_t>(n_)};
    }

   private:
    Int p_;
    Int n_;
    std::vector<std::int32_t> data_;
};

// Single permutation for x -> x + w.
std::vector<std::int32_t> shift_permutation(const Vec& w, Int p, int dims);

// f(. + w)
GridFunction shifted(const GridFunction& f, const Vec& w);

GridFunction random_unit_grid(Int p, int dims, Rng& rng);
GridFunction bernoulli_indicator(Int p, int dims, double density, Rng& rng);
WeightFunction random_unit_weight(Int p, Rng& rng);

}  // namespace ffharm

#endif

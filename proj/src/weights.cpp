#include "ffharm/weights.hpp"

#include <algorithm>
#include <cmath>

#include "ffharm/parallel.hpp"
#include "ffharm/rng.hpp"

namespace ffharm {

WeightSpec WeightSpec::constant(Complex value) {
    if (std::abs(value) > 1.0 + 1e-12)
        raise(Errc::InvalidWeight, "constant weight must be 1-bounded");
    WeightSpec s;
    s.kind = WeightKind::Constant;
    s.value = value;
    return s;
}

WeightSpec WeightSpec::poly_phase(IntPolynomial p) {
    WeightSpec s;
    s.kind = WeightKind::PolyPhase;
    s.poly = std::move(p);
    return s;
}

WeightSpec WeightSpec::rational_phase(RationalFunction phi) {
    WeightSpec s;
    s.kind = WeightKind::RationalPhase;
    s.phase = std::move(phi);
    return s;
}

WeightSpec WeightSpec::balanced_indicator(std::vector<Int> set) {
    WeightSpec s;
    s.kind = WeightKind::BalancedIndicator;
    s.indices = std::move(set);
    return s;
}

WeightSpec WeightSpec::random(std::uint64_t seed) {
    WeightSpec s;
    s.kind = WeightKind::Random;
    s.seed = seed;
    return s;
}

WeightFunction realize_weight(const WeightSpec& spec, const PrimeContext& ctx) {
    const Int p = ctx.p;
    WeightFunction theta = WeightFunction::zeros(p);
    theta.bounded = true;
    switch (spec.kind) {
        case WeightKind::Constant:
            if (std::abs(spec.value) > 1.0 + 1e-12)
                raise(Errc::InvalidWeight, "constant weight must be 1-bounded");
            theta.values = Eigen::ArrayXcd::Constant(p, spec.value);
            break;
        case WeightKind::PolyPhase:
            for (Int y = 0; y < p; ++y)
                theta.values[y] = ctx.character(eval_poly(spec.poly, y, ctx));
            break;
        case WeightKind::RationalPhase: {
            if (!spec.phase) raise(Errc::InvalidWeight, "rational phase without a function");
            if (spec.phase->den.vanishes_mod(p))
                raise(Errc::DegenerateDenominator,
                      "phase denominator is identically zero mod " + std::to_string(p));
            for (Int y = 0; y < p; ++y) {
                const auto v = eval_rational(*spec.phase, y, ctx);
                theta.values[y] = v ? ctx.character(*v) : Complex{0.0, 0.0};
            }
            break;
        }
        case WeightKind::BalancedIndicator: {
            std::vector<bool> member(static_cast<std::size_t>(p), false);
            for (Int idx : spec.indices) member[static_cast<std::size_t>(mod_reduce(idx, p))] = true;
            const Int m = static_cast<Int>(std::count(member.begin(), member.end(), true));
            const double density = static_cast<double>(m) / static_cast<double>(p);
            for (Int y = 0; y < p; ++y)
                theta.values[y] = Complex{(member[static_cast<std::size_t>(y)] ? 1.0 : 0.0) - density, 0.0};
            break;
        }
        case WeightKind::Random: {
            Rng rng(sub_seed(spec.seed, p, 0));
            for (Int y = 0; y < p; ++y) theta.values[y] = rng.unit_modulus();
            break;
        }
    }
    return theta;
}

LogLogFit fit_log_log(const std::vector<std::pair<double, double>>& points) {
    LogLogFit fit;
    if (points.size() < 2) return fit;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(points.size());
    const double det = n * sxx - sx * sx;
    if (det <= 0.0) return fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;
    fit.defined = true;
    return fit;
}

UniformityProfile uniformity_profile(const WeightSpec& spec, int s, std::vector<Int> primes,
                                     Int cap) {
    if (s < 1 || s > 4) raise(Errc::BudgetExceeded, "profiles cover s between 1 and 4");
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (Int p : primes)
        if (!is_prime(p)) raise(Errc::NotPrime, "profile ladder contains a composite");

    // drop primes where the weight cannot be realized (e.g. the phase
    // denominator collapses mod p)
    std::vector<Int> usable;
    for (Int p : primes) {
        if (spec.kind == WeightKind::RationalPhase && spec.phase &&
            spec.phase->den.vanishes_mod(p))
            continue;
        usable.push_back(p);
    }
    if (usable.size() < 3) raise(Errc::InsufficientLadder, "need at least three usable primes");

    UniformityProfile profile;
    profile.s = s;
    profile.rows.resize(usable.size());
    parallel_tasks(static_cast<Int>(usable.size()), [&](Int t) {
        const Int p = usable[static_cast<std::size_t>(t)];
        const PrimeContext ctx = make_prime_context(p);
        WeightFunction theta = realize_weight(spec, ctx);
        const Complex mean = theta.mean();
        theta.values -= mean;
        theta.bounded = false;
        const double value = u_norm(theta, s, ctx, cap);
        profile.rows[static_cast<std::size_t>(t)] = {p, value, value < 1e-12};
    });

    std::vector<std::pair<double, double>> points;
    for (const auto& row : profile.rows)
        if (!row.exact_zero)
            points.emplace_back(std::log(static_cast<double>(row.p)), std::log(row.value));
    const LogLogFit fit = fit_log_log(points);
    profile.fitted_slope = fit.slope;
    profile.fitted_intercept = fit.intercept;
    profile.slope_defined = fit.defined;
    return profile;
}

}  // namespace ffharm

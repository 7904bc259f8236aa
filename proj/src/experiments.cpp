#include "ffharm/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ffharm/fourier.hpp"
#include "ffharm/operators.hpp"
#include "ffharm/parallel.hpp"
#include "ffharm/reduce.hpp"
#include "ffharm/rng.hpp"

namespace ffharm {

std::string decay_target_name(DecayTarget target) {
    switch (target) {
        case DecayTarget::AverageL2: return "avg-l2";
        case DecayTarget::WeightedCount: return "count";
        case DecayTarget::UnweightedCount: return "count-unweighted";
        case DecayTarget::RationalCount: return "count-rational";
    }
    return "count";
}

DecayTarget parse_decay_target(const std::string& name) {
    if (name == "avg-l2") return DecayTarget::AverageL2;
    if (name == "count") return DecayTarget::WeightedCount;
    if (name == "count-unweighted") return DecayTarget::UnweightedCount;
    if (name == "count-rational") return DecayTarget::RationalCount;
    raise(Errc::ParseError, "unknown scan target: " + name);
}

DecayReport scan_decay(DecayTarget target, const ConfigurationSystem& system,
                       const WeightSpec& weight, std::vector<Int> primes, int trials,
                       double density, std::uint64_t seed) {
    system.validate();
    if (trials < 1) raise(Errc::EmptySuite, "scan needs at least one trial");
    if (!(density > 0.0 && density < 1.0)) raise(Errc::InvalidWeight, "density must lie in (0, 1)");
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    if (primes.size() < 3) raise(Errc::InsufficientLadder, "need at least three primes");
    for (Int p : primes)
        if (!is_prime(p)) raise(Errc::NotPrime, "scan ladder contains a composite");
    if (target == DecayTarget::RationalCount && !system.phi)
        raise(Errc::MissingPhi, "rational counting scan needs the substitution");

    const int k = system.count();
    DecayReport report;
    report.target = target;
    report.seed = seed;

    for (Int p : primes) {
        const PrimeContext ctx = make_prime_context(p);
        require_admissible(system, ctx);
        const WeightFunction theta = (target == DecayTarget::UnweightedCount)
                                         ? realize_weight(WeightSpec::constant(), ctx)
                                         : realize_weight(weight, ctx);
        std::vector<double> values(static_cast<std::size_t>(trials));
        parallel_tasks(trials, [&](Int t) {
            Rng rng(sub_seed(seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(t)));
            double value = 0.0;
            if (target == DecayTarget::AverageL2) {
                std::vector<GridFunction> fs;
                fs.reserve(static_cast<std::size_t>(k));
                for (int i = 0; i < k; ++i)
                    fs.push_back(random_unit_grid(p, system.dimension, rng));
                value = l2_discrepancy(theta, fs, system, ctx);
            } else {
                const GridFunction set = bernoulli_indicator(p, system.dimension, density, rng);
                const std::vector<GridFunction> fs(static_cast<std::size_t>(k) + 1, set);
                const bool rational = target == DecayTarget::RationalCount;
                const Complex lambda = counting_operator(theta, fs, system, ctx, rational);
                const Complex structured = main_term(theta, fs, system, ctx);
                value = std::abs(lambda - structured);
            }
            values[static_cast<std::size_t>(t)] = value;
        });
        DecayRow row;
        row.p = p;
        row.trials = trials;
        for (double v : values) row.max = std::max(row.max, v);
        row.mean = tree_sum_real(trials, [&](Int t) { return values[static_cast<std::size_t>(t)]; }) /
                   static_cast<double>(trials);
        report.rows.push_back(row);
    }

    std::vector<std::pair<double, double>> points;
    for (const auto& row : report.rows)
        if (row.max >= 1e-12)
            points.emplace_back(std::log(static_cast<double>(row.p)), std::log(row.max));
    const LogLogFit fit = fit_log_log(points);
    report.fitted_slope = fit.slope;
    report.slope_defined = fit.defined;
    return report;
}

namespace {

enum CheckIndex {
    kParseval = 0,
    kInversion,
    kCosetModulus,
    kU2MatchesDft,
    kUNormMonotone,
    kBoxNormOracle,
    kBoxNormSpectral,
    kCountingMultilinear,
    kCountingTranslation,
    kCountingNaive,
    kDualPairing,
    kAveragingDualBound,
    kAveragingUBound,
    kOperatorBoundedness,
    kSubstitutionConsistency,
    kCheckCount,
};

constexpr std::array<const char*, kCheckCount> kCheckNames = {
    "parseval",
    "fourier_inversion",
    "spectrum_coset_modulus",
    "u2_matches_dft",
    "u_norm_monotone",
    "box_norm_matches_oracle",
    "box_norm_spectral_bound",
    "counting_multilinear",
    "counting_translation_invariant",
    "counting_matches_naive",
    "dual_pairing_identity",
    "averaging_dual_bound",
    "averaging_u_bound",
    "operator_boundedness",
    "substitution_consistency",
};

using Violations = std::array<double, kCheckCount>;

Vec vec1(Int a) {
    Vec v(1);
    v << a;
    return v;
}

Vec vec2(Int a, Int b) {
    Vec v(2);
    v << a, b;
    return v;
}

// The fixed two-polynomial family every operator check runs on: P = {y, y^2}
// with directions 1 and 2 on F_p.
ConfigurationSystem suite_system(std::optional<RationalFunction> phi = std::nullopt) {
    return make_configuration_system(1, {vec1(1), vec1(2)},
                                     {IntPolynomial{0, 1}, IntPolynomial{0, 0, 1}},
                                     std::move(phi));
}

void fourier_checks(Violations& out, const GridFunction& f, const Vec& v,
                    const PrimeContext& ctx) {
    const Int p = ctx.p;
    const DirectionalSpectrum spec = directional_spectrum(f, v, ctx);
    const ShiftTable shifts(spec.direction, p, f.dims);
    for (std::size_t r = 0; r < spec.coset_reps.size(); ++r) {
        const Int base = spec.coset_reps[r];
        double second_moment = 0.0;
        for (Int n = 0; n < p; ++n) second_moment += std::norm(f.values[shifts.perm(n)[base]]);
        second_moment /= static_cast<double>(p);
        double energy = 0.0;
        for (Int xi = 0; xi < p; ++xi) energy += std::norm(spec.table(static_cast<Int>(r), xi));
        out[kParseval] = std::max(out[kParseval], std::abs(second_moment - energy));

        for (Int n = 0; n < p; ++n) {
            Complex rebuilt{0.0, 0.0};
            for (Int xi = 0; xi < p; ++xi)
                rebuilt += spec.table(static_cast<Int>(r), xi) * ctx.character(n * xi % p);
            out[kInversion] =
                std::max(out[kInversion], std::abs(rebuilt - f.values[shifts.perm(n)[base]]));
        }

        const Vec rep = decode_point(base, p, f.dims);
        for (Int m = 0; m < p; ++m) {
            Vec x = rep;
            for (int i = 0; i < f.dims; ++i) x[i] = mod_reduce(x[i] + m * spec.direction[i], p);
            for (Int xi = 0; xi < p; ++xi) {
                const double moved = std::abs(directional_fourier(f, x, v, xi, ctx));
                const double here = std::abs(spec.table(static_cast<Int>(r), xi));
                out[kCosetModulus] = std::max(out[kCosetModulus], std::abs(moved - here));
            }
        }
    }
}

Violations run_suite_trial(Int p, std::uint64_t seed, Int trial) {
    Violations out{};
    const PrimeContext ctx = make_prime_context(p);
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(trial)));

    const GridFunction f1 = random_unit_grid(p, 1, rng);
    const GridFunction g1 = random_unit_grid(p, 1, rng);
    const GridFunction h1 = random_unit_grid(p, 1, rng);
    const GridFunction h2 = random_unit_grid(p, 1, rng);
    const GridFunction f2 = random_unit_grid(p, 2, rng);
    const WeightFunction theta = random_unit_weight(p, rng);

    // directional Fourier identities, one dimension and two, including a
    // direction that is orthogonal to itself at p = 5
    fourier_checks(out, f1, vec1(1), ctx);
    const std::array<Vec, 3> planes = {vec2(1, 0), vec2(1, 1), vec2(1, 2)};
    for (const Vec& v : planes) fourier_checks(out, f2, v, ctx);

    // degree-2 correlation norm against a plain transform sweep
    const double u2 = u_norm(theta, 2, ctx);
    double dft_max = 0.0;
    for (Int xi = 0; xi < p; ++xi) {
        Complex acc{0.0, 0.0};
        for (Int y = 0; y < p; ++y)
            acc += theta.values[y] * std::conj(ctx.character(xi * y % p));
        dft_max = std::max(dft_max, std::abs(acc) / static_cast<double>(p));
    }
    out[kU2MatchesDft] = std::abs(u2 - dft_max);

    const double u3 = u_norm(theta, 3, ctx);
    out[kUNormMonotone] = std::max(0.0, u2 - u3);

    // box norm against the collapsed closed form E_m |E_x f conj(f(.+mv))|^2
    {
        const Vec v = vec2(1, 1);
        const double box = box_norm_v(f2, v, ctx);
        const ShiftTable shifts(v, p, 2);
        const Int n = f2.size();
        double collapsed = 0.0;
        for (Int m = 0; m < p; ++m) {
            const std::int32_t* perm = shifts.perm(m).data();
            Complex acc{0.0, 0.0};
            for (Int x = 0; x < n; ++x) acc += f2.values[x] * std::conj(f2.values[perm[x]]);
            collapsed += std::norm(acc / static_cast<double>(n));
        }
        collapsed /= static_cast<double>(p);
        out[kBoxNormOracle] = std::abs(box * box * box * box - collapsed);
    }
    for (const Vec& v : planes) {
        const double box = box_norm_v(f2, v, ctx);
        const double energy = max_directional_energy(f2, v, ctx);
        out[kBoxNormSpectral] =
            std::max(out[kBoxNormSpectral], box * box * box * box - energy);
    }
    out[kBoxNormSpectral] = std::max(out[kBoxNormSpectral], 0.0);

    const ConfigurationSystem sys = suite_system();
    const ConfigurationSystem sys_rational = suite_system(RationalFunction{{1}, {0, 1}});

    // linearity in the middle slot
    {
        const Complex alpha = rng.unit_modulus() * rng.uniform01();
        const Complex beta = rng.unit_modulus() * rng.uniform01();
        GridFunction combo = GridFunction::zeros(p, 1);
        combo.values = alpha * h1.values + beta * h2.values;
        const Complex mixed = counting_operator(theta, {f1, combo, g1}, sys, ctx);
        const Complex split = alpha * counting_operator(theta, {f1, h1, g1}, sys, ctx) +
                              beta * counting_operator(theta, {f1, h2, g1}, sys, ctx);
        out[kCountingMultilinear] = std::abs(mixed - split);
    }

    // shifting every function by the same point is a change of variable
    {
        const Vec a = vec1(rng.below(p));
        const Complex before = counting_operator(theta, {f1, h1, g1}, sys, ctx);
        const Complex after =
            counting_operator(theta, {shifted(f1, a), shifted(h1, a), shifted(g1, a)}, sys, ctx);
        out[kCountingTranslation] = std::abs(before - after);
    }

    {
        const std::vector<GridFunction> fs = {f1, h1, g1};
        const Complex fast = counting_operator(theta, fs, sys, ctx);
        const Complex slow = counting_operator_naive(theta, fs, sys, ctx);
        const Complex fast_r = counting_operator(theta, fs, sys_rational, ctx, true);
        const Complex slow_r = counting_operator_naive(theta, fs, sys_rational, ctx, true);
        out[kCountingNaive] = std::max(std::abs(fast - slow), std::abs(fast_r - slow_r));
    }

    // averaging against its dual: pairing identity, the Cauchy-Schwarz
    // bound, the single-function bound, and sup-norm control
    for (int l = 1; l <= 2; ++l) {
        FrequencyVector freqs;
        std::vector<GridFunction> fl = {f1};
        if (l == 1)
            freqs.push_back(rng.below(p));
        else
            fl.push_back(g1);
        const GridFunction avg = averaging_operator(theta, fl, freqs, sys, ctx);
        const GridFunction dual = dual_function(theta, fl, freqs, sys, ctx);
        const Int n = avg.size();
        const double avg_sq = avg.l2_norm() * avg.l2_norm();
        const double dual_sq = dual.l2_norm() * dual.l2_norm();
        out[kAveragingDualBound] =
            std::max(out[kAveragingDualBound], avg_sq * avg_sq - dual_sq);
        const Complex pairing =
            tree_sum(n, [&](Int x) { return dual.values[x] * std::conj(fl.back().values[x]); }) /
            static_cast<double>(n);
        out[kDualPairing] = std::max(out[kDualPairing], std::abs(pairing - avg_sq));
        if (l == 1)
            out[kAveragingUBound] = std::max(out[kAveragingUBound], avg.l2_norm() - u3);

        double fsup = 1.0;
        for (const auto& f : fl) fsup *= f.sup_norm();
        const double tsup = theta.sup_norm();
        out[kOperatorBoundedness] =
            std::max(out[kOperatorBoundedness], avg.sup_norm() - tsup * fsup);
        double dual_bound = tsup * tsup * fl.back().sup_norm();
        for (std::size_t i = 0; i + 1 < fl.size(); ++i)
            dual_bound *= fl[i].sup_norm() * fl[i].sup_norm();
        out[kOperatorBoundedness] =
            std::max(out[kOperatorBoundedness], dual.sup_norm() - dual_bound);
    }
    out[kAveragingDualBound] = std::max(out[kAveragingDualBound], 0.0);
    out[kAveragingUBound] = std::max(out[kAveragingUBound], 0.0);
    out[kOperatorBoundedness] = std::max(out[kOperatorBoundedness], 0.0);

    // a polynomial substitution with constant denominator is plain
    // composition
    {
        const IntPolynomial inner{0, 2};
        const ConfigurationSystem with_phi = suite_system(RationalFunction{inner, {1}});
        const ConfigurationSystem composed = make_configuration_system(
            1, {vec1(1), vec1(2)},
            {with_phi.polys[0].compose(inner), with_phi.polys[1].compose(inner)}, std::nullopt);
        const std::vector<GridFunction> fs = {f1, h1, g1};
        const Complex through = counting_operator(theta, fs, with_phi, ctx, true);
        const Complex direct = counting_operator(theta, fs, composed, ctx);
        out[kSubstitutionConsistency] = std::abs(through - direct);
    }

    return out;
}

}  // namespace

ExactSuiteReport verify_exact_suite(std::uint64_t seed, const std::vector<Int>& primes,
                                    int trials_per_prime) {
    if (trials_per_prime < 1) raise(Errc::EmptySuite, "suite needs at least one trial per prime");
    if (primes.empty()) raise(Errc::EmptySuite, "suite needs at least one prime");
    std::vector<Int> ladder = primes;
    std::sort(ladder.begin(), ladder.end());
    ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
    for (Int p : ladder) {
        if (!is_prime(p)) raise(Errc::NotPrime, "suite ladder contains a composite");
        const PrimeContext ctx = make_prime_context(p);
        require_admissible(suite_system(), ctx);
        require_admissible(suite_system(RationalFunction{{1}, {0, 1}}), ctx);
    }

    const Int total = static_cast<Int>(ladder.size()) * trials_per_prime;
    std::vector<Violations> slots(static_cast<std::size_t>(total));
    parallel_tasks(total, [&](Int i) {
        const Int p = ladder[static_cast<std::size_t>(i / trials_per_prime)];
        const Int trial = i % trials_per_prime;
        try {
            slots[static_cast<std::size_t>(i)] = run_suite_trial(p, seed, trial);
        } catch (const std::exception&) {
            slots[static_cast<std::size_t>(i)].fill(std::numeric_limits<double>::infinity());
        }
    });

    ExactSuiteReport report;
    report.seed = seed;
    report.primes = ladder;
    report.trials = trials_per_prime;
    Violations worst{};
    for (const auto& slot : slots)
        for (int c = 0; c < kCheckCount; ++c) worst[static_cast<std::size_t>(c)] =
            std::max(worst[static_cast<std::size_t>(c)], slot[static_cast<std::size_t>(c)]);
    report.all_pass = true;
    for (int c = 0; c < kCheckCount; ++c) {
        CheckResult result;
        result.name = kCheckNames[static_cast<std::size_t>(c)];
        result.max_violation = worst[static_cast<std::size_t>(c)];
        result.pass = result.max_violation <= 1e-9;
        report.max_violation = std::max(report.max_violation, result.max_violation);
        report.all_pass = report.all_pass && result.pass;
        report.checks.push_back(std::move(result));
    }
    return report;
}

std::optional<FoundConfiguration> find_configuration(const GridFunction& set,
                                                     const ConfigurationSystem& system,
                                                     const PrimeContext& ctx) {
    system.validate();
    require_admissible(system, ctx);
    if (!system.phi) raise(Errc::MissingPhi, "configuration search needs the substitution");
    if (set.p != ctx.p) raise(Errc::InvalidSystem, "grid and context disagree on p");
    if (set.dims != system.dimension)
        raise(Errc::InvalidSystem, "grid dimension does not match the system");

    const Int p = ctx.p;
    const Int n = set.size();
    const int k = system.count();
    const int dims = system.dimension;

    std::vector<ShiftTable> tables;
    tables.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) tables.emplace_back(system.vectors[static_cast<std::size_t>(i)], p, dims);

    // parameters that can yield a nontrivial configuration: non-poles with
    // some shift polynomial nonzero at phi(y)
    struct Candidate {
        Int y;
        std::vector<const std::int32_t*> perm;
    };
    std::vector<Candidate> candidates;
    for (Int y = 0; y < p; ++y) {
        const auto a = eval_rational(*system.phi, y, ctx);
        if (!a) continue;
        bool nontrivial = false;
        Candidate cand;
        cand.y = y;
        for (int i = 0; i < k; ++i) {
            const Int m = eval_poly(system.polys[static_cast<std::size_t>(i)], *a, ctx);
            nontrivial = nontrivial || m != 0;
            cand.perm.push_back(tables[static_cast<std::size_t>(i)].perm(m).data());
        }
        if (nontrivial) candidates.push_back(std::move(cand));
    }

    const auto inside = [&](Int idx) { return set.values[idx].real() > 0.5; };
    for (Int x = 0; x < n; ++x) {
        if (!inside(x)) continue;
        for (const auto& cand : candidates) {
            bool all_in = true;
            for (int i = 0; i < k && all_in; ++i)
                all_in = inside(cand.perm[static_cast<std::size_t>(i)][x]);
            if (!all_in) continue;

            FoundConfiguration found;
            found.base = decode_point(x, p, dims);
            found.y = cand.y;
            found.nontrivial = true;
            std::vector<Int> encoded = {x};
            found.points.push_back(found.base);
            for (int i = 0; i < k; ++i) {
                const Int e = cand.perm[static_cast<std::size_t>(i)][x];
                encoded.push_back(e);
                found.points.push_back(decode_point(e, p, dims));
            }
            std::sort(encoded.begin(), encoded.end());
            found.all_distinct =
                std::adjacent_find(encoded.begin(), encoded.end()) == encoded.end();
            return found;
        }
    }
    return std::nullopt;
}

}  // namespace ffharm

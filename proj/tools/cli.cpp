#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ffharm/experiments.hpp"
#include "ffharm/ffcore.hpp"
#include "ffharm/fourier.hpp"
#include "ffharm/io.hpp"
#include "ffharm/operators.hpp"
#include "ffharm/parallel.hpp"
#include "ffharm/rng.hpp"
#include "ffharm/weights.hpp"

namespace ffharm {

namespace {

struct Options {
    std::string config_path;
    std::string out;
    std::string format = "json";
    std::string grid_path;
    std::string weight_path;
    std::string set_path;
    std::string target = "count";
    std::vector<Int> spectrum;  // direction components for a spectrum dump
    Int p = 0;
    std::vector<Int> primes;
    std::uint64_t seed = 1;
    int trials = 20;
    double density = 0.5;
    int s = 2;
    Int cap = 0;  // 0 means: fall back to FFPROG_CAP, then the default
    int threads = 1;
    bool dump = false;
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config_path, "JSON config holding system, weight, and set");
    sub->add_option("--out", o.out, "write output to this file instead of stdout");
    sub->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--p", o.p, "prime modulus");
    sub->add_option("--primes", o.primes, "comma separated prime ladder")->delimiter(',');
    sub->add_option("--seed", o.seed, "seed for every randomized draw");
    sub->add_option("--trials", o.trials, "trials per prime");
    sub->add_option("--density", o.density, "Bernoulli density for drawn indicator sets");
    sub->add_option("--s", o.s, "correlation norm degree");
    sub->add_option("--cap", o.cap, "phase enumeration cap (overrides FFPROG_CAP)");
    sub->add_option("--threads", o.threads, "worker threads; 1 gives bit-identical reruns");
    sub->add_flag("--dump-config", o.dump, "echo the normalized config and exit");
}

Int effective_cap(const Options& o) {
    if (o.cap > 0) return o.cap;
    if (const char* env = std::getenv("FFPROG_CAP")) {
        char* end = nullptr;
        const long long value = std::strtoll(env, &end, 10);
        if (end == env || *end != '\0' || value <= 0)
            raise(Errc::ParseError, "FFPROG_CAP must be a positive integer");
        return static_cast<Int>(value);
    }
    return kDefaultEnumerationCap;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        write_text_file(o.out, text);
    }
}

CliConfig load(const Options& o) {
    if (o.config_path.empty()) return {};
    return load_config(o.config_path);
}

std::string complex_json(Complex c) {
    if (std::abs(c.imag()) < 1e-12) return format_double(c.real());
    return "{\"re\":" + format_double(c.real()) + ",\"im\":" + format_double(c.imag()) + '}';
}

void append_complex_csv(std::string& out, const std::string& key, Complex c) {
    if (std::abs(c.imag()) < 1e-12) {
        out += key + ',' + format_double(c.real()) + '\n';
    } else {
        out += key + "_re," + format_double(c.real()) + '\n';
        out += key + "_im," + format_double(c.imag()) + '\n';
    }
}

const ConfigurationSystem& need_system(const CliConfig& cfg) {
    if (!cfg.system) raise(Errc::InvalidSystem, "this command needs a system in --config");
    return *cfg.system;
}

// Indicator input: --set file first, then the config's set, then a seeded
// Bernoulli draw at the requested density.
GridFunction resolve_set(const Options& o, const CliConfig& cfg, Int p, int dims) {
    if (!o.set_path.empty())
        return indicator_from_indices(load_index_list(o.set_path), p, dims);
    if (cfg.has_set) return indicator_from_indices(cfg.set, p, dims);
    Rng rng(sub_seed(o.seed, static_cast<std::uint64_t>(p), 0));
    return bernoulli_indicator(p, dims, o.density, rng);
}

int run_norms(const Options& o) {
    const CliConfig cfg = load(o);
    if (o.dump) {
        emit(o, dump_config(cfg));
        return 0;
    }
    const Int cap = effective_cap(o);

    if (!o.primes.empty()) {
        if (!cfg.weight)
            raise(Errc::InvalidWeight, "a prime-ladder profile needs a weight in --config");
        const UniformityProfile profile = uniformity_profile(*cfg.weight, o.s, o.primes, cap);
        emit(o, o.format == "csv" ? to_csv(profile) : to_json(profile));
        return 0;
    }

    if (o.p == 0) raise(Errc::ParseError, "norms needs --p or --primes");
    const PrimeContext ctx = make_prime_context(o.p);
    const int dims = cfg.system ? cfg.system->dimension : 1;

    if (!o.spectrum.empty()) {
        if (o.grid_path.empty())
            raise(Errc::ParseError, "--spectrum needs a grid loaded with --grid");
        Vec v(static_cast<Int>(o.spectrum.size()));
        for (std::size_t i = 0; i < o.spectrum.size(); ++i) v[static_cast<Int>(i)] = o.spectrum[i];
        const GridFunction f = load_grid_csv(o.grid_path, o.p, static_cast<int>(o.spectrum.size()));
        emit(o, spectrum_csv(directional_spectrum(f, v, ctx)));
        return 0;
    }

    bool have_weight = false;
    double u_raw = 0.0, u_centered = 0.0;
    if (!o.weight_path.empty() || cfg.weight) {
        WeightFunction theta = o.weight_path.empty() ? realize_weight(*cfg.weight, ctx)
                                                     : load_weight_csv(o.weight_path, o.p);
        u_raw = u_norm(theta, o.s, ctx, cap);
        theta.values -= theta.mean();
        theta.bounded = false;
        u_centered = u_norm(theta, o.s, ctx, cap);
        have_weight = true;
    }

    bool have_grid = false;
    double l2 = 0.0, sup = 0.0;
    std::vector<std::pair<Vec, double>> box_values;
    if (!o.grid_path.empty()) {
        const GridFunction f = load_grid_csv(o.grid_path, o.p, dims);
        l2 = f.l2_norm();
        sup = f.sup_norm();
        if (cfg.system)
            for (const Vec& v : cfg.system->vectors)
                box_values.emplace_back(v, box_norm_v(f, v, ctx));
        have_grid = true;
    }
    if (!have_weight && !have_grid)
        raise(Errc::ParseError, "norms needs a weight (config or --weight) or a grid (--grid)");

    if (o.format == "csv") {
        std::string out = "key,value\n";
        out += "p," + std::to_string(o.p) + '\n';
        out += "s," + std::to_string(o.s) + '\n';
        if (have_weight) {
            out += "u_raw," + format_double(u_raw) + '\n';
            out += "u_centered," + format_double(u_centered) + '\n';
        }
        if (have_grid) {
            out += "l2," + format_double(l2) + '\n';
            out += "sup," + format_double(sup) + '\n';
            for (std::size_t i = 0; i < box_values.size(); ++i)
                out += "box_norm_" + std::to_string(i + 1) + ',' +
                       format_double(box_values[i].second) + '\n';
        }
        emit(o, out);
        return 0;
    }

    std::string out = "{\"p\":" + std::to_string(o.p) + ",\"s\":" + std::to_string(o.s);
    if (have_weight) {
        out += ",\"u_raw\":" + format_double(u_raw);
        out += ",\"u_centered\":" + format_double(u_centered);
    }
    if (have_grid) {
        out += ",\"l2\":" + format_double(l2);
        out += ",\"sup\":" + format_double(sup);
        out += ",\"box_norms\":[";
        for (std::size_t i = 0; i < box_values.size(); ++i) {
            if (i) out += ',';
            out += "{\"direction\":[";
            const Vec& v = box_values[i].first;
            for (Int c = 0; c < v.size(); ++c) {
                if (c) out += ',';
                out += std::to_string(v[c]);
            }
            out += "],\"value\":" + format_double(box_values[i].second) + '}';
        }
        out += ']';
    }
    out += "}\n";
    emit(o, out);
    return 0;
}

int run_count(const Options& o) {
    const CliConfig cfg = load(o);
    if (o.dump) {
        emit(o, dump_config(cfg));
        return 0;
    }
    const ConfigurationSystem& sys = need_system(cfg);
    if (o.p == 0) raise(Errc::ParseError, "count needs --p");
    const PrimeContext ctx = make_prime_context(o.p);

    const GridFunction set = resolve_set(o, cfg, o.p, sys.dimension);
    const WeightFunction theta =
        cfg.weight ? realize_weight(*cfg.weight, ctx) : realize_weight(WeightSpec::constant(), ctx);
    const std::vector<GridFunction> fs(static_cast<std::size_t>(sys.count()) + 1, set);

    const Complex lambda = counting_operator(theta, fs, sys, ctx);
    const Complex structured = main_term(theta, fs, sys, ctx);
    const double discrepancy = std::abs(lambda - structured);

    bool rational = sys.phi.has_value();
    Complex lambda_rational{0.0, 0.0};
    double discrepancy_rational = 0.0;
    if (rational) {
        lambda_rational = counting_operator(theta, fs, sys, ctx, true);
        discrepancy_rational = std::abs(lambda_rational - structured);
    }

    if (o.format == "csv") {
        std::string out = "key,value\n";
        out += "p," + std::to_string(o.p) + '\n';
        append_complex_csv(out, "lambda", lambda);
        append_complex_csv(out, "main_term", structured);
        out += "discrepancy," + format_double(discrepancy) + '\n';
        if (rational) {
            append_complex_csv(out, "lambda_rational", lambda_rational);
            out += "discrepancy_rational," + format_double(discrepancy_rational) + '\n';
        }
        emit(o, out);
        return 0;
    }

    std::string out = "{\"p\":" + std::to_string(o.p);
    out += ",\"lambda\":" + complex_json(lambda);
    out += ",\"main_term\":" + complex_json(structured);
    out += ",\"discrepancy\":" + format_double(discrepancy);
    if (rational) {
        out += ",\"lambda_rational\":" + complex_json(lambda_rational);
        out += ",\"discrepancy_rational\":" + format_double(discrepancy_rational);
    }
    out += "}\n";
    emit(o, out);
    return 0;
}

int run_verify(const Options& o) {
    if (o.dump) {
        emit(o, dump_config(load(o)));
        return 0;
    }
    std::vector<Int> primes = o.primes;
    if (primes.empty()) primes = {5, 7, 11};
    const ExactSuiteReport report = verify_exact_suite(o.seed, primes, o.trials);
    emit(o, o.format == "csv" ? to_csv(report) : to_json(report));
    return report.all_pass ? 0 : 2;
}

std::vector<Int> default_ladder(int dims) {
    const Int hi = dims <= 1 ? 199 : 61;
    std::vector<Int> primes;
    for (Int p = 11; p <= hi; ++p)
        if (is_prime(p)) primes.push_back(p);
    return primes;
}

int run_scan(const Options& o) {
    const CliConfig cfg = load(o);
    if (o.dump) {
        emit(o, dump_config(cfg));
        return 0;
    }
    const ConfigurationSystem& sys = need_system(cfg);
    const DecayTarget target = parse_decay_target(o.target);
    const WeightSpec weight = cfg.weight ? *cfg.weight : WeightSpec::constant();
    const std::vector<Int> primes = o.primes.empty() ? default_ladder(sys.dimension) : o.primes;
    const DecayReport report = scan_decay(target, sys, weight, primes, o.trials, o.density, o.seed);
    emit(o, o.format == "csv" ? to_csv(report) : to_json(report));
    return 0;
}

int run_find(const Options& o) {
    const CliConfig cfg = load(o);
    if (o.dump) {
        emit(o, dump_config(cfg));
        return 0;
    }
    const ConfigurationSystem& sys = need_system(cfg);
    if (o.p == 0) raise(Errc::ParseError, "find needs --p");
    const PrimeContext ctx = make_prime_context(o.p);
    const GridFunction set = resolve_set(o, cfg, o.p, sys.dimension);
    const auto found = find_configuration(set, sys, ctx);

    auto point_json = [](const Vec& v) {
        std::string out = "[";
        for (Int c = 0; c < v.size(); ++c) {
            if (c) out += ',';
            out += std::to_string(v[c]);
        }
        out += ']';
        return out;
    };

    if (o.format == "csv") {
        std::string out = "key,value\n";
        out += std::string("found,") + (found ? "true" : "false") + '\n';
        if (found) {
            out += "y," + std::to_string(found->y) + '\n';
            for (std::size_t i = 0; i < found->points.size(); ++i) {
                out += "point_" + std::to_string(i) + ',';
                const Vec& v = found->points[i];
                for (Int c = 0; c < v.size(); ++c) {
                    if (c) out += ' ';
                    out += std::to_string(v[c]);
                }
                out += '\n';
            }
            out += std::string("nontrivial,") + (found->nontrivial ? "true" : "false") + '\n';
            out += std::string("all_distinct,") + (found->all_distinct ? "true" : "false") + '\n';
        }
        emit(o, out);
        return 0;
    }

    std::string out = "{\"found\":";
    out += found ? "true" : "false";
    if (found) {
        out += ",\"base\":" + point_json(found->base);
        out += ",\"y\":" + std::to_string(found->y);
        out += ",\"points\":[";
        for (std::size_t i = 0; i < found->points.size(); ++i) {
            if (i) out += ',';
            out += point_json(found->points[i]);
        }
        out += ']';
        out += ",\"nontrivial\":";
        out += found->nontrivial ? "true" : "false";
        out += ",\"all_distinct\":";
        out += found->all_distinct ? "true" : "false";
    }
    out += "}\n";
    emit(o, out);
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"harmonic analysis workbench for dense functions on F_p^D"};
    app.require_subcommand(1);
    Options o;

    CLI::App* norms = app.add_subcommand(
        "norms", "correlation and box norms of a weight or grid, or a prime-ladder profile");
    add_common(norms, o);
    norms->add_option("--grid", o.grid_path, "grid CSV (index,re,im)");
    norms->add_option("--weight", o.weight_path, "weight CSV (index,re,im)");
    norms->add_option("--spectrum", o.spectrum,
                      "dump the directional spectrum along this direction as CSV")
        ->delimiter(',');

    CLI::App* count = app.add_subcommand(
        "count", "counting average, main term, and their gap for one system and prime");
    add_common(count, o);
    count->add_option("--set", o.set_path, "indicator set as an index list file");

    CLI::App* verify =
        app.add_subcommand("verify", "run the exact identity and inequality suite");
    add_common(verify, o);

    CLI::App* scan = app.add_subcommand("scan", "decay scan across a prime ladder");
    add_common(scan, o);
    scan->add_option("--target", o.target,
                     "avg-l2, count, count-unweighted, or count-rational");

    CLI::App* find =
        app.add_subcommand("find", "search an indicator set for a nontrivial configuration");
    add_common(find, o);
    find->add_option("--set", o.set_path, "indicator set as an index list file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    set_thread_count(o.threads);
    try {
        if (norms->parsed()) return run_norms(o);
        if (count->parsed()) return run_count(o);
        if (verify->parsed()) return run_verify(o);
        if (scan->parsed()) return run_scan(o);
        if (find->parsed()) return run_find(o);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

}  // namespace ffharm

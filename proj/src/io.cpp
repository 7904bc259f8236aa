#include "ffharm/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ffharm {

namespace {

using nlohmann::json;

std::vector<Int> int_list(const json& node, const char* what) {
    if (!node.is_array()) raise(Errc::ParseError, std::string(what) + " must be an array");
    std::vector<Int> out;
    for (const auto& item : node) {
        if (!item.is_number_integer())
            raise(Errc::ParseError, std::string(what) + " must hold integers");
        out.push_back(item.get<Int>());
    }
    return out;
}

IntPolynomial poly_from(const json& node, const char* what) {
    return IntPolynomial(int_list(node, what));
}

Complex complex_from(const json& node, const char* what) {
    if (node.is_number()) return Complex{node.get<double>(), 0.0};
    if (node.is_array() && node.size() == 2 && node[0].is_number() && node[1].is_number())
        return Complex{node[0].get<double>(), node[1].get<double>()};
    raise(Errc::ParseError, std::string(what) + " must be a number or [re, im]");
}

WeightSpec weight_from(const json& node) {
    if (!node.is_object() || !node.contains("kind"))
        raise(Errc::ParseError, "weight must be an object with a kind");
    const std::string kind = node.at("kind").get<std::string>();
    if (kind == "constant") {
        Complex value{1.0, 0.0};
        if (node.contains("value")) value = complex_from(node.at("value"), "weight value");
        return WeightSpec::constant(value);
    }
    if (kind == "poly_phase")
        return WeightSpec::poly_phase(poly_from(node.at("coeffs"), "weight coeffs"));
    if (kind == "rational_phase")
        return WeightSpec::rational_phase(RationalFunction(
            poly_from(node.at("num"), "weight num"), poly_from(node.at("den"), "weight den")));
    if (kind == "balanced_indicator")
        return WeightSpec::balanced_indicator(int_list(node.at("set"), "weight set"));
    if (kind == "random") {
        std::uint64_t seed = 0;
        if (node.contains("seed")) seed = node.at("seed").get<std::uint64_t>();
        return WeightSpec::random(seed);
    }
    raise(Errc::ParseError, "unknown weight kind: " + kind);
}

void append_int_array(std::string& out, const std::vector<Int>& values) {
    out += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    out += ']';
}

std::vector<Int> vec_to_list(const Vec& v) {
    std::vector<Int> out(static_cast<std::size_t>(v.size()));
    for (int i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i];
    return out;
}

}  // namespace

CliConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        raise(Errc::ParseError, std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) raise(Errc::ParseError, "config root must be an object");

    CliConfig config;
    try {
        if (root.contains("D") || root.contains("vectors") || root.contains("polys")) {
            if (!(root.contains("D") && root.contains("vectors") && root.contains("polys")))
                raise(Errc::ParseError, "a system needs D, vectors, and polys together");
            const int dims = root.at("D").get<int>();
            std::vector<Vec> vectors;
            for (const auto& entry : root.at("vectors")) {
                const auto coords = int_list(entry, "vector");
                Vec v(static_cast<Int>(coords.size()));
                for (std::size_t i = 0; i < coords.size(); ++i) v[static_cast<Int>(i)] = coords[i];
                vectors.push_back(std::move(v));
            }
            std::vector<IntPolynomial> polys;
            for (const auto& entry : root.at("polys")) polys.push_back(poly_from(entry, "poly"));
            std::optional<RationalFunction> phi;
            if (root.contains("phi")) {
                const auto& node = root.at("phi");
                if (!node.is_object() || !node.contains("num") || !node.contains("den"))
                    raise(Errc::ParseError, "phi needs num and den arrays");
                phi.emplace(poly_from(node.at("num"), "phi num"),
                            poly_from(node.at("den"), "phi den"));
            }
            config.system =
                make_configuration_system(dims, std::move(vectors), std::move(polys), std::move(phi));
        }
        if (root.contains("weight")) config.weight = weight_from(root.at("weight"));
        if (root.contains("set")) {
            config.set = int_list(root.at("set"), "set");
            config.has_set = true;
        }
    } catch (const json::exception& e) {
        raise(Errc::ParseError, std::string("malformed config: ") + e.what());
    }
    return config;
}

CliConfig load_config(const std::string& path) { return parse_config_text(read_text_file(path)); }

std::string dump_config(const CliConfig& config) {
    std::string out = "{";
    bool first = true;
    auto field = [&](const char* name) {
        if (!first) out += ',';
        first = false;
        out += '\n';
        out += "  \"";
        out += name;
        out += "\": ";
    };
    if (config.system) {
        const auto& sys = *config.system;
        field("D");
        out += std::to_string(sys.dimension);
        field("vectors");
        out += '[';
        for (std::size_t i = 0; i < sys.vectors.size(); ++i) {
            if (i) out += ',';
            append_int_array(out, vec_to_list(sys.vectors[i]));
        }
        out += ']';
        field("polys");
        out += '[';
        for (std::size_t i = 0; i < sys.polys.size(); ++i) {
            if (i) out += ',';
            append_int_array(out, sys.polys[i].coeffs());
        }
        out += ']';
        if (sys.phi) {
            field("phi");
            out += "{\"num\": ";
            append_int_array(out, sys.phi->num.coeffs());
            out += ", \"den\": ";
            append_int_array(out, sys.phi->den.coeffs());
            out += '}';
        }
    }
    if (config.weight) {
        const auto& w = *config.weight;
        field("weight");
        switch (w.kind) {
            case WeightKind::Constant:
                out += "{\"kind\": \"constant\", \"value\": ";
                if (w.value.imag() == 0.0) {
                    out += format_double(w.value.real());
                } else {
                    out += '[';
                    out += format_double(w.value.real());
                    out += ',';
                    out += format_double(w.value.imag());
                    out += ']';
                }
                out += '}';
                break;
            case WeightKind::PolyPhase:
                out += "{\"kind\": \"poly_phase\", \"coeffs\": ";
                append_int_array(out, w.poly.coeffs());
                out += '}';
                break;
            case WeightKind::RationalPhase:
                out += "{\"kind\": \"rational_phase\", \"num\": ";
                append_int_array(out, w.phase->num.coeffs());
                out += ", \"den\": ";
                append_int_array(out, w.phase->den.coeffs());
                out += '}';
                break;
            case WeightKind::BalancedIndicator:
                out += "{\"kind\": \"balanced_indicator\", \"set\": ";
                append_int_array(out, w.indices);
                out += '}';
                break;
            case WeightKind::Random:
                out += "{\"kind\": \"random\", \"seed\": ";
                out += std::to_string(w.seed);
                out += '}';
                break;
        }
    }
    if (config.has_set) {
        field("set");
        append_int_array(out, config.set);
    }
    out += "\n}\n";
    return out;
}

std::string format_double(double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    return buffer;
}

namespace {

void append_kv(std::string& out, const char* key, const std::string& value, bool& first) {
    if (!first) out += ',';
    first = false;
    out += '"';
    out += key;
    out += "\":";
    out += value;
}

std::string quoted(const std::string& s) { return '"' + s + '"'; }

}  // namespace

std::string to_json(const DecayReport& report) {
    std::string out = "{";
    bool first = true;
    append_kv(out, "target", quoted(decay_target_name(report.target)), first);
    std::string rows = "[";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        if (i) rows += ',';
        rows += "{\"p\":" + std::to_string(row.p) + ",\"max\":" + format_double(row.max) +
                ",\"mean\":" + format_double(row.mean) + '}';
    }
    rows += ']';
    append_kv(out, "rows", rows, first);
    append_kv(out, "slope",
              report.slope_defined ? format_double(report.fitted_slope) : std::string("null"),
              first);
    append_kv(out, "seed", std::to_string(report.seed), first);
    out += "}\n";
    return out;
}

std::string to_csv(const DecayReport& report) {
    std::string out = "target,p,max,mean,slope,seed\n";
    const std::string target = decay_target_name(report.target);
    const std::string slope = report.slope_defined ? format_double(report.fitted_slope) : "";
    for (const auto& row : report.rows) {
        out += target + ',' + std::to_string(row.p) + ',' + format_double(row.max) + ',' +
               format_double(row.mean) + ',' + slope + ',' + std::to_string(report.seed) + '\n';
    }
    return out;
}

std::string to_json(const ExactSuiteReport& report) {
    std::string out = "{";
    bool first = true;
    append_kv(out, "seed", std::to_string(report.seed), first);
    std::string primes = "[";
    for (std::size_t i = 0; i < report.primes.size(); ++i) {
        if (i) primes += ',';
        primes += std::to_string(report.primes[i]);
    }
    primes += ']';
    append_kv(out, "primes", primes, first);
    append_kv(out, "trials", std::to_string(report.trials), first);
    std::string checks = "[";
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
        const auto& check = report.checks[i];
        if (i) checks += ',';
        checks += "{\"name\":" + quoted(check.name) +
                  ",\"max_violation\":" + format_double(check.max_violation) +
                  ",\"pass\":" + (check.pass ? "true" : "false") + '}';
    }
    checks += ']';
    append_kv(out, "checks", checks, first);
    append_kv(out, "max_violation", format_double(report.max_violation), first);
    append_kv(out, "all_pass", report.all_pass ? "true" : "false", first);
    out += "}\n";
    return out;
}

std::string to_csv(const ExactSuiteReport& report) {
    std::string out = "name,max_violation,pass\n";
    for (const auto& check : report.checks)
        out += check.name + ',' + format_double(check.max_violation) + ',' +
               (check.pass ? "true" : "false") + '\n';
    return out;
}

std::string to_json(const UniformityProfile& profile) {
    std::string out = "{";
    bool first = true;
    append_kv(out, "s", std::to_string(profile.s), first);
    std::string rows = "[";
    for (std::size_t i = 0; i < profile.rows.size(); ++i) {
        const auto& row = profile.rows[i];
        if (i) rows += ',';
        rows += "{\"p\":" + std::to_string(row.p) + ",\"value\":" + format_double(row.value) +
                ",\"exact_zero\":" + (row.exact_zero ? "true" : "false") + '}';
    }
    rows += ']';
    append_kv(out, "rows", rows, first);
    append_kv(out, "slope",
              profile.slope_defined ? format_double(profile.fitted_slope) : std::string("null"),
              first);
    append_kv(out, "intercept",
              profile.slope_defined ? format_double(profile.fitted_intercept) : std::string("null"),
              first);
    out += "}\n";
    return out;
}

std::string to_csv(const UniformityProfile& profile) {
    std::string out = "s,p,value,exact_zero,slope\n";
    const std::string slope = profile.slope_defined ? format_double(profile.fitted_slope) : "";
    for (const auto& row : profile.rows)
        out += std::to_string(profile.s) + ',' + std::to_string(row.p) + ',' +
               format_double(row.value) + ',' + (row.exact_zero ? "true" : "false") + ',' + slope +
               '\n';
    return out;
}

std::string spectrum_csv(const DirectionalSpectrum& spectrum) {
    std::string out = "coset_index,xi,re,im\n";
    for (Int r = 0; r < static_cast<Int>(spectrum.coset_reps.size()); ++r)
        for (Int xi = 0; xi < spectrum.p; ++xi) {
            const Complex c = spectrum.table(r, xi);
            out += std::to_string(r) + ',' + std::to_string(xi) + ',' + format_double(c.real()) +
                   ',' + format_double(c.imag()) + '\n';
        }
    return out;
}

std::string grid_csv(const GridFunction& f) {
    std::string out = "index,re,im\n";
    for (Int i = 0; i < f.values.size(); ++i)
        out += std::to_string(i) + ',' + format_double(f.values[i].real()) + ',' +
               format_double(f.values[i].imag()) + '\n';
    return out;
}

std::string weight_csv(const WeightFunction& w) {
    std::string out = "index,re,im\n";
    for (Int i = 0; i < w.values.size(); ++i)
        out += std::to_string(i) + ',' + format_double(w.values[i].real()) + ',' +
               format_double(w.values[i].imag()) + '\n';
    return out;
}

namespace {

// index,re,im lines into a dense array; a leading header line is allowed
Eigen::ArrayXcd parse_table_csv(const std::string& text, Int expected, const char* what) {
    Eigen::ArrayXcd values = Eigen::ArrayXcd::Zero(expected);
    std::vector<bool> seen(static_cast<std::size_t>(expected), false);
    std::istringstream stream(text);
    std::string line;
    bool first_line = true;
    while (std::getline(stream, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first_line && line.rfind("index", 0) == 0) {
            first_line = false;
            continue;
        }
        first_line = false;
        Int index = 0;
        double re = 0.0, im = 0.0;
        char sep1 = 0, sep2 = 0;
        std::istringstream fields(line);
        if (!(fields >> index >> sep1 >> re >> sep2 >> im) || sep1 != ',' || sep2 != ',')
            raise(Errc::ParseError, std::string(what) + ": expected index,re,im but got: " + line);
        if (index < 0 || index >= expected)
            raise(Errc::ParseError, std::string(what) + ": index out of range: " + line);
        values[index] = Complex{re, im};
        seen[static_cast<std::size_t>(index)] = true;
    }
    for (Int i = 0; i < expected; ++i)
        if (!seen[static_cast<std::size_t>(i)])
            raise(Errc::ParseError,
                  std::string(what) + ": missing index " + std::to_string(i));
    return values;
}

}  // namespace

GridFunction load_grid_csv(const std::string& path, Int p, int dims) {
    GridFunction f = GridFunction::zeros(p, dims);
    f.values = parse_table_csv(read_text_file(path), f.size(), "grid csv");
    f.bounded = f.sup_norm() <= 1.0 + 1e-12;
    return f;
}

WeightFunction load_weight_csv(const std::string& path, Int p) {
    WeightFunction w = WeightFunction::zeros(p);
    w.values = parse_table_csv(read_text_file(path), p, "weight csv");
    w.bounded = w.sup_norm() <= 1.0 + 1e-12;
    return w;
}

std::vector<Int> load_index_list(const std::string& path) {
    std::string text = read_text_file(path);
    for (char& c : text)
        if (c == ',') c = ' ';
    std::istringstream stream(text);
    std::vector<Int> out;
    Int value = 0;
    while (stream >> value) out.push_back(value);
    if (!stream.eof()) raise(Errc::ParseError, "index list contains a non-integer token");
    return out;
}

GridFunction indicator_from_indices(const std::vector<Int>& indices, Int p, int dims) {
    GridFunction f = GridFunction::zeros(p, dims);
    for (Int idx : indices) {
        if (idx < 0 || idx >= f.size())
            raise(Errc::ParseError, "set index out of range: " + std::to_string(idx));
        f.values[idx] = Complex{1.0, 0.0};
    }
    f.bounded = true;
    return f;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::IoError, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) raise(Errc::IoError, "read failed on " + path);
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::IoError, "cannot open " + path + " for writing");
    out << text;
    if (!out) raise(Errc::IoError, "write failed on " + path);
}

}  // namespace ffharm

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "../tools/cli.hpp"
#include "ffharm/io.hpp"

using namespace ffharm;

namespace {

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ffharm");
    std::vector<char*> argv;
    for (auto& arg : args) argv.push_back(arg.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::filesystem::path temp_file(const std::string& stem) {
    static int counter = 0;
    return std::filesystem::temp_directory_path() /
           ("ffharm_test_" + stem + "_" + std::to_string(++counter));
}

const std::string kSquareSystem =
    R"({"D": 1, "vectors": [[1]], "polys": [[0,0,1]], "set": [0,1]})";

}  // namespace

TEST_CASE("doubles survive the 17 digit round trip") {
    for (double x : {0.1, 1.0 / 3.0, 0.23999999999999999, -2.5e300, 4.9e-324, 0.0, 42.0}) {
        const std::string text = format_double(x);
        CHECK(std::strtod(text.c_str(), nullptr) == x);
    }
}

TEST_CASE("configs parse, dump, and round trip") {
    const std::string text = R"({
        "D": 1,
        "vectors": [[1],[2]],
        "polys": [[0,1],[0,0,1]],
        "phi": {"num": [1], "den": [0,1]},
        "weight": {"kind": "rational_phase", "num": [1], "den": [0,1]},
        "set": [0, 2, 4]
    })";
    const CliConfig config = parse_config_text(text);
    REQUIRE(config.system.has_value());
    CHECK(config.system->dimension == 1);
    CHECK(config.system->count() == 2);
    REQUIRE(config.system->phi.has_value());
    REQUIRE(config.weight.has_value());
    CHECK(config.weight->kind == WeightKind::RationalPhase);
    CHECK(config.has_set);
    CHECK(config.set == std::vector<Int>{0, 2, 4});

    const std::string dumped = dump_config(config);
    const CliConfig reparsed = parse_config_text(dumped);
    CHECK(dump_config(reparsed) == dumped);
    CHECK(reparsed.system->polys == config.system->polys);
    CHECK(reparsed.set == config.set);
}

TEST_CASE("each weight kind survives the dump cycle") {
    const std::vector<std::string> weights = {
        R"({"weight": {"kind": "constant", "value": 0.5}})",
        R"({"weight": {"kind": "constant", "value": [0.3, -0.4]}})",
        R"({"weight": {"kind": "poly_phase", "coeffs": [0, 1, 2]}})",
        R"({"weight": {"kind": "balanced_indicator", "set": [1, 3]}})",
        R"({"weight": {"kind": "random", "seed": 99}})",
    };
    for (const auto& text : weights) {
        const std::string dumped = dump_config(parse_config_text(text));
        CHECK(dump_config(parse_config_text(dumped)) == dumped);
    }
}

TEST_CASE("malformed configs are parse errors, not crashes") {
    const auto code_of = [](const std::string& text) {
        try {
            parse_config_text(text);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::NotPrime;
    };
    CHECK(code_of("not json at all") == Errc::ParseError);
    CHECK(code_of("[1,2,3]") == Errc::ParseError);
    CHECK(code_of(R"({"D": 1, "vectors": [[1]]})") == Errc::ParseError);
    CHECK(code_of(R"({"D": 1, "vectors": [[1]], "polys": [["x"]]})") == Errc::ParseError);
    CHECK(code_of(R"({"weight": {"kind": "mystery"}})") == Errc::ParseError);
    CHECK(code_of(R"({"weight": {"kind": "poly_phase"}})") == Errc::ParseError);
    CHECK(code_of(R"({"D": 1, "vectors": [[1]], "polys": [[0,1]], "phi": {"num": [1]}})") ==
          Errc::ParseError);
    // structurally valid but mathematically broken systems raise their own codes
    try {
        parse_config_text(R"({"D": 1, "vectors": [[1],[1]], "polys": [[0,1],[0,2]]})");
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonIndependentPolys);
    }
}

TEST_CASE("grid and weight tables round trip through csv files") {
    Rng rng(6);
    const GridFunction f = random_unit_grid(5, 2, rng);
    const auto grid_path = temp_file("grid");
    write_text_file(grid_path.string(), grid_csv(f));
    const GridFunction g = load_grid_csv(grid_path.string(), 5, 2);
    CHECK((g.values - f.values).abs().maxCoeff() == 0.0);
    CHECK(g.bounded);

    const WeightFunction w = random_unit_weight(7, rng);
    const auto weight_path = temp_file("weight");
    write_text_file(weight_path.string(), weight_csv(w));
    const WeightFunction u = load_weight_csv(weight_path.string(), 7);
    CHECK((u.values - w.values).abs().maxCoeff() == 0.0);

    std::filesystem::remove(grid_path);
    std::filesystem::remove(weight_path);
}

TEST_CASE("table parsing rejects gaps and garbage") {
    const auto path = temp_file("table");
    const auto code_of = [&](const std::string& text, Int p) {
        write_text_file(path.string(), text);
        try {
            load_weight_csv(path.string(), p);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::NotPrime;
    };
    CHECK(code_of("index,re,im\n0,1,0\n1,1,0\n", 3) == Errc::ParseError);  // missing index 2
    CHECK(code_of("0,1,0\n1,1,0\nbroken\n", 3) == Errc::ParseError);
    CHECK(code_of("0,1,0\n1,1,0\n5,1,0\n", 3) == Errc::ParseError);  // out of range
    // headerless files are fine
    write_text_file(path.string(), "0,0.5,0\n1,0.5,0\n2,0.5,0\n");
    CHECK_NOTHROW(load_weight_csv(path.string(), 3));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_weight_csv(path.string(), 3), Error);  // IoError
}

TEST_CASE("index lists accept commas and whitespace") {
    const auto path = temp_file("indices");
    write_text_file(path.string(), "0, 3 7\n9,\n");
    CHECK(load_index_list(path.string()) == std::vector<Int>{0, 3, 7, 9});
    write_text_file(path.string(), "0, x");
    CHECK_THROWS_AS(load_index_list(path.string()), Error);
    std::filesystem::remove(path);

    const GridFunction f = indicator_from_indices({0, 3}, 5, 1);
    CHECK(f.values[0].real() == 1.0);
    CHECK(f.values[3].real() == 1.0);
    CHECK(f.values[1].real() == 0.0);
    CHECK_THROWS_AS(indicator_from_indices({25}, 5, 1), Error);
    CHECK_THROWS_AS(indicator_from_indices({-1}, 5, 1), Error);
}

TEST_CASE("decay reports serialize with and without a slope") {
    DecayReport report;
    report.target = DecayTarget::RationalCount;
    report.seed = 17;
    report.rows = {{11, 4, 0.25, 0.125}, {13, 4, 0.2, 0.1}};
    report.slope_defined = false;

    std::string text = to_json(report);
    CHECK(text.find("\"target\":\"count-rational\"") != std::string::npos);
    CHECK(text.find("\"slope\":null") != std::string::npos);
    CHECK(text.find("\"seed\":17") != std::string::npos);
    CHECK(nlohmann::json::parse(text)["rows"].size() == 2);

    report.slope_defined = true;
    report.fitted_slope = -0.5;
    text = to_json(report);
    CHECK(nlohmann::json::parse(text)["slope"].get<double>() == -0.5);

    const std::string csv = to_csv(report);
    CHECK(csv.rfind("target,p,max,mean,slope,seed\n", 0) == 0);
    CHECK(csv.find("count-rational,11,") != std::string::npos);
}

TEST_CASE("suite and profile reports serialize their tables") {
    const auto suite = verify_exact_suite(2, {5}, 1);
    const std::string text = to_json(suite);
    const auto parsed = nlohmann::json::parse(text);
    CHECK(parsed["all_pass"].get<bool>());
    CHECK(parsed["checks"].size() == suite.checks.size());
    const std::string csv = to_csv(suite);
    CHECK(csv.rfind("name,max_violation,pass\n", 0) == 0);

    const auto profile =
        uniformity_profile(WeightSpec::random(1), 2, {11, 13, 17}, kDefaultEnumerationCap);
    const auto pj = nlohmann::json::parse(to_json(profile));
    CHECK(pj["s"].get<int>() == 2);
    CHECK(pj["rows"].size() == 3);
    CHECK(to_csv(profile).rfind("s,p,value,exact_zero,slope\n", 0) == 0);
}

TEST_CASE("spectra dump one row per coset and frequency") {
    Rng rng(1);
    const GridFunction f = random_unit_grid(5, 1, rng);
    const PrimeContext ctx = make_prime_context(5);
    Vec v(1);
    v << 1;
    const std::string csv = spectrum_csv(directional_spectrum(f, v, ctx));
    CHECK(csv.rfind("coset_index,xi,re,im\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 5);
}

TEST_CASE("count subcommand reproduces the worked example") {
    const auto config = temp_file("cfg");
    const auto out = temp_file("out");
    write_text_file(config.string(), kSquareSystem);

    CHECK(cli({"count", "--config", config.string(), "--p", "5", "--out", out.string()}) == 0);
    const auto parsed = nlohmann::json::parse(read_text_file(out.string()));
    CHECK(parsed["lambda"].get<double>() == doctest::Approx(0.24).epsilon(1e-12));
    CHECK(parsed["main_term"].get<double>() == doctest::Approx(0.16).epsilon(1e-12));
    CHECK(parsed["discrepancy"].get<double>() == doctest::Approx(0.08).epsilon(1e-12));

    // composite modulus is a clean failure
    CHECK(cli({"count", "--config", config.string(), "--p", "4", "--out", out.string()}) == 1);

    std::filesystem::remove(config);
    std::filesystem::remove(out);
}

TEST_CASE("the command surface rejects misuse without crashing") {
    CHECK(cli({}) == 1);                                     // no subcommand
    CHECK(cli({"count", "--nonsense"}) == 1);                // unknown flag
    CHECK(cli({"count", "--p", "5"}) == 1);                  // no system
    CHECK(cli({"scan", "--format", "yaml"}) == 1);           // bad format
    CHECK(cli({"norms", "--p", "7"}) == 1);                  // nothing to measure
    CHECK(cli({"count", "--config", "/no/such/file"}) == 1); // IoError
}

TEST_CASE("verify subcommand exits by suite outcome") {
    const auto out = temp_file("verify");
    CHECK(cli({"verify", "--primes", "5,7", "--trials", "1", "--seed", "3", "--out",
               out.string()}) == 0);
    const auto parsed = nlohmann::json::parse(read_text_file(out.string()));
    CHECK(parsed["all_pass"].get<bool>());
    CHECK(parsed["trials"].get<int>() == 1);
    std::filesystem::remove(out);
}

TEST_CASE("scan subcommand respects target and format") {
    const auto config = temp_file("scancfg");
    const auto out = temp_file("scanout");
    write_text_file(config.string(), kSquareSystem);
    CHECK(cli({"scan", "--config", config.string(), "--target", "count-unweighted", "--primes",
               "11,13,17", "--trials", "2", "--seed", "4", "--out", out.string()}) == 0);
    const auto parsed = nlohmann::json::parse(read_text_file(out.string()));
    CHECK(parsed["target"].get<std::string>() == "count-unweighted");
    CHECK(parsed["rows"].size() == 3);

    CHECK(cli({"scan", "--config", config.string(), "--target", "count-unweighted", "--primes",
               "11,13,17", "--trials", "2", "--format", "csv", "--out", out.string()}) == 0);
    CHECK(read_text_file(out.string()).rfind("target,p,max,mean,slope,seed\n", 0) == 0);

    CHECK(cli({"scan", "--config", config.string(), "--target", "mystery", "--primes",
               "11,13,17"}) == 1);
    std::filesystem::remove(config);
    std::filesystem::remove(out);
}

TEST_CASE("find subcommand reports hits and misses") {
    const auto config = temp_file("findcfg");
    const auto out = temp_file("findout");
    write_text_file(
        config.string(),
        R"({"D": 1, "vectors": [[1],[2]], "polys": [[0,1],[0,0,1]], "phi": {"num": [1], "den": [0,1]},
            "set": [0,1,2,3,4,5,6,7,8,9,10]})");
    CHECK(cli({"find", "--config", config.string(), "--p", "11", "--out", out.string()}) == 0);
    auto parsed = nlohmann::json::parse(read_text_file(out.string()));
    CHECK(parsed["found"].get<bool>());
    CHECK(parsed["nontrivial"].get<bool>());
    CHECK(parsed["points"].size() == 3);

    write_text_file(config.string(),
                    R"({"D": 1, "vectors": [[1],[2]], "polys": [[0,1],[0,0,1]],
                        "phi": {"num": [1], "den": [0,1]}, "set": []})");
    CHECK(cli({"find", "--config", config.string(), "--p", "11", "--out", out.string()}) == 0);
    parsed = nlohmann::json::parse(read_text_file(out.string()));
    CHECK_FALSE(parsed["found"].get<bool>());

    std::filesystem::remove(config);
    std::filesystem::remove(out);
}

TEST_CASE("dump-config echoes a normalized reparseable config") {
    const auto config = temp_file("dumpcfg");
    const auto out = temp_file("dumpout");
    write_text_file(config.string(), kSquareSystem);
    CHECK(cli({"count", "--config", config.string(), "--dump-config", "--out", out.string()}) ==
          0);
    const std::string dumped = read_text_file(out.string());
    CHECK(dump_config(parse_config_text(dumped)) == dumped);
    std::filesystem::remove(config);
    std::filesystem::remove(out);
}

TEST_CASE("the enumeration cap flows from flag and environment") {
    const auto config = temp_file("capcfg");
    write_text_file(config.string(),
                    R"({"weight": {"kind": "rational_phase", "num": [1], "den": [0,1]}})");

    // environment cap too small for p = 11 at s = 2
    setenv("FFPROG_CAP", "5", 1);
    CHECK(cli({"norms", "--config", config.string(), "--p", "11"}) == 1);
    // the flag wins over the environment
    const auto out = temp_file("capout");
    CHECK(cli({"norms", "--config", config.string(), "--p", "11", "--cap", "100000", "--out",
               out.string()}) == 0);
    setenv("FFPROG_CAP", "junk", 1);
    CHECK(cli({"norms", "--config", config.string(), "--p", "11"}) == 1);
    unsetenv("FFPROG_CAP");

    CHECK(cli({"norms", "--config", config.string(), "--p", "11", "--out", out.string()}) == 0);
    const auto parsed = nlohmann::json::parse(read_text_file(out.string()));
    CHECK(parsed["u_raw"].get<double>() > 0.0);
    CHECK(parsed["u_centered"].get<double>() > 0.0);
    std::filesystem::remove(config);
    std::filesystem::remove(out);
}

TEST_CASE("norms profiles a weight over a prime ladder") {
    const auto config = temp_file("profcfg");
    const auto out = temp_file("profout");
    write_text_file(config.string(),
                    R"({"weight": {"kind": "rational_phase", "num": [1], "den": [0,1]}})");
    CHECK(cli({"norms", "--config", config.string(), "--primes", "11,13,17", "--s", "2",
               "--format", "csv", "--out", out.string()}) == 0);
    CHECK(read_text_file(out.string()).rfind("s,p,value,exact_zero,slope\n", 0) == 0);
    std::filesystem::remove(config);
    std::filesystem::remove(out);
}

TEST_CASE("norms measures grids loaded from csv") {
    const auto config = temp_file("gridcfg");
    const auto grid = temp_file("gridcsv");
    const auto out = temp_file("gridout");
    write_text_file(config.string(), kSquareSystem);
    Rng rng(12);
    write_text_file(grid.string(), grid_csv(random_unit_grid(7, 1, rng)));
    CHECK(cli({"norms", "--config", config.string(), "--p", "7", "--grid", grid.string(),
               "--out", out.string()}) == 0);
    const auto parsed = nlohmann::json::parse(read_text_file(out.string()));
    CHECK(parsed["l2"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(parsed["sup"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(parsed["box_norms"].size() == 1);

    // spectrum dump along a direction
    CHECK(cli({"norms", "--p", "7", "--grid", grid.string(), "--spectrum", "1", "--out",
               out.string()}) == 0);
    CHECK(read_text_file(out.string()).rfind("coset_index,xi,re,im\n", 0) == 0);

    std::filesystem::remove(config);
    std::filesystem::remove(grid);
    std::filesystem::remove(out);
}

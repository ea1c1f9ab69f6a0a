#include "veecav/params.hpp"
#include "veecav/errors.hpp"
#include "veecav/presets.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace veecav;

TEST_CASE("figure caption parameter sets validate") {
    for (int set = 2; set <= 6; ++set)
        for (const auto& panel : figure_panels(set)) {
            if (panel.params.P_a >= panel.params.gamma_a) {
                CHECK_THROWS_AS(validate_params(panel.params), StabilityError);
                CHECK_NOTHROW(validate_ranges(panel.params));
            } else {
                CHECK_NOTHROW(validate_params(panel.params));
            }
        }
    CHECK(figure_base_params().P_2 == doctest::Approx(0.15).epsilon(1e-15));
}

TEST_CASE("range violations name the offending field") {
    SystemParams p = figure_base_params();
    p.beta = 1.5;
    try {
        validate_params(p);
        FAIL("expected RangeError");
    } catch (const RangeError& e) {
        CHECK(e.field == "beta");
    }

    p = figure_base_params();
    p.gamma_1 = -0.1;
    try {
        validate_params(p);
        FAIL("expected RangeError");
    } catch (const RangeError& e) {
        CHECK(e.field == "gamma_1");
    }

    p = figure_base_params();
    p.g_1 = 0.5;
    CHECK_THROWS_AS(validate_params(p), RangeError);
    p.g_1 = 0.0;  // decoupled diagnostic limit is admitted
    CHECK_NOTHROW(validate_ranges(p));
}

TEST_CASE("pump beyond cavity loss is a stability error") {
    SystemParams p = figure_base_params();
    p.P_a = 0.5;
    p.gamma_a = 0.3;
    CHECK_THROWS_AS(validate_params(p), StabilityError);
}

TEST_CASE("derived rates") {
    SystemParams p = figure_base_params();
    p.beta = 0.0;
    CHECK(derived_rates(p).gamma_12 == 0.0);

    p.beta = 1.0;
    const DerivedRates r = derived_rates(p);
    CHECK(r.gamma_12 == doctest::Approx(std::sqrt(0.03)).epsilon(1e-12));
    CHECK(r.Gamma_a == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(r.Gamma_s1 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(r.Gamma_s2 == doctest::Approx(0.35).epsilon(1e-15));
}

TEST_CASE("gamma_12 is odd in beta and saturates at sqrt(g1 g2)") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> U(0.01, 0.9);
    for (int k = 0; k < 200; ++k) {
        SystemParams p = figure_base_params();
        p.gamma_1 = U(rng);
        p.gamma_2 = U(rng);
        p.beta = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        SystemParams q = p;
        q.beta = -p.beta;
        CHECK(derived_rates(p).gamma_12 == doctest::Approx(-derived_rates(q).gamma_12).epsilon(1e-15));
        p.beta = 1.0;
        CHECK(std::abs(derived_rates(p).gamma_12 - std::sqrt(p.gamma_1 * p.gamma_2)) < 1e-15);
    }
}

TEST_CASE("parameter file parsing") {
    const char* text = R"(# comment line
gamma_a = 0.3
gamma_1 = 0.15   # trailing comment
gamma_2 = 0.2
g_2 = 1.5
beta = 0.25
P_a = 0.1
P_1 = 0.1
P_2 = 0.15
delta_1 = 1
delta_2 = 0
)";
    const SystemParams p = parse_params_text(text);
    CHECK(p.gamma_a == 0.3);
    CHECK(p.beta == 0.25);
    CHECK(p.g_2 == 1.5);
    CHECK(p.g_1 == 1.0);

    SUBCASE("g_1 key is rejected") {
        CHECK_THROWS_AS(parse_params_text(std::string(text) + "g_1 = 1\n"), ParseError);
    }
    SUBCASE("duplicate keys are rejected") {
        CHECK_THROWS_AS(parse_params_text(std::string(text) + "beta = 0\n"), ParseError);
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS(parse_params_text(std::string(text) + "kappa = 1\n"), ParseError);
    }
    SUBCASE("missing keys are rejected") {
        CHECK_THROWS_AS(parse_params_text("gamma_a = 0.3\n"), ParseError);
    }
    SUBCASE("non-decimal values are rejected") {
        std::string bad(text);
        bad.replace(bad.find("0.25"), 4, "half");
        CHECK_THROWS_AS(parse_params_text(bad), ParseError);
        bad = text;
        bad.replace(bad.find("0.25"), 4, "0x1p3");
        CHECK_THROWS_AS(parse_params_text(bad), ParseError);
    }
    SUBCASE("scientific notation is a decimal float") {
        std::string sci(text);
        sci.replace(sci.find("0.25"), 4, "2.5e-1");
        CHECK(parse_params_text(sci).beta == doctest::Approx(0.25));
    }
}

TEST_CASE("parameter file round-trips through the filesystem") {
    namespace fs = std::filesystem;
    const fs::path file = fs::temp_directory_path() / "veecav_test.params";
    {
        std::ofstream out(file);
        out << "gamma_a=0.3\ngamma_1=0.15\ngamma_2=0.2\ng_2=1.5\nbeta=1\n"
               "P_a=0.1\nP_1=0.1\nP_2=0.15\ndelta_1=1\ndelta_2=0\n";
    }
    const SystemParams p = parse_params_file(file);
    CHECK(p.beta == 1.0);
    fs::remove(file);
    CHECK_THROWS_AS(parse_params_file(file), ParseError);
}

#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "fpwalk/config_parse.hpp"
#include "fpwalk/presets.hpp"
#include "test_helpers.hpp"

using fpwalk::ParseError;
using fpwalk::parse_probability;
using fpwalk::parse_spec_text;

namespace {

const char* kGood = R"(# two factors
[factor A]
states = o a b
edge o a 1
edge a b 1
edge b a 1/2
edge b o 1/2

[factor B]
states = p q
edge p q 1.0
edge q p 1

[product]
alphas = 0.25 3/4
)";

}  // namespace

TEST_CASE("well-formed text parses into the expected spec", "[config]") {
    const auto spec = parse_spec_text(kGood);
    REQUIRE(spec.num_factors() == 2);
    CHECK(spec.factors[0].name == "A");
    CHECK(spec.factors[0].states == std::vector<std::string>{"o", "a", "b"});
    CHECK(spec.factors[0].p(0, 1) == 1.0);
    CHECK(spec.factors[0].p(2, 1) == 0.5);
    CHECK(spec.factors[0].p(2, 0) == 0.5);
    CHECK(spec.factors[0].p(1, 0) == 0.0);
    CHECK(spec.factors[1].states.size() == 2);
    CHECK(spec.alphas[0] == 0.25);
    CHECK(spec.alphas[1] == 0.75);
}

TEST_CASE("probabilities accept decimals and integer fractions", "[config]") {
    CHECK(parse_probability("0.5", 1, 1) == 0.5);
    CHECK(parse_probability("1", 1, 1) == 1.0);
    CHECK(parse_probability("2/3", 1, 1) == Catch::Approx(2.0 / 3.0).margin(1e-15));
    CHECK(parse_probability("10/40", 1, 1) == 0.25);
    CHECK_THROWS_AS(parse_probability("-0.5", 3, 9), ParseError);
    CHECK_THROWS_AS(parse_probability("1/0", 3, 9), ParseError);
    CHECK_THROWS_AS(parse_probability("a/2", 3, 9), ParseError);
    CHECK_THROWS_AS(parse_probability("0.5x", 3, 9), ParseError);
    CHECK_THROWS_AS(parse_probability("/2", 3, 9), ParseError);
    CHECK_THROWS_AS(parse_probability("", 3, 9), ParseError);
}

TEST_CASE("parse errors carry line and column", "[config]") {
    try {
        parse_spec_text("[factor A]\nstates = o a\nedge o a 2x\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.column == 10);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("malformed inputs are rejected with a reason", "[config]") {
    const auto rejects = [](const std::string& text, const std::string& needle) {
        try {
            parse_spec_text(text);
            FAIL("expected rejection for: " << needle);
        } catch (const ParseError& e) {
            INFO(e.what());
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    rejects("x = 1\n", "before any section");
    rejects("[factor A]\nstates = o a\nbogus = 1\n[product]\nalphas = 1\n", "unknown key");
    rejects("[factor A]\nstates = o a\n[product]\nalphas = 1\nbogus = 2\n", "unknown product key");
    rejects("[factor A]\nstates = o o\n", "duplicate state");
    rejects("[factor A]\nstates = o\n", "at least 2 states");
    rejects("[factor A]\nedge o a 1\n", "edge before states");
    rejects("[factor A]\nstates = o a\nedge o c 1\n", "unknown state");
    rejects("[factor A]\nstates = o a\nedge o a 1\nedge o a 0.5\n", "duplicate edge");
    rejects("[factor A]\nstates = o a\nedge o a\n", "edge needs");
    rejects("[factor A]\nstates = o a\n[factor A]\nstates = p q\n", "duplicate factor");
    rejects("[factor A]\nstates = o a\n[product]\nalphas = 1\n[product]\n", "duplicate [product]");
    rejects("[factor A]\nstates = o a\n", "missing [product]");
    rejects("[product]\nalphas = 1\n", "no factor sections");
    rejects("[factor A]\nstates = o a\nstates = o b\n", "states given twice");
    rejects("[factor A]\nstates = o a\n[product]\nalphas = 1/2 1/2\n", "1 factors");
    rejects("[bogus]\n", "unrecognised section");
}

TEST_CASE("render and parse are inverse on the preset", "[config]") {
    const auto spec = fpwalk::preset_two_graphs();
    const auto round = parse_spec_text(fpwalk::render_spec(spec));
    REQUIRE(round.num_factors() == spec.num_factors());
    for (int i = 0; i < spec.num_factors(); ++i) {
        CHECK(round.factors[i].name == spec.factors[i].name);
        CHECK(round.factors[i].states == spec.factors[i].states);
        CHECK((round.factors[i].p - spec.factors[i].p).cwiseAbs().maxCoeff() == 0.0);
        CHECK(round.alphas[i] == spec.alphas[i]);
    }
}

TEST_CASE("shipped sample configs load and match their intent", "[config]") {
    const auto two = fpwalk::load_spec_file(std::string(FPWALK_CONFIG_DIR) + "/two_chains.conf");
    const auto preset = fpwalk::preset_two_graphs();
    REQUIRE(two.num_factors() == 2);
    for (int i = 0; i < 2; ++i)
        CHECK((two.factors[i].p - preset.factors[i].p).cwiseAbs().maxCoeff() == 0.0);

    const auto three =
        fpwalk::load_spec_file(std::string(FPWALK_CONFIG_DIR) + "/three_cycles.conf");
    const auto sym = testutil::symmetric_cycles(3);
    REQUIRE(three.num_factors() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK((three.factors[i].p - sym.factors[i].p).cwiseAbs().maxCoeff() == 0.0);
        CHECK(three.alphas[i] == Catch::Approx(1.0 / 3.0).margin(1e-15));
    }

    CHECK_THROWS_AS(fpwalk::load_spec_file("/nonexistent/path.conf"), fpwalk::Error);
}

TEST_CASE("comments and blank lines are ignored", "[config]") {
    const auto spec = parse_spec_text(
        "# header\n\n[factor A]  # trailing\nstates = o a  # roots first\n"
        "edge o a 1\nedge a o 1 # done\n\n[factor B]\nstates = p q r\n"
        "edge p q 1\nedge q r 1\nedge r p 1\n\n[product]\nalphas = 1/2 1/2\n");
    CHECK(spec.num_factors() == 2);
    CHECK(spec.factors[0].p(1, 0) == 1.0);
}

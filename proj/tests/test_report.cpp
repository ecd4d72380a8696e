#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "fpwalk/report.hpp"

using fpwalk::Report;

TEST_CASE("check helpers apply their acceptance rules", "[report]") {
    Report r;
    r.add_check("close", 1.00005, 1.0, 1e-4);
    r.add_check("far", 1.1, 1.0, 1e-4);
    r.add_bound_check("under", 0.9, 1.0, 0.0);
    r.add_bound_check("at_slack", 1.05, 1.0, 0.05);
    r.add_bound_check("over", 1.2, 1.0, 0.05);
    r.add_flag_check("flag_on", true);
    r.add_flag_check("flag_off", false);

    REQUIRE(r.checks.size() == 7);
    CHECK(r.checks[0].ok);
    CHECK_FALSE(r.checks[1].ok);
    CHECK(r.checks[2].ok);
    CHECK(r.checks[3].ok);
    CHECK_FALSE(r.checks[4].ok);
    CHECK(r.checks[5].ok);
    CHECK_FALSE(r.checks[6].ok);
    CHECK_FALSE(r.all_ok());

    Report clean;
    clean.add_check("only", 2.0, 2.0, 0.0);
    CHECK(clean.all_ok());
}

TEST_CASE("json rendering isolates timing from the payload", "[report]") {
    Report r;
    r.body["summary"] = {{"value", 1.5}, {"label", "x"}};
    r.add_check("a", 1.0, 1.0, 0.1);
    r.timing_ms["total"] = 12.5;

    const auto j = r.to_json();
    CHECK(j["summary"]["value"] == 1.5);
    REQUIRE(j["checks"].is_array());
    REQUIRE(j["checks"].size() == 1);
    CHECK(j["checks"][0]["name"] == "a");
    CHECK(j["checks"][0]["ok"] == true);
    CHECK(j["checks"][0]["target"] == 1.0);
    CHECK(j["all_checks_passed"] == true);
    CHECK(j["timing"]["total"] == 12.5);

    // Stripping "timing" leaves a payload independent of wall-clock noise.
    auto a = r.to_json();
    r.timing_ms["total"] = 99.0;
    auto b = r.to_json();
    a.erase("timing");
    b.erase("timing");
    CHECK(a.dump() == b.dump());
}

TEST_CASE("text rendering marks each check PASS or FAIL", "[report]") {
    Report r;
    r.body["speed"] = 0.25;
    r.body["nested"] = {{"inner", 2.0}};
    r.body["list"] = {1.0, 2.5};
    r.add_check("good", 1.0, 1.0, 0.1);
    r.add_check("bad", 5.0, 1.0, 0.1);

    const auto text = r.to_text();
    CHECK(text.find("speed = 0.25") != std::string::npos);
    CHECK(text.find("nested:") != std::string::npos);
    CHECK(text.find("  inner = 2") != std::string::npos);
    CHECK(text.find("list = [1, 2.5]") != std::string::npos);
    CHECK(text.find("[PASS] good") != std::string::npos);
    CHECK(text.find("[FAIL] bad") != std::string::npos);
    CHECK(text.find("all_checks_passed = false") != std::string::npos);
}

TEST_CASE("csv rendering flattens nested payloads", "[report]") {
    Report r;
    r.body["top"] = 1.0;
    r.body["group"] = {{"inner", 2.0}};
    r.body["arr"] = {3.0, 4.0};
    auto objs = fpwalk::ordered_json::array();
    objs.push_back({{"k", 5.0}});
    r.body["objs"] = objs;
    r.add_check("c", 1.0, 1.0, 0.0);

    const auto csv = r.to_csv();
    CHECK(csv.rfind("key,value\n", 0) == 0);
    CHECK(csv.find("top,1.0\n") != std::string::npos);
    CHECK(csv.find("group.inner,2.0\n") != std::string::npos);
    CHECK(csv.find("arr[0],3.0\n") != std::string::npos);
    CHECK(csv.find("arr[1],4.0\n") != std::string::npos);
    CHECK(csv.find("objs[0].k,5.0\n") != std::string::npos);
    CHECK(csv.find("check.c,PASS\n") != std::string::npos);
    CHECK(csv.find("all_checks_passed,true\n") != std::string::npos);
}

TEST_CASE("unknown formats are rejected at the write boundary", "[report]") {
    Report r;
    std::ostringstream sink;
    CHECK_THROWS_AS(r.write(sink, "yaml"), fpwalk::ValidationError);
    CHECK_NOTHROW(r.write(sink, "json"));
    CHECK_NOTHROW(r.write(sink, "text"));
    CHECK_NOTHROW(r.write(sink, "csv"));
}

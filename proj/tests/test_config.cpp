#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace kgshard;

TEST_CASE("config parses key = value lines with comments") {
    Config cfg = Config::parse(
        "# partition settings\n"
        "k = 3\n"
        "linkage = single   # HAC flavor\n"
        "\n"
        "cut_distance = 0.75\n"
        "w1 = 2\n"
        "endpoint.0 = http://shard0.test/sparql\n"
        "endpoint.1 = http://shard1.test/sparql\n");
    CHECK(cfg.get_int("k", 2) == 3);
    CHECK(cfg.get_string("linkage", "average") == "single");
    CHECK(cfg.get_double("cut_distance", 0.0) == 0.75);
    CHECK(cfg.get_double("w1", 1.0) == 2.0);
    CHECK(cfg.has("w1"));
    CHECK_FALSE(cfg.has("w2"));

    auto eps = cfg.endpoints();
    REQUIRE(eps.size() == 2);
    CHECK(eps.at(0) == "http://shard0.test/sparql");
    CHECK(eps.at(1) == "http://shard1.test/sparql");
}

TEST_CASE("missing keys fall back to defaults") {
    Config cfg = Config::parse("k = 4\n");
    CHECK(cfg.get_int("seed", 1) == 1);
    CHECK(cfg.get_double("epsilon", 0.15) == 0.15);
    CHECK(cfg.get_string("strategy", "wawpart") == "wawpart");
    CHECK(cfg.endpoints().empty());
}

TEST_CASE("unknown keys fail loudly") {
    CHECK_THROWS_WITH(Config::parse("w8 = 2\n"),
                      Catch::Matchers::ContainsSubstring("unknown config key: w8"));
    CHECK_THROWS_WITH(Config::parse("k = 1\nk = 2\n"),
                      Catch::Matchers::ContainsSubstring("duplicate config key: k"));
    CHECK_THROWS_WITH(Config::parse("just some words\n"),
                      Catch::Matchers::ContainsSubstring("expected key = value"));
    CHECK_THROWS_WITH(Config::parse("= 3\n"),
                      Catch::Matchers::ContainsSubstring("empty config key"));
}

TEST_CASE("config errors carry line numbers") {
    CHECK_THROWS_WITH(Config::parse("k = 1\nbogus_key = 2\n"),
                      Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("typed accessors reject malformed values") {
    Config cfg = Config::parse("k = 3x\nepsilon = 0.1.5\nseed = 7\n");
    CHECK_THROWS_WITH(cfg.get_int("k", 1),
                      Catch::Matchers::ContainsSubstring("not an integer"));
    CHECK_THROWS_WITH(cfg.get_double("epsilon", 0.15),
                      Catch::Matchers::ContainsSubstring("not a number"));
    CHECK(cfg.get_int("seed", 1) == 7);
}

TEST_CASE("endpoint keys must index a shard") {
    CHECK_THROWS_WITH(Config::parse("endpoint.x = http://a.test\n").endpoints(),
                      Catch::Matchers::ContainsSubstring("bad endpoint key"));
    CHECK_THROWS_WITH(Config::parse("endpoint. = http://a.test\n").endpoints(),
                      Catch::Matchers::ContainsSubstring("bad endpoint key"));
    Config ok = Config::parse("endpoint.12 = http://a.test\n");
    CHECK(ok.endpoints().at(12) == "http://a.test");
}

TEST_CASE("all pipeline knobs are known keys") {
    for (const char* key : {"k", "linkage", "cut_distance", "epsilon", "seed", "strategy",
                            "universities", "call_latency", "per_row_cost",
                            "local_match_cost", "w1", "w2", "w3", "w4", "w5", "w6", "w7"})
        CHECK(Config::known_keys().count(key) == 1);
}

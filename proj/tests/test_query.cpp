#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

#include <random>

using namespace kgshard;

static const char* kTypeIri = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

TEST_CASE("single-pattern query parses") {
    Query q = parse_query("SELECT ?x WHERE { ?x <p> <o> . }");
    REQUIRE(q.patterns.size() == 1);
    CHECK(q.projected == std::vector<std::string>{"x"});
    CHECK(q.patterns[0].s == PatternTerm::var("x"));
    CHECK(q.patterns[0].p == PatternTerm::constant(fx::iri("p")));
    CHECK(q.patterns[0].o == PatternTerm::constant(fx::iri("o")));
}

TEST_CASE("six-pattern federation query parses with 3 projected vars") {
    Query q = parse_query(fx::six_pattern_query_text(), "Q2");
    CHECK(q.patterns.size() == 6);
    CHECK(q.projected == std::vector<std::string>{"X", "Y", "Z"});
    CHECK(q.id == "Q2");
}

TEST_CASE("prefixes expand and 'a' means rdf:type") {
    Query q = parse_query(
        "PREFIX ex: <http://e.test/>\n"
        "SELECT ?x WHERE { ?x a ex:Thing . ?x ex:name \"bob\" }");
    REQUIRE(q.patterns.size() == 2);
    CHECK(q.patterns[0].p == PatternTerm::constant(fx::iri(kTypeIri)));
    CHECK(q.patterns[0].o == PatternTerm::constant(fx::iri("http://e.test/Thing")));
    CHECK(q.patterns[1].p == PatternTerm::constant(fx::iri("http://e.test/name")));
    CHECK(q.patterns[1].o == PatternTerm::constant(Term::literal("\"bob\"")));
}

TEST_CASE("FROM clause is parsed and ignored") {
    Query q = parse_query("SELECT ?x FROM <http://e.test/g> WHERE { ?x <p> ?y . }");
    CHECK(q.patterns.size() == 1);
}

TEST_CASE("SELECT * projects all variables in first-appearance order") {
    Query q = parse_query("SELECT * WHERE { ?b <p> ?a . ?a <q> ?c . }");
    CHECK(q.projected == std::vector<std::string>{"b", "a", "c"});
}

TEST_CASE("undeclared prefix is named in the error") {
    CHECK_THROWS_WITH(parse_query("SELECT ?x WHERE { ?x nope:p ?y . }"),
                      Catch::Matchers::ContainsSubstring("nope"));
}

TEST_CASE("unsupported keywords are rejected by name") {
    CHECK_THROWS_WITH(
        parse_query("SELECT ?x WHERE { ?x <p> ?y . FILTER(?y > 3) }"),
        Catch::Matchers::ContainsSubstring("FILTER"));
    CHECK_THROWS_WITH(
        parse_query("SELECT ?x WHERE { OPTIONAL { ?x <p> ?y } }"),
        Catch::Matchers::ContainsSubstring("OPTIONAL"));
    CHECK_THROWS_WITH(parse_query("SELECT DISTINCT ?x WHERE { ?x <p> ?y . }"),
                      Catch::Matchers::ContainsSubstring("DISTINCT"));
}

TEST_CASE("projection must use pattern variables") {
    CHECK_THROWS_WITH(parse_query("SELECT ?z WHERE { ?x <p> ?y . }"),
                      Catch::Matchers::ContainsSubstring("z"));
}

TEST_CASE("literal subjects and predicates are rejected") {
    CHECK_THROWS(parse_query("SELECT ?x WHERE { \"s\" <p> ?x . }"));
    CHECK_THROWS(parse_query("SELECT ?x WHERE { ?x \"p\" <o> . }"));
}

TEST_CASE("empty pattern block is an error") {
    CHECK_THROWS(parse_query("SELECT ?x WHERE { }"));
}

TEST_CASE("workload files split on --- with optional ids") {
    auto ws = parse_workload(
        "# id: first\n"
        "SELECT ?x WHERE { ?x <p> ?y . }\n"
        "---\n"
        "SELECT ?a WHERE { ?a <q> ?b . }\n"
        "---\n");
    REQUIRE(ws.size() == 2);
    CHECK(ws[0].id == "first");
    CHECK(ws[1].id == "Q2");
}

TEST_CASE("duplicate workload ids are rejected") {
    CHECK_THROWS_WITH(parse_workload("# id: A\nSELECT ?x WHERE { ?x <p> ?y . }\n"
                                     "---\n"
                                     "# id: A\nSELECT ?x WHERE { ?x <q> ?y . }\n"),
                      Catch::Matchers::ContainsSubstring("duplicate"));
}

TEST_CASE("query serialization round-trips") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        Query q;
        q.id = "R";
        int n = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i) {
            auto pos = [&](bool allow_lit) {
                switch (rng() % (allow_lit ? 3 : 2)) {
                    case 0: return PatternTerm::var("v" + std::to_string(rng() % 4));
                    case 1: return PatternTerm::constant(fx::iri("http://t/" + std::to_string(rng() % 4)));
                    default: return PatternTerm::constant(fx::lit(std::to_string(rng() % 4)));
                }
            };
            TriplePattern tp;
            tp.s = pos(false);
            tp.p = pos(false);
            tp.o = pos(true);
            q.patterns.push_back(tp);
        }
        // make sure at least one variable exists so SELECT is valid
        q.patterns[0].s = PatternTerm::var("v0");
        q.projected = q.variables();

        Query back = parse_query(serialize_query(q), "R");
        CHECK(back.projected == q.projected);
        REQUIRE(back.patterns.size() == q.patterns.size());
        for (std::size_t i = 0; i < q.patterns.size(); ++i)
            CHECK(back.patterns[i] == q.patterns[i]);
    }
}

TEST_CASE("federated text with SERVICE blocks parses") {
    ParsedFederated pf = parse_federated(
        "SELECT ?X ?Y WHERE {\n"
        "  ?X <t> <GS> .\n"
        "  SERVICE <http://shard-1.example.org/sparql> { ?X <m> ?Z . ?Z <s> ?Y . }\n"
        "  SERVICE <http://shard-2.example.org/sparql> { ?X <u> ?Y . }\n"
        "}\n");
    CHECK(pf.local.size() == 1);
    REQUIRE(pf.services.size() == 2);
    CHECK(pf.services[0].first == "http://shard-1.example.org/sparql");
    CHECK(pf.services[0].second.size() == 2);
    CHECK(pf.services[1].second.size() == 1);
    CHECK(pf.projected == std::vector<std::string>{"X", "Y"});
}

TEST_CASE("nested SERVICE is rejected") {
    CHECK_THROWS(parse_federated(
        "SELECT ?x WHERE { SERVICE <http://a> { SERVICE <http://b> { ?x <p> ?y . } } }"));
}

TEST_CASE("serialize_federated matches the three-block shape") {
    Query q = parse_query(fx::six_pattern_query_text(), "Q2");
    FederatedQuery fq;
    fq.base_query_id = "Q2";
    fq.projected = q.projected;
    fq.ppn = 0;
    fq.groups.emplace_back(0, std::vector<TriplePattern>{q.patterns[0], q.patterns[1],
                                                         q.patterns[2]});
    fq.groups.emplace_back(1, std::vector<TriplePattern>{q.patterns[3], q.patterns[4]});
    fq.groups.emplace_back(2, std::vector<TriplePattern>{q.patterns[5]});
    std::map<ShardId, std::string> eps{{1, "http://shard-1.example.org/sparql"},
                                       {2, "http://shard-2.example.org/sparql"}};

    std::string text = serialize_federated(fq, eps);
    ParsedFederated back = parse_federated(text);
    CHECK(back.local.size() == 3);
    REQUIRE(back.services.size() == 2);
    CHECK(back.services[0].first == "http://shard-1.example.org/sparql");
    CHECK(back.services[0].second.size() == 2);
    CHECK(back.services[1].first == "http://shard-2.example.org/sparql");
    CHECK(back.services[1].second.size() == 1);

    // every base pattern appears exactly once
    std::vector<TriplePattern> all = back.local;
    for (const auto& [ep, pats] : back.services)
        all.insert(all.end(), pats.begin(), pats.end());
    REQUIRE(all.size() == q.patterns.size());
    for (const auto& tp : q.patterns)
        CHECK(std::count(all.begin(), all.end(), tp) == 1);
}

TEST_CASE("serialize_federated wants an endpoint per remote group") {
    FederatedQuery fq;
    fq.base_query_id = "Q";
    fq.projected = {"x"};
    fq.ppn = 0;
    TriplePattern tp;
    tp.s = PatternTerm::var("x");
    tp.p = PatternTerm::constant(fx::iri("p"));
    tp.o = PatternTerm::var("y");
    fq.groups.emplace_back(0, std::vector<TriplePattern>{tp});
    fq.groups.emplace_back(1, std::vector<TriplePattern>{tp});
    CHECK_THROWS_WITH(serialize_federated(fq, {}),
                      Catch::Matchers::ContainsSubstring("endpoint"));
}

TEST_CASE("single local group serializes like a plain query") {
    Query q = parse_query("SELECT ?x WHERE { ?x <p> ?y . }");
    FederatedQuery fq;
    fq.base_query_id = q.id;
    fq.projected = q.projected;
    fq.ppn = 3;
    fq.groups.emplace_back(3, q.patterns);
    CHECK(serialize_federated(fq, {}) == serialize_query(q));
}

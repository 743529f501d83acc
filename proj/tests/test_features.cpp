#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace kgshard;

static const char* kTypeIri = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
static const std::string kVoc = "http://kg.example.org/voc#";

TEST_CASE("similar-pair features: 4 and 6, sharing 4") {
    QueryFeatures a = fx::qf(fx::pair_q7(), "Q7");
    QueryFeatures b = fx::qf(fx::pair_q9(), "Q9");

    std::set<Feature> expect_a{
        Feature::po(fx::iri(kTypeIri), fx::iri(kVoc + "Student")),
        Feature::po(fx::iri(kTypeIri), fx::iri(kVoc + "Course")),
        Feature::p(fx::iri(kVoc + "takesCourse")),
        Feature::p(fx::iri(kVoc + "teacherOf")),
    };
    CHECK(a.features == expect_a);

    std::set<Feature> expect_b = expect_a;
    expect_b.insert(Feature::po(fx::iri(kTypeIri), fx::iri(kVoc + "Faculty")));
    expect_b.insert(Feature::p(fx::iri(kVoc + "advisor")));
    CHECK(b.features == expect_b);

    std::set<Feature> shared;
    for (const auto& f : a.features)
        if (b.features.count(f)) shared.insert(f);
    CHECK(shared.size() == 4);
}

TEST_CASE("single-pattern query has one feature and no joins") {
    QueryFeatures f = fx::qf("SELECT ?x WHERE { ?x <p> ?y . }");
    CHECK(f.features == std::set<Feature>{Feature::p(fx::iri("p"))});
    CHECK(f.joins.empty());
    REQUIRE(f.per_pattern_feature.size() == 1);
    CHECK(f.per_pattern_feature[0] == Feature::p(fx::iri("p")));
}

TEST_CASE("variable predicate is unfeaturizable") {
    CHECK_THROWS_WITH(fx::qf("SELECT ?x WHERE { ?x ?p ?y . }", "QX"),
                      Catch::Matchers::ContainsSubstring("QX"));
}

TEST_CASE("join link enumeration on the six-pattern query") {
    QueryFeatures f = fx::qf(fx::six_pattern_query_text(), "Q2");
    REQUIRE(f.per_pattern_feature.size() == 6);

    std::multiset<std::string> got;
    for (const auto& l : f.joins)
        got.insert(std::string(join_kind_name(l.kind)) + "(" + std::to_string(l.left) + "," +
                   std::to_string(l.right) + ")");
    std::multiset<std::string> want{
        "SS(0,3)", "SS(0,5)", "SS(3,5)", "SS(2,4)",  // shared subjects X,X,X,Z
        "OO(4,5)",                                   // shared object Y
        "OS(3,2)", "OS(3,4)", "OS(4,1)", "OS(5,1)",  // object feeds subject
    };
    CHECK(got == want);
    CHECK(f.joins.size() == 9);
}

TEST_CASE("SS and OO are stored once with left < right; OS is directional") {
    // o of pattern 0 equals s of pattern 1 AND o of pattern 1 equals s
    // of pattern 0: two OS links, one each way
    QueryFeatures f = fx::qf("SELECT ?a ?b WHERE { ?a <p> ?b . ?b <q> ?a . }");
    std::multiset<std::string> got;
    for (const auto& l : f.joins)
        got.insert(std::string(join_kind_name(l.kind)) + "(" + std::to_string(l.left) + "," +
                   std::to_string(l.right) + ")");
    CHECK(got == std::multiset<std::string>{"OS(0,1)", "OS(1,0)"});
    for (const auto& l : f.joins)
        if (l.kind != JoinKind::OS) CHECK(l.left < l.right);
}

TEST_CASE("constant positions join too") {
    QueryFeatures f = fx::qf("SELECT ?x ?y WHERE { ?x <p> <c> . ?y <q> <c> . }");
    REQUIRE(f.joins.size() == 1);
    CHECK(f.joins[0].kind == JoinKind::OO);
}

TEST_CASE("feature keys round-trip") {
    Feature p = Feature::p(fx::iri("http://e.test/pred"));
    Feature po = Feature::po(fx::iri("http://e.test/pred"), fx::iri("http://e.test/obj"));
    Feature pl = Feature::po(fx::iri("http://e.test/pred"), fx::lit("x|y"));
    CHECK(p.key() == "P|http://e.test/pred");
    CHECK(po.key() == "PO|http://e.test/pred|http://e.test/obj");
    CHECK(Feature::from_key(p.key()) == p);
    CHECK(Feature::from_key(po.key()) == po);
    CHECK(Feature::from_key(pl.key()) == pl);
    CHECK_THROWS(Feature::from_key("XX|bogus"));
    CHECK(p != po);
}

TEST_CASE("catalog on empty workload holds one P feature per predicate") {
    auto g = fx::graph(fx::ten_triple_dataset());
    FeatureCatalog cat = extract_dataset_features(g, {});
    CHECK(cat.dataset_features.size() == 5);  // type likes knows name age
    for (const auto& [f, data] : cat.dataset_features) {
        CHECK(!f.is_po());
        CHECK(data.count == data.ids.size());
    }
    CHECK(cat.total_triples == 10);
    CHECK(cat.count(Feature::p(fx::iri("http://x.test/type"))) == 3);
}

TEST_CASE("workload PO features enter the catalog with index-backed counts") {
    auto g = fx::graph(fx::ten_triple_dataset());
    std::vector<QueryFeatures> wl{
        fx::qf("SELECT ?x WHERE { ?x <http://x.test/type> <http://x.test/T1> . }", "W")};
    FeatureCatalog cat = extract_dataset_features(g, wl);
    Feature po = Feature::po(fx::iri("http://x.test/type"), fx::iri("http://x.test/T1"));
    REQUIRE(cat.has(po));
    CHECK(cat.count(po) == 2);
}

TEST_CASE("unmatched workload features get count zero") {
    auto g = fx::graph("<a> <p> <b> .\n");
    std::vector<QueryFeatures> wl{fx::qf("SELECT ?x WHERE { ?x <q> ?y . }", "W")};
    FeatureCatalog cat = extract_dataset_features(g, wl);
    Feature q = Feature::p(fx::iri("q"));
    REQUIRE(cat.has(q));
    CHECK(cat.count(q) == 0);
}

TEST_CASE("P counts decompose into PO refinements plus residual") {
    const auto& b = fx::mini_bench();
    for (const auto& p : b.g.predicates()) {
        Feature pf = Feature::p(p);
        REQUIRE(b.cat.has(pf));
        std::size_t po_sum = 0;
        for (const auto& [f, data] : b.cat.dataset_features)
            if (f.is_po() && f.predicate == p) po_sum += data.count;
        std::size_t residual = 0;
        for (TripleId id : b.g.lookup_p(p))
            if (!b.cat.has(Feature::po(p, b.g.triple(id).o))) ++residual;
        CHECK(b.cat.count(pf) == b.g.lookup_p(p).size());
        CHECK(po_sum + residual == b.cat.count(pf));
    }
}

TEST_CASE("dataset P feature counts sum to the triple count") {
    const auto& b = fx::mini_bench();
    std::size_t sum = 0;
    for (const auto& [f, data] : b.cat.dataset_features)
        if (!f.is_po()) sum += data.count;
    CHECK(sum == b.g.size());
}

TEST_CASE("extraction depends only on structure, not variable names") {
    QueryFeatures a = fx::qf("SELECT ?x ?y WHERE { ?x <p> ?y . ?y <q> ?x . }");
    QueryFeatures b = fx::qf("SELECT ?u ?v WHERE { ?u <p> ?v . ?v <q> ?u . }");
    CHECK(a.features == b.features);
    REQUIRE(a.joins.size() == b.joins.size());
    for (std::size_t i = 0; i < a.joins.size(); ++i) CHECK(a.joins[i] == b.joins[i]);
}

TEST_CASE("workload_features unions all query feature sets") {
    auto g = fx::graph(fx::ten_triple_dataset());
    std::vector<QueryFeatures> wl;
    for (const auto& q : parse_workload(fx::ten_triple_workload()))
        wl.push_back(extract_query_features(q));
    FeatureCatalog cat = extract_dataset_features(g, wl);
    std::set<Feature> all = workload_features(cat);
    CHECK(all.size() == 5);  // PO(type,T1), likes, name, knows, age
    CHECK(all.count(Feature::po(fx::iri("http://x.test/type"), fx::iri("http://x.test/T1"))) == 1);
    CHECK(all.count(Feature::p(fx::iri("http://x.test/age"))) == 1);
}

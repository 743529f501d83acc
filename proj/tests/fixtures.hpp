// Hand-built inputs shared across the test binaries, with their
// expected values derived on paper. Anything changed here invalidates
// the frozen numbers in the tests that use it.
#pragma once

#include <random>
#include <string>
#include <vector>

#include <kgshard/kgshard.hpp>

namespace fx {

using namespace kgshard;

inline Term iri(const std::string& s) { return Term::iri(s); }
inline Term lit(const std::string& s) { return Term::literal("\"" + s + "\""); }

inline KnowledgeGraph graph(const std::string& nt) { return parse_ntriples(nt); }

inline Query query(const std::string& text, const std::string& id = "Q") {
    return parse_query(text, id);
}

inline QueryFeatures qf(const std::string& text, const std::string& id = "Q") {
    return extract_query_features(parse_query(text, id));
}

// --- similar-pair fixture ----------------------------------------------
// Two overlapping star/elbow queries: the first has 4 features
// (PO type/Student, PO type/Course, P takesCourse, P teacherOf), the
// second 6 (adding PO type/Faculty, P advisor). Shared features: 4 of
// 6, so their Jaccard distance is exactly 1/3.

inline const char* kPairPrefix =
    "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>\n"
    "PREFIX voc: <http://kg.example.org/voc#>\n";

inline std::string pair_q7() {
    return std::string(kPairPrefix) +
           "SELECT ?x ?y WHERE {\n"
           "  ?x rdf:type voc:Student .\n"
           "  ?x voc:takesCourse ?y .\n"
           "  ?y rdf:type voc:Course .\n"
           "  <http://kg.example.org/f0> voc:teacherOf ?y .\n"
           "}\n";
}

inline std::string pair_q9() {
    return std::string(kPairPrefix) +
           "SELECT ?x ?y ?z WHERE {\n"
           "  ?x voc:advisor ?y .\n"
           "  ?x rdf:type voc:Student .\n"
           "  ?y rdf:type voc:Faculty .\n"
           "  ?x voc:takesCourse ?z .\n"
           "  ?z rdf:type voc:Course .\n"
           "  ?y voc:teacherOf ?z .\n"
           "}\n";
}

// --- six-pattern federation fixture --------------------------------------
// A 6-pattern elbow query split 3/2/1 across three shards. Hand
// enumeration of its JoinLinks (pattern index -> shard: 0,1,2 -> A;
// 3,4 -> B; 5 -> C):
//   SS(0,3) ?X  A/B crossing      SS(0,5) ?X  A/C crossing
//   SS(3,5) ?X  B/C crossing      SS(2,4) ?Z  A/B crossing
//   OO(4,5) ?Y  B/C crossing      OS(3,2) ?Z  B/A crossing
//   OS(3,4) ?Z  B/B local         OS(4,1) ?Y  B/A crossing
//   OS(5,1) ?Y  C/A crossing
// 9 links, 8 crossing, distinct crossing keys {?X, ?Z, ?Y} = 3.

inline std::string six_pattern_query_text() {
    return std::string(kPairPrefix) +
           "SELECT ?X ?Y ?Z WHERE {\n"
           "  ?X rdf:type voc:GraduateStudent .\n"
           "  ?Y rdf:type voc:University .\n"
           "  ?Z rdf:type voc:Department .\n"
           "  ?X voc:memberOf ?Z .\n"
           "  ?Z voc:subOrganizationOf ?Y .\n"
           "  ?X voc:undergraduateDegreeFrom ?Y .\n"
           "}\n";
}

inline std::string six_pattern_dataset() {
    std::string v = "<http://kg.example.org/voc#";
    std::string t = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";
    auto e = [](const std::string& n) { return "<http://kg.example.org/" + n + ">"; };
    std::string nt;
    nt += e("g1") + " " + t + " " + v + "GraduateStudent> .\n";
    nt += e("g2") + " " + t + " " + v + "GraduateStudent> .\n";
    nt += e("u1") + " " + t + " " + v + "University> .\n";
    nt += e("u2") + " " + t + " " + v + "University> .\n";
    nt += e("d1") + " " + t + " " + v + "Department> .\n";
    nt += e("d2") + " " + t + " " + v + "Department> .\n";
    nt += e("g1") + " " + v + "memberOf> " + e("d1") + " .\n";
    nt += e("g2") + " " + v + "memberOf> " + e("d2") + " .\n";
    nt += e("d1") + " " + v + "subOrganizationOf> " + e("u1") + " .\n";
    nt += e("d2") + " " + v + "subOrganizationOf> " + e("u2") + " .\n";
    nt += e("g1") + " " + v + "undergraduateDegreeFrom> " + e("u1") + " .\n";
    nt += e("g2") + " " + v + "undergraduateDegreeFrom> " + e("u1") + " .\n";
    return nt;
}

// feature_home only; shard triple lists are rebuilt by the caller when
// needed (exec tests split the dataset by locate_pattern).
inline Partitioning six_pattern_partitioning() {
    const std::string voc = "http://kg.example.org/voc#";
    const std::string type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    Partitioning meta;
    meta.k = 3;
    meta.shards.assign(3, {});
    meta.feature_home[Feature::po(iri(type), iri(voc + "GraduateStudent"))] = 0;
    meta.feature_home[Feature::po(iri(type), iri(voc + "University"))] = 0;
    meta.feature_home[Feature::po(iri(type), iri(voc + "Department"))] = 0;
    meta.feature_home[Feature::p(iri(voc + "memberOf"))] = 1;
    meta.feature_home[Feature::p(iri(voc + "subOrganizationOf"))] = 1;
    meta.feature_home[Feature::p(iri(voc + "undergraduateDegreeFrom"))] = 2;
    // P(type) residual (there is none in the fixture dataset) stays
    // with the type-heavy shard so every predicate stays locatable
    meta.feature_home[Feature::p(iri(type))] = 0;
    return meta;
}

// --- ten-triple scoring fixture ------------------------------------------
// Graph: 10 triples over predicates type(3), likes(2), knows(2),
// name(2), age(1). Workload: W1..W4 chosen so a single-linkage cut at
// k=2 yields groups {W1,W2,W3} and {W4} with exactly one replicated
// feature, P(knows).
//
// Hand-computed scores for P(knows) with w1..w7 = 1:
//   group 0 features {PO(type,T1), likes, name, knows}:
//     D_QR=1 (W3's SS link to PO(type,T1)), p_c=1, q_c=1 (W3),
//     s_c=2+2+2+2=8, p_t=2, q_t=2, s_t=10 -> 1+(1+1+8)+(2+2+10) = 25
//   group 1 features {knows, age}:
//     D_QR=1 (W4's SS link to age), p_c=1, q_c=1 (W4), s_c=3
//     -> 1+(1+1+3)+(2+2+10) = 20
// With only w3=1: 8 vs 3. Owner either way: group 0.

inline std::string ten_triple_dataset() {
    auto e = [](const std::string& n) { return "<http://x.test/" + n + ">"; };
    std::string nt;
    nt += e("s1") + " " + e("type") + " " + e("T1") + " .\n";
    nt += e("s2") + " " + e("type") + " " + e("T1") + " .\n";
    nt += e("s3") + " " + e("type") + " " + e("T2") + " .\n";
    nt += e("s1") + " " + e("likes") + " " + e("s2") + " .\n";
    nt += e("s2") + " " + e("likes") + " " + e("s3") + " .\n";
    nt += e("s1") + " " + e("knows") + " " + e("s3") + " .\n";
    nt += e("s3") + " " + e("knows") + " " + e("s1") + " .\n";
    nt += e("s1") + " " + e("name") + " \"a\" .\n";
    nt += e("s2") + " " + e("name") + " \"b\" .\n";
    nt += e("s3") + " " + e("age") + " \"3\" .\n";
    return nt;
}

inline std::string ten_triple_workload() {
    return "# id: W1\n"
           "SELECT ?x ?y WHERE { ?x <http://x.test/type> <http://x.test/T1> . "
           "?x <http://x.test/likes> ?y . }\n"
           "---\n"
           "# id: W2\n"
           "SELECT ?x ?y WHERE { ?x <http://x.test/type> <http://x.test/T1> . "
           "?x <http://x.test/likes> ?y . ?x <http://x.test/name> ?n . }\n"
           "---\n"
           "# id: W3\n"
           "SELECT ?x ?y WHERE { ?x <http://x.test/type> <http://x.test/T1> . "
           "?x <http://x.test/knows> ?y . }\n"
           "---\n"
           "# id: W4\n"
           "SELECT ?x WHERE { ?x <http://x.test/knows> ?y . "
           "?x <http://x.test/age> ?a . }\n";
}

struct TenTriple {
    KnowledgeGraph g;
    std::vector<Query> workload;
    FeatureCatalog cat;
    std::vector<FeatureGroup> groups;  // k=2 cut, replication unresolved
};

inline TenTriple ten_triple_fixture() {
    TenTriple fx;
    fx.g = graph(ten_triple_dataset());
    fx.workload = parse_workload(ten_triple_workload());
    std::vector<QueryFeatures> qfs;
    for (const auto& q : fx.workload) qfs.push_back(extract_query_features(q));
    fx.cat = extract_dataset_features(fx.g, qfs);
    DistanceMatrix m = build_distance_matrix(qfs);
    Dendrogram dend = hac(m, Linkage::Single);
    ClusterCut cut = cut_at_count(dend, 2);
    fx.groups = build_feature_groups(cut, dend, fx.cat);
    return fx;
}

// --- generated mini benchmark (seed 1) -----------------------------------

struct Bench {
    KnowledgeGraph g;
    std::vector<Query> workload;
    FeatureCatalog cat;
};

inline Bench make_bench(std::uint64_t seed, int universities = 5) {
    GeneratedBench raw = generate(GeneratorSpec{seed, universities});
    Bench b;
    b.g = parse_ntriples(raw.dataset_ntriples);
    b.workload = parse_workload(raw.workload_text);
    std::vector<QueryFeatures> qfs;
    for (const auto& q : b.workload) qfs.push_back(extract_query_features(q));
    b.cat = extract_dataset_features(b.g, qfs);
    return b;
}

inline const Bench& mini_bench() {
    static const Bench b = make_bench(1);
    return b;
}

// --- random inputs for property tests -------------------------------------

// Symmetric zero-diagonal matrix of small rationals; denominators are
// tiny on purpose so ties actually occur.
inline DistanceMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
    DistanceMatrix m;
    for (std::size_t i = 0; i < n; ++i) m.ids.push_back("Q" + std::to_string(i + 1));
    m.d.assign(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 5);
            std::int64_t num = static_cast<std::int64_t>(rng() % (den + 1));
            m.d[i][j] = m.d[j][i] = Rational(num, den);
        }
    }
    return m;
}

}  // namespace fx

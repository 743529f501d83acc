#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kgshard/error.hpp"
#include "kgshard/partitioner.hpp"
#include "kgshard/rdf.hpp"

namespace kgshard {

/// Deterministic mini benchmark: a university-domain graph of
/// departments, faculty, students, courses and publications.
/// Entity counts are fixed ratios of `universities`, so per-predicate
/// triple counts (and thus shard balance) do not depend on the seed;
/// the seed only varies which course/advisor/teacher each entity links
/// to. universities=5 yields 15010 triples.
struct GeneratorSpec {
    std::uint64_t seed = 1;
    int universities = 5;
};

struct GeneratedBench {
    std::string dataset_ntriples;
    std::string workload_text;
};

namespace bench_detail {

// mt19937_64 is pinned by the standard, and we take residues by hand,
// so output is identical across platforms.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    std::uint64_t below(std::uint64_t n) { return eng() % n; }
};

constexpr int kDeptsPerUniv = 4;
constexpr int kFacultyPerDept = 12;
constexpr int kStudentsPerDept = 75;
constexpr int kGradsPerDept = 20;
constexpr int kCoursesPerDept = 12;
constexpr int kPubsPerFaculty = 6;

inline std::string ent(const std::string& local) {
    return "<http://kg.example.org/" + local + ">";
}
inline std::string voc(const std::string& local) {
    return "<http://kg.example.org/voc#" + local + ">";
}

}  // namespace bench_detail

// Each chunk between --- separators is a standalone query document, so
// every one carries its own prologue.
inline const char* kBenchWorkload = R"(# id: QA1
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX voc: <http://kg.example.org/voc#>
SELECT ?s ?c ?f WHERE {
  ?s rdf:type voc:Student .
  ?s voc:takesCourse ?c .
  ?c rdf:type voc:Course .
  ?f voc:teacherOf ?c .
}
---
# id: QA2
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX voc: <http://kg.example.org/voc#>
SELECT ?s ?f ?c WHERE {
  ?s voc:advisor ?f .
  ?s rdf:type voc:Student .
  ?f rdf:type voc:Faculty .
  ?s voc:takesCourse ?c .
  ?c rdf:type voc:Course .
  ?f voc:teacherOf ?c .
}
---
# id: QA3
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX voc: <http://kg.example.org/voc#>
SELECT ?s ?c WHERE {
  ?s rdf:type voc:Student .
  ?s voc:takesCourse ?c .
}
---
# id: QA4
PREFIX voc: <http://kg.example.org/voc#>
SELECT ?s ?c WHERE {
  ?s voc:takesCourse ?c .
}
---
# id: QB1
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX voc: <http://kg.example.org/voc#>
SELECT ?x ?y ?z WHERE {
  ?x rdf:type voc:GraduateStudent .
  ?x voc:memberOf ?z .
  ?z rdf:type voc:Department .
  ?z voc:subOrganizationOf ?y .
  ?y rdf:type voc:University .
  ?x voc:undergraduateDegreeFrom ?y .
}
---
# id: QB2
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX voc: <http://kg.example.org/voc#>
SELECT ?x ?z WHERE {
  ?x rdf:type voc:GraduateStudent .
  ?x voc:memberOf ?z .
  ?z rdf:type voc:Department .
}
---
# id: QB3
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX voc: <http://kg.example.org/voc#>
SELECT ?d ?u ?n WHERE {
  ?d rdf:type voc:Department .
  ?d voc:subOrganizationOf ?u .
  ?u rdf:type voc:University .
  ?d voc:name ?n .
}
---
# id: QB4
PREFIX voc: <http://kg.example.org/voc#>
SELECT ?x ?d WHERE {
  ?x voc:memberOf ?d .
}
---
# id: QC1
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX voc: <http://kg.example.org/voc#>
SELECT ?p ?f WHERE {
  ?p rdf:type voc:Publication .
  ?p voc:publicationAuthor ?f .
  ?f rdf:type voc:Faculty .
}
---
# id: QC2
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX voc: <http://kg.example.org/voc#>
SELECT ?f ?d ?p WHERE {
  ?f rdf:type voc:Faculty .
  ?f voc:worksFor ?d .
  ?p voc:publicationAuthor ?f .
}
---
# id: QC3
PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
PREFIX voc: <http://kg.example.org/voc#>
SELECT ?f ?d ?e WHERE {
  ?f rdf:type voc:Faculty .
  ?f voc:worksFor ?d .
  ?f voc:emailAddress ?e .
}
---
# id: QC4
PREFIX voc: <http://kg.example.org/voc#>
SELECT ?p ?f WHERE {
  ?p voc:publicationAuthor ?f .
}
)";

inline GeneratedBench generate(const GeneratorSpec& spec) {
    using namespace bench_detail;
    if (spec.universities < 1)
        throw error("universities must be at least 1 (got " +
                    std::to_string(spec.universities) + ")");

    const int nu = spec.universities;
    const int nd = nu * kDeptsPerUniv;
    const int nf = nd * kFacultyPerDept;
    const int ns = nd * kStudentsPerDept;
    const int ng = nd * kGradsPerDept;
    const int nc = nd * kCoursesPerDept;
    const int np = nf * kPubsPerFaculty;

    Rng rng(spec.seed);
    std::string out;
    out.reserve(static_cast<std::size_t>(nu) * 300000);
    const std::string type = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";
    auto triple = [&](const std::string& s, const std::string& p, const std::string& o) {
        out += s + " " + p + " " + o + " .\n";
    };
    auto lit = [](const std::string& v) { return "\"" + v + "\""; };

    auto u = [&](int i) { return ent("u" + std::to_string(i)); };
    auto d = [&](int i) { return ent("d" + std::to_string(i)); };
    auto f = [&](int i) { return ent("f" + std::to_string(i)); };
    auto s = [&](int i) { return ent("s" + std::to_string(i)); };
    auto gr = [&](int i) { return ent("g" + std::to_string(i)); };
    auto c = [&](int i) { return ent("c" + std::to_string(i)); };
    auto pub = [&](int i) { return ent("p" + std::to_string(i)); };

    for (int i = 0; i < nu; ++i) triple(u(i), type, voc("University"));
    for (int i = 0; i < nd; ++i) triple(d(i), type, voc("Department"));
    for (int i = 0; i < nf; ++i) triple(f(i), type, voc("Faculty"));
    for (int i = 0; i < ns; ++i) triple(s(i), type, voc("Student"));
    for (int i = 0; i < ng; ++i) triple(gr(i), type, voc("GraduateStudent"));
    for (int i = 0; i < nc; ++i) triple(c(i), type, voc("Course"));
    for (int i = 0; i < np; ++i) triple(pub(i), type, voc("Publication"));

    for (int i = 0; i < nu; ++i) triple(u(i), voc("name"), lit("u" + std::to_string(i)));
    for (int i = 0; i < nd; ++i) triple(d(i), voc("name"), lit("d" + std::to_string(i)));
    for (int i = 0; i < nf; ++i) triple(f(i), voc("name"), lit("f" + std::to_string(i)));
    for (int i = 0; i < ns; ++i) triple(s(i), voc("name"), lit("s" + std::to_string(i)));
    for (int i = 0; i < ng; ++i) triple(gr(i), voc("name"), lit("g" + std::to_string(i)));
    for (int i = 0; i < nc; ++i) triple(c(i), voc("name"), lit("c" + std::to_string(i)));
    for (int i = 0; i < np; ++i) triple(pub(i), voc("title"), lit("p" + std::to_string(i)));

    for (int i = 0; i < nd; ++i) triple(d(i), voc("subOrganizationOf"), u(i / kDeptsPerUniv));
    for (int i = 0; i < nf; ++i) triple(f(i), voc("worksFor"), d(i / kFacultyPerDept));
    for (int i = 0; i < nf; ++i)
        triple(f(i), voc("emailAddress"), lit("f" + std::to_string(i) + "@kg.example.org"));
    for (int i = 0; i < nf; ++i)
        triple(f(i), voc("researchInterest"), lit("topic" + std::to_string(i % 17)));
    for (int i = 0; i < ns; ++i) triple(s(i), voc("memberOf"), d(i / kStudentsPerDept));
    for (int i = 0; i < ng; ++i) triple(gr(i), voc("memberOf"), d(i / kGradsPerDept));

    // Random linkage: course taken, advisor, teacher and degree
    // university are drawn per entity, within the entity's department
    // where that makes sense.
    auto dept_course = [&](int dept) {
        return c(dept * kCoursesPerDept + static_cast<int>(rng.below(kCoursesPerDept)));
    };
    auto dept_faculty = [&](int dept) {
        return f(dept * kFacultyPerDept + static_cast<int>(rng.below(kFacultyPerDept)));
    };
    for (int i = 0; i < ns; ++i)
        triple(s(i), voc("takesCourse"), dept_course(i / kStudentsPerDept));
    for (int i = 0; i < ng; ++i)
        triple(gr(i), voc("takesCourse"), dept_course(i / kGradsPerDept));
    for (int i = 0; i < ng; ++i)
        triple(gr(i), voc("advisor"), dept_faculty(i / kGradsPerDept));
    for (int i = 0; i < ns; i += 5)
        triple(s(i), voc("advisor"), dept_faculty(i / kStudentsPerDept));
    for (int i = 0; i < nc; ++i)
        triple(dept_faculty(i / kCoursesPerDept), voc("teacherOf"), c(i));
    for (int i = 0; i < np; ++i)
        triple(pub(i), voc("publicationAuthor"), f(i / kPubsPerFaculty));
    for (int i = 0; i < ng; ++i)
        triple(gr(i), voc("undergraduateDegreeFrom"), u(static_cast<int>(rng.below(nu))));

    return GeneratedBench{std::move(out), kBenchWorkload};
}

enum class BaselineStrategy { RandomPredicate };

struct BaselineSpec {
    std::uint64_t seed = 1;
    int k = 3;
    BaselineStrategy strategy = BaselineStrategy::RandomPredicate;
};

/// Workload-blind baseline: whole predicate sets shuffled and dealt
/// round-robin onto k shards. Only P features are homed; PO lookups
/// fall back to the predicate's shard, so routing stays correct.
inline Partitioning random_partition(const KnowledgeGraph& g, const BaselineSpec& spec) {
    if (spec.k < 1) throw error("k must be at least 1");
    std::vector<Term> preds = g.predicates();
    std::mt19937_64 eng(spec.seed);
    for (std::size_t i = preds.size(); i > 1; --i)
        std::swap(preds[i - 1], preds[eng() % i]);

    Partitioning p;
    p.k = spec.k;
    p.shards.assign(spec.k, {});
    for (std::size_t i = 0; i < preds.size(); ++i) {
        int shard = static_cast<int>(i % spec.k);
        p.feature_home[Feature::p(preds[i])] = shard;
        const auto& ids = g.lookup_p(preds[i]);
        p.shards[shard].insert(p.shards[shard].end(), ids.begin(), ids.end());
    }
    for (auto& shard : p.shards) std::sort(shard.begin(), shard.end());
    return p;
}

}  // namespace kgshard

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kgshard/error.hpp"
#include "kgshard/query.hpp"
#include "kgshard/rdf.hpp"

namespace kgshard {

enum class FeatureKind : std::uint8_t { P, PO };

/// A predicate (P) or predicate-object (PO) key identifying the triples
/// that share that predicate, or predicate and object value.
struct Feature {
    FeatureKind kind = FeatureKind::P;
    Term predicate;
    Term object;  // meaningful iff kind == PO

    static Feature p(Term pred) { return Feature{FeatureKind::P, std::move(pred), {}}; }
    static Feature po(Term pred, Term obj) {
        return Feature{FeatureKind::PO, std::move(pred), std::move(obj)};
    }

    bool is_po() const { return kind == FeatureKind::PO; }

    /// Canonical string form: `P|<pred>` or `PO|<pred>|<obj>`.
    std::string key() const {
        if (kind == FeatureKind::P) return "P|" + predicate.lexical;
        return "PO|" + predicate.lexical + "|" + object.lexical;
    }

    /// Inverse of key(). Objects starting with '"' parse as literals.
    static Feature from_key(const std::string& key) {
        if (key.rfind("P|", 0) == 0) return p(Term::iri(key.substr(2)));
        if (key.rfind("PO|", 0) == 0) {
            std::size_t sep = key.find('|', 3);
            if (sep == std::string::npos) throw error("malformed feature key: " + key);
            std::string obj = key.substr(sep + 1);
            Term o = !obj.empty() && obj[0] == '"' ? Term::literal(obj) : Term::iri(obj);
            return po(Term::iri(key.substr(3, sep - 3)), std::move(o));
        }
        throw error("malformed feature key: " + key);
    }

    friend bool operator==(const Feature& a, const Feature& b) {
        if (a.kind != b.kind || a.predicate != b.predicate) return false;
        return a.kind == FeatureKind::P || a.object == b.object;
    }
    friend bool operator!=(const Feature& a, const Feature& b) { return !(a == b); }
    friend bool operator<(const Feature& a, const Feature& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.predicate != b.predicate) return a.predicate < b.predicate;
        if (a.kind == FeatureKind::P) return false;
        return a.object < b.object;
    }
};

enum class JoinKind : std::uint8_t { SS, OS, OO };

/// A structural join between two triple patterns of one query. SS and
/// OO are stored once with left < right; OS is directional (left's
/// object is right's subject).
struct JoinLink {
    JoinKind kind = JoinKind::SS;
    int left = 0;
    int right = 0;

    friend bool operator==(const JoinLink& a, const JoinLink& b) {
        return a.kind == b.kind && a.left == b.left && a.right == b.right;
    }
};

inline const char* join_kind_name(JoinKind k) {
    switch (k) {
        case JoinKind::SS: return "SS";
        case JoinKind::OS: return "OS";
        default: return "OO";
    }
}

struct QueryFeatures {
    std::string query_id;
    std::set<Feature> features;
    std::vector<JoinLink> joins;
    std::vector<Feature> per_pattern_feature;  // indexed by pattern position
};

/// Features for query similarity are exactly P and PO; SS/OS/OO joins
/// are kept alongside for placement and distributed-join analysis.
inline QueryFeatures extract_query_features(const Query& q) {
    QueryFeatures out;
    out.query_id = q.id;
    for (const auto& tp : q.patterns) {
        if (!tp.p.is_const())
            throw error("unfeaturizable pattern in query " + q.id + ": variable predicate");
        Feature f = tp.o.is_const() ? Feature::po(tp.p.term, tp.o.term)
                                    : Feature::p(tp.p.term);
        out.features.insert(f);
        out.per_pattern_feature.push_back(std::move(f));
    }
    int n = static_cast<int>(q.patterns.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (q.patterns[i].s == q.patterns[j].s)
                out.joins.push_back({JoinKind::SS, i, j});
            if (q.patterns[i].o == q.patterns[j].o)
                out.joins.push_back({JoinKind::OO, i, j});
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && q.patterns[i].o == q.patterns[j].s)
                out.joins.push_back({JoinKind::OS, i, j});
        }
    }
    return out;
}

struct FeatureData {
    std::size_t count = 0;
    std::vector<TripleId> ids;
};

/// Feature metadata over one dataset and one workload: every P feature
/// of the graph, every workload feature (matched or count 0), and the
/// per-query feature analysis.
struct FeatureCatalog {
    std::map<Feature, FeatureData> dataset_features;
    std::vector<QueryFeatures> workload;  // workload order preserved
    std::size_t total_triples = 0;

    bool has(const Feature& f) const { return dataset_features.count(f) != 0; }
    std::size_t count(const Feature& f) const {
        auto it = dataset_features.find(f);
        return it == dataset_features.end() ? 0 : it->second.count;
    }
    const QueryFeatures* query(const std::string& id) const {
        for (const auto& qf : workload)
            if (qf.query_id == id) return &qf;
        return nullptr;
    }
};

inline FeatureCatalog extract_dataset_features(const KnowledgeGraph& g,
                                               const std::vector<QueryFeatures>& workload) {
    FeatureCatalog cat;
    cat.total_triples = g.size();
    cat.workload = workload;
    for (const auto& p : g.predicates()) {
        const auto& ids = g.lookup_p(p);
        cat.dataset_features[Feature::p(p)] = FeatureData{ids.size(), ids};
    }
    for (const auto& qf : workload) {
        for (const auto& f : qf.features) {
            if (cat.dataset_features.count(f)) continue;
            if (f.is_po()) {
                const auto& ids = g.lookup_po(f.predicate, f.object);
                cat.dataset_features[f] = FeatureData{ids.size(), ids};
            } else {
                cat.dataset_features[f] = FeatureData{};  // predicate absent: count 0
            }
        }
    }
    return cat;
}

/// Every feature used by at least one workload query.
inline std::set<Feature> workload_features(const FeatureCatalog& cat) {
    std::set<Feature> out;
    for (const auto& qf : cat.workload) out.insert(qf.features.begin(), qf.features.end());
    return out;
}

}  // namespace kgshard

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kgshard/error.hpp"
#include "kgshard/features.hpp"
#include "kgshard/partitioner.hpp"
#include "kgshard/query.hpp"

namespace kgshard {

/// Shard holding the pattern's most-specific homed feature: the exact
/// PO key when the metadata homes it, otherwise the predicate's P key.
inline ShardId locate_pattern(const TriplePattern& tp, const Partitioning& meta) {
    if (!tp.p.is_const())
        throw error("cannot locate a pattern with a variable predicate");
    if (tp.o.is_const()) {
        auto it = meta.feature_home.find(Feature::po(tp.p.term, tp.o.term));
        if (it != meta.feature_home.end()) return it->second;
    }
    auto it = meta.feature_home.find(Feature::p(tp.p.term));
    if (it != meta.feature_home.end()) return it->second;
    throw error("unknown predicate " + tp.p.term.lexical);
}

struct JoinAnnotation {
    JoinLink link;
    bool distributed = false;
};

/// A rewritten query plus the join accounting the rewrite implies.
/// distributed_links counts JoinLinks whose endpoints land on
/// different shards; distributed_joins collapses those links to the
/// distinct join keys (shared variable or constant) that must cross
/// shards, which is the unit the execution report charges.
struct FederatedPlan {
    FederatedQuery fq;
    std::vector<ShardId> pattern_shards;
    std::vector<JoinAnnotation> join_annotations;
    bool rewritten = false;
    int distributed_links = 0;
    int distributed_joins = 0;
};

namespace rewrite_detail {

/// The term shared by a link's two patterns, as a stable key string.
inline std::string join_key(const Query& q, const JoinLink& link) {
    const TriplePattern& l = q.patterns[link.left];
    const PatternTerm& t = link.kind == JoinKind::SS ? l.s : l.o;
    return t.is_var() ? "?" + t.var_name : t.term.token();
}

}  // namespace rewrite_detail

inline FederatedPlan rewrite(const Query& q, const Partitioning& meta) {
    FederatedPlan plan;
    plan.fq.base_query_id = q.id;
    plan.fq.projected = q.projected;
    for (const auto& tp : q.patterns)
        plan.pattern_shards.push_back(locate_pattern(tp, meta));

    std::map<ShardId, int> counts;
    for (ShardId s : plan.pattern_shards) counts[s]++;
    ShardId ppn = plan.pattern_shards.front();
    for (const auto& [shard, cnt] : counts) {
        if (cnt > counts[ppn] || (cnt == counts[ppn] && shard < ppn)) ppn = shard;
    }
    plan.fq.ppn = ppn;

    // One group per shard: PPN first, the rest in first-pattern order.
    std::vector<ShardId> order{ppn};
    for (ShardId s : plan.pattern_shards)
        if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
    for (ShardId s : order) {
        std::vector<TriplePattern> pats;
        for (std::size_t i = 0; i < q.patterns.size(); ++i)
            if (plan.pattern_shards[i] == s) pats.push_back(q.patterns[i]);
        plan.fq.groups.emplace_back(s, std::move(pats));
    }
    plan.rewritten = plan.fq.groups.size() > 1;

    QueryFeatures qf = extract_query_features(q);
    std::set<std::string> crossing_keys;
    for (const auto& link : qf.joins) {
        bool dist = plan.pattern_shards[link.left] != plan.pattern_shards[link.right];
        plan.join_annotations.push_back({link, dist});
        if (dist) {
            ++plan.distributed_links;
            crossing_keys.insert(rewrite_detail::join_key(q, link));
        }
    }
    plan.distributed_joins = static_cast<int>(crossing_keys.size());
    return plan;
}

}  // namespace kgshard

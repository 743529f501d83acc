#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgshard/clustering.hpp"
#include "kgshard/error.hpp"
#include "kgshard/features.hpp"
#include "kgshard/rdf.hpp"

namespace kgshard {

struct FeatureGroup {
    int group_id = 0;
    std::set<Feature> features;
    std::set<std::string> source_queries;
};

struct ReplicatedFeature {
    Feature feature;
    std::set<int> groups;
    std::map<int, double> per_group_score;
};

struct ScoreWeights {
    double w1 = 1.0, w2 = 1.0, w3 = 1.0, w4 = 1.0, w5 = 1.0, w6 = 1.0, w7 = 1.0;

    void validate() const {
        const double ws[] = {w1, w2, w3, w4, w5, w6, w7};
        bool any = false;
        for (double w : ws) {
            if (w < 0) throw error("score weights must be non-negative");
            any = any || w > 0;
        }
        if (!any) throw error("at least one score weight must be positive");
    }
};

struct Partitioning {
    int k = 0;
    std::vector<std::vector<TripleId>> shards;  // sorted, pairwise disjoint
    std::map<Feature, ShardId> feature_home;

    std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> s;
        for (const auto& sh : shards) s.push_back(sh.size());
        return s;
    }
};

struct BalanceReport {
    std::size_t total = 0;
    double target = 0.0;  // total / k
    double epsilon = 0.15;
    std::vector<std::size_t> sizes;
    std::vector<double> deviation;  // (size - target) / target per shard
    bool within_epsilon = false;
};

inline std::vector<FeatureGroup> build_feature_groups(const ClusterCut& cut,
                                                      const Dendrogram& dend,
                                                      const FeatureCatalog& cat) {
    std::vector<FeatureGroup> groups;
    for (const auto& cluster : cut.clusters) {
        FeatureGroup grp;
        grp.group_id = static_cast<int>(groups.size());
        for (int leaf : cluster) {
            const std::string& qid = dend.leaves[leaf];
            const QueryFeatures* qf = cat.query(qid);
            if (!qf) throw error("query " + qid + " missing from catalog");
            grp.source_queries.insert(qid);
            grp.features.insert(qf->features.begin(), qf->features.end());
        }
        groups.push_back(std::move(grp));
    }
    return groups;
}

inline std::vector<ReplicatedFeature> find_replicated(const std::vector<FeatureGroup>& groups) {
    std::map<Feature, std::set<int>> where;
    for (const auto& grp : groups)
        for (const auto& f : grp.features) where[f].insert(grp.group_id);
    std::vector<ReplicatedFeature> reps;
    for (auto& [f, gids] : where)
        if (gids.size() >= 2) reps.push_back({f, gids, {}});
    return reps;
}

namespace score_detail {

/// Workload join links incident to a pattern featurized by f whose
/// other endpoint's feature lies in `peers`. Each link counts once.
inline int links_into(const Feature& f, const std::set<Feature>& peers,
                      const std::vector<QueryFeatures>& workload) {
    int n = 0;
    for (const auto& qf : workload) {
        for (const auto& link : qf.joins) {
            const Feature& fl = qf.per_pattern_feature[link.left];
            const Feature& fr = qf.per_pattern_feature[link.right];
            if ((fl == f && peers.count(fr)) || (fr == f && peers.count(fl))) ++n;
        }
    }
    return n;
}

/// Distinct features co-occurring with f in some workload query,
/// optionally restricted to a candidate set.
inline std::set<Feature> co_features(const Feature& f,
                                     const std::vector<QueryFeatures>& workload) {
    std::set<Feature> out;
    for (const auto& qf : workload) {
        if (!qf.features.count(f)) continue;
        for (const auto& g : qf.features)
            if (g != f) out.insert(g);
    }
    return out;
}

}  // namespace score_detail

/// Placement score of replicated feature f for one candidate group:
///   w7·D_QR + (p_c·w1 + q_c·w2 + s_c·w3) + (p_t·w4 + q_t·w5 + s_t·w6)
/// where the _c terms are confined to the candidate group and the _t
/// terms range over the whole workload/dataset.
inline double score_replicated(const Feature& f, const FeatureGroup& group,
                               const FeatureCatalog& cat, const ScoreWeights& w) {
    if (!cat.has(f)) throw error("unknown feature: " + f.key());

    double d_qr = score_detail::links_into(f, group.features, cat.workload);

    std::set<Feature> co = score_detail::co_features(f, cat.workload);
    double p_c = 0, p_t = static_cast<double>(co.size());
    for (const auto& g : co) p_c += group.features.count(g) ? 1 : 0;

    double q_c = 0, q_t = 0;
    for (const auto& qf : cat.workload) {
        if (!qf.features.count(f)) continue;
        q_t += 1;
        bool inside = true;
        for (const auto& g : qf.features)
            if (!group.features.count(g)) { inside = false; break; }
        if (inside) q_c += 1;
    }

    double s_c = 0;
    for (const auto& g : group.features) s_c += static_cast<double>(cat.count(g));
    double s_t = static_cast<double>(cat.total_triples);

    return w.w7 * d_qr + (p_c * w.w1 + q_c * w.w2 + s_c * w.w3) +
           (p_t * w.w4 + q_t * w.w5 + s_t * w.w6);
}

/// Argmax of per_group_score per feature; ties go to the smaller
/// group id.
inline std::map<Feature, int> resolve_replication(const std::vector<ReplicatedFeature>& reps) {
    std::map<Feature, int> owner;
    for (const auto& rep : reps) {
        if (rep.per_group_score.empty())
            throw error("replicated feature " + rep.feature.key() + " has no scores");
        int best = -1;
        double best_score = 0;
        for (const auto& [gid, score] : rep.per_group_score) {
            if (best < 0 || score > best_score) best = gid, best_score = score;
        }
        owner[rep.feature] = best;
    }
    return owner;
}

/// Drop each resolved feature from every group but its owner.
inline void apply_ownership(std::vector<FeatureGroup>& groups,
                            const std::map<Feature, int>& owner) {
    for (auto& grp : groups)
        for (const auto& [f, gid] : owner)
            if (gid != grp.group_id) grp.features.erase(f);
}

/// Scores every replicated feature against each of its groups and
/// strips losers. Returns the scored set for reporting.
inline std::vector<ReplicatedFeature> resolve_groups(std::vector<FeatureGroup>& groups,
                                                     const FeatureCatalog& cat,
                                                     const ScoreWeights& w) {
    std::vector<ReplicatedFeature> reps = find_replicated(groups);
    for (auto& rep : reps)
        for (int gid : rep.groups)
            rep.per_group_score[gid] = score_replicated(rep.feature, groups.at(gid), cat, w);
    apply_ownership(groups, resolve_replication(reps));
    return reps;
}

struct ProximityPlacement {
    std::map<Feature, int> placed;
    std::vector<Feature> deferred;  // zero proximity everywhere
};

/// Place each unclustered feature in the group it shares the most
/// workload join links with (computed against the groups as given, so
/// placement order cannot matter). Zero-proximity features defer to
/// the unused pool.
inline ProximityPlacement proximity_place(const std::set<Feature>& unclustered,
                                          const std::vector<FeatureGroup>& groups,
                                          const FeatureCatalog& cat) {
    ProximityPlacement out;
    for (const auto& f : unclustered) {
        int best = -1, best_prox = 0;
        for (const auto& grp : groups) {
            int prox = score_detail::links_into(f, grp.features, cat.workload);
            if (prox > best_prox) best = grp.group_id, best_prox = prox;
        }
        if (best >= 0)
            out.placed[f] = best;
        else
            out.deferred.push_back(f);
    }
    return out;
}

namespace partition_detail {

/// Most-specific-wins triple ownership: a PO feature in the catalog
/// owns its exact matches, the P feature owns the residual. Partitions
/// the graph's triple ids across catalog features.
inline std::map<Feature, std::vector<TripleId>> owned_ids(const FeatureCatalog& cat,
                                                          const KnowledgeGraph& g) {
    std::map<Feature, std::vector<TripleId>> owned;
    for (const auto& [f, data] : cat.dataset_features) {
        if (f.is_po()) {
            owned[f] = data.ids;
            continue;
        }
        std::vector<TripleId> residual;
        for (TripleId id : data.ids) {
            const Triple& t = g.triple(id);
            if (!cat.has(Feature::po(t.p, t.o))) residual.push_back(id);
        }
        owned[f] = std::move(residual);
    }
    return owned;
}

/// Re-home predicate families whose bare P feature is workload-used:
/// a pattern with an unconstrained object can only be answered on one
/// shard if every triple of that predicate lives there, so all catalog
/// PO(p,·) features must share P(p)'s home. Members move into the
/// anchor group; fully unassigned families come back as bound units
/// for the greedy loop.
inline std::vector<std::vector<Feature>> coalesce_families(
    std::vector<FeatureGroup>& groups, const FeatureCatalog& cat,
    const std::map<Feature, std::vector<TripleId>>& owned) {
    std::set<Feature> wf = workload_features(cat);
    std::map<Feature, int> assigned;
    for (const auto& grp : groups)
        for (const auto& f : grp.features) assigned.emplace(f, grp.group_id);

    std::vector<std::vector<Feature>> unassigned_units;
    for (const auto& anchor : wf) {
        if (anchor.is_po()) continue;
        std::vector<Feature> members{anchor};
        for (const auto& [f, data] : cat.dataset_features)
            if (f.is_po() && f.predicate == anchor.predicate) members.push_back(f);
        if (members.size() == 1) continue;

        auto mass_in = [&](int gid) {
            std::size_t m = 0;
            for (const auto& f : members) {
                auto it = assigned.find(f);
                if (it != assigned.end() && it->second == gid) m += owned.at(f).size();
            }
            return m;
        };

        int target = -1;
        auto anchor_it = assigned.find(anchor);
        if (anchor_it != assigned.end()) {
            target = anchor_it->second;
        } else {
            std::size_t best_mass = 0;
            for (const auto& grp : groups) {
                std::size_t m = mass_in(grp.group_id);
                if (m > best_mass) target = grp.group_id, best_mass = m;
            }
        }
        if (target < 0) {
            unassigned_units.push_back(std::move(members));
            continue;
        }
        for (auto& grp : groups) {
            for (const auto& f : members) {
                if (grp.group_id == target)
                    grp.features.insert(f);
                else
                    grp.features.erase(f);
            }
        }
        for (const auto& f : members) assigned[f] = target;
    }
    return unassigned_units;
}

}  // namespace partition_detail

struct PartitionBuild {
    Partitioning partitioning;
    BalanceReport report;
};

/// Seed each group's shard with the triples its features own, then
/// drain the unused-feature pool largest-first into the smallest
/// shard. Balance against epsilon is reported, never enforced.
inline PartitionBuild balance_and_assign(std::vector<FeatureGroup> groups,
                                         const FeatureCatalog& cat, const KnowledgeGraph& g,
                                         int k, double epsilon) {
    if (k < 1) throw error("k must be at least 1");
    if (static_cast<std::size_t>(k) > groups.size())
        throw error("k = " + std::to_string(k) + " exceeds the " +
                    std::to_string(groups.size()) + " groups after the cut");
    if (static_cast<std::size_t>(k) < groups.size())
        throw error("more groups than shards: " + std::to_string(groups.size()) +
                    " groups for k = " + std::to_string(k));

    auto owned = partition_detail::owned_ids(cat, g);
    auto bound_units = partition_detail::coalesce_families(groups, cat, owned);

    Partitioning part;
    part.k = k;
    part.shards.assign(k, {});

    std::set<Feature> assigned;
    for (const auto& grp : groups) {
        for (const auto& f : grp.features) {
            part.feature_home[f] = grp.group_id;
            assigned.insert(f);
        }
    }

    // Unused pool as placement units: bound families stay whole.
    struct Unit {
        std::vector<Feature> features;
        std::size_t mass = 0;
    };
    std::vector<Unit> pool;
    std::set<Feature> in_bound;
    for (const auto& unit : bound_units) {
        Unit u{unit, 0};
        for (const auto& f : unit) {
            u.mass += owned.at(f).size();
            in_bound.insert(f);
        }
        pool.push_back(std::move(u));
    }
    for (const auto& [f, ids] : cat.dataset_features) {
        if (assigned.count(f) || in_bound.count(f)) continue;
        pool.push_back(Unit{{f}, owned.at(f).size()});
    }
    std::sort(pool.begin(), pool.end(), [](const Unit& a, const Unit& b) {
        if (a.mass != b.mass) return a.mass > b.mass;
        return a.features.front() < b.features.front();
    });

    std::vector<std::size_t> load(k, 0);
    for (const auto& grp : groups)
        for (const auto& f : grp.features) load[grp.group_id] += owned.at(f).size();

    for (const auto& u : pool) {
        int smallest = 0;
        for (int i = 1; i < k; ++i)
            if (load[i] < load[smallest]) smallest = i;
        for (const auto& f : u.features) part.feature_home[f] = smallest;
        load[smallest] += u.mass;
    }

    for (const auto& [f, shard] : part.feature_home) {
        const auto& ids = owned.at(f);
        auto& dst = part.shards[shard];
        dst.insert(dst.end(), ids.begin(), ids.end());
    }
    std::size_t total = 0;
    for (auto& shard : part.shards) {
        std::sort(shard.begin(), shard.end());
        total += shard.size();
    }
    if (total != g.size())
        throw error("internal: shard union covers " + std::to_string(total) + " of " +
                    std::to_string(g.size()) + " triples");

    BalanceReport rep;
    rep.total = total;
    rep.target = static_cast<double>(total) / k;
    rep.epsilon = epsilon;
    rep.sizes = part.sizes();
    rep.within_epsilon = true;
    for (std::size_t s : rep.sizes) {
        double dev = rep.target > 0 ? (static_cast<double>(s) - rep.target) / rep.target : 0.0;
        rep.deviation.push_back(dev);
        if (dev < -epsilon || dev > epsilon) rep.within_epsilon = false;
    }
    return PartitionBuild{std::move(part), std::move(rep)};
}

inline nlohmann::json emit_metadata(const Partitioning& p) {
    nlohmann::json homes = nlohmann::json::object();
    for (const auto& [f, shard] : p.feature_home) homes[f.key()] = shard;
    return {{"k", p.k}, {"feature_home", homes}, {"sizes", p.sizes()}};
}

inline Partitioning load_metadata(const nlohmann::json& doc) {
    Partitioning p;
    p.k = doc.at("k").get<int>();
    if (p.k < 1) throw error("metadata k must be at least 1");
    p.shards.assign(p.k, {});
    for (const auto& [key, shard] : doc.at("feature_home").items()) {
        int id = shard.get<int>();
        if (id < 0 || id >= p.k)
            throw error("feature " + key + " homed to invalid shard " + std::to_string(id));
        p.feature_home[Feature::from_key(key)] = id;
    }
    return p;
}

struct PartitionConfig {
    int k = 2;
    Linkage linkage = Linkage::Single;
    std::optional<double> cut_distance;  // defaults to a count cut at k
    ScoreWeights weights;
    double epsilon = 0.15;
};

struct WawResult {
    DistanceMatrix matrix;
    Dendrogram dendrogram;
    ClusterCut cut;                       // the k selected clusters
    std::vector<ReplicatedFeature> replicated;
    std::vector<FeatureGroup> groups;     // post-resolution and placement
    ProximityPlacement proximity;
    Partitioning partitioning;
    BalanceReport report;
};

/// The full workload-aware pipeline: cluster the workload, cut to k
/// groups, resolve replicated features by score, pull in stragglers by
/// join proximity, then balance the unused remainder.
inline WawResult wawpart_partition(const KnowledgeGraph& g, const FeatureCatalog& cat,
                                   const PartitionConfig& cfg) {
    cfg.weights.validate();
    if (cat.workload.empty()) throw error("cannot partition with an empty workload");

    WawResult res;
    res.matrix = build_distance_matrix(cat.workload);
    res.dendrogram = hac(res.matrix, cfg.linkage);

    std::vector<std::vector<int>> dropped;
    if (cfg.cut_distance) {
        ClusterCut cut = cut_at_distance(res.dendrogram, *cfg.cut_distance);
        if (cut.clusters.size() < static_cast<std::size_t>(cfg.k))
            throw error("cut at distance produced " + std::to_string(cut.clusters.size()) +
                        " clusters for k = " + std::to_string(cfg.k));
        // Keep the k clusters covering the most queries; ties favor the
        // one containing the earliest query. Leftovers feed proximity
        // placement.
        std::vector<std::size_t> order(cut.clusters.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (cut.clusters[a].size() != cut.clusters[b].size())
                return cut.clusters[a].size() > cut.clusters[b].size();
            return cut.clusters[a].front() < cut.clusters[b].front();
        });
        std::vector<bool> selected(cut.clusters.size(), false);
        for (int i = 0; i < cfg.k; ++i) selected[order[i]] = true;
        for (std::size_t i = 0; i < cut.clusters.size(); ++i) {
            if (selected[i])
                res.cut.clusters.push_back(cut.clusters[i]);
            else
                dropped.push_back(cut.clusters[i]);
        }
    } else {
        res.cut = cut_at_count(res.dendrogram, cfg.k);
    }

    res.groups = build_feature_groups(res.cut, res.dendrogram, cat);
    res.replicated = resolve_groups(res.groups, cat, cfg.weights);

    std::set<Feature> in_groups;
    for (const auto& grp : res.groups)
        in_groups.insert(grp.features.begin(), grp.features.end());
    std::set<Feature> unclustered;
    for (const auto& cluster : dropped) {
        for (int leaf : cluster) {
            const QueryFeatures* qf = cat.query(res.dendrogram.leaves[leaf]);
            for (const auto& f : qf->features)
                if (!in_groups.count(f)) unclustered.insert(f);
        }
    }
    res.proximity = proximity_place(unclustered, res.groups, cat);
    for (const auto& [f, gid] : res.proximity.placed) res.groups.at(gid).features.insert(f);

    PartitionBuild build = balance_and_assign(res.groups, cat, g, cfg.k, cfg.epsilon);
    res.partitioning = std::move(build.partitioning);
    res.report = std::move(build.report);
    return res;
}

}  // namespace kgshard

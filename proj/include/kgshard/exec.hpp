#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgshard/error.hpp"
#include "kgshard/partitioner.hpp"
#include "kgshard/query.hpp"
#include "kgshard/rdf.hpp"
#include "kgshard/rewriter.hpp"

namespace kgshard {

using Binding = std::map<std::string, Term>;

struct CostModel {
    double call_latency = 50.0;        // simulated ms per remote SERVICE call
    double per_row_cost = 0.01;        // simulated ms per row shipped
    double local_match_cost = 0.0001;  // simulated ms per index probe

    void validate() const {
        if (call_latency < 0 || per_row_cost < 0 || local_match_cost < 0)
            throw error("cost model values must be non-negative");
    }
};

struct ExecStats {
    std::size_t result_count = 0;
    int distributed_joins = 0;
    int remote_calls = 0;
    std::int64_t rows_shipped = 0;
    std::int64_t probes = 0;
    double simulated_time = 0.0;

    void settle(const CostModel& cm) {
        simulated_time = remote_calls * cm.call_latency +
                         static_cast<double>(rows_shipped) * cm.per_row_cost +
                         static_cast<double>(probes) * cm.local_match_cost;
    }

    friend bool operator==(const ExecStats& a, const ExecStats& b) {
        return a.result_count == b.result_count && a.distributed_joins == b.distributed_joins &&
               a.remote_calls == b.remote_calls && a.rows_shipped == b.rows_shipped &&
               a.probes == b.probes && a.simulated_time == b.simulated_time;
    }
};

namespace exec_detail {

inline const Term* resolved(const PatternTerm& pt, const Binding& b) {
    if (pt.is_const()) return &pt.term;
    auto it = b.find(pt.var_name);
    return it == b.end() ? nullptr : &it->second;
}

/// Candidate ids for one pattern under the bindings made so far.
/// Index preference is fixed as s > po > p > o > scan. A resolved
/// subject keys the narrowest list (one node's own triples), which is
/// what makes chained joins cheap once earlier patterns have bound it.
/// Patterns whose subject is still open fall back to the predicate
/// indexes; those lists depend only on the predicate family, so probe
/// counts for feature-local patterns come out the same on every shard
/// that homes the feature.
inline const std::vector<TripleId>& candidates(const TriplePattern& tp, const Binding& b,
                                               const KnowledgeGraph& g,
                                               std::vector<TripleId>& scratch) {
    const Term* s = resolved(tp.s, b);
    const Term* p = resolved(tp.p, b);
    const Term* o = resolved(tp.o, b);
    if (s) return g.lookup_s(*s);
    if (p && o) return g.lookup_po(*p, *o);
    if (p) return g.lookup_p(*p);
    if (o) return g.lookup_o(*o);
    scratch.resize(g.size());
    for (std::size_t i = 0; i < scratch.size(); ++i) scratch[i] = static_cast<TripleId>(i);
    return scratch;
}

inline bool accepts(const PatternTerm& pt, const Term& val, const Binding& b) {
    const Term* r = resolved(pt, b);
    return r == nullptr || *r == val;
}

inline bool bind(const PatternTerm& pt, const Term& val, Binding& b) {
    if (pt.is_const()) return pt.term == val;
    auto [it, fresh] = b.emplace(pt.var_name, val);
    return fresh || it->second == val;
}

/// Left-to-right evaluation of one connected pattern list.
inline std::vector<Binding> eval_chain(const std::vector<TriplePattern>& patterns,
                                       const KnowledgeGraph& g, std::int64_t& probes) {
    std::vector<Binding> results{Binding{}};
    std::vector<TripleId> scratch;
    for (const auto& tp : patterns) {
        std::vector<Binding> next;
        for (const auto& b : results) {
            const auto& cands = candidates(tp, b, g, scratch);
            for (TripleId id : cands) {
                ++probes;
                const Triple& t = g.triple(id);
                // cheap reject before copying the binding
                if (!accepts(tp.s, t.s, b) || !accepts(tp.p, t.p, b) ||
                    !accepts(tp.o, t.o, b))
                    continue;
                Binding nb = b;
                if (bind(tp.s, t.s, nb) && bind(tp.p, t.p, nb) && bind(tp.o, t.o, nb))
                    next.push_back(std::move(nb));
            }
        }
        results = std::move(next);
        if (results.empty()) break;
    }
    return results;
}

/// Group patterns into connected components by shared variables,
/// preserving relative pattern order inside each component. Patterns
/// without variables stand alone.
inline std::vector<std::vector<TriplePattern>> split_components(
    const std::vector<TriplePattern>& patterns) {
    std::size_t n = patterns.size();
    std::vector<int> comp(n, -1);
    std::vector<std::set<std::string>> vars(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const PatternTerm* pt : {&patterns[i].s, &patterns[i].p, &patterns[i].o})
            if (pt->is_var()) vars[i].insert(pt->var_name);

    int nc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (comp[i] >= 0) continue;
        comp[i] = nc;
        // grow the component to a fixed point
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t j = 0; j < n; ++j) {
                if (comp[j] >= 0) continue;
                bool touches = false;
                for (std::size_t m = 0; m < n && !touches; ++m) {
                    if (comp[m] != nc) continue;
                    for (const auto& v : vars[j])
                        if (vars[m].count(v)) { touches = true; break; }
                }
                if (touches) {
                    comp[j] = nc;
                    changed = true;
                }
            }
        }
        ++nc;
    }
    std::vector<std::vector<TriplePattern>> out(nc);
    for (std::size_t i = 0; i < n; ++i) out[comp[i]].push_back(patterns[i]);
    return out;
}

/// Solutions kept in factored form: one row set per variable-disjoint
/// component. The full solution set is the cross product, which is
/// counted but never materialized, so a disconnected pattern group
/// (common after a rewrite splits a query) cannot blow up memory.
struct Factored {
    struct Component {
        std::set<std::string> vars;
        std::vector<Binding> rows;
    };
    std::vector<Component> components;

    std::int64_t count() const {
        std::int64_t n = 1;
        for (const auto& c : components) {
            if (c.rows.empty()) return 0;
            if (n > (std::int64_t{1} << 50) / static_cast<std::int64_t>(c.rows.size()))
                throw error("solution count overflow");
            n *= static_cast<std::int64_t>(c.rows.size());
        }
        return n;
    }
};

inline std::vector<Binding> hash_join(const std::vector<Binding>& a,
                                      const std::vector<Binding>& b,
                                      const std::set<std::string>& avars,
                                      const std::set<std::string>& bvars) {
    std::vector<std::string> shared;
    for (const auto& v : bvars)
        if (avars.count(v)) shared.push_back(v);
    std::map<std::vector<Term>, std::vector<const Binding*>> table;
    for (const auto& row : b) {
        std::vector<Term> key;
        for (const auto& v : shared) key.push_back(row.at(v));
        table[std::move(key)].push_back(&row);
    }
    std::vector<Binding> out;
    for (const auto& row : a) {
        std::vector<Term> key;
        for (const auto& v : shared) key.push_back(row.at(v));
        auto hit = table.find(key);
        if (hit == table.end()) continue;
        for (const Binding* r : hit->second) {
            Binding merged = row;
            merged.insert(r->begin(), r->end());
            out.push_back(std::move(merged));
        }
    }
    return out;
}

/// Fold one component into the pool, joining it with every pool
/// component it shares a variable with (transitively).
inline void fold(Factored& pool, Factored::Component next) {
    for (bool merged = true; merged;) {
        merged = false;
        for (std::size_t i = 0; i < pool.components.size(); ++i) {
            const auto& c = pool.components[i];
            bool shares = false;
            for (const auto& v : next.vars)
                if (c.vars.count(v)) { shares = true; break; }
            if (!shares) continue;
            next.rows = hash_join(c.rows, next.rows, c.vars, next.vars);
            next.vars.insert(c.vars.begin(), c.vars.end());
            pool.components.erase(pool.components.begin() + static_cast<std::ptrdiff_t>(i));
            merged = true;
            break;
        }
    }
    pool.components.push_back(std::move(next));
}

inline Factored eval_factored(const std::vector<TriplePattern>& patterns,
                              const KnowledgeGraph& g, std::int64_t& probes) {
    Factored out;
    for (auto& comp_patterns : split_components(patterns)) {
        Factored::Component c;
        for (const auto& tp : comp_patterns)
            for (const PatternTerm* pt : {&tp.s, &tp.p, &tp.o})
                if (pt->is_var()) c.vars.insert(pt->var_name);
        c.rows = eval_chain(comp_patterns, g, probes);
        out.components.push_back(std::move(c));
    }
    return out;
}

/// Project each component, dedupe, and expand the cross product.
/// Component var sets are disjoint, so the product of the deduped
/// projections is exactly the deduped projection of the product.
inline std::set<Binding> project_product(const Factored& f,
                                         const std::vector<std::string>& vars) {
    std::vector<std::set<Binding>> parts;
    std::int64_t total = 1;
    for (const auto& c : f.components) {
        if (c.rows.empty()) return {};
        std::set<Binding> proj;
        for (const auto& row : c.rows) {
            Binding keep;
            for (const auto& v : vars) {
                auto it = row.find(v);
                if (it != row.end()) keep.emplace(*it);
            }
            proj.insert(std::move(keep));
        }
        total *= static_cast<std::int64_t>(proj.size());
        if (total > 5'000'000) throw error("result set too large to materialize");
        parts.push_back(std::move(proj));
    }
    std::set<Binding> out{Binding{}};
    for (const auto& part : parts) {
        std::set<Binding> next;
        for (const auto& base : out) {
            for (const auto& add : part) {
                Binding merged = base;
                merged.insert(add.begin(), add.end());
                next.insert(std::move(merged));
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace exec_detail

/// Conjunctive evaluation with index-backed matching: connected
/// patterns run left-to-right, variable-disjoint components combine as
/// a cross product. Returns all solutions over the full variable set.
inline std::set<Binding> eval_bgp(const std::vector<TriplePattern>& patterns,
                                  const KnowledgeGraph& g, std::int64_t* probes = nullptr) {
    std::int64_t count = 0;
    exec_detail::Factored f = exec_detail::eval_factored(patterns, g, count);
    if (probes) *probes += count;
    std::vector<std::string> vars;
    std::set<std::string> seen;
    for (const auto& c : f.components)
        for (const auto& v : c.vars)
            if (seen.insert(v).second) vars.push_back(v);
    return exec_detail::project_product(f, vars);
}

inline std::set<Binding> project(const std::set<Binding>& bindings,
                                 const std::vector<std::string>& vars) {
    std::set<Binding> out;
    for (const auto& b : bindings) {
        Binding row;
        for (const auto& v : vars) {
            auto it = b.find(v);
            if (it != b.end()) row.emplace(*it);
        }
        out.insert(std::move(row));
    }
    return out;
}

struct EvalResult {
    std::set<Binding> bindings;
    ExecStats stats;
};

/// Whole-graph evaluation. The remote variant stands for a single
/// far-away endpoint: exactly one remote call is charged, so the
/// simulated-time identity stays exact.
inline EvalResult eval_centralized(const Query& q, const KnowledgeGraph& g,
                                   const CostModel& cm = {}, bool remote = false) {
    EvalResult res;
    exec_detail::Factored f = exec_detail::eval_factored(q.patterns, g, res.stats.probes);
    res.bindings = exec_detail::project_product(f, q.projected);
    res.stats.result_count = res.bindings.size();
    res.stats.remote_calls = remote ? 1 : 0;
    res.stats.settle(cm);
    return res;
}

using ShardMap = std::map<ShardId, const KnowledgeGraph*>;

/// Evaluate each group on its shard, then join everything at the PPN.
/// A remote group ships its full (factored) solution count; the final
/// result is projected after all groups are folded together.
inline EvalResult eval_federated(const FederatedPlan& plan, const ShardMap& shards,
                                 const CostModel& cm = {}) {
    EvalResult res;
    res.stats.distributed_joins = plan.distributed_joins;

    exec_detail::Factored pool;
    for (const auto& [shard, patterns] : plan.fq.groups) {
        auto it = shards.find(shard);
        if (it == shards.end() || !it->second)
            throw error("missing shard " + std::to_string(shard));
        exec_detail::Factored part =
            exec_detail::eval_factored(patterns, *it->second, res.stats.probes);
        if (shard != plan.fq.ppn) {
            res.stats.remote_calls += 1;
            res.stats.rows_shipped += part.count();
        }
        for (auto& c : part.components) exec_detail::fold(pool, std::move(c));
    }

    res.bindings = exec_detail::project_product(pool, plan.fq.projected);
    res.stats.result_count = res.bindings.size();
    res.stats.settle(cm);
    return res;
}

struct QueryRow {
    std::string id;
    bool ok = false;
    std::string error_message;
    ExecStats stats;
};

struct WorkloadReport {
    std::vector<QueryRow> rows;
    ExecStats totals;  // sums over successful queries
    double mean_time = 0.0;
    int failed = 0;
};

/// Rewrite and execute every query once, aggregating per-query rows.
/// A failing query is reported and the run continues.
inline WorkloadReport run_workload(const std::vector<Query>& workload, const Partitioning& meta,
                                   const ShardMap& shards, const CostModel& cm = {}) {
    WorkloadReport rep;
    int ok = 0;
    for (const auto& q : workload) {
        QueryRow row;
        row.id = q.id;
        try {
            FederatedPlan plan = rewrite(q, meta);
            EvalResult res = eval_federated(plan, shards, cm);
            row.ok = true;
            row.stats = res.stats;
            ++ok;
            rep.totals.result_count += res.stats.result_count;
            rep.totals.distributed_joins += res.stats.distributed_joins;
            rep.totals.remote_calls += res.stats.remote_calls;
            rep.totals.rows_shipped += res.stats.rows_shipped;
            rep.totals.probes += res.stats.probes;
            rep.totals.simulated_time += res.stats.simulated_time;
        } catch (const error& e) {
            row.error_message = e.what();
            ++rep.failed;
        }
        rep.rows.push_back(std::move(row));
    }
    rep.mean_time = ok > 0 ? rep.totals.simulated_time / ok : 0.0;
    return rep;
}

inline nlohmann::json stats_to_json(const ExecStats& s) {
    return {{"results", s.result_count},
            {"distributed_joins", s.distributed_joins},
            {"remote_calls", s.remote_calls},
            {"rows_shipped", s.rows_shipped},
            {"probes", s.probes},
            {"simulated_ms", s.simulated_time}};
}

inline nlohmann::json report_to_json(const WorkloadReport& rep) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rep.rows) {
        nlohmann::json r{{"id", row.id}, {"ok", row.ok}};
        if (row.ok)
            r.update(stats_to_json(row.stats));
        else
            r["error"] = row.error_message;
        rows.push_back(std::move(r));
    }
    return {{"queries", rows},
            {"totals", stats_to_json(rep.totals)},
            {"mean_simulated_ms", rep.mean_time},
            {"failed", rep.failed}};
}

/// Aligned text table, one row per query:
/// `<query-id> <results> <distributed-joins> <remote-calls> <rows-shipped> <sim-ms>`
inline std::string report_text(const WorkloadReport& rep) {
    std::size_t idw = 8;
    for (const auto& row : rep.rows) idw = std::max(idw, row.id.size());
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-*s %10s %10s %8s %12s %14s\n", static_cast<int>(idw),
                  "query", "results", "dist-joins", "calls", "rows-shipped", "sim-ms");
    out += buf;
    for (const auto& row : rep.rows) {
        if (!row.ok) {
            std::snprintf(buf, sizeof buf, "%-*s FAILED: %s\n", static_cast<int>(idw),
                          row.id.c_str(), row.error_message.c_str());
            out += buf;
            continue;
        }
        const ExecStats& s = row.stats;
        std::snprintf(buf, sizeof buf, "%-*s %10zu %10d %8d %12lld %14.4f\n",
                      static_cast<int>(idw), row.id.c_str(), s.result_count,
                      s.distributed_joins, s.remote_calls,
                      static_cast<long long>(s.rows_shipped), s.simulated_time);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "%-*s %10zu %10d %8d %12lld %14.4f\n",
                  static_cast<int>(idw), "TOTAL", rep.totals.result_count,
                  rep.totals.distributed_joins, rep.totals.remote_calls,
                  static_cast<long long>(rep.totals.rows_shipped), rep.totals.simulated_time);
    out += buf;
    std::snprintf(buf, sizeof buf, "%-*s mean simulated ms per query: %.4f\n",
                  static_cast<int>(idw), "", rep.mean_time);
    out += buf;
    if (rep.failed > 0) out += std::to_string(rep.failed) + " queries failed\n";
    return out;
}

}  // namespace kgshard

#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgshard/error.hpp"
#include "kgshard/features.hpp"
#include "kgshard/rational.hpp"

namespace kgshard {

/// Exact Jaccard distance 1 - |A∩B| / |A∪B| between two feature sets.
inline Rational jaccard_distance(const QueryFeatures& a, const QueryFeatures& b) {
    std::int64_t inter = 0;
    for (const auto& f : a.features) inter += b.features.count(f);
    std::int64_t uni = static_cast<std::int64_t>(a.features.size() + b.features.size()) - inter;
    if (uni == 0) return Rational(0);
    return Rational(1) - Rational(inter, uni);
}

struct DistanceMatrix {
    std::vector<std::string> ids;
    std::vector<std::vector<Rational>> d;

    std::size_t size() const { return ids.size(); }
    const Rational& at(std::size_t i, std::size_t j) const { return d[i][j]; }
};

inline DistanceMatrix build_distance_matrix(const std::vector<QueryFeatures>& workload) {
    DistanceMatrix m;
    std::set<std::string> seen;
    for (const auto& qf : workload) {
        if (!seen.insert(qf.query_id).second)
            throw error("duplicate query id in workload: " + qf.query_id);
        m.ids.push_back(qf.query_id);
    }
    std::size_t n = workload.size();
    m.d.assign(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m.d[i][j] = m.d[j][i] = jaccard_distance(workload[i], workload[j]);
    return m;
}

inline nlohmann::json matrix_to_json(const DistanceMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    nlohmann::json exact = nlohmann::json::array();
    for (const auto& row : m.d) {
        nlohmann::json r = nlohmann::json::array();
        nlohmann::json e = nlohmann::json::array();
        for (const auto& v : row) {
            r.push_back(v.to_double());
            e.push_back(v.str());
        }
        rows.push_back(std::move(r));
        exact.push_back(std::move(e));
    }
    return {{"ids", m.ids}, {"distances", rows}, {"exact", exact}};
}

enum class Linkage { Single, Complete, Average };

inline Linkage parse_linkage(const std::string& s) {
    if (s == "single") return Linkage::Single;
    if (s == "complete") return Linkage::Complete;
    if (s == "average") return Linkage::Average;
    throw error("unknown linkage: " + s + " (expected single, complete or average)");
}

inline const char* linkage_name(Linkage l) {
    switch (l) {
        case Linkage::Single: return "single";
        case Linkage::Complete: return "complete";
        default: return "average";
    }
}

/// One agglomeration step. Node ids: leaves are 0..n-1, the merge at
/// step s creates node n+s. left always holds the smaller leaf index.
struct Merge {
    int id = 0;
    int left = 0;
    int right = 0;
    Rational height;
};

struct Dendrogram {
    std::vector<std::string> leaves;
    std::vector<Merge> merges;
};

/// Agglomerative clustering over a precomputed distance matrix.
///
/// Ties on minimal distance resolve to the pair whose (smaller
/// representative, larger representative) is lexicographically least,
/// where a cluster's representative is its smallest leaf index. This
/// makes the dendrogram a pure function of matrix and linkage.
inline Dendrogram hac(const DistanceMatrix& m, Linkage linkage) {
    std::size_t n = m.size();
    if (n == 0) throw error("cannot cluster an empty matrix");
    Dendrogram dend;
    dend.leaves = m.ids;

    struct Active {
        int node;
        int rep;   // smallest leaf index
        int size;  // leaf count
    };
    std::vector<Active> act;
    for (std::size_t i = 0; i < n; ++i)
        act.push_back({static_cast<int>(i), static_cast<int>(i), 1});
    std::vector<std::vector<Rational>> prox = m.d;

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t bi = 0, bj = 1;
        for (std::size_t i = 0; i < act.size(); ++i) {
            for (std::size_t j = i + 1; j < act.size(); ++j) {
                if (i == bi && j == bj) continue;
                const Rational& cand = prox[i][j];
                const Rational& best = prox[bi][bj];
                if (cand < best) {
                    bi = i, bj = j;
                } else if (cand == best) {
                    int clo = std::min(act[i].rep, act[j].rep);
                    int chi = std::max(act[i].rep, act[j].rep);
                    int blo = std::min(act[bi].rep, act[bj].rep);
                    int bhi = std::max(act[bi].rep, act[bj].rep);
                    if (clo < blo || (clo == blo && chi < bhi)) bi = i, bj = j;
                }
            }
        }

        const Active& a = act[bi];
        const Active& b = act[bj];
        Merge mg;
        mg.id = static_cast<int>(n + step);
        mg.left = a.rep <= b.rep ? a.node : b.node;
        mg.right = a.rep <= b.rep ? b.node : a.node;
        mg.height = prox[bi][bj];
        dend.merges.push_back(mg);

        Active merged{mg.id, std::min(a.rep, b.rep), a.size + b.size};
        std::vector<Rational> row;
        for (std::size_t k = 0; k < act.size(); ++k) {
            if (k == bi || k == bj) continue;
            const Rational& di = prox[bi][k];
            const Rational& dj = prox[bj][k];
            switch (linkage) {
                case Linkage::Single: row.push_back(std::min(di, dj)); break;
                case Linkage::Complete: row.push_back(std::max(di, dj)); break;
                case Linkage::Average:
                    row.push_back((Rational(a.size) * di + Rational(b.size) * dj) /
                                  Rational(a.size + b.size));
                    break;
            }
        }

        std::vector<Active> nact;
        std::vector<std::vector<Rational>> nprox;
        std::vector<std::size_t> keep;
        for (std::size_t k = 0; k < act.size(); ++k)
            if (k != bi && k != bj) keep.push_back(k);
        for (std::size_t x = 0; x < keep.size(); ++x) {
            nact.push_back(act[keep[x]]);
            std::vector<Rational> r;
            for (std::size_t y = 0; y < keep.size(); ++y) r.push_back(prox[keep[x]][keep[y]]);
            r.push_back(row[x]);
            nprox.push_back(std::move(r));
        }
        row.push_back(Rational(0));
        nact.push_back(merged);
        nprox.push_back(std::move(row));
        act = std::move(nact);
        prox = std::move(nprox);
    }
    return dend;
}

/// Flat clusters after undoing part of a dendrogram. Each cluster is a
/// sorted list of leaf indices; clusters sort by smallest leaf.
struct ClusterCut {
    std::vector<std::vector<int>> clusters;

    std::vector<std::vector<std::string>> named(const Dendrogram& dend) const {
        std::vector<std::vector<std::string>> out;
        for (const auto& c : clusters) {
            std::vector<std::string> ids;
            for (int leaf : c) ids.push_back(dend.leaves[leaf]);
            out.push_back(std::move(ids));
        }
        return out;
    }
};

namespace cluster_detail {

inline ClusterCut collect(const Dendrogram& dend, std::size_t applied) {
    std::size_t n = dend.leaves.size();
    std::map<int, std::vector<int>> alive;
    for (std::size_t i = 0; i < n; ++i) alive[static_cast<int>(i)] = {static_cast<int>(i)};
    for (std::size_t s = 0; s < applied; ++s) {
        const Merge& mg = dend.merges[s];
        std::vector<int> merged = std::move(alive.at(mg.left));
        const auto& r = alive.at(mg.right);
        merged.insert(merged.end(), r.begin(), r.end());
        alive.erase(mg.left);
        alive.erase(mg.right);
        alive[mg.id] = std::move(merged);
    }
    ClusterCut cut;
    for (auto& [node, leaves] : alive) {
        std::sort(leaves.begin(), leaves.end());
        cut.clusters.push_back(std::move(leaves));
    }
    std::sort(cut.clusters.begin(), cut.clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return cut;
}

}  // namespace cluster_detail

/// Keep merges of height <= d, undo the rest.
inline ClusterCut cut_at_distance(const Dendrogram& dend, double d) {
    std::size_t applied = 0;
    while (applied < dend.merges.size() && dend.merges[applied].height.to_double() <= d)
        ++applied;
    return cluster_detail::collect(dend, applied);
}

/// Apply the first n-k merges, yielding exactly k clusters.
inline ClusterCut cut_at_count(const Dendrogram& dend, int k) {
    std::size_t n = dend.leaves.size();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw error("cluster count " + std::to_string(k) + " out of range [1, " +
                    std::to_string(n) + "]");
    return cluster_detail::collect(dend, n - static_cast<std::size_t>(k));
}

inline std::string format_height(const Rational& h) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", h.to_double());
    return buf;
}

/// One merge per line: `<new-id> <left> <right> <height>`. Leaf ids map
/// to query ids in a header comment.
inline std::string dendrogram_text(const Dendrogram& dend) {
    std::string out;
    for (std::size_t i = 0; i < dend.leaves.size(); ++i)
        out += "# leaf " + std::to_string(i) + " = " + dend.leaves[i] + "\n";
    for (const auto& mg : dend.merges)
        out += std::to_string(mg.id) + " " + std::to_string(mg.left) + " " +
               std::to_string(mg.right) + " " + format_height(mg.height) + "\n";
    return out;
}

inline std::string dendrogram_dot(const Dendrogram& dend) {
    std::string out = "digraph dendrogram {\n  rankdir=BT;\n";
    for (std::size_t i = 0; i < dend.leaves.size(); ++i)
        out += "  n" + std::to_string(i) + " [label=\"" + dend.leaves[i] +
               "\" shape=box];\n";
    for (const auto& mg : dend.merges) {
        out += "  n" + std::to_string(mg.id) + " [label=\"" + mg.height.str() + "\"];\n";
        out += "  n" + std::to_string(mg.left) + " -> n" + std::to_string(mg.id) + ";\n";
        out += "  n" + std::to_string(mg.right) + " -> n" + std::to_string(mg.id) + ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace kgshard

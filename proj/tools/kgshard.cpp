// Command-line front end for the partitioning pipeline. Every
// subcommand works out of one directory (--out) with fixed file names,
// so a full experiment is: generate, analyze, partition, run, compare.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kgshard/kgshard.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw kgshard::error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw kgshard::error("cannot write " + path);
    out << content;
}

struct Common {
    std::string out = ".";
    std::string config_path;
    std::optional<long> k;
    std::optional<std::string> linkage;
    std::optional<double> cut_distance;
    std::optional<long> seed;

    kgshard::Config config() const {
        if (config_path.empty()) return kgshard::Config::parse("");
        return kgshard::Config::parse(read_file(config_path));
    }
    std::string path(const std::string& name) const { return out + "/" + name; }
};

void add_common(CLI::App* cmd, Common& c, bool with_cut = false) {
    cmd->add_option("--out", c.out, "working directory for inputs/outputs");
    cmd->add_option("--config", c.config_path, "key = value config file");
    cmd->add_option("--k", c.k, "number of shards / clusters");
    cmd->add_option("--linkage", c.linkage, "single, complete or average");
    cmd->add_option("--seed", c.seed, "RNG seed");
    if (with_cut)
        cmd->add_option("--cut-distance", c.cut_distance,
                        "cut the dendrogram at this distance instead of at k clusters");
}

long opt_int(const std::optional<long>& flag, const kgshard::Config& cfg,
             const char* key, long dflt) {
    if (flag) return *flag;
    return cfg.get_int(key, dflt);
}

kgshard::Linkage pick_linkage(const Common& c, const kgshard::Config& cfg) {
    std::string name = c.linkage ? *c.linkage : cfg.get_string("linkage", "single");
    return kgshard::parse_linkage(name);
}

kgshard::CostModel cost_model(const kgshard::Config& cfg) {
    kgshard::CostModel cm;
    cm.call_latency = cfg.get_double("call_latency", cm.call_latency);
    cm.per_row_cost = cfg.get_double("per_row_cost", cm.per_row_cost);
    cm.local_match_cost = cfg.get_double("local_match_cost", cm.local_match_cost);
    cm.validate();
    return cm;
}

kgshard::ScoreWeights weights(const kgshard::Config& cfg) {
    kgshard::ScoreWeights w;
    w.w1 = cfg.get_double("w1", 1.0);
    w.w2 = cfg.get_double("w2", 1.0);
    w.w3 = cfg.get_double("w3", 1.0);
    w.w4 = cfg.get_double("w4", 1.0);
    w.w5 = cfg.get_double("w5", 1.0);
    w.w6 = cfg.get_double("w6", 1.0);
    w.w7 = cfg.get_double("w7", 1.0);
    return w;
}

struct LoadedBench {
    kgshard::KnowledgeGraph graph;
    std::vector<kgshard::Query> workload;
    kgshard::FeatureCatalog catalog;
};

LoadedBench load_bench(const Common& c) {
    LoadedBench b;
    b.graph = kgshard::parse_ntriples(read_file(c.path("dataset.nt")));
    b.workload = kgshard::parse_workload(read_file(c.path("workload.rq")));
    std::vector<kgshard::QueryFeatures> wf;
    for (const auto& q : b.workload) wf.push_back(kgshard::extract_query_features(q));
    b.catalog = kgshard::extract_dataset_features(b.graph, wf);
    return b;
}

std::string balance_text(const kgshard::BalanceReport& rep) {
    char buf[160];
    std::string out = "balance:\n";
    std::snprintf(buf, sizeof buf, "  total %zu triples, target %.1f per shard\n",
                  rep.total, rep.target);
    out += buf;
    for (std::size_t i = 0; i < rep.sizes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "  shard %zu: %zu triples (%+.2f%%)\n", i,
                      rep.sizes[i], rep.deviation[i] * 100.0);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "  %s epsilon %.2f\n",
                  rep.within_epsilon ? "within" : "OUTSIDE", rep.epsilon);
    out += buf;
    return out;
}

kgshard::BalanceReport recount_balance(const kgshard::Partitioning& p, double epsilon) {
    kgshard::BalanceReport rep;
    rep.epsilon = epsilon;
    rep.sizes = p.sizes();
    for (std::size_t s : rep.sizes) rep.total += s;
    rep.target = p.k > 0 ? static_cast<double>(rep.total) / p.k : 0.0;
    rep.within_epsilon = true;
    for (std::size_t s : rep.sizes) {
        double dev =
            rep.target > 0 ? (static_cast<double>(s) - rep.target) / rep.target : 0.0;
        rep.deviation.push_back(dev);
        if (dev < -epsilon || dev > epsilon) rep.within_epsilon = false;
    }
    return rep;
}

int cmd_generate(const Common& c, long universities_flag) {
    auto cfg = c.config();
    kgshard::GeneratorSpec spec;
    spec.seed = static_cast<std::uint64_t>(opt_int(c.seed, cfg, "seed", 1));
    spec.universities =
        static_cast<int>(universities_flag > 0 ? universities_flag
                                               : cfg.get_int("universities", 5));
    kgshard::GeneratedBench bench = kgshard::generate(spec);
    write_file(c.path("dataset.nt"), bench.dataset_ntriples);
    write_file(c.path("workload.rq"), bench.workload_text);
    kgshard::KnowledgeGraph g = kgshard::parse_ntriples(bench.dataset_ntriples);
    std::cout << "wrote " << c.path("dataset.nt") << " (" << g.size() << " triples) and "
              << c.path("workload.rq") << "\n";
    return 0;
}

int cmd_analyze(const Common& c) {
    auto cfg = c.config();
    std::vector<kgshard::Query> workload =
        kgshard::parse_workload(read_file(c.path("workload.rq")));
    std::vector<kgshard::QueryFeatures> wf;
    for (const auto& q : workload) wf.push_back(kgshard::extract_query_features(q));
    kgshard::DistanceMatrix m = kgshard::build_distance_matrix(wf);
    kgshard::Dendrogram dend = kgshard::hac(m, pick_linkage(c, cfg));
    write_file(c.path("matrix.json"), kgshard::matrix_to_json(m).dump(2) + "\n");
    write_file(c.path("dendrogram.txt"), kgshard::dendrogram_text(dend));
    write_file(c.path("dendrogram.dot"), kgshard::dendrogram_dot(dend));
    std::cout << "wrote " << c.path("matrix.json") << ", " << c.path("dendrogram.txt")
              << " and " << c.path("dendrogram.dot") << "\n";
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (m.at(i, j) < kgshard::Rational(1))
                std::printf("d(%s, %s) = %s = %.4f\n", m.ids[i].c_str(), m.ids[j].c_str(),
                            m.at(i, j).str().c_str(), m.at(i, j).to_double());
    return 0;
}

int cmd_partition(const Common& c, const std::string& strategy) {
    auto cfg = c.config();
    LoadedBench b = load_bench(c);
    int k = static_cast<int>(opt_int(c.k, cfg, "k", 3));
    double epsilon = cfg.get_double("epsilon", 0.15);

    kgshard::Partitioning part;
    if (strategy == "wawpart") {
        kgshard::PartitionConfig pc;
        pc.k = k;
        pc.linkage = pick_linkage(c, cfg);
        pc.weights = weights(cfg);
        pc.epsilon = epsilon;
        if (c.cut_distance)
            pc.cut_distance = *c.cut_distance;
        else if (cfg.has("cut_distance"))
            pc.cut_distance = cfg.get_double("cut_distance", 0.0);
        kgshard::WawResult res = kgshard::wawpart_partition(b.graph, b.catalog, pc);
        part = std::move(res.partitioning);
        for (const auto& rep : res.replicated)
            std::cout << "replicated " << rep.feature.key() << " -> shard "
                      << part.feature_home.at(rep.feature) << "\n";
        std::cout << balance_text(res.report);
    } else if (strategy == "random") {
        kgshard::BaselineSpec spec;
        spec.seed = static_cast<std::uint64_t>(opt_int(c.seed, cfg, "seed", 1));
        spec.k = k;
        part = kgshard::random_partition(b.graph, spec);
        std::cout << balance_text(recount_balance(part, epsilon));
    } else {
        throw kgshard::error("unknown strategy: " + strategy +
                             " (expected wawpart or random)");
    }

    nlohmann::json meta = kgshard::emit_metadata(part);
    meta["strategy"] = strategy;
    write_file(c.path("partition.json"), meta.dump(2) + "\n");
    for (int i = 0; i < part.k; ++i) {
        kgshard::KnowledgeGraph shard;
        for (kgshard::TripleId id : part.shards[i]) shard.insert(b.graph.triple(id));
        write_file(c.path("shard-" + std::to_string(i) + ".nt"),
                   kgshard::serialize_ntriples(shard));
    }
    std::cout << "wrote " << c.path("partition.json") << " and " << part.k
              << " shard files\n";
    return 0;
}

int cmd_rewrite(const Common& c) {
    auto cfg = c.config();
    std::vector<kgshard::Query> workload =
        kgshard::parse_workload(read_file(c.path("workload.rq")));
    kgshard::Partitioning meta =
        kgshard::load_metadata(nlohmann::json::parse(read_file(c.path("partition.json"))));
    std::map<kgshard::ShardId, std::string> endpoints = cfg.endpoints();
    for (int i = 0; i < meta.k; ++i)
        endpoints.emplace(i, "http://shard-" + std::to_string(i) + ".example.org/sparql");
    for (const auto& q : workload) {
        kgshard::FederatedPlan plan = kgshard::rewrite(q, meta);
        std::cout << "# " << q.id << (plan.rewritten ? " (rewritten)" : " (single shard)")
                  << ", distributed joins: " << plan.distributed_joins << "\n"
                  << kgshard::serialize_federated(plan.fq, endpoints) << "\n";
    }
    return 0;
}

int cmd_run(const Common& c) {
    auto cfg = c.config();
    std::vector<kgshard::Query> workload =
        kgshard::parse_workload(read_file(c.path("workload.rq")));
    kgshard::Partitioning meta =
        kgshard::load_metadata(nlohmann::json::parse(read_file(c.path("partition.json"))));
    std::vector<kgshard::KnowledgeGraph> graphs(meta.k);
    kgshard::ShardMap shards;
    for (int i = 0; i < meta.k; ++i) {
        graphs[i] = kgshard::parse_ntriples(read_file(c.path("shard-" + std::to_string(i) + ".nt")));
        meta.shards[i].clear();
        for (std::size_t t = 0; t < graphs[i].size(); ++t)
            meta.shards[i].push_back(static_cast<kgshard::TripleId>(t));
        shards[i] = &graphs[i];
    }
    kgshard::WorkloadReport rep =
        kgshard::run_workload(workload, meta, shards, cost_model(cfg));
    write_file(c.path("report.json"), kgshard::report_to_json(rep).dump(2) + "\n");
    std::cout << kgshard::report_text(rep);
    std::cout << balance_text(recount_balance(meta, cfg.get_double("epsilon", 0.15)));
    std::cout << "wrote " << c.path("report.json") << "\n";
    return rep.failed == 0 ? 0 : 1;
}

int cmd_compare(const Common& c) {
    auto cfg = c.config();
    LoadedBench b = load_bench(c);
    int k = static_cast<int>(opt_int(c.k, cfg, "k", 3));
    kgshard::CostModel cm = cost_model(cfg);

    kgshard::PartitionConfig pc;
    pc.k = k;
    pc.linkage = pick_linkage(c, cfg);
    pc.weights = weights(cfg);
    pc.epsilon = cfg.get_double("epsilon", 0.15);
    kgshard::WawResult waw = kgshard::wawpart_partition(b.graph, b.catalog, pc);

    kgshard::BaselineSpec spec;
    spec.seed = static_cast<std::uint64_t>(opt_int(c.seed, cfg, "seed", 1));
    spec.k = k;
    kgshard::Partitioning rnd = kgshard::random_partition(b.graph, spec);

    auto run_one = [&](const kgshard::Partitioning& part) {
        std::vector<kgshard::KnowledgeGraph> graphs(part.k);
        kgshard::ShardMap shards;
        for (int i = 0; i < part.k; ++i) {
            for (kgshard::TripleId id : part.shards[i]) graphs[i].insert(b.graph.triple(id));
            shards[i] = &graphs[i];
        }
        return kgshard::run_workload(b.workload, part, shards, cm);
    };
    kgshard::WorkloadReport waw_rep = run_one(waw.partitioning);
    kgshard::WorkloadReport rnd_rep = run_one(rnd);

    std::printf("%-10s %12s %12s %14s %12s\n", "strategy", "dist-joins", "calls",
                "rows-shipped", "sim-ms");
    auto row = [](const char* name, const kgshard::WorkloadReport& rep) {
        std::printf("%-10s %12d %12d %14lld %12.2f\n", name, rep.totals.distributed_joins,
                    rep.totals.remote_calls,
                    static_cast<long long>(rep.totals.rows_shipped),
                    rep.totals.simulated_time);
    };
    row("wawpart", waw_rep);
    row("random", rnd_rep);
    bool dominates = waw_rep.totals.distributed_joins < rnd_rep.totals.distributed_joins &&
                     waw_rep.totals.simulated_time < rnd_rep.totals.simulated_time;
    std::printf("wawpart %s\n", dominates ? "dominates" : "does NOT dominate");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workload-aware knowledge graph partitioning"};
    app.require_subcommand(1);

    Common c;
    long universities = 0;
    std::string strategy = "wawpart";

    CLI::App* generate = app.add_subcommand("generate", "emit dataset.nt and workload.rq");
    add_common(generate, c);
    generate->add_option("--universities", universities, "scale factor (default 5)");

    CLI::App* analyze =
        app.add_subcommand("analyze", "emit matrix.json and dendrogram.txt/.dot");
    add_common(analyze, c);

    CLI::App* partition =
        app.add_subcommand("partition", "emit partition.json and shard-<i>.nt");
    add_common(partition, c, true);
    partition->add_option("--strategy", strategy, "wawpart or random");

    CLI::App* rewrite = app.add_subcommand("rewrite", "print federated SPARQL per query");
    add_common(rewrite, c);

    CLI::App* run = app.add_subcommand("run", "execute the workload against the shards");
    add_common(run, c);

    CLI::App* compare = app.add_subcommand("compare", "run both strategies side by side");
    add_common(compare, c);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(c, universities);
        if (analyze->parsed()) return cmd_analyze(c);
        if (partition->parsed()) return cmd_partition(c, strategy);
        if (rewrite->parsed()) return cmd_rewrite(c);
        if (run->parsed()) return cmd_run(c);
        if (compare->parsed()) return cmd_compare(c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

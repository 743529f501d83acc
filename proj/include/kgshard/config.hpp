#pragma once

#include <cstdlib>
#include <map>
#include <set>
#include <string>

#include "kgshard/error.hpp"
#include "kgshard/query.hpp"

namespace kgshard {

/// Flat `key = value` configuration. Unknown keys are rejected so a
/// typo like `w8 = 2` fails loudly instead of silently dropping a
/// weight. `endpoint.<shard-id>` keys carry the federation labels.
class Config {
  public:
    static const std::set<std::string>& known_keys() {
        static const std::set<std::string> keys{
            "k",  "linkage", "cut_distance", "epsilon",      "seed",
            "strategy",     "universities", "call_latency", "per_row_cost",
            "local_match_cost", "w1", "w2", "w3", "w4", "w5", "w6", "w7"};
        return keys;
    }

    static Config parse(const std::string& text) {
        Config cfg;
        std::size_t lineno = 0, pos = 0;
        while (pos <= text.size()) {
            std::size_t eol = text.find('\n', pos);
            if (eol == std::string::npos) eol = text.size();
            std::string line = text.substr(pos, eol - pos);
            pos = eol + 1;
            ++lineno;
            std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw parse_error(lineno, "expected key = value");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw parse_error(lineno, "empty config key");
            if (!known_keys().count(key) && key.rfind("endpoint.", 0) != 0)
                throw parse_error(lineno, "unknown config key: " + key);
            if (!cfg.values_.emplace(key, value).second)
                throw parse_error(lineno, "duplicate config key: " + key);
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& dflt) const {
        auto it = values_.find(key);
        return it == values_.end() ? dflt : it->second;
    }

    long get_int(const std::string& key, long dflt) const {
        auto it = values_.find(key);
        if (it == values_.end()) return dflt;
        char* end = nullptr;
        long v = std::strtol(it->second.c_str(), &end, 10);
        if (end == it->second.c_str() || *end != '\0')
            throw error("config key " + key + " is not an integer: " + it->second);
        return v;
    }

    double get_double(const std::string& key, double dflt) const {
        auto it = values_.find(key);
        if (it == values_.end()) return dflt;
        char* end = nullptr;
        double v = std::strtod(it->second.c_str(), &end);
        if (end == it->second.c_str() || *end != '\0')
            throw error("config key " + key + " is not a number: " + it->second);
        return v;
    }

    /// endpoint.<shard-id> = <iri> entries.
    std::map<ShardId, std::string> endpoints() const {
        std::map<ShardId, std::string> out;
        for (const auto& [key, value] : values_) {
            if (key.rfind("endpoint.", 0) != 0) continue;
            std::string idx = key.substr(9);
            char* end = nullptr;
            long shard = std::strtol(idx.c_str(), &end, 10);
            if (idx.empty() || end == idx.c_str() || *end != '\0' || shard < 0)
                throw error("bad endpoint key: " + key);
            out[static_cast<ShardId>(shard)] = value;
        }
        return out;
    }

    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    static std::string trim(const std::string& s) {
        std::size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        std::size_t e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> values_;
};

}  // namespace kgshard

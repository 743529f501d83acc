#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgshard/error.hpp"

namespace kgshard {

using TripleId = std::uint32_t;

enum class TermKind : std::uint8_t { Iri, Literal };

/// An RDF term. IRIs hold the bare IRI string (no angle brackets);
/// literals hold the full token as written, quotes and any language
/// or datatype suffix included. Equality is kind + byte equality.
struct Term {
    TermKind kind = TermKind::Iri;
    std::string lexical;

    static Term iri(std::string s) { return Term{TermKind::Iri, std::move(s)}; }
    static Term literal(std::string s) { return Term{TermKind::Literal, std::move(s)}; }

    bool is_iri() const { return kind == TermKind::Iri; }

    friend bool operator==(const Term& a, const Term& b) {
        return a.kind == b.kind && a.lexical == b.lexical;
    }
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    friend bool operator<(const Term& a, const Term& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.lexical < b.lexical;
    }

    /// N-Triples token form: <iri> or the literal verbatim.
    std::string token() const {
        return kind == TermKind::Iri ? "<" + lexical + ">" : lexical;
    }
};

struct TermHash {
    std::size_t operator()(const Term& t) const {
        std::size_t h = std::hash<std::string_view>()(t.lexical);
        return h ^ (static_cast<std::size_t>(t.kind) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};

struct Triple {
    Term s, p, o;

    friend bool operator==(const Triple& a, const Triple& b) {
        return a.s == b.s && a.p == b.p && a.o == b.o;
    }
};

struct TripleHash {
    std::size_t operator()(const Triple& t) const {
        TermHash th;
        std::size_t h = th(t.s);
        h = h * 1099511628211ULL ^ th(t.p);
        h = h * 1099511628211ULL ^ th(t.o);
        return h;
    }
};

using TermPair = std::pair<Term, Term>;

struct TermPairHash {
    std::size_t operator()(const TermPair& pr) const {
        TermHash th;
        return th(pr.first) * 1099511628211ULL ^ th(pr.second);
    }
};

/// Immutable, fully indexed triple store. Triple ids are dense and
/// assigned in first-occurrence order; duplicate inserts are ignored.
class KnowledgeGraph {
public:
    using IdList = std::vector<TripleId>;

    /// Returns false when the triple was already present.
    bool insert(Triple t) {
        if (!t.s.is_iri()) throw error("triple subject must be an IRI");
        if (!t.p.is_iri()) throw error("triple predicate must be an IRI");
        auto [it, fresh] = seen_.emplace(t, static_cast<TripleId>(triples_.size()));
        if (!fresh) return false;
        TripleId id = it->second;
        index_p_[t.p].push_back(id);
        index_po_[{t.p, t.o}].push_back(id);
        index_s_[t.s].push_back(id);
        index_o_[t.o].push_back(id);
        triples_.push_back(std::move(t));
        return true;
    }

    std::size_t size() const { return triples_.size(); }
    const std::vector<Triple>& triples() const { return triples_; }
    const Triple& triple(TripleId id) const { return triples_.at(id); }

    bool contains(const Triple& t) const { return seen_.count(t) != 0; }

    /// Ids of triples with the given predicate, ascending. Empty if absent.
    const IdList& lookup_p(const Term& p) const { return find(index_p_, p); }

    /// Ids of triples with the given predicate and object; always a
    /// subset of lookup_p(p).
    const IdList& lookup_po(const Term& p, const Term& o) const {
        return find(index_po_, TermPair{p, o});
    }

    const IdList& lookup_s(const Term& s) const { return find(index_s_, s); }
    const IdList& lookup_o(const Term& o) const { return find(index_o_, o); }

    /// Distinct predicates in first-occurrence order.
    std::vector<Term> predicates() const {
        std::vector<Term> out;
        std::unordered_map<Term, bool, TermHash> seen;
        for (const auto& t : triples_)
            if (seen.emplace(t.p, true).second) out.push_back(t.p);
        return out;
    }

private:
    template <typename Map, typename Key>
    const IdList& find(const Map& m, const Key& k) const {
        static const IdList empty;
        auto it = m.find(k);
        return it == m.end() ? empty : it->second;
    }

    std::vector<Triple> triples_;
    std::unordered_map<Triple, TripleId, TripleHash> seen_;
    std::unordered_map<Term, IdList, TermHash> index_p_;
    std::unordered_map<TermPair, IdList, TermPairHash> index_po_;
    std::unordered_map<Term, IdList, TermHash> index_s_;
    std::unordered_map<Term, IdList, TermHash> index_o_;
};

namespace ntriples_detail {

inline void skip_ws(const std::string& line, std::size_t& pos) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
}

inline Term parse_iri(const std::string& line, std::size_t& pos, std::size_t lineno) {
    if (pos >= line.size() || line[pos] != '<')
        throw parse_error(lineno, "expected '<'");
    std::size_t end = line.find('>', pos + 1);
    if (end == std::string::npos) throw parse_error(lineno, "unterminated IRI");
    std::string iri = line.substr(pos + 1, end - pos - 1);
    if (iri.empty()) throw parse_error(lineno, "empty IRI");
    for (char c : iri)
        if (c == ' ' || c == '\t' || c == '<')
            throw parse_error(lineno, "invalid character in IRI <" + iri + ">");
    pos = end + 1;
    return Term::iri(std::move(iri));
}

inline Term parse_literal(const std::string& line, std::size_t& pos, std::size_t lineno) {
    std::size_t start = pos;
    ++pos;  // opening quote
    while (pos < line.size() && line[pos] != '"') {
        if (line[pos] == '\\') ++pos;
        ++pos;
    }
    if (pos >= line.size()) throw parse_error(lineno, "unterminated literal");
    ++pos;  // closing quote
    if (pos < line.size() && line[pos] == '@') {
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '.') ++pos;
    } else if (pos + 1 < line.size() && line[pos] == '^' && line[pos + 1] == '^') {
        pos += 2;
        parse_iri(line, pos, lineno);
    }
    return Term::literal(line.substr(start, pos - start));
}

inline Term parse_term(const std::string& line, std::size_t& pos, std::size_t lineno,
                       bool allow_literal) {
    skip_ws(line, pos);
    if (pos >= line.size()) throw parse_error(lineno, "unexpected end of triple");
    char c = line[pos];
    if (c == '_')
        throw parse_error(lineno, "blank nodes are not supported");
    if (c == '<') return parse_iri(line, pos, lineno);
    if (c == '"') {
        if (!allow_literal) throw parse_error(lineno, "literal not allowed here");
        return parse_literal(line, pos, lineno);
    }
    throw parse_error(lineno, std::string("unexpected character '") + c + "'");
}

}  // namespace ntriples_detail

/// Parse N-Triples text (IRIs, plain/typed/lang literals, '#' comments).
/// Duplicate triples are dropped; ids follow first occurrence. Blank
/// nodes are an error.
inline KnowledgeGraph parse_ntriples(std::istream& in) {
    using namespace ntriples_detail;
    KnowledgeGraph g;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t pos = 0;
        skip_ws(line, pos);
        if (pos >= line.size() || line[pos] == '#') continue;
        Triple t;
        t.s = parse_term(line, pos, lineno, false);
        t.p = parse_term(line, pos, lineno, false);
        t.o = parse_term(line, pos, lineno, true);
        skip_ws(line, pos);
        if (pos >= line.size() || line[pos] != '.')
            throw parse_error(lineno, "expected '.' terminator");
        ++pos;
        skip_ws(line, pos);
        if (pos < line.size() && line[pos] != '#')
            throw parse_error(lineno, "trailing content after '.'");
        g.insert(std::move(t));
    }
    return g;
}

inline KnowledgeGraph parse_ntriples(const std::string& text) {
    std::istringstream in(text);
    return parse_ntriples(in);
}

/// Canonical serialization: one triple per line, first-occurrence order.
inline void serialize_ntriples(const KnowledgeGraph& g, std::ostream& out) {
    for (const auto& t : g.triples())
        out << t.s.token() << " " << t.p.token() << " " << t.o.token() << " .\n";
}

inline std::string serialize_ntriples(const KnowledgeGraph& g) {
    std::ostringstream out;
    serialize_ntriples(g, out);
    return out.str();
}

}  // namespace kgshard

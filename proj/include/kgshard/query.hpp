#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kgshard/error.hpp"
#include "kgshard/rdf.hpp"

namespace kgshard {

/// One position of a triple pattern: a named variable or a constant term.
struct PatternTerm {
    static PatternTerm var(std::string name) {
        PatternTerm t;
        t.var_name = std::move(name);
        return t;
    }
    static PatternTerm constant(Term term) {
        PatternTerm t;
        t.term = std::move(term);
        return t;
    }

    bool is_var() const { return !var_name.empty(); }
    bool is_const() const { return var_name.empty(); }

    std::string var_name;  // empty for constants
    Term term;             // meaningful for constants

    friend bool operator==(const PatternTerm& a, const PatternTerm& b) {
        if (a.is_var() != b.is_var()) return false;
        return a.is_var() ? a.var_name == b.var_name : a.term == b.term;
    }
    friend bool operator!=(const PatternTerm& a, const PatternTerm& b) { return !(a == b); }

    std::string token() const { return is_var() ? "?" + var_name : term.token(); }
};

struct TriplePattern {
    PatternTerm s, p, o;

    friend bool operator==(const TriplePattern& a, const TriplePattern& b) {
        return a.s == b.s && a.p == b.p && a.o == b.o;
    }
};

/// A SELECT query over one basic graph pattern.
struct Query {
    std::string id;
    std::vector<std::string> projected;
    std::vector<TriplePattern> patterns;

    std::vector<std::string> variables() const {
        std::vector<std::string> out;
        std::set<std::string> seen;
        auto add = [&](const PatternTerm& t) {
            if (t.is_var() && seen.insert(t.var_name).second) out.push_back(t.var_name);
        };
        for (const auto& tp : patterns) {
            add(tp.s);
            add(tp.p);
            add(tp.o);
        }
        return out;
    }
};

using ShardId = int;

/// A query split into per-shard pattern groups. The group whose shard
/// equals ppn runs locally; the rest become SERVICE blocks.
struct FederatedQuery {
    std::string base_query_id;
    std::vector<std::string> projected;
    ShardId ppn = 0;
    std::vector<std::pair<ShardId, std::vector<TriplePattern>>> groups;
};

// --- SPARQL subset parser ---------------------------------------------

namespace sparql_detail {

inline const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

struct Lexer {
    explicit Lexer(const std::string& text) : text_(text) {}

    // token kinds
    enum Kind { End, Word, Var, Iri, Literal, Punct };

    struct Token {
        Kind kind = End;
        std::string value;
        std::size_t line = 1;
    };

    Token next() {
        skip();
        Token tok;
        tok.line = line_;
        if (pos_ >= text_.size()) return tok;
        char c = text_[pos_];
        if (c == '?' || c == '$') {
            ++pos_;
            tok.kind = Var;
            tok.value = take_while([](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
            if (tok.value.empty()) throw parse_error(line_, "empty variable name");
            return tok;
        }
        if (c == '<') {
            std::size_t end = text_.find('>', pos_ + 1);
            if (end == std::string::npos) throw parse_error(line_, "unterminated IRI");
            tok.kind = Iri;
            tok.value = text_.substr(pos_ + 1, end - pos_ - 1);
            pos_ = end + 1;
            return tok;
        }
        if (c == '"') {
            std::size_t start = pos_;
            ++pos_;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\') ++pos_;
                ++pos_;
            }
            if (pos_ >= text_.size()) throw parse_error(line_, "unterminated literal");
            ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '@') {
                while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                               text_[pos_] == '@' || text_[pos_] == '-'))
                    ++pos_;
            } else if (pos_ + 1 < text_.size() && text_[pos_] == '^' && text_[pos_ + 1] == '^') {
                pos_ += 2;
                if (pos_ >= text_.size() || text_[pos_] != '<')
                    throw parse_error(line_, "expected IRI after '^^'");
                std::size_t end = text_.find('>', pos_);
                if (end == std::string::npos) throw parse_error(line_, "unterminated datatype IRI");
                pos_ = end + 1;
            }
            tok.kind = Literal;
            tok.value = text_.substr(start, pos_ - start);
            return tok;
        }
        if (c == '{' || c == '}' || c == '.' || c == ';' || c == ',' || c == '*') {
            ++pos_;
            tok.kind = Punct;
            tok.value = std::string(1, c);
            return tok;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':') {
            tok.kind = Word;
            tok.value = take_while([](char ch) {
                return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == ':' ||
                       ch == '-' || ch == '.';
            });
            // a trailing '.' is the triple terminator, not part of the name
            while (!tok.value.empty() && tok.value.back() == '.') {
                tok.value.pop_back();
                --pos_;
            }
            if (tok.value.empty()) throw parse_error(line_, "stray '.'");
            return tok;
        }
        throw parse_error(line_, std::string("unexpected character '") + c + "'");
    }

    Token peek() {
        std::size_t save_pos = pos_;
        std::size_t save_line = line_;
        Token t = next();
        pos_ = save_pos;
        line_ = save_line;
        return t;
    }

private:
    template <typename Pred>
    std::string take_while(Pred pred) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && pred(text_[pos_])) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

inline bool iequals(const std::string& a, const char* b) {
    std::size_t n = 0;
    for (; b[n]; ++n) {
        if (n >= a.size()) return false;
        if (std::toupper(static_cast<unsigned char>(a[n])) != std::toupper(static_cast<unsigned char>(b[n])))
            return false;
    }
    return n == a.size();
}

inline const std::set<std::string>& unsupported_keywords() {
    static const std::set<std::string> kw = {
        "OPTIONAL", "FILTER", "UNION", "ORDER",  "LIMIT",    "OFFSET", "GROUP",
        "HAVING",   "ASK",    "CONSTRUCT", "DESCRIBE", "INSERT", "DELETE",
        "DISTINCT", "REDUCED", "BIND",  "VALUES", "MINUS",    "GRAPH"};
    return kw;
}

inline void reject_unsupported(const Lexer::Token& tok) {
    if (tok.kind != Lexer::Word) return;
    std::string upper;
    for (char c : tok.value) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (unsupported_keywords().count(upper))
        throw parse_error(tok.line, "unsupported keyword " + upper);
}

struct Parser {
    explicit Parser(const std::string& text) : lex_(text) {}

    // Shared front half: prefixes, SELECT list, optional FROM, '{'.
    void parse_header(Query& q) {
        Lexer::Token tok = lex_.next();
        while (tok.kind == Lexer::Word && iequals(tok.value, "PREFIX")) {
            Lexer::Token name = lex_.next();
            if (name.kind != Lexer::Word || name.value.find(':') == std::string::npos)
                throw parse_error(name.line, "expected prefix name ending in ':'");
            std::string pfx = name.value.substr(0, name.value.find(':'));
            Lexer::Token iri = lex_.next();
            if (iri.kind != Lexer::Iri) throw parse_error(iri.line, "expected IRI in PREFIX");
            prefixes_[pfx] = iri.value;
            tok = lex_.next();
        }
        reject_unsupported(tok);
        if (tok.kind != Lexer::Word || !iequals(tok.value, "SELECT"))
            throw parse_error(tok.line, "expected SELECT");
        tok = lex_.next();
        bool star = false;
        while (tok.kind == Lexer::Var || (tok.kind == Lexer::Punct && tok.value == "*")) {
            if (tok.kind == Lexer::Var)
                q.projected.push_back(tok.value);
            else
                star = true;
            tok = lex_.next();
        }
        reject_unsupported(tok);
        if (!star && q.projected.empty())
            throw parse_error(tok.line, "expected projection variables after SELECT");
        if (tok.kind == Lexer::Word && iequals(tok.value, "FROM")) {
            Lexer::Token iri = lex_.next();
            if (iri.kind != Lexer::Iri) throw parse_error(iri.line, "expected IRI after FROM");
            tok = lex_.next();  // dataset clause parsed and ignored
        }
        reject_unsupported(tok);
        if (tok.kind != Lexer::Word || !iequals(tok.value, "WHERE"))
            throw parse_error(tok.line, "expected WHERE");
        tok = lex_.next();
        if (tok.kind != Lexer::Punct || tok.value != "{")
            throw parse_error(tok.line, "expected '{'");
        select_star_ = star;
    }

    std::vector<TriplePattern> parse_group(bool allow_service,
                                           std::vector<std::pair<std::string, std::vector<TriplePattern>>>* services) {
        std::vector<TriplePattern> patterns;
        for (;;) {
            Lexer::Token tok = lex_.peek();
            if (tok.kind == Lexer::Punct && tok.value == "}") {
                lex_.next();
                return patterns;
            }
            if (tok.kind == Lexer::End) throw parse_error(tok.line, "expected '}'");
            if (tok.kind == Lexer::Word && iequals(tok.value, "SERVICE")) {
                if (!allow_service) throw parse_error(tok.line, "nested SERVICE not supported");
                lex_.next();
                Lexer::Token ep = lex_.next();
                if (ep.kind != Lexer::Iri) throw parse_error(ep.line, "expected endpoint IRI after SERVICE");
                Lexer::Token brace = lex_.next();
                if (brace.kind != Lexer::Punct || brace.value != "{")
                    throw parse_error(brace.line, "expected '{' after SERVICE endpoint");
                auto inner = parse_group(false, nullptr);
                services->emplace_back(ep.value, std::move(inner));
                maybe_dot();
                continue;
            }
            reject_unsupported(tok);
            TriplePattern tp;
            tp.s = parse_term(false);
            tp.p = parse_term(false);
            tp.o = parse_term(true);
            if (tp.s.is_const() && !tp.s.term.is_iri())
                throw parse_error(tok.line, "subject must be a variable or IRI");
            if (tp.p.is_const() && !tp.p.term.is_iri())
                throw parse_error(tok.line, "predicate must be a variable or IRI");
            patterns.push_back(std::move(tp));
            maybe_dot();
        }
    }

    void finish(Query& q) const {
        if (q.patterns.empty()) throw error("query " + q.id + " has no triple patterns");
        auto vars = q.variables();
        if (select_star_) {
            q.projected = vars;
        } else {
            std::set<std::string> in_patterns(vars.begin(), vars.end());
            for (const auto& v : q.projected)
                if (!in_patterns.count(v))
                    throw error("projected variable ?" + v + " does not occur in any pattern");
        }
    }

    void expect_end() {
        Lexer::Token tok = lex_.next();
        if (tok.kind != Lexer::End) throw parse_error(tok.line, "trailing content after '}'");
    }

private:
    void maybe_dot() {
        Lexer::Token tok = lex_.peek();
        if (tok.kind == Lexer::Punct && tok.value == ".") lex_.next();
    }

    PatternTerm parse_term(bool allow_literal) {
        Lexer::Token tok = lex_.next();
        switch (tok.kind) {
            case Lexer::Var:
                return PatternTerm::var(tok.value);
            case Lexer::Iri:
                return PatternTerm::constant(Term::iri(tok.value));
            case Lexer::Literal:
                if (!allow_literal) throw parse_error(tok.line, "literal not allowed here");
                return PatternTerm::constant(Term::literal(tok.value));
            case Lexer::Word: {
                reject_unsupported(tok);
                if (tok.value == "a") return PatternTerm::constant(Term::iri(kRdfType));
                std::size_t colon = tok.value.find(':');
                if (colon == std::string::npos)
                    throw parse_error(tok.line, "unexpected token '" + tok.value + "'");
                std::string pfx = tok.value.substr(0, colon);
                auto it = prefixes_.find(pfx);
                if (it == prefixes_.end())
                    throw parse_error(tok.line, "undeclared prefix '" + pfx + ":'");
                return PatternTerm::constant(Term::iri(it->second + tok.value.substr(colon + 1)));
            }
            default:
                throw parse_error(tok.line, "expected variable, IRI, or literal");
        }
    }

    Lexer lex_;
    std::map<std::string, std::string> prefixes_;
    bool select_star_ = false;
};

}  // namespace sparql_detail

/// Parse one SELECT query over a basic graph pattern. Prefixes are
/// expanded, FROM is ignored, and anything beyond conjunctive patterns
/// is rejected naming the keyword.
inline Query parse_query(const std::string& text, std::string id = "Q") {
    sparql_detail::Parser p(text);
    Query q;
    q.id = std::move(id);
    p.parse_header(q);
    q.patterns = p.parse_group(false, nullptr);
    p.expect_end();
    p.finish(q);
    return q;
}

/// A federated query as parsed from text: local patterns plus SERVICE
/// blocks keyed by endpoint IRI, in source order.
struct ParsedFederated {
    std::vector<std::string> projected;
    std::vector<TriplePattern> local;
    std::vector<std::pair<std::string, std::vector<TriplePattern>>> services;
};

inline ParsedFederated parse_federated(const std::string& text) {
    sparql_detail::Parser p(text);
    Query q;
    q.id = "federated";
    p.parse_header(q);
    ParsedFederated out;
    out.local = p.parse_group(true, &out.services);
    p.expect_end();
    q.patterns = out.local;
    for (const auto& [ep, pats] : out.services)
        q.patterns.insert(q.patterns.end(), pats.begin(), pats.end());
    p.finish(q);
    out.projected = q.projected;
    return out;
}

/// Workload file: queries separated by a line containing only `---`,
/// each optionally preceded by `# id: <name>`. Default ids Q1, Q2, ...
/// in file order.
inline std::vector<Query> parse_workload(const std::string& text) {
    std::vector<Query> out;
    std::istringstream in(text);
    std::string line;
    std::string chunk;
    std::string pending_id;
    int counter = 0;

    auto flush = [&]() {
        bool blank = chunk.find_first_not_of(" \t\r\n") == std::string::npos;
        if (blank && pending_id.empty()) {
            chunk.clear();
            return;
        }
        ++counter;
        std::string id = pending_id.empty() ? "Q" + std::to_string(counter) : pending_id;
        out.push_back(parse_query(chunk, id));
        chunk.clear();
        pending_id.clear();
    };

    while (std::getline(in, line)) {
        std::string trimmed = line;
        if (!trimmed.empty() && trimmed.back() == '\r') trimmed.pop_back();
        std::size_t b = trimmed.find_first_not_of(" \t");
        std::size_t e = trimmed.find_last_not_of(" \t");
        trimmed = b == std::string::npos ? "" : trimmed.substr(b, e - b + 1);
        if (trimmed == "---") {
            flush();
            continue;
        }
        if (trimmed.rfind("# id:", 0) == 0) {
            pending_id = trimmed.substr(5);
            std::size_t nb = pending_id.find_first_not_of(" \t");
            pending_id = nb == std::string::npos ? "" : pending_id.substr(nb);
            continue;
        }
        chunk += line;
        chunk += '\n';
    }
    flush();

    std::set<std::string> ids;
    for (const auto& q : out)
        if (!ids.insert(q.id).second) throw error("duplicate query id " + q.id);
    return out;
}

namespace sparql_detail {

inline void emit_patterns(std::ostream& os, const std::vector<TriplePattern>& patterns,
                          const char* indent) {
    for (const auto& tp : patterns)
        os << indent << tp.s.token() << " " << tp.p.token() << " " << tp.o.token() << " .\n";
}

}  // namespace sparql_detail

/// Canonical text form; parse_query(serialize_query(q)) is structurally q.
inline std::string serialize_query(const Query& q) {
    std::ostringstream os;
    os << "SELECT";
    for (const auto& v : q.projected) os << " ?" << v;
    os << " WHERE {\n";
    sparql_detail::emit_patterns(os, q.patterns, "  ");
    os << "}\n";
    return os.str();
}

/// Federated SPARQL text: the ppn group inline, every other group as a
/// SERVICE block against its shard's endpoint, in group order.
inline std::string serialize_federated(const FederatedQuery& fq,
                                       const std::map<ShardId, std::string>& endpoints) {
    for (const auto& [shard, pats] : fq.groups) {
        (void)pats;
        if (shard != fq.ppn && !endpoints.count(shard))
            throw error("no endpoint for shard " + std::to_string(shard));
    }
    std::ostringstream os;
    os << "SELECT";
    for (const auto& v : fq.projected) os << " ?" << v;
    os << " WHERE {\n";
    for (const auto& [shard, pats] : fq.groups) {
        if (shard == fq.ppn) {
            sparql_detail::emit_patterns(os, pats, "  ");
        } else {
            os << "  SERVICE <" << endpoints.at(shard) << "> {\n";
            sparql_detail::emit_patterns(os, pats, "    ");
            os << "  }\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace kgshard

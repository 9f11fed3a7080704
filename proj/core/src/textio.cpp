#include "elprov/textio.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <map>
#include <optional>
#include <set>

namespace elprov {

namespace {

enum class Tok { Ident, Number, String, LParen, RParen, Comma, Dot, At, Le, Turnstile, Minus, Colon, Eq, End };

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view s, int first_line) {
    std::vector<Token> out;
    int line = first_line;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < s.size()) {
        char c = s[i];
        SourceSpan here{line, col};
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), here});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
            out.push_back({Tok::Number, std::string(s.substr(i, j - i)), here});
            advance(j - i);
            continue;
        }
        if (c == '"') {
            std::size_t j = i + 1;
            while (j < s.size() && s[j] != '"' && s[j] != '\n') ++j;
            if (j >= s.size() || s[j] != '"') throw SyntaxError(here, "unterminated quoted name");
            out.push_back({Tok::String, std::string(s.substr(i + 1, j - i - 1)), here});
            advance(j + 1 - i);
            continue;
        }
        if (c == '<' && i + 1 < s.size() && s[i + 1] == '=') {
            out.push_back({Tok::Le, "<=", here});
            advance(2);
            continue;
        }
        if (c == ':' && i + 1 < s.size() && s[i + 1] == '-') {
            out.push_back({Tok::Turnstile, ":-", here});
            advance(2);
            continue;
        }
        Tok k;
        switch (c) {
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case ',': k = Tok::Comma; break;
            case '.': k = Tok::Dot; break;
            case '@': k = Tok::At; break;
            case '-': k = Tok::Minus; break;
            case ':': k = Tok::Colon; break;
            case '=': k = Tok::Eq; break;
            default: throw SyntaxError(here, std::string("unexpected character '") + c + "'");
        }
        out.push_back({k, std::string(1, c), here});
        advance(1);
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

bool is_keyword(const std::string& s) {
    return s == "top" || s == "bot" || s == "exists" || s == "and";
}

// Concept expression before names are classified as roles or concepts.
struct Expr {
    enum class K { Top, Bot, Ident, Exists, And } k = K::Top;
    std::string name;    // Ident name or Exists role
    bool minus = false;  // Ident or Exists role carried `-`
    SourceSpan span;
    std::vector<Expr> kids;
};

class Cursor {
public:
    Cursor(std::vector<Token> toks, const ParseOptions& opts) : toks_(std::move(toks)), opts_(opts) {}

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_word(const char* w) const { return at(Tok::Ident) && peek().text == w; }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    Token expect(Tok k, const char* what) {
        if (!at(k)) {
            std::string got = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
            throw SyntaxError(peek().span, std::string("expected ") + what + ", found " + got);
        }
        return take();
    }

    Token name(const char* what) {
        Token t = expect(Tok::Ident, what);
        check_reserved(t);
        return t;
    }

    void check_reserved(const Token& t) const {
        if (!opts_.allow_reserved && !t.text.empty() && t.text[0] == '_')
            throw ReservedIdentifier(t.span, "identifier '" + t.text + "' uses the reserved '_' prefix");
    }

    Expr expr() {
        Expr first = unary();
        if (!at_word("and")) return first;
        Expr conj;
        conj.k = Expr::K::And;
        conj.span = first.span;
        conj.kids.push_back(std::move(first));
        while (at_word("and")) {
            take();
            conj.kids.push_back(unary());
        }
        return conj;
    }

    Expr unary() {
        Expr e;
        e.span = peek().span;
        if (at(Tok::LParen)) {
            take();
            e = expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        Token t = expect(Tok::Ident, "a concept");
        if (t.text == "top") {
            e.k = Expr::K::Top;
        } else if (t.text == "bot") {
            e.k = Expr::K::Bot;
        } else if (t.text == "exists") {
            e.k = Expr::K::Exists;
            Token r = name("a role name");
            if (is_keyword(r.text)) throw SyntaxError(r.span, "expected a role name, found '" + r.text + "'");
            e.name = r.text;
            if (at(Tok::Minus)) {
                take();
                e.minus = true;
            }
            Expr filler;
            filler.span = peek().span;
            if (at(Tok::Dot)) {
                take();
                filler = unary();
            }
            e.kids.push_back(std::move(filler));
        } else if (t.text == "and") {
            throw SyntaxError(t.span, "expected a concept, found 'and'");
        } else {
            check_reserved(t);
            e.k = Expr::K::Ident;
            e.name = t.text;
            if (at(Tok::Minus)) {
                take();
                e.minus = true;
            }
        }
        return e;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const ParseOptions& opts_;
};

struct RawLine {
    enum class K { ConceptAssert, RoleAssert, Inclusion } k = K::Inclusion;
    SourceSpan span;
    std::string pred, a, b;
    SourceSpan pred_span;
    Expr lhs, rhs;
    std::optional<Token> annotation;
};

RawLine parse_line(Cursor& c, bool want_annotation) {
    RawLine line;
    line.span = c.peek().span;
    if (c.at(Tok::Ident) && c.peek(1).kind == Tok::LParen && !is_keyword(c.peek().text)) {
        Token pred = c.name("a predicate");
        line.pred = pred.text;
        line.pred_span = pred.span;
        c.take();
        line.a = c.name("an individual").text;
        if (c.at(Tok::Comma)) {
            c.take();
            line.b = c.name("an individual").text;
            line.k = RawLine::K::RoleAssert;
        } else {
            line.k = RawLine::K::ConceptAssert;
        }
        c.expect(Tok::RParen, "')'");
    } else {
        line.lhs = c.expr();
        c.expect(Tok::Le, "'<='");
        line.rhs = c.expr();
    }
    if (want_annotation) {
        c.expect(Tok::At, "'@' and an annotation");
        if (c.at(Tok::Number)) {
            Token t = c.take();
            if (t.text != "1") throw SyntaxError(t.span, "annotation must be a variable or 1");
            line.annotation = t;
        } else {
            line.annotation = c.name("an annotation variable");
        }
    }
    c.expect(Tok::End, "end of line");
    return line;
}

// Name classification shared by a whole ontology text.
struct Names {
    std::set<std::string> roles;
    std::set<std::string> concepts;

    void scan_expr(const Expr& e) {
        switch (e.k) {
            case Expr::K::Ident:
                if (e.minus) roles.insert(e.name);
                break;
            case Expr::K::Exists:
                roles.insert(e.name);
                scan_filler(e.kids.front());
                break;
            case Expr::K::And:
                for (const auto& k : e.kids) scan_expr(k);
                break;
            default: break;
        }
    }

    // Names nested under an existential are concepts.
    void scan_filler(const Expr& e) {
        if (e.k == Expr::K::Ident && !e.minus) concepts.insert(e.name);
        else scan_expr(e);
        if (e.k == Expr::K::And)
            for (const auto& k : e.kids)
                if (k.k == Expr::K::Ident && !k.minus) concepts.insert(k.name);
    }
};

bool bare(const Expr& e) { return e.k == Expr::K::Ident; }

enum class LineKind { Gci, Ri, NegRi };

LineKind classify(const RawLine& l, Names& names) {
    auto is_role = [&](const Expr& e) { return e.minus || names.roles.count(e.name) > 0; };
    if (bare(l.lhs) && bare(l.rhs) && (is_role(l.lhs) || is_role(l.rhs))) return LineKind::Ri;
    if (l.lhs.k == Expr::K::And && l.lhs.kids.size() == 2 && bare(l.lhs.kids[0]) && bare(l.lhs.kids[1]) &&
        l.rhs.k == Expr::K::Bot && (is_role(l.lhs.kids[0]) || is_role(l.lhs.kids[1])))
        return LineKind::NegRi;
    return LineKind::Gci;
}

Role to_role(const Expr& e, const Names& names) {
    if (e.k != Expr::K::Ident) throw SyntaxError(e.span, "expected a role");
    if (names.concepts.count(e.name))
        throw SyntaxError(e.span, "'" + e.name + "' is used both as a concept and as a role");
    return {e.name, e.minus};
}

Concept to_concept(const Expr& e, const Names& names) {
    switch (e.k) {
        case Expr::K::Top: return Concept::top();
        case Expr::K::Bot: return Concept::bottom();
        case Expr::K::Ident:
            if (e.minus || names.roles.count(e.name))
                throw SyntaxError(e.span, "'" + e.name + "' is a role, expected a concept");
            return Concept::name(e.name);
        case Expr::K::Exists: {
            if (names.concepts.count(e.name))
                throw SyntaxError(e.span, "'" + e.name + "' is used both as a concept and as a role");
            return Concept::exists({e.name, e.minus}, to_concept(e.kids.front(), names));
        }
        case Expr::K::And: {
            std::vector<Concept> parts;
            for (const auto& k : e.kids) parts.push_back(to_concept(k, names));
            return Concept::conj(std::move(parts));
        }
    }
    return Concept::top();
}

bool contains_bottom(const Concept& c) { return !is_valid_lhs(c); }

Axiom build_axiom(const RawLine& l, LineKind kind, const Names& names, const ParseOptions& opts) {
    switch (l.k) {
        case RawLine::K::ConceptAssert:
            if (names.roles.count(l.pred))
                throw SyntaxError(l.pred_span, "'" + l.pred + "' is a role, expected a concept");
            return ConceptAssertion{Concept::name(l.pred), l.a};
        case RawLine::K::RoleAssert:
            if (names.concepts.count(l.pred))
                throw SyntaxError(l.pred_span, "'" + l.pred + "' is a concept, expected a role");
            return RoleAssertion{l.pred, l.a, l.b};
        case RawLine::K::Inclusion: break;
    }
    if (kind == LineKind::Ri) return RoleInclusion{to_role(l.lhs, names), to_role(l.rhs, names)};
    if (kind == LineKind::NegRi) return make_neg_ri(to_role(l.lhs.kids[0], names), to_role(l.lhs.kids[1], names));
    Concept lhs = to_concept(l.lhs, names);
    Concept rhs = to_concept(l.rhs, names);
    if (contains_bottom(lhs)) throw SyntaxError(l.lhs.span, "'bot' is not allowed on the left-hand side");
    if (rhs.is_top()) throw IllegalRightSide(l.rhs.span, "right-hand side 'top' is not allowed");
    if (!opts.allow_rich_rhs && !is_valid_rhs(rhs))
        throw IllegalRightSide(l.rhs.span,
                               "right-hand side must be a concept name, 'exists P' or 'bot', found '" +
                                   rhs.str() + "'");
    return Gci{std::move(lhs), std::move(rhs)};
}

void scan_line(const RawLine& l, Names& names) {
    switch (l.k) {
        case RawLine::K::ConceptAssert: names.concepts.insert(l.pred); break;
        case RawLine::K::RoleAssert: names.roles.insert(l.pred); break;
        case RawLine::K::Inclusion:
            names.scan_expr(l.lhs);
            names.scan_expr(l.rhs);
            break;
    }
}

// RI lines make both sides roles; GCI lines make bare sides concepts.
void settle_line(const RawLine& l, Names& names) {
    if (l.k != RawLine::K::Inclusion) return;
    LineKind kind = classify(l, names);
    auto mark = [](const Expr& e, std::set<std::string>& into) {
        if (e.k == Expr::K::Ident) into.insert(e.name);
    };
    if (kind == LineKind::Ri) {
        mark(l.lhs, names.roles);
        mark(l.rhs, names.roles);
    } else if (kind == LineKind::NegRi) {
        mark(l.lhs.kids[0], names.roles);
        mark(l.lhs.kids[1], names.roles);
    } else {
        mark(l.lhs, names.concepts);
        mark(l.rhs, names.concepts);
        if (l.lhs.k == Expr::K::And)
            for (const auto& k : l.lhs.kids) mark(k, names.concepts);
    }
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

std::optional<Value> parse_value_token(std::string_view t) {
    if (t == "inf") return std::numeric_limits<Value>::infinity();
    if (t == "true") return 1.0;
    if (t == "false") return 0.0;
    if (t.size() == 1) {
        const char* levels = "PCST";
        for (int i = 0; i < 4; ++i)
            if (t[0] == levels[i]) return Value(i + 1);
    }
    Value v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

}  // namespace

AnnotatedOntology parse_ontology(std::string_view text, const ParseOptions& opts) {
    std::vector<RawLine> raw;
    int lineno = 0;
    for (std::string_view line : split_lines(text)) {
        ++lineno;
        auto toks = lex(line, lineno);
        if (toks.size() == 1) continue;  // blank or comment
        Cursor c(std::move(toks), opts);
        raw.push_back(parse_line(c, true));
    }
    Names names;
    for (const auto& l : raw) scan_line(l, names);
    // Roles spread along RI chains before any bare name falls back to concept.
    for (std::size_t before = 0; before != names.roles.size();) {
        before = names.roles.size();
        for (const auto& l : raw)
            if (l.k == RawLine::K::Inclusion && classify(l, names) != LineKind::Gci) settle_line(l, names);
    }
    for (const auto& l : raw) settle_line(l, names);

    AnnotatedOntology out;
    std::map<std::string, int> var_line;
    std::map<Axiom, int> axiom_line;
    for (const auto& l : raw) {
        Axiom ax = build_axiom(l, classify(l, names), names, opts);
        const Token& ann = *l.annotation;
        Monomial m;
        if (ann.kind == Tok::Ident) {
            auto [it, fresh] = var_line.emplace(ann.text, l.span.line);
            if (!fresh)
                throw DuplicateAnnotation(ann.span, "variable '" + ann.text + "' already annotates line " +
                                                        std::to_string(it->second));
            m = Monomial{ann.text};
        }
        auto [it, fresh] = axiom_line.emplace(ax, l.span.line);
        if (!fresh)
            throw DuplicateAnnotation(l.span, "axiom already annotated on line " + std::to_string(it->second));
        out.add(std::move(ax), std::move(m));
    }
    return out;
}

Axiom parse_axiom(std::string_view text, const Vocabulary& ctx, const ParseOptions& opts) {
    Cursor c(lex(text, 1), opts);
    RawLine l = parse_line(c, false);
    Names names;
    names.roles = ctx.roles;
    names.concepts = ctx.concepts;
    scan_line(l, names);
    settle_line(l, names);
    return build_axiom(l, classify(l, names), names, opts);
}

Concept parse_concept(std::string_view text, const ParseOptions& opts) {
    Cursor c(lex(text, 1), opts);
    Expr e = c.expr();
    c.expect(Tok::End, "end of input");
    Names names;
    names.scan_expr(e);
    return to_concept(e, names);
}

ConjunctiveQuery parse_query(std::string_view text, const Vocabulary* ctx) {
    ParseOptions opts;
    Cursor c(lex(text, 1), opts);
    c.name("a query name");
    c.expect(Tok::LParen, "'('");
    std::vector<Token> head;
    if (!c.at(Tok::RParen)) {
        head.push_back(c.name("an answer variable"));
        while (c.at(Tok::Comma)) {
            c.take();
            head.push_back(c.name("an answer variable"));
        }
    }
    c.expect(Tok::RParen, "')'");
    c.expect(Tok::Turnstile, "':-'");

    std::set<std::string> answer;
    for (const auto& h : head)
        if (!answer.insert(h.text).second) throw SyntaxError(h.span, "answer variable '" + h.text + "' repeated");

    auto term = [&]() -> Term {
        if (c.at(Tok::String)) return Term::ind(c.take().text);
        Token t = c.name("a term");
        if (t.text == "ind" && c.at(Tok::Colon)) {
            c.take();
            return Term::ind(c.name("an individual").text);
        }
        if (!answer.count(t.text) && ctx && ctx->individuals.count(t.text)) return Term::ind(t.text);
        return Term::var(t.text);
    };

    ConjunctiveQuery q;
    std::set<std::string> body_vars;
    while (true) {
        Token pred = c.name("an atom");
        if (c.at(Tok::Minus)) throw SyntaxError(c.peek().span, "inverse roles are not allowed in queries");
        c.expect(Tok::LParen, "'('");
        Term t1 = term();
        if (c.at(Tok::Comma)) {
            c.take();
            Term t2 = term();
            q.atoms.push_back(QueryAtom::role_atom({pred.text, false}, t1, t2));
            if (t2.is_var) body_vars.insert(t2.name);
        } else {
            q.atoms.push_back(QueryAtom::concept_atom(pred.text, t1));
        }
        if (t1.is_var) body_vars.insert(t1.name);
        c.expect(Tok::RParen, "')'");
        if (c.at(Tok::Comma)) {
            c.take();
            if (c.at(Tok::Dot) || c.at(Tok::End)) break;
            continue;
        }
        break;
    }
    if (c.at(Tok::Dot)) c.take();
    c.expect(Tok::End, "end of query");
    for (const auto& h : head) {
        if (!body_vars.count(h.text))
            throw UnsafeQuery(h.span, "answer variable '" + h.text + "' does not occur in the body");
        q.head.push_back(Term::var(h.text));
    }
    q.normalize_atoms();
    return q;
}

Valuation parse_valuation(std::string_view text) {
    Valuation out;
    std::map<std::string, int> seen;
    int lineno = 0;
    for (std::string_view line : split_lines(text)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        auto toks = lex(line, lineno);
        if (toks.size() == 1) continue;
        ParseOptions opts;
        Cursor c(toks, opts);
        Token var = c.expect(Tok::Ident, "a variable");
        c.expect(Tok::Eq, "'='");
        // Re-read the value from raw text so that decimals like 1e-3 survive.
        std::size_t eq = line.find('=');
        std::string_view raw = line.substr(eq + 1);
        while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.front()))) raw.remove_prefix(1);
        while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
        SourceSpan vspan{lineno, static_cast<int>(eq) + 2};
        auto v = parse_value_token(raw);
        if (raw.empty() || !v) throw SyntaxError(vspan, "expected a value, found '" + std::string(raw) + "'");
        auto [it, fresh] = seen.emplace(var.text, lineno);
        if (!fresh)
            throw DuplicateVariable(var.span, "variable '" + var.text + "' already assigned on line " +
                                                  std::to_string(it->second));
        out[var.text] = *v;
    }
    return out;
}

}  // namespace elprov

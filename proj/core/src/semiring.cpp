#include "elprov/semiring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "elprov/errors.hpp"

namespace elprov {

namespace {

constexpr Value kInf = std::numeric_limits<Value>::infinity();

std::optional<Value> parse_decimal(std::string_view tok) {
    if (tok == "inf") return kInf;
    Value out = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
    return out;
}

std::string format_decimal(Value v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

std::optional<Value> parse_unit_interval(std::string_view tok) {
    auto v = parse_decimal(tok);
    if (!v || *v < 0 || *v > 1) return std::nullopt;
    return v;
}

constexpr const char* kAccessNames = "PCST";

std::optional<Value> parse_access(std::string_view tok) {
    if (tok == "0") return kInf;
    if (tok.size() == 1) {
        for (int i = 0; i < 4; ++i)
            if (tok[0] == kAccessNames[i]) return Value(i + 1);
    }
    return std::nullopt;
}

std::string format_access(Value v) {
    if (std::isinf(v)) return "0";
    int i = static_cast<int>(v) - 1;
    if (i < 0 || i > 3) return format_decimal(v);
    return std::string(1, kAccessNames[i]);
}

Value max_op(Value a, Value b) { return std::max(a, b); }
Value min_op(Value a, Value b) { return std::min(a, b); }

}  // namespace

Monomial::Monomial(std::initializer_list<Variable> vars) : Monomial(std::vector<Variable>(vars)) {}

Monomial::Monomial(std::vector<Variable> vars) : vars_(std::move(vars)) {
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
}

bool Monomial::contains(const Variable& v) const {
    return std::binary_search(vars_.begin(), vars_.end(), v);
}

bool Monomial::subset_of(const Monomial& other) const {
    return std::includes(other.vars_.begin(), other.vars_.end(), vars_.begin(), vars_.end());
}

std::string Monomial::str() const {
    if (vars_.empty()) return "1";
    return fmt::format("{}", fmt::join(vars_, "*"));
}

Monomial mono_times(const Monomial& a, const Monomial& b) {
    std::vector<Variable> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.vars().begin(), a.vars().end(), b.vars().begin(), b.vars().end(),
                   std::back_inserter(out));
    return Monomial(std::move(out));
}

WhyPolynomial WhyPolynomial::one() { return of(Monomial{}); }

WhyPolynomial WhyPolynomial::top() {
    WhyPolynomial p;
    p.top_ = true;
    return p;
}

WhyPolynomial WhyPolynomial::of(Monomial m) {
    WhyPolynomial p;
    p.monos_.insert(std::move(m));
    return p;
}

WhyPolynomial WhyPolynomial::of(std::set<Monomial> ms) {
    WhyPolynomial p;
    p.monos_ = std::move(ms);
    return p;
}

void WhyPolynomial::add(Monomial m) {
    if (!top_) monos_.insert(std::move(m));
}

std::string WhyPolynomial::str() const {
    if (top_) return "TOP";
    if (monos_.empty()) return "0";
    std::string out;
    for (const auto& m : monos_) {
        if (!out.empty()) out += " + ";
        out += m.str();
    }
    return out;
}

WhyPolynomial poly_plus(const WhyPolynomial& a, const WhyPolynomial& b) {
    if (a.is_top() || b.is_top()) return WhyPolynomial::top();
    std::set<Monomial> ms = a.monomials();
    ms.insert(b.monomials().begin(), b.monomials().end());
    return WhyPolynomial::of(std::move(ms));
}

WhyPolynomial poly_times(const WhyPolynomial& a, const WhyPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return WhyPolynomial::zero();
    if (a.is_top() || b.is_top()) return WhyPolynomial::top();
    std::set<Monomial> ms;
    for (const auto& x : a.monomials())
        for (const auto& y : b.monomials()) ms.insert(mono_times(x, y));
    return WhyPolynomial::of(std::move(ms));
}

WhyPolynomial minimize(const WhyPolynomial& p) {
    if (p.is_top()) return p;
    std::vector<const Monomial*> by_size;
    for (const auto& m : p.monomials()) by_size.push_back(&m);
    std::stable_sort(by_size.begin(), by_size.end(),
                     [](const Monomial* a, const Monomial* b) { return a->size() < b->size(); });
    std::vector<const Monomial*> kept;
    for (const Monomial* m : by_size) {
        bool absorbed = std::any_of(kept.begin(), kept.end(),
                                    [&](const Monomial* k) { return k->subset_of(*m); });
        if (!absorbed) kept.push_back(m);
    }
    std::set<Monomial> out;
    for (const Monomial* m : kept) out.insert(*m);
    return WhyPolynomial::of(std::move(out));
}

std::string Lineage::str() const {
    switch (kind) {
        case Kind::Zero: return "0";
        case Kind::Top: return "TOP";
        case Kind::Vars: break;
    }
    return fmt::format("{{{}}}", fmt::join(vars, ", "));
}

Lineage flatten(const WhyPolynomial& p) {
    if (p.is_top()) return Lineage::top();
    if (p.is_zero()) return Lineage::zero();
    std::set<Variable> vars;
    for (const auto& m : p.monomials()) vars.insert(m.vars().begin(), m.vars().end());
    return Lineage::of(std::move(vars));
}

SemiringSpec builtin_semiring(std::string_view name) {
    SemiringSpec s;
    s.name = std::string(name);
    s.parse_value = parse_decimal;
    s.format_value = format_decimal;
    if (name == "fuzzy") {
        s.carrier = "[0,1]";
        s.plus = max_op;
        s.times = min_op;
        s.zero = 0;
        s.one = 1;
        s.flags = {true, true, true, true};
        s.sum_of_all = 1;
        s.parse_value = parse_unit_interval;
    } else if (name == "viterbi") {
        s.carrier = "[0,1]";
        s.plus = max_op;
        s.times = [](Value a, Value b) { return a * b; };
        s.zero = 0;
        s.one = 1;
        s.flags = {true, false, true, true};
        s.sum_of_all = 1;
        s.parse_value = parse_unit_interval;
    } else if (name == "tropical") {
        s.carrier = "R>=0 with inf";
        s.plus = min_op;
        s.times = [](Value a, Value b) { return a + b; };
        s.zero = kInf;
        s.one = 0;
        s.flags = {true, false, true, true};
        s.sum_of_all = 0;
        s.parse_value = [](std::string_view t) -> std::optional<Value> {
            auto v = parse_decimal(t);
            if (!v || *v < 0) return std::nullopt;
            return v;
        };
    } else if (name == "access") {
        s.carrier = "P < C < S < T < 0";
        s.plus = min_op;
        s.times = max_op;
        s.zero = kInf;
        s.one = 1;
        s.flags = {true, true, true, true};
        s.sum_of_all = 1;
        s.parse_value = parse_access;
        s.format_value = format_access;
    } else if (name == "boolean") {
        s.carrier = "{false, true}";
        s.plus = max_op;
        s.times = min_op;
        s.zero = 0;
        s.one = 1;
        s.flags = {true, true, true, true};
        s.sum_of_all = 1;
        s.parse_value = [](std::string_view t) -> std::optional<Value> {
            if (t == "true" || t == "1") return 1.0;
            if (t == "false" || t == "0") return 0.0;
            return std::nullopt;
        };
        s.format_value = [](Value v) { return std::string(v != 0 ? "true" : "false"); };
    } else {
        throw UnknownSemiring("unknown semiring '" + std::string(name) + "'");
    }
    return s;
}

Value evaluate_unchecked(const WhyPolynomial& p, const SemiringSpec& s, const Valuation& v) {
    if (p.is_top()) {
        if (!s.sum_of_all) throw TopUndefined("semiring '" + s.name + "' has no sum over its carrier");
        return *s.sum_of_all;
    }
    Value acc = s.zero;
    for (const auto& m : p.monomials()) {
        Value prod = s.one;
        for (const auto& x : m.vars()) {
            auto it = v.find(x);
            if (it == v.end()) throw MissingValuation("no value for variable '" + x + "'");
            prod = s.times(prod, it->second);
        }
        acc = s.plus(acc, prod);
    }
    return acc;
}

Value evaluate(const WhyPolynomial& p, const SemiringSpec& s, const Valuation& v) {
    if (!s.flags.plus_idempotent || !s.flags.times_idempotent)
        throw FlagViolation("semiring '" + s.name + "' is not both plus- and times-idempotent");
    return evaluate_unchecked(p, s, v);
}

}  // namespace elprov

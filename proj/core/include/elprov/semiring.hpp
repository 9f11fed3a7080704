#pragma once

#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace elprov {

using Variable = std::string;

// A set of variables; the empty set is the multiplicative unit.
class Monomial {
public:
    Monomial() = default;
    Monomial(std::initializer_list<Variable> vars);
    explicit Monomial(std::vector<Variable> vars);

    const std::vector<Variable>& vars() const { return vars_; }
    std::size_t size() const { return vars_.size(); }
    bool is_unit() const { return vars_.empty(); }
    bool contains(const Variable& v) const;
    bool subset_of(const Monomial& other) const;

    // Lex-sorted variables joined by `*`; the unit renders as `1`.
    std::string str() const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.vars_ <=> b.vars_; }

private:
    std::vector<Variable> vars_;  // sorted, unique
};

Monomial mono_times(const Monomial& a, const Monomial& b);

// Element of Why[X]: a finite set of monomials, or the distinguished Top.
class WhyPolynomial {
public:
    WhyPolynomial() = default;  // 0
    static WhyPolynomial zero() { return {}; }
    static WhyPolynomial one();
    static WhyPolynomial top();
    static WhyPolynomial of(Monomial m);
    static WhyPolynomial of(std::set<Monomial> ms);

    bool is_top() const { return top_; }
    bool is_zero() const { return !top_ && monos_.empty(); }
    const std::set<Monomial>& monomials() const { return monos_; }
    bool contains(const Monomial& m) const { return top_ || monos_.count(m) > 0; }

    void add(Monomial m);

    std::string str() const;

    friend bool operator==(const WhyPolynomial&, const WhyPolynomial&) = default;

private:
    bool top_ = false;
    std::set<Monomial> monos_;
};

WhyPolynomial poly_plus(const WhyPolynomial& a, const WhyPolynomial& b);
WhyPolynomial poly_times(const WhyPolynomial& a, const WhyPolynomial& b);
WhyPolynomial minimize(const WhyPolynomial& p);

// Element of Lin[X].
struct Lineage {
    enum class Kind { Zero, Vars, Top };
    Kind kind = Kind::Zero;
    std::set<Variable> vars;

    static Lineage zero() { return {}; }
    static Lineage top() { return {Kind::Top, {}}; }
    static Lineage of(std::set<Variable> v) { return {Kind::Vars, std::move(v)}; }

    std::string str() const;
    friend bool operator==(const Lineage&, const Lineage&) = default;
};

Lineage flatten(const WhyPolynomial& p);

// Carrier values of every builtin are encoded as doubles. Access levels
// P < C < S < T map to 1..4 and the access zero to +inf; booleans are 0/1.
using Value = double;

struct SemiringFlags {
    bool plus_idempotent = false;
    bool times_idempotent = false;
    bool absorptive = false;
    bool positive = false;
};

struct SemiringSpec {
    std::string name;
    std::string carrier;
    std::function<Value(Value, Value)> plus;
    std::function<Value(Value, Value)> times;
    Value zero = 0;
    Value one = 1;
    SemiringFlags flags;
    std::optional<Value> sum_of_all;
    // Token to carrier value; nullopt when the token is outside the carrier.
    std::function<std::optional<Value>(std::string_view)> parse_value;
    std::function<std::string(Value)> format_value;
};

// name in {fuzzy, viterbi, tropical, access, boolean}; throws UnknownSemiring.
SemiringSpec builtin_semiring(std::string_view name);

using Valuation = std::map<Variable, Value>;

// Requires a plus- and times-idempotent target (FlagViolation otherwise).
Value evaluate(const WhyPolynomial& p, const SemiringSpec& s, const Valuation& v);

// Image of p under the morphism induced by v, without the idempotency guard.
// For targets whose times is not idempotent this is only the image of the
// Why[X] element, not the provenance computed natively in the target.
Value evaluate_unchecked(const WhyPolynomial& p, const SemiringSpec& s, const Valuation& v);

}  // namespace elprov

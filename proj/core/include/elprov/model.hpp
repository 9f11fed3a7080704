#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "elprov/semiring.hpp"

namespace elprov {

struct Role {
    std::string name;
    bool inverted = false;

    Role inv() const { return {name, !inverted}; }
    std::string str() const { return inverted ? name + "-" : name; }

    friend auto operator<=>(const Role&, const Role&) = default;
};

class Concept {
public:
    enum class Kind { Top, Bottom, Name, Exists, And };

    Concept();  // top
    static Concept top();
    static Concept bottom();
    static Concept name(std::string n);
    static Concept exists(Role r, Concept filler = Concept());
    // Flattens nested conjunctions, drops top, dedups and sorts. Collapses to
    // top or to the single conjunct when fewer than two remain.
    static Concept conj(std::vector<Concept> parts);

    Kind kind() const { return kind_; }
    bool is_top() const { return kind_ == Kind::Top; }
    bool is_bottom() const { return kind_ == Kind::Bottom; }
    bool is_name() const { return kind_ == Kind::Name; }
    // Name or top.
    bool is_atomic() const { return kind_ == Kind::Name || kind_ == Kind::Top; }

    const std::string& concept_name() const { return name_; }
    const Role& role() const { return role_; }
    const Concept& filler() const { return children_.front(); }
    const std::vector<Concept>& conjuncts() const { return children_; }

    const std::string& str() const { return text_; }

    friend bool operator==(const Concept& a, const Concept& b) { return a.text_ == b.text_; }
    friend auto operator<=>(const Concept& a, const Concept& b) { return a.text_ <=> b.text_; }

private:
    void render();

    Kind kind_ = Kind::Top;
    std::string name_;
    Role role_;
    std::vector<Concept> children_;
    std::string text_;
};

struct ConceptAssertion {
    Concept cls;  // name, or top/bottom inside saturation sets
    std::string individual;
    friend auto operator<=>(const ConceptAssertion&, const ConceptAssertion&) = default;
};

struct RoleAssertion {
    std::string role;
    std::string subject;
    std::string object;
    friend auto operator<=>(const RoleAssertion&, const RoleAssertion&) = default;
};

struct Gci {
    Concept lhs;
    Concept rhs;
    friend auto operator<=>(const Gci&, const Gci&) = default;
};

struct RoleInclusion {
    Role sub;
    Role super;
    friend auto operator<=>(const RoleInclusion&, const RoleInclusion&) = default;
};

// Unordered pair; build through make_neg_ri so that first <= second.
struct NegRoleInclusion {
    Role first;
    Role second;
    friend auto operator<=>(const NegRoleInclusion&, const NegRoleInclusion&) = default;
};

NegRoleInclusion make_neg_ri(Role a, Role b);

using Axiom = std::variant<ConceptAssertion, RoleAssertion, Gci, RoleInclusion, NegRoleInclusion>;

std::string render(const Axiom& a);
bool is_assertion(const Axiom& a);

// D ::= A | exists P . top | bot
bool is_valid_rhs(const Concept& c);
// Left-hand grammar: no bottom anywhere.
bool is_valid_lhs(const Concept& c);
// One of the six normal GCI shapes.
bool is_normal_gci(const Gci& g);

struct AnnotatedAxiom {
    Axiom axiom;
    Monomial annotation;
    friend bool operator==(const AnnotatedAxiom&, const AnnotatedAxiom&) = default;
};

class AnnotatedOntology {
public:
    AnnotatedOntology() = default;

    // Returns false and leaves the ontology unchanged if the axiom is present.
    bool add(Axiom axiom, Monomial annotation);
    bool add(AnnotatedAxiom a) { return add(std::move(a.axiom), std::move(a.annotation)); }

    const std::vector<AnnotatedAxiom>& axioms() const { return axioms_; }
    std::size_t size() const { return axioms_.size(); }
    bool empty() const { return axioms_.empty(); }
    bool contains(const Axiom& a) const { return index_.count(a) > 0; }
    const Monomial* annotation_of(const Axiom& a) const;

    // Concatenation; axioms already present in *this are skipped.
    AnnotatedOntology merged(const AnnotatedOntology& other) const;

    std::string str() const;  // one `axiom @ annotation` line per axiom

    friend bool operator==(const AnnotatedOntology& a, const AnnotatedOntology& b) {
        return a.axioms_ == b.axioms_;
    }

private:
    std::vector<AnnotatedAxiom> axioms_;
    std::map<Axiom, std::size_t> index_;
};

struct Vocabulary {
    std::set<std::string> concepts;
    std::set<std::string> roles;
    std::set<std::string> individuals;
    std::set<Variable> variables;
};

Vocabulary vocabulary(const AnnotatedOntology& o);
void collect_symbols(const Concept& c, Vocabulary& out);

enum class Profile { General, NormalForm, ELHIrestr };
std::string to_string(Profile p);

}  // namespace elprov

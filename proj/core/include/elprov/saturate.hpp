#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "elprov/model.hpp"
#include "elprov/semiring.hpp"

namespace elprov {

// Derived axioms with their monomials. Conjunctive left sides appear as Gci
// values whose lhs is a conjunction of names; an empty conjunction is top.
class SaturationSet {
public:
    using Entries = std::map<Axiom, std::set<Monomial>>;

    SaturationSet() = default;
    SaturationSet(Entries entries, std::set<std::string> individuals);

    const Entries& entries() const { return entries_; }
    const std::set<std::string>& individuals() const { return individuals_; }
    std::size_t size() const { return entries_.size(); }

    bool contains(const Axiom& a) const { return entries_.count(a) > 0; }
    // nullptr when the axiom was not derived.
    const std::set<Monomial>* find(const Axiom& a) const;
    // 0 when the axiom was not derived.
    WhyPolynomial polynomial(const Axiom& a) const;

    // Some bot(a), or top <= bot.
    bool has_clash() const;
    // First individual a with bot(a), if any.
    std::string clash_witness() const;

    // One `axiom @ m1 | m2 | ...` line per entry, in canonical order.
    std::string str() const;

private:
    Entries entries_;
    std::set<std::string> individuals_;
};

// Throws NotNormalForm unless every GCI has one of the six normal shapes.
void require_normal_form(const AnnotatedOntology& o);

SaturationSet init_set(const AnnotatedOntology& o);
SaturationSet saturate(const AnnotatedOntology& o);

// Restricted ruleset; monomials with more than k variables are dropped.
// Throws NotELHIrestr unless check_profile(o) is ELHIrestr. Requires k >= 1.
SaturationSet saturate_k(const AnnotatedOntology& o, std::size_t k);

// Same rules without monomials. restricted selects the polynomial ruleset,
// which is complete only for ELHIrestr inputs.
std::set<Axiom> classical_saturate(const AnnotatedOntology& o, bool restricted = false);
bool is_satisfiable(const AnnotatedOntology& o);

// Rule outputs merge into one monomial per axiom (union of variables).
SaturationSet lin_saturate(const AnnotatedOntology& o, bool restricted = false);

}  // namespace elprov

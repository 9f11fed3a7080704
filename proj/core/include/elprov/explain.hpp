#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "elprov/cq.hpp"
#include "elprov/model.hpp"
#include "elprov/semiring.hpp"

namespace elprov {

struct QueryGoal {
    ConjunctiveQuery query;
    std::vector<std::string> tuple;
};

using Goal = std::variant<Axiom, QueryGoal>;

// Why provenance of an axiom or of a query answer.
WhyPolynomial goal_provenance(const AnnotatedOntology& o, const Goal& goal);

using Justification = std::vector<AnnotatedAxiom>;  // input order

// Minimal axiom sets, after erasing the variables of static axioms. A
// justification made only of static axioms is empty. Sorted canonically.
// Throws UnsatisfiableOntology, or UnsatisfiableLHS for a GCI or RI whose
// left side is unsatisfiable.
std::vector<Justification> justifications(const AnnotatedOntology& o, const Goal& goal,
                                          const std::set<Variable>& static_vars = {});

// `{ax1; ax2}` with axioms rendered without annotations; `{}` when empty.
std::string render(const Justification& j);

// One merged monomial per derived axiom (assertions and GCIs alike).
// Restricted rules for restricted-profile inputs. Throws UnsatisfiableOntology.
std::map<Axiom, Monomial> linsat(const AnnotatedOntology& o);

// Throws UnsatisfiableOntology.
Lineage lineage(const AnnotatedOntology& o, const Axiom& alpha);

bool is_relevant(const AnnotatedOntology& o, const Axiom& alpha, const Variable& v);

// Axioms whose variable maps to at least n. Throws MissingValuation.
AnnotatedOntology ncut(const AnnotatedOntology& o, double n, const Valuation& val);

}  // namespace elprov

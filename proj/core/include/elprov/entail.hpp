#pragma once

#include <set>

#include "elprov/model.hpp"
#include "elprov/semiring.hpp"

namespace elprov {

// Top when o is unsatisfiable. o is normalized first.
WhyPolynomial assertion_provenance(const AnnotatedOntology& o, const Axiom& assertion);

struct Reduction {
    AnnotatedOntology ontology;
    Axiom target;
    std::set<Variable> fresh_vars;
    Monomial carrier;  // product of fresh_vars
};

// GCI C <= D: adds D <= E (unless D is bot) and one fresh assertion per
// name/edge of C rooted at a fresh individual. RI P1 <= P2: adds P1(a0,b0)
// with the unit. Throws UnsupportedAxiom for assertions and negative RIs.
Reduction reduce_to_assertion(const AnnotatedOntology& o, const Axiom& alpha);

// Any axiom; normalizes internally. GCIs and RIs whose left side is
// unsatisfiable get Top; negative RIs get Top when entailed and 0 otherwise.
WhyPolynomial axiom_provenance(const AnnotatedOntology& o, const Axiom& alpha);

// m is in axiom_provenance(o, alpha). Restricted-profile assertions are
// decided on the size-bounded saturation.
bool entails_annotated(const AnnotatedOntology& o, const Axiom& alpha, const Monomial& m);

}  // namespace elprov

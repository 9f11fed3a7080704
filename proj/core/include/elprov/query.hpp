#pragma once

#include <string>
#include <vector>

#include "elprov/cq.hpp"
#include "elprov/model.hpp"
#include "elprov/saturate.hpp"
#include "elprov/semiring.hpp"

namespace elprov {

struct RewrittenQuery {
    ConjunctiveQuery query;
    Monomial monomial;
    friend auto operator<=>(const RewrittenQuery&, const RewrittenQuery&) = default;
};

// Existential variables renamed to _e0, _e1, ... so that isomorphic queries
// compare equal. Exhaustive for up to 7 existential variables.
ConjunctiveQuery canonical(const ConjunctiveQuery& q);

// Closure of (q, 1) under one-variable rewriting steps. o must be in normal
// form and sat = saturate(o). The result is canonical and sorted; it always
// contains (canonical(q), 1).
std::vector<RewrittenQuery> rewrite(const ConjunctiveQuery& q, const SaturationSet& sat, const AnnotatedOntology& o);

// Sum over matches of q into the assertions of sat, per-atom monomial
// choices multiplied. Throws ArityMismatch when tuple and head differ in size.
WhyPolynomial match_provenance(const ConjunctiveQuery& q, const std::vector<std::string>& tuple,
                               const SaturationSet& sat);

// Top when o is unsatisfiable. o is normalized first.
WhyPolynomial cq_provenance(const AnnotatedOntology& o, const ConjunctiveQuery& q,
                            const std::vector<std::string>& tuple);

struct TreeReduction {
    Concept cls;
    std::string fresh_name;
};

// Concept equivalent to a rooted tree-shaped query with one answer variable.
// Identical sibling subtrees collapse into one conjunct. Throws NotTreeShaped.
TreeReduction tree_cq_reduction(const ConjunctiveQuery& q);

// Provenance of fresh_name(a) in o plus (concept <= fresh_name, 1).
WhyPolynomial tree_cq_provenance(const AnnotatedOntology& o, const ConjunctiveQuery& q, const std::string& a);

}  // namespace elprov

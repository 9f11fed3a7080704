#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "elprov/explain.hpp"
#include "elprov/model.hpp"

namespace elprov {

// Reference reasoner for tests. It computes anonymous-element types by a
// naive fixpoint and answers queries on a depth-bounded canonical model;
// no code is shared with the saturation engine.
struct OracleOptions {
    std::size_t max_axioms = 12;
};

// Classical entailment, annotations ignored. Throws BoundExceeded.
bool brute_classical_entails(const AnnotatedOntology& s, const Goal& goal, const OracleOptions& opts = {});

// Minimal subsets of the axioms not carrying a static variable that, together
// with the static ones, entail goal. Sorted like justifications().
std::vector<Justification> brute_justifications(const AnnotatedOntology& o, const Goal& goal,
                                                const std::set<Variable>& static_vars = {},
                                                const OracleOptions& opts = {});

}  // namespace elprov

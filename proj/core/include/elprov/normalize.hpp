#pragma once

#include "elprov/model.hpp"

namespace elprov {

// Rewrites every GCI into one of the six normal shapes. Introduced axioms
// carry the unit monomial and introduced names are `_nfK`, numbered past any
// `_nf` name already present. Non-GCI axioms are copied unchanged.
AnnotatedOntology normalize(const AnnotatedOntology& o);

// Splits right-hand conjunctions (same annotation on every part) and replaces
// qualified existentials on the right by a fresh role `_nfSK`:
//   (C <= exists P . D, v)  ->  (C <= exists S, v), (S <= P, 1), (exists S- <= D, 1)
AnnotatedOntology desugar_rhs(const AnnotatedOntology& o);

}  // namespace elprov

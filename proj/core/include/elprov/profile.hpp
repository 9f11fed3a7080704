#pragma once

#include "elprov/model.hpp"

namespace elprov {

// General, NormalForm, or ELHIrestr (normal form, and for every role P with
// some entailed C <= exists P, every exists inv(P) . A <= B has A = top).
Profile check_profile(const AnnotatedOntology& o);

}  // namespace elprov

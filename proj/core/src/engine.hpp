#pragma once

#include <cstddef>
#include <limits>

#include "elprov/saturate.hpp"

namespace elprov::detail {

enum class EngineMode { Why, Lin, Classical };

struct EngineOptions {
    EngineMode mode = EngineMode::Why;
    bool restricted = false;
    std::size_t max_size = std::numeric_limits<std::size_t>::max();
    bool init_only = false;
};

// o must be in normal form.
SaturationSet run_engine(const AnnotatedOntology& o, const EngineOptions& opts);

}  // namespace elprov::detail

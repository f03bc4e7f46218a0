#pragma once

#include "kgcwalk/tape.hpp"

#include <functional>
#include <string>

namespace kgcwalk {

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::string worst_param;
    std::size_t worst_index = 0;
};

// Compares the tape's analytic gradient of the loss against central finite
// differences over every element of every parameter in `params`.
//
// `loss_builder` must rebuild the loss on the given tape from the current
// parameter values and be deterministic (fix all RNG seeds before calling).
// Relative error per element is |analytic - numeric| / max(|analytic|,
// |numeric|, 1e-12).
GradCheckResult finite_diff_check(const std::function<ValueId(Tape&)>& loss_builder,
                                  ParamStore& params, double eps);

} // namespace kgcwalk

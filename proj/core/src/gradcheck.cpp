#include "kgcwalk/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kgcwalk {

namespace {

double eval_loss(const std::function<ValueId(Tape&)>& loss_builder) {
    Tape tape;
    ValueId loss = loss_builder(tape);
    return tape.value(loss)[0];
}

} // namespace

GradCheckResult finite_diff_check(const std::function<ValueId(Tape&)>& loss_builder,
                                  ParamStore& params, double eps) {
    params.zero_grad();
    {
        Tape tape;
        ValueId loss = loss_builder(tape);
        tape.backward(loss);
    }
    std::vector<std::vector<double>> analytic(params.count());
    for (ParamId id = 0; id < params.count(); ++id) {
        auto g = params.grads(id);
        analytic[id].assign(g.begin(), g.end());
    }

    GradCheckResult result;
    for (ParamId id = 0; id < params.count(); ++id) {
        auto v = params.values(id);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double original = v[i];
            v[i] = original + eps;
            const double plus = eval_loss(loss_builder);
            v[i] = original - eps;
            const double minus = eval_loss(loss_builder);
            v[i] = original;
            const double numeric = (plus - minus) / (2.0 * eps);
            const double a = analytic[id][i];
            const double denom = std::max({std::fabs(a), std::fabs(numeric), 1e-12});
            const double rel = std::fabs(a - numeric) / denom;
            if (rel > result.max_rel_error) {
                result.max_rel_error = rel;
                result.worst_param = params.name(id);
                result.worst_index = i;
            }
        }
    }
    return result;
}

} // namespace kgcwalk

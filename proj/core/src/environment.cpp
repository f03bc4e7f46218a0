#include "kgcwalk/environment.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace kgcwalk {

void EpisodeConfig::validate() const {
    if (horizon < 1) {
        throw std::invalid_argument("episode horizon must be >= 1");
    }
    if (discount != 1.0) {
        throw std::invalid_argument("discount is fixed at 1");
    }
}

namespace env {

State reset(const Graph& graph, EntityId central, Vector query) {
    if (central >= graph.entity_count()) {
        std::ostringstream msg;
        msg << "reset: unknown entity id " << central;
        throw std::out_of_range(msg.str());
    }
    State s;
    s.node = central;
    s.step = 0;
    s.query = std::move(query);
    return s;
}

std::span<const EdgeAction> valid_actions(const Graph& graph, const State& state) {
    return graph.outgoing(state.node);
}

State step(const Graph& graph, const State& state, const EdgeAction& action, int horizon) {
    if (state.step >= horizon) {
        std::ostringstream msg;
        msg << "step: episode already at horizon " << horizon;
        throw std::runtime_error(msg.str());
    }
    auto actions = valid_actions(graph, state);
    const bool legal = std::any_of(actions.begin(), actions.end(),
                                   [&](const EdgeAction& a) { return a == action; });
    if (!legal) {
        std::ostringstream msg;
        msg << "step: action (relation " << action.relation << ", edge " << action.edge
            << ", tail " << action.tail << ") is not valid at node " << state.node;
        throw std::runtime_error(msg.str());
    }
    State next = state;
    next.node = action.tail;
    next.step = state.step + 1;
    return next;
}

double terminal_reward(const State& state, std::span<const EntityId> golds, int horizon) {
    if (state.step != horizon) {
        std::ostringstream msg;
        msg << "terminal_reward: called at step " << state.step << ", horizon is " << horizon;
        throw std::runtime_error(msg.str());
    }
    const bool hit = std::find(golds.begin(), golds.end(), state.node) != golds.end();
    return hit ? 1.0 : 0.0;
}

} // namespace env

} // namespace kgcwalk

#pragma once

#include "kgcwalk/graph.hpp"
#include "kgcwalk/numeric.hpp"
#include "kgcwalk/tape.hpp"

#include <span>

namespace kgcwalk {

// Fixed-horizon, deterministic graph-walk episode settings. The discount is
// fixed at 1: an episode's return is exactly its terminal reward.
struct EpisodeConfig {
    int horizon = 3;
    double discount = 1.0;

    void validate() const; // horizon >= 1, discount == 1
};

// Walk state: current node, step counter, the query embedding carried
// unchanged through the episode, and the policy-owned history handle.
struct State {
    EntityId node = 0;
    int step = 0;
    Vector query;
    History history;
};

namespace env {

State reset(const Graph& graph, EntityId central, Vector query);

// Delegates to the graph's sorted adjacency; non-empty by the self-loop
// guarantee.
std::span<const EdgeAction> valid_actions(const Graph& graph, const State& state);

// Deterministic transition. The action must be one of the state's valid
// actions and the state must not have reached the horizon.
State step(const Graph& graph, const State& state, const EdgeAction& action, int horizon);

// 1.0 iff the final node is a gold answer. Must be called exactly at the
// horizon.
double terminal_reward(const State& state, std::span<const EntityId> golds, int horizon);

} // namespace env

} // namespace kgcwalk

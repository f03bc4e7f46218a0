#pragma once

#include "kgcwalk/environment.hpp"
#include "kgcwalk/graph.hpp"
#include "kgcwalk/layers.hpp"
#include "kgcwalk/rng.hpp"
#include "kgcwalk/tape.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace kgcwalk {

// Everything a single turn hands to the walker: start node, gold answers,
// and the query embedding value.
struct TurnContext {
    EntityId central = 0;
    std::vector<EntityId> golds;
    Vector query;
    std::string ref; // e.g. "conv-3/turn-2", carried into episodes
};

// One sampled walk. When produced on a caller-supplied tape, the per-step
// log-probability and entropy nodes stay valid for that tape and can be
// assembled into a training loss.
struct Episode {
    struct Step {
        EntityId from;
        EdgeAction action;
        double log_prob;
    };

    std::vector<Step> steps;
    double reward = 0.0;
    std::string turn_ref;

    std::vector<ValueId> log_prob_nodes;
    std::vector<ValueId> entropy_nodes;

    double total_log_prob() const;
};

// The walk policy: a softmax over outgoing edges scored by matching action
// embeddings [relation || edge || tail] against a feed-forward transform of
// [current node || query || history].
struct PolicyModel {
    std::size_t dim = 0;
    ParamId entity_embeddings;   // |V| x d
    ParamId relation_embeddings; // |R| x d
    ParamId edge_embeddings;     // |L| x d
    LstmParamIds history;        // input 3d, hidden d
    FfnParamIds score;           // 3d -> d -> 3d
    std::size_t action_cap = 0;  // 0 = no truncation

    static PolicyModel create(ParamStore& store, const Graph& graph, std::size_t dim);

    // [relation embedding || edge embedding || tail entity embedding], 3d wide.
    ValueId action_embedding(Tape& tape, ParamStore& store, const EdgeAction& action) const;

    // g_0: one LSTM step from the zero state on [e_central || l_q], zero-padded
    // to the 3d input width shared with later steps.
    History init_history(Tape& tape, ParamStore& store, EntityId central, ValueId query) const;

    // g_t: one LSTM step consuming the previous action embedding.
    History update_history(Tape& tape, ParamStore& store, const History& prev,
                           ValueId prev_action_embedding) const;

    struct Scored {
        ValueId scores; // raw, one per action
        ValueId probs;  // softmax of scores
    };

    Scored score_actions(Tape& tape, ParamStore& store, EntityId node, ValueId query,
                         const History& history_state,
                         std::span<const EdgeAction> actions) const;

    // Applies the optional action cap (keeps the first `action_cap` actions
    // in the fixed adjacency order).
    std::span<const EdgeAction> capped(std::span<const EdgeAction> actions) const;

    // One full episode: reset, then H times score/sample/record/step, then
    // the terminal reward.
    Episode rollout(Tape& tape, ParamStore& store, const Graph& graph, const TurnContext& turn,
                    ValueId query_node, Rng& rng, int horizon) const;

    // Sum of per-step log-probabilities of a fixed action sequence starting
    // at the turn's central entity (the rollout's loss path, replayed
    // deterministically).
    ValueId forced_path_log_prob(Tape& tape, ParamStore& store, const Graph& graph,
                                 const TurnContext& turn, ValueId query_node,
                                 std::span<const EdgeAction> actions) const;
};

// Inverse-CDF categorical sample over the fixed action order.
std::size_t sample_action(const Vector& probs, Rng& rng);

// Depth-first enumeration of every length-`horizon` action sequence under the
// policy; calls fn(actions, path_probability, terminal_entity) once per path.
// Throws if more than `max_paths` paths would be visited.
void enumerate_paths(const Graph& graph, ParamStore& store, const PolicyModel& policy,
                     const TurnContext& turn, int horizon, std::size_t max_paths,
                     const std::function<void(std::span<const EdgeAction>, double, EntityId)>& fn);

} // namespace kgcwalk

#include "kgcwalk/policy.hpp"

#include <array>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace kgcwalk {

double Episode::total_log_prob() const {
    double s = 0.0;
    for (const Step& step : steps) s += step.log_prob;
    return s;
}

PolicyModel PolicyModel::create(ParamStore& store, const Graph& graph, std::size_t dim) {
    PolicyModel m;
    m.dim = dim;
    m.entity_embeddings = store.add_matrix("policy.entity_embeddings",
                                           graph.entity_count(), dim);
    m.relation_embeddings = store.add_matrix("policy.relation_embeddings",
                                             graph.relation_count(), dim);
    m.edge_embeddings = store.add_matrix("policy.edge_embeddings", graph.triple_count(), dim);
    m.history = LstmParamIds::create(store, "policy.history", 3 * dim, dim);
    m.score = FfnParamIds::create(store, "policy.score", 3 * dim, dim, 3 * dim);
    return m;
}

ValueId PolicyModel::action_embedding(Tape& tape, ParamStore& store,
                                      const EdgeAction& action) const {
    const std::array<ValueId, 3> parts = {
        tape.param_row(store, relation_embeddings, action.relation),
        tape.param_row(store, edge_embeddings, action.edge),
        tape.param_row(store, entity_embeddings, action.tail),
    };
    return tape.concat(parts);
}

History PolicyModel::init_history(Tape& tape, ParamStore& store, EntityId central,
                                  ValueId query) const {
    if (tape.value(query).size() != dim) {
        std::ostringstream msg;
        msg << "init_history: query dim (" << tape.value(query).size() << ") vs expected ("
            << dim << ")";
        throw std::invalid_argument(msg.str());
    }
    const std::array<ValueId, 3> parts = {
        tape.param_row(store, entity_embeddings, central),
        query,
        tape.zeros(dim), // pad [e || l_q] to the 3d input width
    };
    ValueId x = tape.concat(parts);
    return lstm_step(tape, store, history, x, tape.zeros(dim), tape.zeros(dim));
}

History PolicyModel::update_history(Tape& tape, ParamStore& store, const History& prev,
                                    ValueId prev_action_embedding) const {
    return lstm_step(tape, store, history, prev_action_embedding, prev.h, prev.c);
}

std::span<const EdgeAction> PolicyModel::capped(std::span<const EdgeAction> actions) const {
    if (action_cap > 0 && actions.size() > action_cap) {
        return actions.subspan(0, action_cap);
    }
    return actions;
}

PolicyModel::Scored PolicyModel::score_actions(Tape& tape, ParamStore& store, EntityId node,
                                               ValueId query, const History& history_state,
                                               std::span<const EdgeAction> actions) const {
    if (actions.empty()) {
        throw std::invalid_argument("empty action score vector");
    }
    const std::array<ValueId, 3> ctx_parts = {
        tape.param_row(store, entity_embeddings, node),
        query,
        history_state.h,
    };
    ValueId transform = ffn_apply(tape, store, score, tape.concat(ctx_parts));
    std::vector<ValueId> rows;
    rows.reserve(actions.size());
    for (const EdgeAction& a : actions) {
        rows.push_back(action_embedding(tape, store, a));
    }
    ValueId scores = tape.dot_each(rows, transform);
    return Scored{scores, tape.softmax(scores)};
}

std::size_t sample_action(const Vector& probs, Rng& rng) {
    const double u = rng.uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (u < cum) return i;
    }
    return probs.size() - 1;
}

Episode PolicyModel::rollout(Tape& tape, ParamStore& store, const Graph& graph,
                             const TurnContext& turn, ValueId query_node, Rng& rng,
                             int horizon) const {
    Episode ep;
    ep.turn_ref = turn.ref;
    State state = env::reset(graph, turn.central, turn.query);
    History hist = init_history(tape, store, turn.central, query_node);
    for (int t = 0; t < horizon; ++t) {
        auto actions = capped(env::valid_actions(graph, state));
        Scored scored = score_actions(tape, store, state.node, query_node, hist, actions);
        const std::size_t idx = sample_action(tape.value(scored.probs), rng);
        ValueId logp = tape.log_softmax_pick(scored.scores, idx);
        ep.log_prob_nodes.push_back(logp);
        ep.entropy_nodes.push_back(tape.softmax_entropy(scored.scores));
        ep.steps.push_back(Episode::Step{state.node, actions[idx], tape.value(logp)[0]});
        hist = update_history(tape, store, hist, action_embedding(tape, store, actions[idx]));
        state = env::step(graph, state, actions[idx], horizon);
    }
    state.history = hist;
    ep.reward = env::terminal_reward(state, turn.golds, horizon);
    return ep;
}

ValueId PolicyModel::forced_path_log_prob(Tape& tape, ParamStore& store, const Graph& graph,
                                          const TurnContext& turn, ValueId query_node,
                                          std::span<const EdgeAction> path) const {
    State state = env::reset(graph, turn.central, turn.query);
    History hist = init_history(tape, store, turn.central, query_node);
    std::vector<ValueId> logps;
    for (const EdgeAction& action : path) {
        auto actions = capped(env::valid_actions(graph, state));
        std::size_t idx = actions.size();
        for (std::size_t i = 0; i < actions.size(); ++i) {
            if (actions[i] == action) {
                idx = i;
                break;
            }
        }
        if (idx == actions.size()) {
            throw std::runtime_error("forced path contains an action not valid at its node");
        }
        Scored scored = score_actions(tape, store, state.node, query_node, hist, actions);
        logps.push_back(tape.log_softmax_pick(scored.scores, idx));
        hist = update_history(tape, store, hist, action_embedding(tape, store, action));
        state = env::step(graph, state, action, static_cast<int>(path.size()));
    }
    return tape.sum(logps);
}

namespace {

struct PathEnumerator {
    const Graph& graph;
    ParamStore& store;
    const PolicyModel& policy;
    const TurnContext& turn;
    int horizon;
    std::size_t max_paths;
    const std::function<void(std::span<const EdgeAction>, double, EntityId)>& fn;

    Tape tape;
    ValueId query_node = kNoValue;
    std::vector<EdgeAction> prefix;
    std::size_t paths_visited = 0;

    void run() {
        query_node = tape.input(turn.query);
        History hist = policy.init_history(tape, store, turn.central, query_node);
        descend(turn.central, hist, 0, 1.0);
    }

    void descend(EntityId node, const History& hist, int depth, double prob) {
        if (depth == horizon) {
            if (++paths_visited > max_paths) {
                std::ostringstream msg;
                msg << "path enumeration exceeds " << max_paths
                    << " paths; use a smaller graph or horizon";
                throw std::runtime_error(msg.str());
            }
            fn(prefix, prob, node);
            return;
        }
        auto actions = policy.capped(graph.outgoing(node));
        const std::size_t checkpoint = tape.mark();
        auto scored = policy.score_actions(tape, store, node, query_node, hist, actions);
        const Vector probs = tape.value(scored.probs);
        for (std::size_t i = 0; i < actions.size(); ++i) {
            const std::size_t branch_mark = tape.mark();
            History next =
                policy.update_history(tape, store, hist,
                                      policy.action_embedding(tape, store, actions[i]));
            prefix.push_back(actions[i]);
            descend(actions[i].tail, next, depth + 1, prob * probs[i]);
            prefix.pop_back();
            tape.truncate(branch_mark);
        }
        tape.truncate(checkpoint);
    }
};

} // namespace

void enumerate_paths(const Graph& graph, ParamStore& store, const PolicyModel& policy,
                     const TurnContext& turn, int horizon, std::size_t max_paths,
                     const std::function<void(std::span<const EdgeAction>, double, EntityId)>& fn) {
    PathEnumerator e{graph, store, policy, turn, horizon, max_paths, fn, {}, kNoValue, {}, 0};
    e.run();
}

} // namespace kgcwalk

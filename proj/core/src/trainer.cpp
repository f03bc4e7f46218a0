#include "kgcwalk/trainer.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kgcwalk {

void TrainConfig::validate() const {
    if (batch < 1) throw std::invalid_argument("train config: batch must be >= 1");
    if (learning_rate <= 0.0) {
        throw std::invalid_argument("train config: learning rate must be > 0");
    }
    if (updates < 0) throw std::invalid_argument("train config: negative update count");
    if (horizon < 1) throw std::invalid_argument("train config: horizon must be >= 1");
    if (baseline_decay < 0.0 || baseline_decay >= 1.0) {
        throw std::invalid_argument("train config: baseline decay must be in [0, 1)");
    }
    if (entropy_weight < 0.0) {
        throw std::invalid_argument("train config: entropy weight must be >= 0");
    }
}

namespace {

std::string dump_episode(const Episode& ep) {
    std::ostringstream out;
    out << "episode " << ep.turn_ref << " reward " << ep.reward << " path:";
    for (const Episode::Step& s : ep.steps) {
        out << " (" << s.from << " -r" << s.action.relation << "-> " << s.action.tail
            << " logp " << s.log_prob << ")";
    }
    return out.str();
}

} // namespace

TrainStats reinforce_update(Tape& tape, std::span<const Episode> episodes, Model& model,
                            const TrainConfig& config, double& baseline) {
    const auto start = std::chrono::steady_clock::now();
    if (episodes.empty()) {
        throw std::invalid_argument("reinforce_update: empty episode batch");
    }
    const double inv_batch = 1.0 / static_cast<double>(episodes.size());
    const double base = config.baseline == BaselineMode::moving_average ? baseline : 0.0;

    double mean_reward = 0.0;
    std::vector<ValueId> terms;
    terms.reserve(2 * episodes.size());
    for (const Episode& ep : episodes) {
        mean_reward += ep.reward * inv_batch;
        ValueId logp_sum = tape.sum(ep.log_prob_nodes);
        terms.push_back(tape.scale(logp_sum, -(ep.reward - base) * inv_batch));
        if (config.entropy_weight != 0.0) {
            ValueId entropy_sum = tape.sum(ep.entropy_nodes);
            terms.push_back(tape.scale(entropy_sum, -config.entropy_weight * inv_batch));
        }
    }
    ValueId loss = tape.sum(terms);
    const double loss_value = tape.value(loss)[0];
    if (!std::isfinite(loss_value)) {
        std::ostringstream msg;
        msg << "non-finite loss " << loss_value << "; " << dump_episode(episodes.front());
        throw std::runtime_error(msg.str());
    }

    model.store.zero_grad();
    tape.backward(loss);

    double grad_sq = 0.0;
    for (ParamId id = 0; id < model.store.count(); ++id) {
        for (double g : model.store.grads(id)) grad_sq += g * g;
    }
    for (ParamId id = 0; id < model.store.count(); ++id) {
        auto v = model.store.values(id);
        auto g = model.store.grads(id);
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] -= config.learning_rate * g[i];
        }
    }
    if (config.baseline == BaselineMode::moving_average) {
        baseline = config.baseline_decay * baseline + (1.0 - config.baseline_decay) * mean_reward;
    }

    TrainStats stats;
    stats.mean_reward = mean_reward;
    stats.loss = loss_value;
    stats.grad_norm = std::sqrt(grad_sq);
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return stats;
}

ValueId encode_turn_query(Tape& tape, Model& model, const Conversation& conv, std::size_t upto) {
    if (upto >= conv.turns.size()) {
        throw std::out_of_range("encode_turn_query: turn index out of range");
    }
    std::vector<ValueId> hqs;
    hqs.reserve(upto + 1);
    for (std::size_t t = 0; t <= upto; ++t) {
        const auto tokens = model.vocab.tokenize(conv.turns[t].question);
        hqs.push_back(model.encoder.encode_question(tape, model.store, tokens));
    }
    return model.encoder.encode_history(tape, model.store, hqs);
}

TurnContext make_turn_context(Tape& tape, const Conversation& conv,
                              std::size_t turn_index, ValueId query_node) {
    TurnContext ctx;
    ctx.central = conv.turns[turn_index].central_id;
    ctx.golds = conv.turns[turn_index].answer_ids;
    ctx.query = tape.value(query_node);
    std::ostringstream ref;
    ref << conv.id << "/turn-" << turn_index;
    ctx.ref = ref.str();
    return ctx;
}

std::vector<TrainStats> train(const Graph& graph, std::span<const Conversation> conversations,
                              Model& model, const TrainConfig& config,
                              const CheckpointHook& hook) {
    config.validate();
    if (conversations.empty()) {
        throw std::invalid_argument("train: no conversations");
    }

    // Uniform sampling over all (conversation, turn) pairs.
    std::vector<std::pair<std::size_t, std::size_t>> turn_index;
    for (std::size_t c = 0; c < conversations.size(); ++c) {
        for (std::size_t t = 0; t < conversations[c].turns.size(); ++t) {
            turn_index.emplace_back(c, t);
        }
    }

    Rng pick_rng = Rng(config.seed).fork(11);
    Rng walk_rng = Rng(config.seed).fork(12);

    double baseline = 0.0;
    std::vector<TrainStats> log;
    log.reserve(static_cast<std::size_t>(config.updates));
    for (int u = 1; u <= config.updates; ++u) {
        const auto [c, t] = turn_index[pick_rng.uniform_index(turn_index.size())];
        const Conversation& conv = conversations[c];

        Tape tape;
        ValueId query = encode_turn_query(tape, model, conv, t);
        TurnContext ctx = make_turn_context(tape, conv, t, query);

        std::vector<Episode> episodes;
        episodes.reserve(static_cast<std::size_t>(config.batch));
        for (int b = 0; b < config.batch; ++b) {
            episodes.push_back(model.policy.rollout(tape, model.store, graph, ctx, query,
                                                    walk_rng, config.horizon));
        }
        TrainStats stats = reinforce_update(tape, episodes, model, config, baseline);
        stats.update = u;
        log.push_back(stats);

        if (hook && config.checkpoint_every > 0 && u % config.checkpoint_every == 0) {
            hook(u, model);
        }
    }
    return log;
}

double exact_expected_reward(const Graph& graph, const TurnContext& turn, Model& model,
                             int horizon, std::size_t max_paths) {
    double expected = 0.0;
    enumerate_paths(graph, model.store, model.policy, turn, horizon, max_paths,
                    [&](std::span<const EdgeAction>, double prob, EntityId terminal) {
                        for (EntityId g : turn.golds) {
                            if (g == terminal) {
                                expected += prob;
                                return;
                            }
                        }
                    });
    return expected;
}

} // namespace kgcwalk

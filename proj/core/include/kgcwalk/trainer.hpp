#pragma once

#include "kgcwalk/dataset.hpp"
#include "kgcwalk/model.hpp"

#include <functional>
#include <span>
#include <vector>

namespace kgcwalk {

enum class BaselineMode { none, moving_average };

struct TrainConfig {
    int batch = 16;              // episodes per update
    double learning_rate = 0.05; // plain SGD step size
    int updates = 3000;
    int horizon = 3;
    BaselineMode baseline = BaselineMode::moving_average;
    double baseline_decay = 0.9;
    double entropy_weight = 0.01;
    std::uint64_t seed = 1;
    int checkpoint_every = 500;

    void validate() const;
};

struct TrainStats {
    int update = 0;
    double mean_reward = 0.0;
    double loss = 0.0;
    double grad_norm = 0.0;
    double seconds = 0.0; // wall time of the update
};

// One REINFORCE step over a batch of episodes recorded on `tape` under the
// model's current parameters:
//   loss = -(1/B) sum_b [(R_b - baseline) * sum_t log pi + lambda * sum_t H_t]
// followed by backward, a single SGD step, and (in moving-average mode) the
// baseline update. Aborts with a diagnostic dump if the loss is not finite.
TrainStats reinforce_update(Tape& tape, std::span<const Episode> episodes, Model& model,
                            const TrainConfig& config, double& baseline);

using CheckpointHook = std::function<void(int update, const Model&)>;

// Full training loop: each update samples one (conversation, turn) pair
// uniformly, encodes the query from all turns up to it, runs `batch`
// rollouts, and applies reinforce_update. Deterministic per seed. The hook,
// when set, fires every `checkpoint_every` updates.
std::vector<TrainStats> train(const Graph& graph, std::span<const Conversation> conversations,
                              Model& model, const TrainConfig& config,
                              const CheckpointHook& hook = {});

// Exact success probability of the current policy: sum over all length-H
// action sequences of path probability times terminal reward, by exhaustive
// enumeration. Throws when the enumeration would exceed `max_paths`.
double exact_expected_reward(const Graph& graph, const TurnContext& turn, Model& model,
                             int horizon, std::size_t max_paths = 1'000'000);

// Query embedding for conversation turns [0, upto] (inclusive), recorded on
// the tape. Shared by training, evaluation, and the REPL.
ValueId encode_turn_query(Tape& tape, Model& model, const Conversation& conv,
                          std::size_t upto);

TurnContext make_turn_context(Tape& tape, const Conversation& conv, std::size_t turn_index,
                              ValueId query_node);

} // namespace kgcwalk

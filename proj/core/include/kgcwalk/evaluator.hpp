#pragma once

#include "kgcwalk/trainer.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kgcwalk {

enum class RankMode { sampling, exact };

// Candidate answers for one turn, best first. Scores are non-increasing and
// ties break by ascending entity id.
struct RankedAnswers {
    struct Entry {
        EntityId entity;
        double score;
    };
    std::vector<Entry> entries;
};

// Terminal entities ranked by the policy's path-probability mass. Sampling
// mode runs `budget` rollouts and sums each *distinct* path's probability
// into its terminal entity; exact mode enumerates all length-H paths.
RankedAnswers rank_answers(const Graph& graph, const TurnContext& turn, Model& model,
                           RankMode mode, int budget, Rng& rng, int horizon,
                           std::size_t max_paths = 1'000'000);

struct MetricsReport {
    double p_at_1 = 0.0;
    double hit_at_5 = 0.0;
    double mrr = 0.0;
    int turns = 0;
};

// Per-turn: P@1 = 1 if the top entity is gold; reciprocal rank of the first
// gold entity (0 when absent); Hit@k = 1 if any gold is in the top k. The
// report holds the means over turns.
MetricsReport compute_metrics(
    std::span<const std::pair<RankedAnswers, std::vector<EntityId>>> per_turn, int k);

// Evaluates every turn of every conversation (central entities taken from
// the data) and aggregates metrics with k = 5.
MetricsReport evaluate(const Graph& graph, std::span<const Conversation> conversations,
                       Model& model, RankMode mode, int budget, std::uint64_t seed, int horizon);

std::string metrics_table(const MetricsReport& report);
std::string metrics_json(const MetricsReport& report);

} // namespace kgcwalk

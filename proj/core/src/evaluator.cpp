#include "kgcwalk/evaluator.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace kgcwalk {

namespace {

RankedAnswers rank_from_mass(const std::map<EntityId, double>& mass) {
    RankedAnswers ranked;
    ranked.entries.reserve(mass.size());
    for (const auto& [entity, score] : mass) {
        ranked.entries.push_back(RankedAnswers::Entry{entity, score});
    }
    std::sort(ranked.entries.begin(), ranked.entries.end(),
              [](const RankedAnswers::Entry& a, const RankedAnswers::Entry& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.entity < b.entity;
              });
    return ranked;
}

} // namespace

RankedAnswers rank_answers(const Graph& graph, const TurnContext& turn, Model& model,
                           RankMode mode, int budget, Rng& rng, int horizon,
                           std::size_t max_paths) {
    std::map<EntityId, double> mass;
    if (mode == RankMode::exact) {
        enumerate_paths(graph, model.store, model.policy, turn, horizon, max_paths,
                        [&](std::span<const EdgeAction>, double prob, EntityId terminal) {
                            mass[terminal] += prob;
                        });
        return rank_from_mass(mass);
    }

    if (budget < 1) {
        throw std::invalid_argument("rank_answers: sampling budget must be >= 1");
    }
    // Each distinct sampled path contributes its probability once; as the
    // budget grows this converges to the exact enumeration.
    std::map<std::vector<EdgeId>, std::pair<EntityId, double>> paths;
    for (int b = 0; b < budget; ++b) {
        Tape tape;
        ValueId query = tape.input(turn.query);
        Episode ep = model.policy.rollout(tape, model.store, graph, turn, query, rng, horizon);
        std::vector<EdgeId> key;
        key.reserve(ep.steps.size());
        for (const Episode::Step& s : ep.steps) key.push_back(s.action.edge);
        const EntityId terminal = ep.steps.back().action.tail;
        paths.emplace(std::move(key),
                      std::make_pair(terminal, std::exp(ep.total_log_prob())));
    }
    for (const auto& [key, value] : paths) {
        mass[value.first] += value.second;
    }
    return rank_from_mass(mass);
}

MetricsReport compute_metrics(
    std::span<const std::pair<RankedAnswers, std::vector<EntityId>>> per_turn, int k) {
    if (per_turn.empty()) {
        throw std::invalid_argument("compute_metrics: no turns");
    }
    if (k < 1) {
        throw std::invalid_argument("compute_metrics: k must be >= 1");
    }
    double p1_sum = 0.0;
    double rr_sum = 0.0;
    double hit_sum = 0.0;
    for (const auto& [ranked, golds] : per_turn) {
        auto is_gold = [&](EntityId e) {
            return std::find(golds.begin(), golds.end(), e) != golds.end();
        };
        std::size_t first_gold_rank = 0; // 1-based; 0 = absent
        for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
            if (is_gold(ranked.entries[i].entity)) {
                first_gold_rank = i + 1;
                break;
            }
        }
        if (first_gold_rank == 1) p1_sum += 1.0;
        if (first_gold_rank > 0) rr_sum += 1.0 / static_cast<double>(first_gold_rank);
        if (first_gold_rank > 0 && first_gold_rank <= static_cast<std::size_t>(k)) {
            hit_sum += 1.0;
        }
    }
    MetricsReport report;
    report.turns = static_cast<int>(per_turn.size());
    const double n = static_cast<double>(per_turn.size());
    report.p_at_1 = p1_sum / n;
    report.mrr = rr_sum / n;
    report.hit_at_5 = hit_sum / n;
    return report;
}

MetricsReport evaluate(const Graph& graph, std::span<const Conversation> conversations,
                       Model& model, RankMode mode, int budget, std::uint64_t seed, int horizon) {
    std::vector<std::pair<RankedAnswers, std::vector<EntityId>>> per_turn;
    Rng rng = Rng(seed).fork(21);
    for (const Conversation& conv : conversations) {
        Tape tape;
        for (std::size_t t = 0; t < conv.turns.size(); ++t) {
            ValueId query = encode_turn_query(tape, model, conv, t);
            TurnContext ctx = make_turn_context(tape, conv, t, query);
            RankedAnswers ranked = rank_answers(graph, ctx, model, mode, budget, rng, horizon);
            per_turn.emplace_back(std::move(ranked), ctx.golds);
        }
    }
    return compute_metrics(per_turn, 5);
}

std::string metrics_table(const MetricsReport& report) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3);
    out << "P@1    Hit@5  MRR    turns\n";
    out << report.p_at_1 << "  " << report.hit_at_5 << "  " << report.mrr << "  "
        << report.turns << "\n";
    return out.str();
}

std::string metrics_json(const MetricsReport& report) {
    nlohmann::ordered_json doc;
    doc["p_at_1"] = report.p_at_1;
    doc["hit_at_5"] = report.hit_at_5;
    doc["mrr"] = report.mrr;
    doc["turns"] = report.turns;
    return doc.dump();
}

} // namespace kgcwalk

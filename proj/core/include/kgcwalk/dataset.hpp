#pragma once

#include "kgcwalk/graph.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kgcwalk {

// One question/answer exchange. Entity and relation references are resolved
// against the graph when the turn is loaded or generated.
struct Turn {
    std::string question;
    std::string central_entity;
    std::vector<std::string> answers;
    std::optional<std::string> gold_relation;

    EntityId central_id = 0;
    std::vector<EntityId> answer_ids;
    std::optional<RelationId> gold_relation_id;
};

struct Conversation {
    std::string id;
    std::vector<Turn> turns;
};

// JSONL, one conversation per line:
//   {"id": str, "turns": [{"question": str, "central_entity": str,
//     "answers": [str, ...], "gold_relation": str|null}]}
std::vector<Conversation> load_conversations(std::istream& in, const Graph& graph);
std::vector<Conversation> load_conversations_file(const std::filesystem::path& path,
                                                  const Graph& graph);

std::string conversations_to_jsonl(const std::vector<Conversation>& conversations);
void save_conversations_file(const std::vector<Conversation>& conversations,
                             const std::filesystem::path& path);

struct GenConfig {
    int entities = 30;
    int relations = 6;
    double mean_out_degree = 3.0;
    int conversations = 200; // training conversations
    int test_conversations = 50;
    int turns_per_conversation = 5;
    int max_gold_path_len = 1;

    void validate() const; // throws on unsatisfiable settings
};

struct SyntheticData {
    std::shared_ptr<Graph> graph;
    std::string graph_tsv;
    std::vector<Conversation> train;
    std::vector<Conversation> test;
};

// Seeded generator for solvable multi-turn tasks: every turn's answers are
// the entities reachable from its central entity by the turn's gold relation
// sequence (length <= max_gold_path_len), each question mentions the gold
// relation names among distractor tokens, and each follow-up turn starts at
// the previous turn's answer. Byte-identical output per seed.
SyntheticData generate_synthetic(const GenConfig& config, std::uint64_t seed);

} // namespace kgcwalk

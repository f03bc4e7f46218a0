#include "kgcwalk/dataset.hpp"

#include "kgcwalk/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kgcwalk {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void turn_error(const std::string& conv_id, std::size_t turn_index,
                             const std::string& what) {
    std::ostringstream msg;
    msg << "conversation '" << conv_id << "' turn " << turn_index << ": " << what;
    throw std::runtime_error(msg.str());
}

void resolve_turn(Turn& turn, const std::string& conv_id, std::size_t turn_index,
                  const Graph& graph) {
    if (turn.question.find_first_not_of(" \t\r\n") == std::string::npos) {
        turn_error(conv_id, turn_index, "empty question");
    }
    if (turn.answers.empty()) {
        turn_error(conv_id, turn_index, "empty answers array");
    }
    auto central = graph.find_entity(turn.central_entity);
    if (!central) {
        turn_error(conv_id, turn_index, "unknown entity '" + turn.central_entity + "'");
    }
    turn.central_id = *central;
    turn.answer_ids.clear();
    for (const std::string& a : turn.answers) {
        auto id = graph.find_entity(a);
        if (!id) {
            turn_error(conv_id, turn_index, "unknown entity '" + a + "'");
        }
        turn.answer_ids.push_back(*id);
    }
    if (turn.gold_relation) {
        auto rel = graph.find_relation(*turn.gold_relation);
        if (!rel) {
            turn_error(conv_id, turn_index, "unknown relation '" + *turn.gold_relation + "'");
        }
        turn.gold_relation_id = *rel;
    }
}

} // namespace

std::vector<Conversation> load_conversations(std::istream& in, const Graph& graph) {
    std::vector<Conversation> conversations;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            std::ostringstream msg;
            msg << "line " << line_no << ": malformed JSON (" << e.what() << ")";
            throw std::runtime_error(msg.str());
        }
        try {
            Conversation conv;
            conv.id = doc.at("id").get<std::string>();
            for (const json& jt : doc.at("turns")) {
                Turn turn;
                turn.question = jt.at("question").get<std::string>();
                turn.central_entity = jt.at("central_entity").get<std::string>();
                for (const json& ja : jt.at("answers")) {
                    turn.answers.push_back(ja.get<std::string>());
                }
                if (jt.contains("gold_relation") && !jt.at("gold_relation").is_null()) {
                    turn.gold_relation = jt.at("gold_relation").get<std::string>();
                }
                resolve_turn(turn, conv.id, conv.turns.size(), graph);
                conv.turns.push_back(std::move(turn));
            }
            if (conv.turns.empty()) {
                throw std::runtime_error("conversation '" + conv.id + "' has no turns");
            }
            conversations.push_back(std::move(conv));
        } catch (const json::exception& e) {
            std::ostringstream msg;
            msg << "line " << line_no << ": bad conversation record (" << e.what() << ")";
            throw std::runtime_error(msg.str());
        }
    }
    return conversations;
}

std::vector<Conversation> load_conversations_file(const std::filesystem::path& path,
                                                  const Graph& graph) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open conversations file: " + path.string());
    }
    return load_conversations(in, graph);
}

std::string conversations_to_jsonl(const std::vector<Conversation>& conversations) {
    std::ostringstream out;
    for (const Conversation& conv : conversations) {
        json doc;
        doc["id"] = conv.id;
        json turns = json::array();
        for (const Turn& turn : conv.turns) {
            json jt;
            jt["question"] = turn.question;
            jt["central_entity"] = turn.central_entity;
            jt["answers"] = turn.answers;
            if (turn.gold_relation) {
                jt["gold_relation"] = *turn.gold_relation;
            } else {
                jt["gold_relation"] = nullptr;
            }
            turns.push_back(std::move(jt));
        }
        doc["turns"] = std::move(turns);
        out << doc.dump() << '\n';
    }
    return out.str();
}

void save_conversations_file(const std::vector<Conversation>& conversations,
                             const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open conversations file for writing: " + path.string());
    }
    out << conversations_to_jsonl(conversations);
}

void GenConfig::validate() const {
    if (entities < 2) throw std::runtime_error("generator config: need at least 2 entities");
    if (relations < 1) throw std::runtime_error("generator config: need at least 1 relation");
    if (mean_out_degree < 1.0) {
        throw std::runtime_error("generator config: mean out-degree must be >= 1");
    }
    if (mean_out_degree > static_cast<double>(entities - 1)) {
        throw std::runtime_error("generator config: mean out-degree exceeds entities-1");
    }
    if (conversations < 1) throw std::runtime_error("generator config: need >= 1 conversation");
    if (test_conversations < 0) {
        throw std::runtime_error("generator config: negative test conversation count");
    }
    if (turns_per_conversation < 1) {
        throw std::runtime_error("generator config: need >= 1 turn per conversation");
    }
    if (max_gold_path_len < 1) {
        throw std::runtime_error("generator config: max gold path length must be >= 1");
    }
}

namespace {

const std::vector<std::string>& noise_tokens() {
    static const std::vector<std::string> tokens = {
        "what", "which", "is", "the", "of", "please", "tell", "me",
        "about", "find", "show", "entity", "related", "via", "now",
    };
    return tokens;
}

// All entities reachable from `start` by following exactly the given
// relation sequence over non-self edges.
std::vector<EntityId> relation_sequence_targets(const Graph& graph, EntityId start,
                                                const std::vector<RelationId>& relations) {
    std::set<EntityId> frontier = {start};
    for (RelationId rel : relations) {
        std::set<EntityId> next;
        for (EntityId v : frontier) {
            for (const EdgeAction& a : graph.outgoing(v)) {
                if (a.relation == rel) next.insert(a.tail);
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return {frontier.begin(), frontier.end()};
}

std::string make_question(const std::vector<std::string>& relation_names, Rng& rng) {
    std::vector<std::string> tokens = relation_names;
    const std::size_t extra = 3 + rng.uniform_index(3);
    const auto& noise = noise_tokens();
    for (std::size_t i = 0; i < extra; ++i) {
        tokens.push_back(noise[rng.uniform_index(noise.size())]);
    }
    rng.shuffle(tokens);
    std::string q;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) q += ' ';
        q += tokens[i];
    }
    return q;
}

Conversation make_conversation(const Graph& graph, const GenConfig& config, std::string id,
                               Rng& rng) {
    Conversation conv;
    conv.id = std::move(id);
    EntityId central = static_cast<EntityId>(rng.uniform_index(graph.entity_count()));
    for (int t = 0; t < config.turns_per_conversation; ++t) {
        // Walk a gold path of non-self edges from the central entity.
        const int path_len = 1 + static_cast<int>(rng.uniform_index(
            static_cast<std::size_t>(config.max_gold_path_len)));
        std::vector<RelationId> gold_relations;
        EntityId node = central;
        for (int s = 0; s < path_len; ++s) {
            auto actions = graph.outgoing(node);
            std::vector<EdgeAction> non_self;
            for (const EdgeAction& a : actions) {
                if (a.relation != 0) non_self.push_back(a);
            }
            const EdgeAction& chosen = non_self[rng.uniform_index(non_self.size())];
            gold_relations.push_back(chosen.relation);
            node = chosen.tail;
        }

        Turn turn;
        turn.central_entity = graph.entity_name(central);
        turn.central_id = central;
        turn.answer_ids = relation_sequence_targets(graph, central, gold_relations);
        for (EntityId a : turn.answer_ids) turn.answers.push_back(graph.entity_name(a));
        std::vector<std::string> rel_names;
        for (RelationId r : gold_relations) rel_names.push_back(graph.relation_name(r));
        turn.gold_relation = rel_names.front();
        turn.gold_relation_id = gold_relations.front();
        turn.question = make_question(rel_names, rng);
        conv.turns.push_back(std::move(turn));

        central = node; // conversational continuity: next turn asks about the answer
    }
    return conv;
}

} // namespace

SyntheticData generate_synthetic(const GenConfig& config, std::uint64_t seed) {
    config.validate();

    Rng graph_rng = Rng(seed).fork(1);
    const int n = config.entities;

    // Every entity gets >= 1 outgoing non-self edge so follow-up turns always
    // have somewhere to go.
    std::ostringstream tsv;
    const int base_degree = static_cast<int>(config.mean_out_degree);
    const double frac = config.mean_out_degree - base_degree;
    for (int h = 0; h < n; ++h) {
        int degree = base_degree + (graph_rng.uniform() < frac ? 1 : 0);
        degree = std::clamp(degree, 1, n - 1);
        std::vector<int> targets;
        for (int t = 0; t < n; ++t) {
            if (t != h) targets.push_back(t);
        }
        graph_rng.shuffle(targets);
        for (int k = 0; k < degree; ++k) {
            const int rel = static_cast<int>(graph_rng.uniform_index(
                static_cast<std::size_t>(config.relations)));
            tsv << 'e' << h << "\tr" << rel << "\te" << targets[k] << '\n';
        }
    }

    SyntheticData data;
    data.graph_tsv = tsv.str();
    std::istringstream graph_in(data.graph_tsv);
    data.graph = std::make_shared<Graph>(Graph::load(graph_in));

    Rng train_rng = Rng(seed).fork(2);
    for (int c = 0; c < config.conversations; ++c) {
        std::ostringstream id;
        id << "train-" << c;
        data.train.push_back(make_conversation(*data.graph, config, id.str(), train_rng));
    }
    Rng test_rng = Rng(seed).fork(3);
    for (int c = 0; c < config.test_conversations; ++c) {
        std::ostringstream id;
        id << "test-" << c;
        data.test.push_back(make_conversation(*data.graph, config, id.str(), test_rng));
    }
    return data;
}

} // namespace kgcwalk

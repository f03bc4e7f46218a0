#include "kgcwalk/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kgcwalk {

EntityId Graph::intern_entity(const std::string& name) {
    auto it = entity_ids_.find(name);
    if (it != entity_ids_.end()) return it->second;
    const EntityId id = static_cast<EntityId>(entity_names_.size());
    entity_names_.push_back(name);
    entity_ids_.emplace(name, id);
    return id;
}

RelationId Graph::intern_relation(const std::string& name) {
    auto it = relation_ids_.find(name);
    if (it != relation_ids_.end()) return it->second;
    const RelationId id = static_cast<RelationId>(relation_names_.size());
    relation_names_.push_back(name);
    relation_ids_.emplace(name, id);
    return id;
}

Graph Graph::load(std::istream& in) {
    Graph g;
    g.intern_relation(std::string(kSelfLoopRelation)); // reserved id 0

    std::set<std::tuple<EntityId, RelationId, EntityId>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::size_t tab1 = line.find('\t');
        const std::size_t tab2 = tab1 == std::string::npos ? std::string::npos
                                                           : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos ||
            line.find('\t', tab2 + 1) != std::string::npos) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected 3 tab-separated fields";
            throw std::runtime_error(msg.str());
        }
        const std::string head = line.substr(0, tab1);
        const std::string relation = line.substr(tab1 + 1, tab2 - tab1 - 1);
        const std::string tail = line.substr(tab2 + 1);
        if (head.empty() || relation.empty() || tail.empty()) {
            std::ostringstream msg;
            msg << "line " << line_no << ": empty field";
            throw std::runtime_error(msg.str());
        }
        if (relation == kSelfLoopRelation) {
            std::ostringstream msg;
            msg << "line " << line_no << ": relation name '" << kSelfLoopRelation
                << "' is reserved";
            throw std::runtime_error(msg.str());
        }
        const EntityId h = g.intern_entity(head);
        const RelationId r = g.intern_relation(relation);
        const EntityId t = g.intern_entity(tail);
        if (!seen.emplace(h, r, t).second) continue; // exact duplicate line
        g.triples_.push_back(Triple{h, r, t, static_cast<EdgeId>(g.triples_.size())});
    }
    if (g.triples_.empty()) {
        throw std::runtime_error("graph has no triples");
    }
    g.file_triple_count_ = g.triples_.size();

    // One self-loop per entity, appended after all file triples.
    for (EntityId v = 0; v < g.entity_names_.size(); ++v) {
        g.triples_.push_back(Triple{v, 0, v, static_cast<EdgeId>(g.triples_.size())});
    }
    g.build_adjacency();
    return g;
}

Graph Graph::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open graph file: " + path.string());
    }
    return load(in);
}

void Graph::build_adjacency() {
    std::vector<std::vector<EdgeAction>> adj(entity_names_.size());
    for (const Triple& t : triples_) {
        adj[t.head].push_back(EdgeAction{t.relation, t.edge, t.tail});
    }
    action_offsets_.assign(entity_names_.size() + 1, 0);
    actions_.clear();
    actions_.reserve(triples_.size());
    for (EntityId v = 0; v < adj.size(); ++v) {
        std::sort(adj[v].begin(), adj[v].end(), [](const EdgeAction& a, const EdgeAction& b) {
            if (a.relation != b.relation) return a.relation < b.relation;
            return a.tail < b.tail;
        });
        action_offsets_[v] = actions_.size();
        actions_.insert(actions_.end(), adj[v].begin(), adj[v].end());
    }
    action_offsets_[adj.size()] = actions_.size();
}

std::span<const EdgeAction> Graph::outgoing(EntityId entity) const {
    if (entity >= entity_names_.size()) {
        std::ostringstream msg;
        msg << "unknown entity id " << entity;
        throw std::out_of_range(msg.str());
    }
    const std::size_t begin = action_offsets_[entity];
    const std::size_t end = action_offsets_[entity + 1];
    return {actions_.data() + begin, end - begin};
}

std::optional<EntityId> Graph::find_entity(std::string_view name) const {
    auto it = entity_ids_.find(std::string(name));
    if (it == entity_ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& Graph::entity_name(EntityId id) const {
    if (id >= entity_names_.size()) {
        throw std::out_of_range("unknown entity id");
    }
    return entity_names_[id];
}

std::optional<RelationId> Graph::find_relation(std::string_view name) const {
    auto it = relation_ids_.find(std::string(name));
    if (it == relation_ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& Graph::relation_name(RelationId id) const {
    if (id >= relation_names_.size()) {
        throw std::out_of_range("unknown relation id");
    }
    return relation_names_[id];
}

void Graph::save_tsv(std::ostream& out) const {
    for (std::size_t i = 0; i < file_triple_count_; ++i) {
        const Triple& t = triples_[i];
        out << entity_names_[t.head] << '\t' << relation_names_[t.relation] << '\t'
            << entity_names_[t.tail] << '\n';
    }
}

void Graph::save_tsv_file(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open graph file for writing: " + path.string());
    }
    save_tsv(out);
}

std::string Graph::stats_text() const {
    std::ostringstream out;
    out << "entities: " << entity_count() << "\n"
        << "relations: " << relation_count() << " (including " << kSelfLoopRelation << ")\n"
        << "triples: " << triple_count() << " (" << file_triple_count_ << " from input, "
        << entity_count() << " self-loops)\n";
    return out.str();
}

} // namespace kgcwalk

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgcwalk {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;
using EdgeId = std::uint32_t;

// One outgoing edge usable as an agent action.
struct EdgeAction {
    RelationId relation;
    EdgeId edge;
    EntityId tail;

    friend bool operator==(const EdgeAction&, const EdgeAction&) = default;
};

struct Triple {
    EntityId head;
    RelationId relation;
    EntityId tail;
    EdgeId edge;
};

// Immutable triple store. Entities and relations are interned in
// first-appearance order; relation id 0 is the reserved self-loop relation,
// and exactly one self-loop edge per entity is appended after all file
// triples so every entity has at least one outgoing action. Adjacency lists
// are sorted by (relation, tail) ascending. Safe for unrestricted concurrent
// reads after construction.
class Graph {
public:
    static constexpr std::string_view kSelfLoopRelation = "__self__";

    // Parses TSV lines `head<TAB>relation<TAB>tail`. Exact duplicate triples
    // are kept once. Throws on malformed lines (with the line number) and on
    // an input with no triples.
    static Graph load(std::istream& in);
    static Graph load_file(const std::filesystem::path& path);

    std::size_t entity_count() const { return entity_names_.size(); }
    std::size_t relation_count() const { return relation_names_.size(); }
    std::size_t triple_count() const { return triples_.size(); }
    std::size_t file_triple_count() const { return file_triple_count_; }

    const std::vector<Triple>& triples() const { return triples_; }

    // Sorted outgoing actions, always containing exactly one self-loop.
    std::span<const EdgeAction> outgoing(EntityId entity) const;

    std::optional<EntityId> find_entity(std::string_view name) const;
    const std::string& entity_name(EntityId id) const;
    std::optional<RelationId> find_relation(std::string_view name) const;
    const std::string& relation_name(RelationId id) const;

    // Writes the file triples (self-loops excluded) back out in edge order;
    // reloading reproduces identical id assignments.
    void save_tsv(std::ostream& out) const;
    void save_tsv_file(const std::filesystem::path& path) const;

    std::string stats_text() const;

private:
    Graph() = default;

    EntityId intern_entity(const std::string& name);
    RelationId intern_relation(const std::string& name);
    void build_adjacency();

    std::vector<std::string> entity_names_;
    std::vector<std::string> relation_names_;
    std::unordered_map<std::string, EntityId> entity_ids_;
    std::unordered_map<std::string, RelationId> relation_ids_;
    std::vector<Triple> triples_;
    std::size_t file_triple_count_ = 0;

    // CSR adjacency: actions_ holds each entity's sorted actions contiguously.
    std::vector<EdgeAction> actions_;
    std::vector<std::size_t> action_offsets_;
};

} // namespace kgcwalk

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgcwalk/graph.hpp"

#include <sstream>

using namespace kgcwalk;

namespace {

Graph tiny_graph() {
    std::istringstream in("A\tr\tB\nB\tr\tC\nA\ts\tC\n");
    return Graph::load(in);
}

} // namespace

TEST_CASE("load interns in first-appearance order and appends self-loops") {
    Graph g = tiny_graph();
    CHECK(g.entity_count() == 3);
    CHECK(g.relation_count() == 3); // __self__, r, s
    CHECK(g.triple_count() == 6);   // 3 file + 3 self-loops
    CHECK(g.file_triple_count() == 3);

    CHECK(g.find_entity("A") == EntityId{0});
    CHECK(g.find_entity("B") == EntityId{1});
    CHECK(g.find_entity("C") == EntityId{2});
    CHECK(g.relation_name(0) == Graph::kSelfLoopRelation);
    CHECK(g.find_relation("r") == RelationId{1});
    CHECK(g.find_relation("s") == RelationId{2});
}

TEST_CASE("duplicate lines are kept once") {
    std::istringstream in("A\tr\tB\nA\tr\tB\n");
    Graph g = Graph::load(in);
    CHECK(g.file_triple_count() == 1);
    CHECK(g.triple_count() == 1 + 2); // plus one self-loop per entity
}

TEST_CASE("malformed line errors carry the line number") {
    std::istringstream in("A\tr\tB\nB\tr\tC\nA\tr\tB\nB\ts\tA\nC\tr\tA\nA\ts\tB\nBAD\tline\n");
    CHECK_THROWS_WITH_AS(Graph::load(in), doctest::Contains("line 7"), std::runtime_error);
}

TEST_CASE("empty input is rejected") {
    std::istringstream in("");
    CHECK_THROWS_WITH_AS(Graph::load(in), "graph has no triples", std::runtime_error);
}

TEST_CASE("reserved relation name is rejected") {
    std::istringstream in("A\t__self__\tA\n");
    CHECK_THROWS_WITH_AS(Graph::load(in), doctest::Contains("reserved"), std::runtime_error);
}

TEST_CASE("outgoing: isolated tail entity has exactly the self-loop") {
    std::istringstream in("A\tr\tB\n");
    Graph g = Graph::load(in);
    auto actions = g.outgoing(*g.find_entity("B"));
    REQUIRE(actions.size() == 1);
    CHECK(actions[0].relation == 0);
    CHECK(actions[0].tail == *g.find_entity("B"));
}

TEST_CASE("outgoing: sorted adjacency with one self-loop first") {
    Graph g = tiny_graph();
    auto actions = g.outgoing(*g.find_entity("A"));
    REQUIRE(actions.size() == 3);
    // Sorted by (relation, tail): self-loop (relation 0), then r->B, then s->C.
    CHECK(actions[0].relation == 0);
    CHECK(actions[0].tail == *g.find_entity("A"));
    CHECK(actions[1].relation == *g.find_relation("r"));
    CHECK(actions[1].tail == *g.find_entity("B"));
    CHECK(actions[2].relation == *g.find_relation("s"));
    CHECK(actions[2].tail == *g.find_entity("C"));

    // Order stability: a second call returns the identical sequence.
    auto again = g.outgoing(*g.find_entity("A"));
    REQUIRE(again.size() == actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) {
        CHECK(again[i] == actions[i]);
    }
}

TEST_CASE("outgoing rejects unknown entity ids") {
    Graph g = tiny_graph();
    CHECK_THROWS_AS(g.outgoing(99), std::out_of_range);
}

TEST_CASE("entity lookup round-trips and distinguishes not-found") {
    Graph g = tiny_graph();
    auto id = g.find_entity("A");
    REQUIRE(id.has_value());
    CHECK(g.entity_name(*id) == "A");
    CHECK_FALSE(g.find_entity("Z").has_value());
}

TEST_CASE("every entity has a non-empty action list and each edge appears once") {
    std::istringstream in("A\tr\tB\nB\tr\tC\nC\tt\tD\nD\tr\tA\nA\ts\tC\nE\tr\tA\n");
    Graph g = Graph::load(in);
    std::size_t total = 0;
    for (EntityId v = 0; v < g.entity_count(); ++v) {
        auto actions = g.outgoing(v);
        CHECK(!actions.empty());
        std::size_t self_loops = 0;
        for (const EdgeAction& a : actions) {
            if (a.relation == 0) ++self_loops;
        }
        CHECK(self_loops == 1);
        total += actions.size();
    }
    CHECK(total == g.triple_count());
}

TEST_CASE("save/load round-trip preserves id assignments") {
    Graph g = tiny_graph();
    std::ostringstream out;
    g.save_tsv(out);
    std::istringstream in(out.str());
    Graph g2 = Graph::load(in);
    CHECK(g2.entity_count() == g.entity_count());
    CHECK(g2.relation_count() == g.relation_count());
    CHECK(g2.triple_count() == g.triple_count());
    for (EntityId v = 0; v < g.entity_count(); ++v) {
        CHECK(g2.entity_name(v) == g.entity_name(v));
    }
    for (RelationId r = 0; r < g.relation_count(); ++r) {
        CHECK(g2.relation_name(r) == g.relation_name(r));
    }
}

TEST_CASE("stats text reports counts") {
    Graph g = tiny_graph();
    const std::string stats = g.stats_text();
    CHECK(stats.find("entities: 3") != std::string::npos);
    CHECK(stats.find("relations: 3") != std::string::npos);
    CHECK(stats.find("triples: 6") != std::string::npos);
}

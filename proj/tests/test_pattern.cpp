#include <gtest/gtest.h>

#include <random>

#include "ekg/pattern/evaluator.hpp"
#include "ekg/pattern/explain.hpp"
#include "ekg/pattern/parser.hpp"
#include "ekg/pattern/printer.hpp"
#include "ekg/query.hpp"
#include "support/fixtures.hpp"
#include "support/pattern_gen.hpp"

using namespace ekg;
using namespace ekg::pattern;

namespace {

TEST(PatternParser, SmallestQuery) {
    auto ast = parse("MATCH (e:Event {Activity: 'Create Offer'}) RETURN e");
    ASSERT_EQ(ast.matches.size(), 1u);
    EXPECT_TRUE(ast.where.empty());
    ASSERT_EQ(ast.returns.size(), 1u);
    EXPECT_EQ(ast.returns[0].var, "e");
    const NodePattern& np = ast.matches[0].nodes[0];
    EXPECT_EQ(np.var, "e");
    EXPECT_EQ(np.label, "Event");
    ASSERT_EQ(np.props.size(), 1u);
    EXPECT_EQ(np.props[0].key, "Activity");
    EXPECT_EQ(np.props[0].value, PropertyValue("Create Offer"));
}

TEST(PatternParser, EventuallyFollowsShape) {
    auto ast = parse(
        "MATCH (o:Entity {EntityType: 'Offer'}) <-[:E_EN]- (e1:Event) -[:DF*]-> (e2:Event) "
        "WHERE o.ID = 'Offer_716078829' AND e1.Activity = 'O_Created' "
        "AND e2.Activity = 'O_Cancelled' RETURN e1, e2");
    ASSERT_EQ(ast.matches.size(), 1u);
    const PathPattern& p = ast.matches[0];
    ASSERT_EQ(p.rels.size(), 2u);
    EXPECT_FALSE(p.rels[0].leftToRight);
    EXPECT_EQ(p.rels[0].relType, "E_EN");
    EXPECT_TRUE(p.rels[1].leftToRight);
    EXPECT_EQ(p.rels[1].relType, "DF");
    // Bare * means 1..unbounded.
    ASSERT_TRUE(p.rels[1].varLength.has_value());
    EXPECT_EQ(p.rels[1].varLength->min, 1u);
    EXPECT_FALSE(p.rels[1].varLength->max.has_value());
    EXPECT_EQ(ast.where.size(), 3u);
    EXPECT_EQ(ast.returns.size(), 2u);
}

TEST(PatternParser, BoundsAndMaps) {
    auto ast = parse("MATCH (a)-[r:DF*2..4 {EntityType: 'Offer', w: 3}]->(b) RETURN a, b, r");
    const RelPattern& rp = ast.matches[0].rels[0];
    EXPECT_EQ(rp.var, "r");
    ASSERT_TRUE(rp.varLength.has_value());
    EXPECT_EQ(rp.varLength->min, 2u);
    EXPECT_EQ(rp.varLength->max, 4u);
    ASSERT_EQ(rp.props.size(), 2u);
    EXPECT_EQ(rp.props[1].value, PropertyValue(std::int64_t{3}));
}

TEST(PatternParser, SyntaxErrorsCarryPosition) {
    try {
        parse("MATCH (e:Event RETURN e");
        FAIL() << "expected SyntaxError";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line, 1u);
        EXPECT_EQ(e.column, 16u);  // at RETURN, where ')' was expected
        EXPECT_TRUE(e.expected.count("')'") || e.expected.count("'{'"));
    }

    EXPECT_THROW(parse(""), SyntaxError);
    EXPECT_THROW(parse("MATCH (e) RETURN"), SyntaxError);
    EXPECT_THROW(parse("MATCH (e) RETURN e LIMIT 0"), SyntaxError);
    EXPECT_THROW(parse("MATCH (e) RETURN e extra"), SyntaxError);
    EXPECT_THROW(parse("MATCH (a)-[:DF*4..2]->(b) RETURN a"), SyntaxError);
    EXPECT_THROW(parse("MATCH (e {k: 'open) RETURN e"), SyntaxError);
}

TEST(PatternParser, KeywordsCaseInsensitive) {
    auto ast = parse("match (e:Event) return e limit 1");
    EXPECT_EQ(ast.limit, 1u);
}

class PatternOnFixture : public ::testing::Test {
protected:
    static void SetUpTestSuite() { graph_ = new LabeledPropertyGraph(ekgtest::build_fixture_graph()); }
    static void TearDownTestSuite() { delete graph_; graph_ = nullptr; }
    const LabeledPropertyGraph& g() { return *graph_; }
    static LabeledPropertyGraph* graph_;
};
LabeledPropertyGraph* PatternOnFixture::graph_ = nullptr;

TEST_F(PatternOnFixture, DirectlyFollowsQuery) {
    auto table = evaluate(g(), parse("MATCH (e1:Event) -[:DF {EntityType: 'Offer'}]-> (e2:Event) "
                                     "WHERE e1.Activity = 'Create Offer' RETURN e1, e2"));
    ASSERT_EQ(table.rows.size(), 2u);
    std::set<std::pair<std::uint64_t, std::uint64_t>> got;
    for (const auto& row : table.rows) got.emplace(row[0].node.value, row[1].node.value);
    std::set<std::pair<std::uint64_t, std::uint64_t>> expected;
    for (auto& [a, b] : directly_follows_pairs(g(), "Offer", "Create Offer", std::nullopt))
        expected.emplace(a.value, b.value);
    EXPECT_EQ(got, expected);
}

TEST_F(PatternOnFixture, EventuallyFollowsQuery) {
    auto table = evaluate(
        g(), parse("MATCH (n:Entity {EntityType: 'Offer'}) <-[:E_EN]- (e1:Event) "
                   "-[:DF* {EntityType: 'Offer'}]-> (e2:Event) "
                   "WHERE e1.Activity = 'Create Offer' AND e2.Activity = 'Offer Returned' "
                   "RETURN e1, e2"));
    ASSERT_EQ(table.rows.size(), 1u);
    EXPECT_EQ(table.rows[0][0].node.value, 5u);
    EXPECT_EQ(table.rows[0][1].node.value, 9u);

    auto primitive = eventually_follows(g(), "Offer", "Create Offer", "Offer Returned");
    ASSERT_EQ(primitive.size(), 1u);
    EXPECT_EQ(primitive[0].events.front(), table.rows[0][0].node);
    EXPECT_EQ(primitive[0].events.back(), table.rows[0][1].node);
}

TEST_F(PatternOnFixture, EventsOfEntityQuery) {
    auto table = evaluate(g(), parse("MATCH (n:Entity {EntityType: 'Case', ID: '1'}) "
                                     "<-[:E_EN]- (e:Event) WHERE e.Activity = 'Create Appl.' "
                                     "RETURN e, e.Activity"));
    ASSERT_EQ(table.rows.size(), 1u);
    EXPECT_EQ(table.rows[0][0].node.value, 1u);
    EXPECT_EQ(table.rows[0][1].value, PropertyValue("Create Appl."));
    auto primitive =
        events_of_entity(g(), "Case1", {{prop::Activity, Cmp::Eq, PropertyValue("Create Appl.")}});
    ASSERT_EQ(primitive.size(), 1u);
    EXPECT_EQ(primitive[0], table.rows[0][0].node);
}

TEST_F(PatternOnFixture, LimitTakesSmallestBinding) {
    auto all = evaluate(g(), parse("MATCH (e:Event) RETURN e"));
    ASSERT_EQ(all.rows.size(), 10u);
    auto limited = evaluate(g(), parse("MATCH (e:Event) RETURN e LIMIT 1"));
    ASSERT_EQ(limited.rows.size(), 1u);
    EXPECT_EQ(limited.rows[0][0].node.value, 1u);
}

TEST_F(PatternOnFixture, ClauseOrderDoesNotChangeResults) {
    auto a = evaluate(g(), parse("MATCH (o:Entity {EntityType: 'Offer'}) <-[:E_EN]- (e:Event) "
                                 "MATCH (e) -[:DF {EntityType: 'Offer'}]-> (f:Event) "
                                 "RETURN o, e, f"));
    auto b = evaluate(g(), parse("MATCH (e) -[:DF {EntityType: 'Offer'}]-> (f:Event) "
                                 "MATCH (o:Entity {EntityType: 'Offer'}) <-[:E_EN]- (e:Event) "
                                 "RETURN o, e, f"));
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        for (std::size_t c = 0; c < a.columns.size(); ++c)
            EXPECT_EQ(a.rows[i][c].node, b.rows[i][c].node);
}

TEST_F(PatternOnFixture, RelationshipUniquenessAcrossClauses) {
    // Two single-hop clauses can never bind the same relationship twice.
    LabeledPropertyGraph h;
    NodeRef a = h.add_node({"Event"}, {});
    NodeRef b = h.add_node({"Event"}, {});
    NodeRef c = h.add_node({"Event"}, {});
    h.add_relationship(a, b, "DF", {});
    h.add_relationship(b, c, "DF", {});
    auto table = evaluate(h, parse("MATCH (x)-[r1:DF]->(y) MATCH (z)-[r2:DF]->(w) "
                                   "RETURN r1, r2"));
    // Two edges, ordered pairs of distinct edges: 2 rows, not 4.
    ASSERT_EQ(table.rows.size(), 2u);
    for (const auto& row : table.rows) EXPECT_NE(row[0].relref, row[1].relref);
}

TEST_F(PatternOnFixture, NoRowReusesARelationship) {
    auto table = evaluate(g(), parse("MATCH (a:Event)-[r1:DF]->(b:Event)-[r2:DF]->(c:Event) "
                                     "RETURN r1, r2"));
    for (const auto& row : table.rows) EXPECT_NE(row[0].relref, row[1].relref);
}

TEST_F(PatternOnFixture, UnboundVariableRejected) {
    EXPECT_THROW(evaluate(g(), parse("MATCH (e:Event) RETURN f")), UnboundVariable);
    EXPECT_THROW(evaluate(g(), parse("MATCH (e:Event) WHERE f.Activity = 'x' RETURN e")),
                 UnboundVariable);
}

TEST_F(PatternOnFixture, VarLengthOverflowReported) {
    EvalOptions opts;
    opts.varLengthCap = 2;
    // The case chain has length 9; an unbounded * hits the cap.
    EXPECT_THROW(evaluate(g(), parse("MATCH (a:Event)-[:DF* {EntityType: 'Case'}]->(b:Event) "
                                     "RETURN a, b"),
                         opts),
                 VarLengthOverflow);
    // Bounded expansions below the cap are fine.
    auto table = evaluate(g(), parse("MATCH (a:Event)-[:DF*1..2 {EntityType: 'Case'}]->(b:Event) "
                                     "RETURN a, b"),
                          opts);
    EXPECT_EQ(table.rows.size(), 17u);  // 9 single hops + 8 two-hop paths
    // Explicit bounds beyond the cap overflow too.
    EXPECT_THROW(evaluate(g(), parse("MATCH (a:Event)-[:DF*1..5 {EntityType: 'Case'}]->(b:Event) "
                                     "RETURN a, b"),
                         opts),
                 VarLengthOverflow);
}

TEST_F(PatternOnFixture, CsvAndTextRendering) {
    auto table = evaluate(g(), parse("MATCH (e:Event {Activity: 'Send Offer'}) "
                                     "RETURN e, e.Activity LIMIT 1"));
    std::string csv = table.to_csv();
    EXPECT_EQ(csv, "e,e.Activity\n#6,Send Offer\n");
    std::string text = table.to_text();
    EXPECT_NE(text.find("e.Activity"), std::string::npos);
    EXPECT_NE(text.find("#6"), std::string::npos);
}

TEST_F(PatternOnFixture, Explain) {
    auto plan1 = explain(parse("MATCH (e:Event {Activity: 'Send Offer'}) RETURN e"),
                         g().index_defs());
    EXPECT_NE(plan1.find("index seek (Event.Activity)"), std::string::npos);

    auto plan2 = explain(parse("MATCH (x) RETURN x"), g().index_defs());
    EXPECT_NE(plan2.find("full scan (warning: no label)"), std::string::npos);

    auto plan3 = explain(parse("MATCH (o:Entity) <-[:E_EN]- (e:Event) "
                               "MATCH (e) -[:DF]-> (f:Event) RETURN o, f"),
                         g().index_defs());
    EXPECT_NE(plan3.find("join on e"), std::string::npos);

    // Pure function of AST and index catalog.
    EXPECT_EQ(plan3, explain(parse("MATCH (o:Entity) <-[:E_EN]- (e:Event) "
                                   "MATCH (e) -[:DF]-> (f:Event) RETURN o, f"),
                             g().index_defs()));
}

// ---- round-trip property ----

TEST(PatternRoundTrip, PrintParsePrintIsStable) {
    std::mt19937 rng(20250810);
    for (int i = 0; i < 300; ++i) {
        PatternAST ast = ekgtest::random_pattern_ast(rng);
        std::string text = print(ast);
        PatternAST reparsed;
        try {
            reparsed = parse(text);
        } catch (const SyntaxError& e) {
            FAIL() << "iteration " << i << ": " << e.what() << "\n" << text;
        }
        EXPECT_EQ(reparsed, ast) << "iteration " << i << ": " << text;
        EXPECT_EQ(print(reparsed), text);
    }
}

}  // namespace

#include <gtest/gtest.h>

#include "sepx/edit.hpp"
#include "sepx/ged.hpp"
#include "support.hpp"

using namespace sepx;
using testing_support::random_graph;

TEST(Edits, FiveKindsFromAlignment) {
  const AaMatrix a = AaMatrix::from_rows({{1, 1, 0}, {0, 2, 0}, {0, 0, 0}});
  const AaMatrix b = AaMatrix::from_rows({{0, 0, 0}, {0, 3, 1}, {0, 0, 2}});
  const auto ops = edits_from_alignment(a, b);
  ASSERT_EQ(ops.size(), 5u);
  EXPECT_EQ(std::get<DeleteVertex>(ops[0]).position, 0);
  EXPECT_EQ(std::get<SubstituteAttr>(ops[1]), (SubstituteAttr{1, 3}));
  EXPECT_EQ(std::get<AddVertex>(ops[2]), (AddVertex{2, 2}));
  EXPECT_EQ(std::get<DeleteEdge>(ops[3]), (DeleteEdge{0, 1}));
  EXPECT_EQ(std::get<AddEdge>(ops[4]), (AddEdge{1, 2}));
}

TEST(Edits, ApplyRejectsBadEdits) {
  AaMatrix m(2);
  EXPECT_THROW(apply_edit(m, AddVertex{2, 1}), InputError);
  EXPECT_THROW(apply_edit(m, AddVertex{0, 0}), InputError);
  EXPECT_THROW(apply_edit(m, AddEdge{1, 1}), InputError);
  EXPECT_THROW(apply_edit(m, DeleteEdge{0, -1}), InputError);
}

TEST(Edits, RoundTripReachesSecondGraph) {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    const AttributedGraph a = random_graph(rng, 6), b = random_graph(rng, 6);
    const GedResult r = ged_exact(a, b);
    const AttributedGraph c = apply_edits(extend_with_nulls(a, r.alignment.size()), r.edits);
    EXPECT_EQ(ged_distance(c, b), 0);
    EXPECT_EQ(static_cast<int>(r.edits.size()), r.distance);
  }
}

TEST(Edits, Json) {
  EXPECT_EQ(edit_to_json(AddVertex{1, 4}).dump(), R"({"attribute":4,"op":"add_vertex","position":1})");
  EXPECT_EQ(edit_to_json(DeleteEdge{0, 2}).dump(), R"({"from":0,"op":"delete_edge","to":2})");
}

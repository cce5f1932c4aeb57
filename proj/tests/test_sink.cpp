#include <gtest/gtest.h>

#include "cardimax/sink.hpp"
#include "cardimax/solver.hpp"

using namespace cardimax;

static_assert(ClauseSink<RecordingSink>);
static_assert(ClauseSink<Solver>);
static_assert(ClauseSink<BlockingSink<RecordingSink>>);
static_assert(ClauseSink<CountingSink<Solver>>);

TEST(RecordingSink, AllocatesAfterInitialVars) {
  RecordingSink s(4);
  EXPECT_EQ(s.new_var(), Var{5});
  EXPECT_EQ(s.new_var(), Var{6});
  EXPECT_EQ(s.num_vars(), 6u);
}

TEST(RecordingSink, KeepsEmissionOrderAndTakeEmpties) {
  RecordingSink s(2);
  s.add_clause({Lit::from_dimacs(2)});
  s.add_clause({Lit::from_dimacs(-1), Lit::from_dimacs(2)});
  ASSERT_EQ(s.clauses().size(), 2u);
  EXPECT_EQ(s.clauses()[1], (Clause{Lit::from_dimacs(-1), Lit::from_dimacs(2)}));
  auto taken = s.take();
  EXPECT_EQ(taken.size(), 2u);
  EXPECT_TRUE(s.clauses().empty());
}

TEST(BlockingSink, AppendsBlocker) {
  RecordingSink inner(3);
  BlockingSink b(inner, Lit::from_dimacs(3));
  Clause c{Lit::from_dimacs(1), Lit::from_dimacs(-2)};
  b.add_clause(c);
  EXPECT_EQ(b.new_var(), Var{4});
  ASSERT_EQ(inner.clauses().size(), 1u);
  EXPECT_EQ(inner.clauses()[0], (Clause{Lit::from_dimacs(1), Lit::from_dimacs(-2), Lit::from_dimacs(3)}));
}

TEST(CountingSink, CountsForwardedClauses) {
  RecordingSink inner(1);
  CountingSink c(inner);
  Clause u{Lit::from_dimacs(1)};
  c.add_clause(u);
  c.add_clause(u);
  EXPECT_EQ(c.count(), 2u);
  EXPECT_EQ(inner.clauses().size(), 2u);
}

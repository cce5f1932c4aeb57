#include <gtest/gtest.h>

#include "cardimax/generator.hpp"
#include "cardimax/wcnf.hpp"

using namespace cardimax;

namespace {

Lit L(long long v) { return Lit::from_dimacs(v); }

ParseErrorKind kind_of(std::string_view text) {
  try {
    parse_wcnf(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no parse error for: " << text;
  return ParseErrorKind::BadToken;
}

std::size_t line_of(std::string_view text) {
  try {
    parse_wcnf(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

} // namespace

TEST(ParseWcnf, SmallExample) {
  auto doc = parse_wcnf("p wcnf 2 3 10\n10 1 2 0\n1 -1 0\n1 -2 0\n");
  EXPECT_EQ(doc.declared_vars, 2u);
  EXPECT_EQ(doc.declared_clauses, 3u);
  EXPECT_EQ(doc.top, 10u);
  EXPECT_EQ(doc.instance.hard, (std::vector<Clause>{{L(1), L(2)}}));
  EXPECT_EQ(doc.instance.soft, (std::vector<Clause>{{L(-1)}, {L(-2)}}));
  EXPECT_EQ(doc.soft_lines, (std::vector<std::size_t>{3, 4}));
}

TEST(ParseWcnf, CommentsBlankLinesAndCrlf) {
  auto doc = parse_wcnf("c hello\r\n\r\np wcnf 3 2 5\r\nc mid\r\n5 1 -3 0\r\n1 2 0\r\n");
  EXPECT_EQ(doc.header_line, 3u);
  EXPECT_EQ(doc.instance.hard.size(), 1u);
  EXPECT_EQ(doc.instance.soft.size(), 1u);
}

TEST(ParseWcnf, EmptyClauseIsAllowed) {
  auto doc = parse_wcnf("p wcnf 1 1 2\n2 0\n");
  ASSERT_EQ(doc.instance.hard.size(), 1u);
  EXPECT_TRUE(doc.instance.hard[0].empty());
}

TEST(ParseWcnf, MissingHeaderAtLineOne) {
  EXPECT_EQ(kind_of("1 1 0\n"), ParseErrorKind::MissingHeader);
  EXPECT_EQ(line_of("1 1 0\n"), 1u);
  EXPECT_EQ(kind_of(""), ParseErrorKind::MissingHeader);
  EXPECT_EQ(line_of(""), 1u);
}

TEST(ParseWcnf, DuplicateHeader) {
  EXPECT_EQ(kind_of("p wcnf 1 0 2\np wcnf 1 0 2\n"), ParseErrorKind::DuplicateHeader);
  EXPECT_EQ(line_of("p wcnf 1 0 2\np wcnf 1 0 2\n"), 2u);
}

TEST(ParseWcnf, MalformedHeaders) {
  EXPECT_EQ(kind_of("p cnf 1 1\n1 0\n"), ParseErrorKind::MalformedHeader);
  EXPECT_EQ(kind_of("p wcnf 1 1\n1 1 0\n"), ParseErrorKind::MalformedHeader);
  EXPECT_EQ(kind_of("p wcnf x 1 2\n"), ParseErrorKind::MalformedHeader);
  EXPECT_EQ(kind_of("p wcnf 1 1 0\n"), ParseErrorKind::MalformedHeader);
}

TEST(ParseWcnf, WeightedSoftIsRejected) {
  try {
    parse_wcnf("p wcnf 1 1 10\n5 1 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::UnsupportedWeight);
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("weighted soft unsupported"), std::string::npos);
  }
}

TEST(ParseWcnf, BadTokens) {
  EXPECT_EQ(kind_of("p wcnf 2 1 3\n1 x 0\n"), ParseErrorKind::BadToken);
  EXPECT_EQ(kind_of("p wcnf 2 1 3\nw 1 0\n"), ParseErrorKind::BadToken);
  EXPECT_EQ(kind_of("p wcnf 2 1 3\n1 1 0 2\n"), ParseErrorKind::BadToken);
}

TEST(ParseWcnf, VariableOutOfRange) {
  EXPECT_EQ(kind_of("p wcnf 2 1 3\n1 -3 0\n"), ParseErrorKind::VarOutOfRange);
}

TEST(ParseWcnf, UnterminatedClause) {
  EXPECT_EQ(kind_of("p wcnf 2 1 3\n1 1 2\n"), ParseErrorKind::UnterminatedClause);
  EXPECT_EQ(line_of("p wcnf 2 1 3\n1 1 2\n"), 2u);
}

TEST(ParseWcnf, ClauseCountMismatch) {
  EXPECT_EQ(kind_of("p wcnf 2 2 3\n1 1 0\n"), ParseErrorKind::CountMismatch);
}

TEST(ParseWcnf, MessageCarriesLineNumber) {
  try {
    parse_wcnf("p wcnf 2 1 3\n\n1 9 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 3: ", 0), 0u);
  }
}

TEST(RenderWcnf, HardFirstWithDefaultTop) {
  WcnfInstance inst;
  inst.num_vars = 2;
  inst.hard = {{L(1), L(2)}};
  inst.soft = {{L(-1)}, {L(-2)}};
  EXPECT_EQ(render_wcnf(inst), "p wcnf 2 3 3\n3 1 2 0\n1 -1 0\n1 -2 0\n");
  EXPECT_EQ(render_wcnf(inst, 10), "p wcnf 2 3 10\n10 1 2 0\n1 -1 0\n1 -2 0\n");
  WcnfInstance none;
  EXPECT_EQ(render_wcnf(none), "p wcnf 0 0 2\n");
}

TEST(RenderWcnf, RoundTripsGeneratedInstances) {
  for (auto& g : generate_instances(99, Profile::Tiny, 200))
    ASSERT_EQ(parse_wcnf(render_wcnf(g.instance)).instance, g.instance) << g.name;
  for (auto& g : generate_instances(99, Profile::Medium, 5))
    ASSERT_EQ(parse_wcnf(render_wcnf(g.instance)).instance, g.instance) << g.name;
}

#pragma once

// DIMACS WCNF ("p wcnf <vars> <clauses> <top>") reading and writing, limited
// to partial MaxSAT: every clause weighs either `top` (hard) or 1 (soft).

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cardimax/types.hpp"

namespace cardimax {

enum class ParseErrorKind {
  MissingHeader,
  DuplicateHeader,
  MalformedHeader,
  BadToken,
  UnsupportedWeight,
  VarOutOfRange,
  UnterminatedClause,
  CountMismatch,
};

class ParseError : public std::runtime_error {
public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

private:
  ParseErrorKind kind_;
  std::size_t line_;
};

struct WcnfDocument {
  std::uint32_t declared_vars = 0;
  std::size_t declared_clauses = 0;
  std::uint64_t top = 0;
  WcnfInstance instance;
  std::size_t header_line = 0;
  std::vector<std::size_t> soft_lines; // source line of each soft clause
};

namespace detail {

inline std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t')
      ++j;
    if (j > i)
      out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class Int>
bool parse_int(std::string_view tok, Int& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

} // namespace detail

inline WcnfDocument parse_wcnf(std::string_view text) {
  WcnfDocument doc;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t clauses_seen = 0;

  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);

    auto tokens = detail::split_tokens(line);
    if (tokens.empty() || tokens[0][0] == 'c')
      continue;

    if (tokens[0] == "p") {
      if (have_header)
        throw ParseError(ParseErrorKind::DuplicateHeader, line_no, "duplicate problem line");
      if (tokens.size() != 5 || tokens[1] != "wcnf")
        throw ParseError(ParseErrorKind::MalformedHeader, line_no, "expected 'p wcnf <vars> <clauses> <top>'");
      if (!detail::parse_int(tokens[2], doc.declared_vars) || !detail::parse_int(tokens[3], doc.declared_clauses) ||
          !detail::parse_int(tokens[4], doc.top) || doc.top == 0)
        throw ParseError(ParseErrorKind::MalformedHeader, line_no, "non-integer field in problem line");
      have_header = true;
      doc.header_line = line_no;
      doc.instance.num_vars = doc.declared_vars;
      continue;
    }
    if (!have_header)
      throw ParseError(ParseErrorKind::MissingHeader, line_no, "clause before 'p wcnf' problem line");

    std::uint64_t weight = 0;
    if (!detail::parse_int(tokens[0], weight))
      throw ParseError(ParseErrorKind::BadToken, line_no, "bad weight '" + std::string(tokens[0]) + "'");
    bool hard = weight == doc.top;
    if (!hard && weight != 1)
      throw ParseError(ParseErrorKind::UnsupportedWeight, line_no,
                       "weighted soft unsupported (weight " + std::to_string(weight) + ", top " +
                           std::to_string(doc.top) + ")");

    Clause clause;
    bool terminated = false;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      long long v = 0;
      if (terminated || !detail::parse_int(tokens[t], v))
        throw ParseError(ParseErrorKind::BadToken, line_no, "bad literal '" + std::string(tokens[t]) + "'");
      if (v == 0) {
        terminated = true;
        continue;
      }
      if (static_cast<unsigned long long>(v < 0 ? -v : v) > doc.declared_vars)
        throw ParseError(ParseErrorKind::VarOutOfRange, line_no,
                         "variable " + std::to_string(v < 0 ? -v : v) + " exceeds declared " +
                             std::to_string(doc.declared_vars));
      clause.push_back(Lit::from_dimacs(v));
    }
    if (!terminated)
      throw ParseError(ParseErrorKind::UnterminatedClause, line_no, "clause not terminated by 0");

    ++clauses_seen;
    if (hard) {
      doc.instance.hard.push_back(std::move(clause));
    } else {
      doc.instance.soft.push_back(std::move(clause));
      doc.soft_lines.push_back(line_no);
    }
  }

  if (!have_header)
    throw ParseError(ParseErrorKind::MissingHeader, line_no == 0 ? 1 : line_no, "missing 'p wcnf' problem line");
  if (clauses_seen != doc.declared_clauses)
    throw ParseError(ParseErrorKind::CountMismatch, line_no,
                     "declared " + std::to_string(doc.declared_clauses) + " clauses, found " +
                         std::to_string(clauses_seen));
  return doc;
}

inline WcnfDocument read_wcnf_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_wcnf(ss.str());
}

/// Hard clauses first, then soft clauses in id order. `top` defaults to
/// one more than the number of soft clauses (at least 2).
inline std::string render_wcnf(const WcnfInstance& inst, std::uint64_t top = 0) {
  if (top == 0)
    top = std::max<std::uint64_t>(2, inst.soft.size() + 1);
  std::ostringstream os;
  os << "p wcnf " << inst.num_vars << ' ' << inst.hard.size() + inst.soft.size() << ' ' << top << '\n';
  auto line = [&](std::uint64_t w, const Clause& c) {
    os << w;
    for (Lit l : c)
      os << ' ' << l.to_dimacs();
    os << " 0\n";
  };
  for (const auto& c : inst.hard)
    line(top, c);
  for (const auto& c : inst.soft)
    line(1, c);
  return os.str();
}

} // namespace cardimax

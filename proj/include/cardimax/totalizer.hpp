#pragma once

// Totalizer cardinality encoding with k-simplification, incremental bound
// raising and merging of trees over disjoint inputs.
//
// Every node keeps a unary counter: vars[j-1] is forced true whenever at
// least j inputs below the node are true. An internal node with children
// Q and R receives, for each output position s it owns, the clauses
//   (-q_a | -r_b | p_s)  for all a + b = s, a <= |Q|, b <= |R|
// with q_0 = r_0 = true (those literals are simply omitted). A node stores
// min(capacity, k + 1) counter variables for bound k.
//
// Variable allocation is bound-major: counter position j is allocated for
// every node (internal nodes in post-order) before any position j + 1. A tree
// raised from k1 to k2 therefore allocates and emits exactly what a fresh
// build at k2 would, given the same starting variable index.

#include <cctype>
#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cardimax/sink.hpp"
#include "cardimax/types.hpp"

namespace cardimax {

class TotalizerTree {
public:
  struct Node {
    std::vector<Lit> vars;
    int left = -1;
    int right = -1;
    std::uint32_t capacity = 1;
    std::uint32_t input_pos = 0; // leaves: position in inputs(), 0-based

    bool leaf() const { return left < 0; }
  };

  /// Balanced tree over `inputs`; the left child of a node spans the first
  /// floor(n/2) of its inputs.
  template <ClauseSink Sink>
  static TotalizerTree build(std::span<const Lit> inputs, std::uint32_t k, Sink& sink) {
    if (inputs.empty())
      throw DefectError("totalizer needs at least one input");
    TotalizerTree t;
    t.inputs_.assign(inputs.begin(), inputs.end());
    t.root_ = t.make_subtree(0, static_cast<std::uint32_t>(inputs.size()));
    t.collect_post_order(t.root_);
    t.extend(k, sink);
    return t;
  }

  /// Extends every counter to min(capacity, new_k + 1) and emits only the
  /// clauses that a build at `new_k` has and a build at bound() lacks.
  template <ClauseSink Sink>
  void raise_bound(std::uint32_t new_k, Sink& sink) {
    if (new_k < bound_)
      throw DefectError("totalizer bound cannot decrease (" + std::to_string(bound_) + " -> " +
                        std::to_string(new_k) + ")");
    extend(new_k, sink);
  }

  /// Joins two trees over disjoint inputs under a new root counting to k.
  template <ClauseSink Sink>
  static TotalizerTree merge(TotalizerTree a, TotalizerTree b, std::uint32_t k, Sink& sink) {
    std::set<Lit> seen(a.inputs_.begin(), a.inputs_.end());
    for (Lit l : b.inputs_)
      if (seen.count(l))
        throw DefectError("cannot merge totalizers sharing input " + std::to_string(l.to_dimacs()));
    if (k < std::max(a.bound_, b.bound_))
      throw DefectError("merge bound below a subtree bound");

    a.raise_bound(k, sink);
    b.raise_bound(k, sink);

    TotalizerTree t;
    t.nodes_ = std::move(a.nodes_);
    t.post_order_ = std::move(a.post_order_);
    t.inputs_ = std::move(a.inputs_);
    t.emitted_ = a.emitted_ + b.emitted_;

    auto offset = static_cast<int>(t.nodes_.size());
    auto input_offset = static_cast<std::uint32_t>(t.inputs_.size());
    for (Node n : b.nodes_) {
      if (n.leaf()) {
        n.input_pos += input_offset;
      } else {
        n.left += offset;
        n.right += offset;
      }
      t.nodes_.push_back(std::move(n));
    }
    for (int idx : b.post_order_)
      t.post_order_.push_back(idx + offset);
    t.inputs_.insert(t.inputs_.end(), b.inputs_.begin(), b.inputs_.end());

    Node root;
    root.left = a.root_;
    root.right = b.root_ + offset;
    root.capacity = t.nodes_[root.left].capacity + t.nodes_[root.right].capacity;
    t.nodes_.push_back(root);
    t.root_ = static_cast<int>(t.nodes_.size()) - 1;
    t.post_order_.push_back(t.root_);
    t.bound_ = k;

    auto& r = t.nodes_[t.root_];
    std::uint32_t target = std::min(r.capacity, k + 1);
    for (std::uint32_t j = 1; j <= target; ++j)
      r.vars.push_back(Lit::pos(sink.new_var()));
    t.emit_node(t.root_, 0, sink);
    return t;
  }

  /// Comparator for "at most k inputs true": the single literal -o_{k+1},
  /// or nothing when k >= number of inputs.
  std::vector<Lit> at_most(std::uint32_t k) const {
    if (k > bound_)
      throw DefectError("at_most(" + std::to_string(k) + ") exceeds built bound " + std::to_string(bound_));
    const auto& out = nodes_[root_].vars;
    if (k + 1 <= out.size())
      return {~out[k]};
    return {};
  }

  std::span<const Lit> outputs() const { return nodes_[root_].vars; }
  const std::vector<Lit>& inputs() const { return inputs_; }
  std::uint32_t bound() const { return bound_; }
  std::uint64_t emitted() const { return emitted_; }

  const Node& node(int index) const { return nodes_.at(index); }
  int root() const { return root_; }
  std::size_t num_nodes() const { return nodes_.size(); }

  /// Renders one node per line as (name:vars:count), children indented.
  /// The root is named O and other nodes take letters in breadth-first
  /// order; leaves show their input literal as l<dimacs>. With `dimacs` the
  /// counter variables are printed as DIMACS literals instead of names.
  std::string dump(bool dimacs = false) const {
    std::vector<std::string> names(nodes_.size());
    static constexpr const char* kLetters = "ABCDEFGHIJKLMNPQRSTUVWXYZ";
    std::deque<int> queue{root_};
    std::size_t next = 0;
    while (!queue.empty()) {
      int i = queue.front();
      queue.pop_front();
      if (i == root_)
        names[i] = "O";
      else if (next < 25)
        names[i] = std::string(1, kLetters[next++]);
      else
        names[i] = "N" + std::to_string(++next);
      if (!nodes_[i].leaf()) {
        queue.push_back(nodes_[i].left);
        queue.push_back(nodes_[i].right);
      }
    }

    std::ostringstream os;
    auto render = [&](auto&& self, int i, int depth) -> void {
      const Node& n = nodes_[i];
      os << std::string(2 * depth, ' ') << '(' << names[i] << ':';
      for (std::size_t j = 0; j < n.vars.size(); ++j) {
        if (j)
          os << ',';
        if (n.leaf())
          os << 'l' << n.vars[j].to_dimacs();
        else if (dimacs)
          os << n.vars[j].to_dimacs();
        else
          os << static_cast<char>(std::tolower(static_cast<unsigned char>(names[i][0])))
             << (names[i].size() > 1 ? names[i].substr(1) + "_" : std::string()) << (j + 1);
      }
      os << ':' << n.vars.size() << ")\n";
      if (!n.leaf()) {
        self(self, n.left, depth + 1);
        self(self, n.right, depth + 1);
      }
    };
    render(render, root_, 0);
    return os.str();
  }

private:
  int make_subtree(std::uint32_t lo, std::uint32_t hi) {
    Node n;
    if (hi - lo == 1) {
      n.vars = {inputs_[lo]};
      n.input_pos = lo;
      nodes_.push_back(std::move(n));
      return static_cast<int>(nodes_.size()) - 1;
    }
    std::uint32_t mid = lo + (hi - lo) / 2;
    n.left = make_subtree(lo, mid);
    n.right = make_subtree(mid, hi);
    n.capacity = hi - lo;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  void collect_post_order(int i) {
    if (nodes_[i].leaf())
      return;
    collect_post_order(nodes_[i].left);
    collect_post_order(nodes_[i].right);
    post_order_.push_back(i);
  }

  template <ClauseSink Sink>
  void extend(std::uint32_t new_k, Sink& sink) {
    std::vector<std::size_t> old_len(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      old_len[i] = nodes_[i].vars.size();

    std::uint32_t top = std::min(nodes_[root_].capacity, new_k + 1);
    for (std::uint32_t j = 1; j <= top; ++j) {
      for (int i : post_order_) {
        Node& n = nodes_[i];
        if (j <= n.capacity && n.vars.size() == j - 1)
          n.vars.push_back(Lit::pos(sink.new_var()));
      }
    }
    for (int i : post_order_)
      emit_node(i, old_len[i], sink);
    bound_ = new_k;
  }

  /// Emits the counting clauses for output positions old_len+1 .. |vars|.
  template <ClauseSink Sink>
  void emit_node(int i, std::size_t old_len, Sink& sink) {
    const Node& p = nodes_[i];
    const auto& q = nodes_[p.left].vars;
    const auto& r = nodes_[p.right].vars;
    Clause c;
    for (std::size_t sigma = old_len + 1; sigma <= p.vars.size(); ++sigma) {
      std::size_t alpha_lo = sigma > r.size() ? sigma - r.size() : 0;
      std::size_t alpha_hi = std::min(sigma, q.size());
      for (std::size_t alpha = alpha_lo; alpha <= alpha_hi; ++alpha) {
        std::size_t beta = sigma - alpha;
        c.clear();
        if (alpha > 0)
          c.push_back(~q[alpha - 1]);
        if (beta > 0)
          c.push_back(~r[beta - 1]);
        c.push_back(p.vars[sigma - 1]);
        sink.add_clause(std::span<const Lit>(c));
        ++emitted_;
      }
    }
  }

  std::vector<Node> nodes_;
  std::vector<int> post_order_; // internal nodes only
  std::vector<Lit> inputs_;
  int root_ = -1;
  std::uint32_t bound_ = 0;
  std::uint64_t emitted_ = 0;
};

} // namespace cardimax

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace graphfuse {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected simple graph over nodes 0..n-1. Edges are stored normalized
// (u < v) and sorted; adjacency lists are sorted ascending so traversals are
// reproducible. Immutable after construction.
class Graph {
 public:
  // Throws std::invalid_argument on n == 0, self-loops or out-of-range
  // endpoints. Duplicate edges (in either orientation) are collapsed.
  Graph(std::size_t n, std::span<const Edge> edges);

  std::size_t num_nodes() const noexcept { return adjacency_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_.at(v); }
  bool has_edge(NodeId a, NodeId b) const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
};

bool is_connected(const Graph& g);

// One link of the DFS-induced chain; `index` is the 1-based edge number k.
struct ChainEdge {
  NodeId from = 0;
  NodeId to = 0;
  std::size_t index = 0;

  friend bool operator==(const ChainEdge&, const ChainEdge&) = default;
};

struct ChainOrder {
  NodeId root = 0;
  std::vector<NodeId> order;           // chain position -> node
  std::vector<std::size_t> position;   // node -> chain position
  std::vector<ChainEdge> chain_edges;  // (order[t], order[t+1]), index t+1

  std::size_t size() const noexcept { return order.size(); }

  friend bool operator==(const ChainOrder&, const ChainOrder&) = default;
};

// Iterative depth-first search visiting neighbors in ascending id order.
// Consecutive visits are linked whether or not they share an edge in g.
// Throws std::invalid_argument if g is disconnected or root is invalid.
ChainOrder dfs_chain(const Graph& g, NodeId root);

// Chain with order 0..n-1, for inputs that are already a path (time series).
ChainOrder identity_chain(std::size_t n);

double total_variation(std::span<const double> theta, std::span<const Edge> edges);
double total_variation(std::span<const double> theta, std::span<const ChainEdge> edges);

Graph gen_chain(std::size_t n);
Graph gen_lattice(std::size_t rows, std::size_t cols);
// num_trees trees of nodes_per_tree nodes each, filled breadth-first with
// children_per_node children, consecutive trees joined by one edge between
// seeded uniformly chosen nodes.
Graph gen_linked_trees(std::size_t num_trees, std::size_t nodes_per_tree,
                       std::size_t children_per_node, std::uint64_t seed);

// Edge-list text format: "n m" header, then m lines "u v"; '#' starts a comment.
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace graphfuse

#include "graphfuse/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "graphfuse/random.hpp"

namespace graphfuse {

Graph::Graph(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw std::invalid_argument("graph must have at least one node");
  if (n > std::numeric_limits<NodeId>::max()) throw std::invalid_argument("graph too large");

  edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  ") has an endpoint outside [0, " + std::to_string(n) + ")");
    }
    if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
    edges_.push_back(e.u < e.v ? e : Edge{e.v, e.u});
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  adjacency_.resize(n);
  for (const Edge& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a >= num_nodes() || b >= num_nodes()) return false;
  const auto& nbrs = adjacency_[a];
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

namespace {

// Preorder of an explicit-stack DFS; identical to the recursive visit order.
std::vector<NodeId> dfs_preorder(const Graph& g, NodeId root) {
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> order;
  order.reserve(n);
  std::vector<bool> visited(n, false);
  std::vector<std::pair<NodeId, std::size_t>> stack;  // node, next neighbor slot

  visited[root] = true;
  order.push_back(root);
  stack.emplace_back(root, 0);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    const auto nbrs = g.neighbors(node);
    while (next < nbrs.size() && visited[nbrs[next]]) ++next;
    if (next == nbrs.size()) {
      stack.pop_back();
      continue;
    }
    const NodeId child = nbrs[next++];
    visited[child] = true;
    order.push_back(child);
    stack.emplace_back(child, 0);
  }
  return order;
}

ChainOrder chain_from_order(NodeId root, std::vector<NodeId> order) {
  ChainOrder chain;
  chain.root = root;
  chain.position.assign(order.size(), 0);
  for (std::size_t t = 0; t < order.size(); ++t) chain.position[order[t]] = t;
  chain.chain_edges.reserve(order.size() > 0 ? order.size() - 1 : 0);
  for (std::size_t t = 0; t + 1 < order.size(); ++t) {
    chain.chain_edges.push_back({order[t], order[t + 1], t + 1});
  }
  chain.order = std::move(order);
  return chain;
}

template <typename EdgeT>
double tv_sum(std::span<const double> theta, std::span<const EdgeT> edges,
              auto&& first, auto&& second) {
  double total = 0.0;
  for (const EdgeT& e : edges) {
    const auto a = first(e);
    const auto b = second(e);
    if (a >= theta.size() || b >= theta.size()) {
      throw std::invalid_argument("total_variation: edge endpoint exceeds signal length");
    }
    total += std::abs(theta[a] - theta[b]);
  }
  return total;
}

}  // namespace

bool is_connected(const Graph& g) { return dfs_preorder(g, 0).size() == g.num_nodes(); }

ChainOrder dfs_chain(const Graph& g, NodeId root) {
  if (root >= g.num_nodes()) {
    throw std::invalid_argument("DFS root " + std::to_string(root) + " is not a node");
  }
  auto order = dfs_preorder(g, root);
  if (order.size() != g.num_nodes()) {
    throw std::invalid_argument("graph is disconnected; DFS reached " +
                                std::to_string(order.size()) + " of " +
                                std::to_string(g.num_nodes()) + " nodes");
  }
  return chain_from_order(root, std::move(order));
}

ChainOrder identity_chain(std::size_t n) {
  if (n == 0) throw std::invalid_argument("identity_chain: n must be positive");
  std::vector<NodeId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<NodeId>(i);
  return chain_from_order(0, std::move(order));
}

double total_variation(std::span<const double> theta, std::span<const Edge> edges) {
  return tv_sum(theta, edges, [](const Edge& e) { return std::size_t{e.u}; },
                [](const Edge& e) { return std::size_t{e.v}; });
}

double total_variation(std::span<const double> theta, std::span<const ChainEdge> edges) {
  return tv_sum(theta, edges, [](const ChainEdge& e) { return std::size_t{e.from}; },
                [](const ChainEdge& e) { return std::size_t{e.to}; });
}

Graph gen_chain(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gen_chain: n must be positive");
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1)});
  }
  return Graph(n, edges);
}

Graph gen_lattice(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("gen_lattice: sizes must be positive");
  std::vector<Edge> edges;
  edges.reserve(rows * (cols - 1) + cols * (rows - 1));
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
    }
  }
  return Graph(rows * cols, edges);
}

Graph gen_linked_trees(std::size_t num_trees, std::size_t nodes_per_tree,
                       std::size_t children_per_node, std::uint64_t seed) {
  if (num_trees == 0 || nodes_per_tree == 0 || children_per_node == 0) {
    throw std::invalid_argument("gen_linked_trees: sizes must be positive");
  }
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, nodes_per_tree - 1);
  std::vector<Edge> edges;
  for (std::size_t t = 0; t < num_trees; ++t) {
    const std::size_t base = t * nodes_per_tree;
    for (std::size_t j = 1; j < nodes_per_tree; ++j) {
      const std::size_t parent = (j - 1) / children_per_node;
      edges.push_back({static_cast<NodeId>(base + parent), static_cast<NodeId>(base + j)});
    }
  }
  for (std::size_t t = 0; t + 1 < num_trees; ++t) {
    const std::size_t a = t * nodes_per_tree + pick(rng);
    const std::size_t b = (t + 1) * nodes_per_tree + pick(rng);
    edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
  }
  return Graph(num_trees * nodes_per_tree, edges);
}

namespace {

// Next non-empty, non-comment line; false at EOF.
bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no)) throw std::runtime_error("edge list: missing header");
  long long n = -1, m = -1;
  {
    std::istringstream header(line);
    if (!(header >> n >> m) || n <= 0 || m < 0) {
      throw std::runtime_error("edge list: bad header on line " + std::to_string(line_no));
    }
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    if (!next_content_line(in, line, line_no)) {
      throw std::runtime_error("edge list: expected " + std::to_string(m) + " edges, found " +
                               std::to_string(k));
    }
    std::istringstream row(line);
    long long u = -1, v = -1;
    if (!(row >> u >> v) || u < 0 || v < 0) {
      throw std::runtime_error("edge list: bad edge on line " + std::to_string(line_no));
    }
    if (u >= n || v >= n) {
      throw std::runtime_error("edge list: endpoint out of range on line " +
                               std::to_string(line_no));
    }
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  return Graph(static_cast<std::size_t>(n), edges);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace graphfuse

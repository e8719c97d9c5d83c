#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphfuse/distributions.hpp"
#include "graphfuse/graph.hpp"
#include "graphfuse/method.hpp"
#include "graphfuse/tfusion.hpp"

namespace graphfuse {

// Ground truth on a graph. `s` counts edges whose endpoints differ in theta0.
struct SignalSpec {
  Graph graph;
  std::vector<double> theta0;
  double sigma = 0.0;
  std::size_t s = 0;
  std::string label;
};

enum class ChainDesign { even, uneven, very_uneven };
enum class LatticeDistance { euclidean, manhattan };

ChainDesign parse_chain_design(std::string_view name);
std::string to_string(ChainDesign design);

std::size_t edge_sparsity(const Graph& graph, std::span<const double> theta);

// Ten pieces on a chain of n nodes with levels cycling (1, 3, 0, 2, 4).
// Piece lengths: even 10 each; uneven alternating (15, 5); very_uneven
// alternating (18, 2); all scaled by n / 100.
SignalSpec gen_chain_signal(ChainDesign design, std::size_t n = 100);

// side x side grid with theta = kappa within `radius` of the grid center.
SignalSpec gen_lattice_signal(double kappa, std::size_t side = 16, double radius = 4.0,
                              LatticeDistance metric = LatticeDistance::euclidean);

// Four linked 50-node trees (3 children per node) carrying 1, -1, 4, -4.
SignalSpec gen_tree_signal(std::uint64_t seed);

// y = theta0 + sigma * z with z i.i.d. standard normal.
std::vector<double> add_noise(const SignalSpec& spec, double sigma, std::uint64_t seed);

// |estimate - truth|^2 / n
double mse(std::span<const double> estimate, std::span<const double> truth);
// |estimate - truth|^2 / |truth|^2; throws if truth is identically zero.
double adj_mse(std::span<const double> estimate, std::span<const double> truth);

struct MetricSummary {
  double mean = 0.0;
  double se = 0.0;  // sample SD / sqrt(count)
};
MetricSummary mean_se(std::span<const double> values);

struct FitOptions {
  SamplerConfig sampler;
  std::size_t roots = 3;                // DFS roots pooled on non-chain graphs
  std::optional<Hyperparams> hyper;     // defaults to default_hyperparams(n)
  std::optional<double> tv_lambda;      // fixed fused-lasso penalty; else CV
  std::size_t cv_folds = 5;
};

// Point estimate for one method. Chain graphs use their native order;
// other graphs use DFS chains from random roots (Bayesian methods pool
// `roots` chains, the fused lasso uses the first root).
std::vector<double> fit_estimate(std::span<const double> y, const Graph& graph, bool native_chain,
                                 Method method, const FitOptions& options, std::uint64_t seed);

// One table cell: a design plus a noise level.
struct CellSpec {
  std::string family;  // chain | lattice | tree
  std::string signal;  // chain design name, "kappa" for lattice, "tree"
  double param = 0.0;  // kappa for lattice, n for chain
  double sigma = 0.1;

  bool native_chain() const { return family == "chain"; }
  std::string label() const;
};

SignalSpec make_signal(const CellSpec& cell, std::uint64_t graph_seed);

std::vector<CellSpec> chain_table_cells(std::size_t n = 100);
std::vector<CellSpec> lattice_table_cells();
std::vector<CellSpec> tree_table_cells();

struct MethodResult {
  Method method = Method::t_fusion;
  MetricSummary mse;
  MetricSummary adj_mse;
  std::vector<double> mse_values;
  std::vector<double> adj_mse_values;
};

struct CellResult {
  CellSpec cell;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  std::vector<MethodResult> methods;
};

struct TableConfig {
  std::vector<CellSpec> cells;
  std::vector<Method> methods{Method::t_fusion, Method::laplace, Method::l1};
  std::size_t reps = 100;
  std::uint64_t seed = 0;
  FitOptions fit;
  std::size_t workers = 0;  // 0 = worker_count()
};

// Seeds run_table derives from its master seed: the graph of cell c, and
// replication r of cell c (its noise uses split_seed(replication_seed, 0)).
std::uint64_t cell_graph_seed(std::uint64_t seed, std::size_t cell);
std::uint64_t replication_seed(std::uint64_t seed, std::size_t cell, std::size_t rep);
std::vector<double> replication_data(const SignalSpec& spec, std::uint64_t rep_seed);

// Replication r of cell c draws all randomness from split_seed(seed, c, r),
// so results do not depend on the worker count.
std::vector<CellResult> run_table(const TableConfig& config);

// Flat CSV row: one per (cell, method).
struct ResultRow {
  std::string family;
  std::string signal;
  double param = 0.0;
  double sigma = 0.0;
  std::string method;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double mse_mean = 0.0;
  double mse_se = 0.0;
  double adj_mse_mean = 0.0;
  double adj_mse_se = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

std::vector<ResultRow> to_rows(std::span<const CellResult> results);
void write_results_csv(std::ostream& out, std::span<const ResultRow> rows);
std::vector<ResultRow> read_results_csv(std::istream& in);
// Aligned "mean(se)" table, one line per cell, method columns.
std::string format_results_table(std::span<const CellResult> results);

}  // namespace graphfuse

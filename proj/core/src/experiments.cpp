#include "graphfuse/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "graphfuse/parallel.hpp"
#include "graphfuse/posterior.hpp"
#include "graphfuse/random.hpp"
#include "graphfuse/tv.hpp"

namespace graphfuse {

ChainDesign parse_chain_design(std::string_view name) {
  if (name == "even") return ChainDesign::even;
  if (name == "uneven") return ChainDesign::uneven;
  if (name == "very_uneven" || name == "v_uneven") return ChainDesign::very_uneven;
  throw std::invalid_argument("unknown chain design '" + std::string(name) + "'");
}

std::string to_string(ChainDesign design) {
  switch (design) {
    case ChainDesign::even: return "even";
    case ChainDesign::uneven: return "uneven";
    case ChainDesign::very_uneven: return "very_uneven";
  }
  return "?";
}

std::size_t edge_sparsity(const Graph& graph, std::span<const double> theta) {
  if (theta.size() != graph.num_nodes()) throw std::invalid_argument("edge_sparsity: length mismatch");
  std::size_t s = 0;
  for (const Edge& e : graph.edges()) s += theta[e.u] != theta[e.v] ? 1 : 0;
  return s;
}

SignalSpec gen_chain_signal(ChainDesign design, std::size_t n) {
  constexpr double kLevels[] = {1.0, 3.0, 0.0, 2.0, 4.0};
  std::vector<std::size_t> base_lengths;
  switch (design) {
    case ChainDesign::even: base_lengths.assign(10, 10); break;
    case ChainDesign::uneven: base_lengths = {15, 5, 15, 5, 15, 5, 15, 5, 15, 5}; break;
    case ChainDesign::very_uneven: base_lengths = {18, 2, 18, 2, 18, 2, 18, 2, 18, 2}; break;
  }
  const bool even = design == ChainDesign::even;
  if (n == 0 || n % (even ? 10 : 100) != 0) {
    throw std::invalid_argument("gen_chain_signal: n must be a positive multiple of " +
                                std::string(even ? "10" : "100"));
  }
  const std::size_t unit = even ? n / 10 : n / 100;

  std::vector<double> theta;
  theta.reserve(n);
  for (std::size_t piece = 0; piece < base_lengths.size(); ++piece) {
    const std::size_t len = even ? unit : base_lengths[piece] * unit;
    theta.insert(theta.end(), len, kLevels[piece % 5]);
  }
  Graph g = gen_chain(n);
  const std::size_t s = edge_sparsity(g, theta);
  return {std::move(g), std::move(theta), 0.0, s, to_string(design)};
}

SignalSpec gen_lattice_signal(double kappa, std::size_t side, double radius, LatticeDistance metric) {
  if (side == 0) throw std::invalid_argument("gen_lattice_signal: side must be positive");
  Graph g = gen_lattice(side, side);
  const double center = 0.5 * static_cast<double>(side - 1);
  std::vector<double> theta(side * side, 0.0);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const double dr = static_cast<double>(r) - center;
      const double dc = static_cast<double>(c) - center;
      const double dist = metric == LatticeDistance::euclidean ? std::hypot(dr, dc)
                                                               : std::abs(dr) + std::abs(dc);
      if (dist <= radius) theta[r * side + c] = kappa;
    }
  }
  const std::size_t s = edge_sparsity(g, theta);
  std::ostringstream label;
  label << "kappa=" << kappa;
  return {std::move(g), std::move(theta), 0.0, s, label.str()};
}

SignalSpec gen_tree_signal(std::uint64_t seed) {
  constexpr std::size_t kTrees = 4;
  constexpr std::size_t kNodes = 50;
  constexpr double kValues[kTrees] = {1.0, -1.0, 4.0, -4.0};
  Graph g = gen_linked_trees(kTrees, kNodes, 3, seed);
  std::vector<double> theta(kTrees * kNodes);
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = kValues[i / kNodes];
  const std::size_t s = edge_sparsity(g, theta);
  return {std::move(g), std::move(theta), 0.0, s, "tree"};
}

std::vector<double> add_noise(const SignalSpec& spec, double sigma, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw std::invalid_argument("add_noise: sigma must be positive");
  Rng rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> y(spec.theta0.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = spec.theta0[i] + sigma * z(rng);
  return y;
}

namespace {

double squared_error(std::span<const double> estimate, std::span<const double> truth) {
  if (estimate.size() != truth.size() || truth.empty()) {
    throw std::invalid_argument("error metric: vectors must be nonempty with equal length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = estimate[i] - truth[i];
    sum += d * d;
  }
  return sum;
}

}  // namespace

double mse(std::span<const double> estimate, std::span<const double> truth) {
  return squared_error(estimate, truth) / static_cast<double>(truth.size());
}

double adj_mse(std::span<const double> estimate, std::span<const double> truth) {
  double norm2 = 0.0;
  for (double v : truth) norm2 += v * v;
  if (!(norm2 > 0.0)) throw std::invalid_argument("adj_mse: true signal has zero norm");
  return squared_error(estimate, truth) / norm2;
}

MetricSummary mean_se(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean_se: no values");
  const double count = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= count;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (count - 1.0)) / std::sqrt(count)};
}

std::vector<double> fit_estimate(std::span<const double> y, const Graph& graph, bool native_chain,
                                 Method method, const FitOptions& options, std::uint64_t seed) {
  const std::size_t n = y.size();
  if (n != graph.num_nodes()) throw std::invalid_argument("fit_estimate: signal length mismatch");
  const Hyperparams hyper = options.hyper ? *options.hyper : default_hyperparams(n);

  std::vector<NodeId> roots;
  if (native_chain) {
    roots = {0};
  } else {
    roots = random_roots(n, std::min(options.roots, n), split_seed(seed, 1));
  }

  if (method == Method::l1) {
    const ChainOrder chain = dfs_chain(graph, roots.front());
    double lambda = 0.0;
    if (options.tv_lambda) {
      lambda = *options.tv_lambda;
    } else if (hyper.tv_lambda) {
      lambda = *hyper.tv_lambda;
    } else {
      const auto grid = default_lambda_grid(y);
      lambda = choose_lambda_cv(y, chain, grid, options.cv_folds, split_seed(seed, 2));
    }
    return tv_denoise_chain(y, chain, lambda).theta_hat;
  }

  SamplerConfig cfg = options.sampler;
  cfg.seed = split_seed(seed, 3);
  const PosteriorSamples samples = pool_roots(y, graph, roots, hyper, cfg, method);
  return summarize(samples).theta_mean;
}

std::string CellSpec::label() const {
  std::ostringstream out;
  out << family << '/' << signal;
  if (family == "lattice") out << '=' << param;
  out << " sigma=" << sigma;
  return out.str();
}

SignalSpec make_signal(const CellSpec& cell, std::uint64_t graph_seed) {
  SignalSpec spec = [&] {
    if (cell.family == "chain") {
      const auto n = cell.param > 0.0 ? static_cast<std::size_t>(cell.param) : std::size_t{100};
      return gen_chain_signal(parse_chain_design(cell.signal), n);
    }
    if (cell.family == "lattice") return gen_lattice_signal(cell.param);
    if (cell.family == "tree") return gen_tree_signal(graph_seed);
    throw std::invalid_argument("unknown design family '" + cell.family + "'");
  }();
  spec.sigma = cell.sigma;
  return spec;
}

std::vector<CellSpec> chain_table_cells(std::size_t n) {
  std::vector<CellSpec> cells;
  for (const char* design : {"even", "uneven", "very_uneven"}) {
    for (double sigma : {0.1, 0.3, 0.5}) {
      cells.push_back({"chain", design, static_cast<double>(n), sigma});
    }
  }
  return cells;
}

std::vector<CellSpec> lattice_table_cells() {
  return {{"lattice", "kappa", 1.0, 0.3}, {"lattice", "kappa", 5.0, 0.3}, {"lattice", "kappa", 10.0, 0.3}};
}

std::vector<CellSpec> tree_table_cells() { return {{"tree", "tree", 0.0, 0.3}}; }

std::uint64_t cell_graph_seed(std::uint64_t seed, std::size_t cell) {
  return split_seed(seed, cell, 0xffff'ffffULL);
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t cell, std::size_t rep) {
  return split_seed(seed, cell, rep);
}

std::vector<double> replication_data(const SignalSpec& spec, std::uint64_t rep_seed) {
  return add_noise(spec, spec.sigma, split_seed(rep_seed, 0));
}

std::vector<CellResult> run_table(const TableConfig& config) {
  if (config.reps < 2) throw std::invalid_argument("run_table: at least 2 replications required");
  if (config.methods.empty()) throw std::invalid_argument("run_table: no methods selected");

  const std::size_t n_cells = config.cells.size();
  const std::size_t n_methods = config.methods.size();
  std::vector<SignalSpec> specs;
  specs.reserve(n_cells);
  for (std::size_t c = 0; c < n_cells; ++c) {
    specs.push_back(make_signal(config.cells[c], cell_graph_seed(config.seed, c)));
  }

  // [cell][rep][method] -> (mse, adj)
  const std::size_t per_cell = config.reps * n_methods;
  std::vector<double> mse_vals(n_cells * per_cell, 0.0);
  std::vector<double> adj_vals(n_cells * per_cell, 0.0);

  const std::size_t tasks = n_cells * config.reps;
  parallel_for(
      tasks,
      [&](std::size_t task) {
        const std::size_t c = task / config.reps;
        const std::size_t r = task % config.reps;
        const SignalSpec& spec = specs[c];
        const std::uint64_t rep_seed = replication_seed(config.seed, c, r);
        const auto y = replication_data(spec, rep_seed);
        double norm2 = 0.0;
        for (double v : spec.theta0) norm2 += v * v;
        for (std::size_t m = 0; m < n_methods; ++m) {
          // Roots and CV folds are shared across methods within a replication.
          const auto estimate = fit_estimate(y, spec.graph, config.cells[c].native_chain(),
                                             config.methods[m], config.fit, rep_seed);
          const std::size_t slot = c * per_cell + r * n_methods + m;
          mse_vals[slot] = mse(estimate, spec.theta0);
          adj_vals[slot] = norm2 > 0.0 ? adj_mse(estimate, spec.theta0)
                                       : std::numeric_limits<double>::quiet_NaN();
        }
      },
      config.workers == 0 ? worker_count() : config.workers);

  std::vector<CellResult> results;
  results.reserve(n_cells);
  for (std::size_t c = 0; c < n_cells; ++c) {
    CellResult cell{config.cells[c], config.reps, config.seed, {}};
    for (std::size_t m = 0; m < n_methods; ++m) {
      MethodResult mr;
      mr.method = config.methods[m];
      for (std::size_t r = 0; r < config.reps; ++r) {
        const std::size_t slot = c * per_cell + r * n_methods + m;
        mr.mse_values.push_back(mse_vals[slot]);
        mr.adj_mse_values.push_back(adj_vals[slot]);
      }
      mr.mse = mean_se(mr.mse_values);
      mr.adj_mse = mean_se(mr.adj_mse_values);
      cell.methods.push_back(std::move(mr));
    }
    results.push_back(std::move(cell));
  }
  return results;
}

std::vector<ResultRow> to_rows(std::span<const CellResult> results) {
  std::vector<ResultRow> rows;
  for (const CellResult& cell : results) {
    for (const MethodResult& m : cell.methods) {
      rows.push_back({cell.cell.family, cell.cell.signal, cell.cell.param, cell.cell.sigma,
                      to_string(m.method), cell.reps, cell.seed, m.mse.mean, m.mse.se,
                      m.adj_mse.mean, m.adj_mse.se});
    }
  }
  return rows;
}

namespace {

constexpr const char* kCsvHeader =
    "family,signal,param,sigma,method,reps,seed,mse_mean,mse_se,adj_mse_mean,adj_mse_se";

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& field) {
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size()) throw std::runtime_error("results CSV: bad number '" + field + "'");
  return v;
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << kCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    out << r.family << ',' << r.signal << ',' << exact(r.param) << ',' << exact(r.sigma) << ','
        << r.method << ',' << r.reps << ',' << r.seed << ',' << exact(r.mse_mean) << ','
        << exact(r.mse_se) << ',' << exact(r.adj_mse_mean) << ',' << exact(r.adj_mse_se) << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("results CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("results CSV: unexpected header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 11) throw std::runtime_error("results CSV: expected 11 fields");
    rows.push_back({f[0], f[1], parse_double(f[2]), parse_double(f[3]), f[4],
                    static_cast<std::size_t>(std::stoull(f[5])), std::stoull(f[6]),
                    parse_double(f[7]), parse_double(f[8]), parse_double(f[9]), parse_double(f[10])});
  }
  return rows;
}

std::string format_results_table(std::span<const CellResult> results) {
  auto cell_text = [](const MetricSummary& s) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << s.mean << '(' << s.se << ')';
    return out.str();
  };
  std::ostringstream out;
  if (results.empty()) return "";
  constexpr int kLabel = 30;
  constexpr int kCol = 20;
  out << std::left << std::setw(kLabel) << "cell";
  for (const MethodResult& m : results.front().methods) {
    out << std::setw(kCol) << (display_name(m.method) + " MSE") << std::setw(kCol) << "adj MSE";
  }
  out << '\n';
  for (const CellResult& cell : results) {
    out << std::setw(kLabel) << cell.cell.label();
    for (const MethodResult& m : cell.methods) {
      out << std::setw(kCol) << cell_text(m.mse) << std::setw(kCol) << cell_text(m.adj_mse);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace graphfuse

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "graphfuse/distributions.hpp"
#include "graphfuse/experiments.hpp"
#include "graphfuse/io.hpp"
#include "graphfuse/method.hpp"
#include "graphfuse/pipeline.hpp"

namespace fs = std::filesystem;
using namespace graphfuse;

namespace {

struct HyperFlags {
  std::optional<double> a_t;
  std::optional<double> t_scale;
  std::optional<double> a_sigma;
  std::optional<double> b_sigma;
  std::optional<double> lambda0;
  std::optional<double> laplace_rate;

  void attach(CLI::App& cmd) {
    cmd.add_option("--a-t", a_t, "Shape a_t of the t-fusion mixing prior")->group("Prior");
    cmd.add_option("--t-scale", t_scale, "Scale m of the t prior (default: tail rule)")->group("Prior");
    cmd.add_option("--a-sigma", a_sigma, "Inverse-gamma shape for sigma^2")->group("Prior");
    cmd.add_option("--b-sigma", b_sigma, "Inverse-gamma rate for sigma^2")->group("Prior");
    cmd.add_option("--lambda0", lambda0, "Root prior variance multiplier")->group("Prior");
    cmd.add_option("--laplace-rate", laplace_rate, "Laplace prior rate")->group("Prior");
  }

  bool any() const { return a_t || t_scale || a_sigma || b_sigma || lambda0 || laplace_rate; }

  Hyperparams apply(std::size_t n) const {
    Hyperparams h = default_hyperparams(std::max<std::size_t>(n, 2));
    if (a_t || t_scale) h.set_t_prior(a_t.value_or(h.a_t), t_scale.value_or(h.m));
    if (a_sigma) h.a_sigma = *a_sigma;
    if (b_sigma) h.b_sigma = *b_sigma;
    if (lambda0) h.lambda0 = *lambda0;
    if (laplace_rate) h.laplace_rate = *laplace_rate;
    h.validate();
    return h;
  }
};

struct SamplerFlags {
  std::size_t iters = SamplerConfig{}.iterations;
  std::size_t burnin = SamplerConfig{}.burn_in;
  std::size_t thin = SamplerConfig{}.thin;
  std::uint64_t seed = 0;
  std::size_t roots = 3;
  std::optional<double> lambda;
  bool cv = false;
  std::size_t folds = 5;

  void attach(CLI::App& cmd) {
    cmd.add_option("--iters", iters, "Gibbs iterations")->capture_default_str()->group("Sampler");
    cmd.add_option("--burnin", burnin, "Burn-in iterations")->capture_default_str()->group("Sampler");
    cmd.add_option("--thin", thin, "Keep every k-th draw")->capture_default_str()->group("Sampler");
    cmd.add_option("--seed", seed, "Master seed")->capture_default_str();
    cmd.add_option("--roots", roots, "Random DFS roots to pool on non-chain graphs")
        ->capture_default_str()
        ->group("Sampler");
    auto* lam = cmd.add_option("--lambda", lambda, "Fixed fused-lasso penalty (l1)")->group("Fused lasso");
    auto* cvf = cmd.add_flag("--cv", cv, "Cross-validate the fused-lasso penalty (default)")->group("Fused lasso");
    lam->excludes(cvf);
    cmd.add_option("--folds", folds, "Cross-validation folds")->capture_default_str()->group("Fused lasso");
  }

  SamplerConfig config() const {
    SamplerConfig c;
    c.iterations = iters;
    c.burn_in = burnin;
    c.thin = thin;
    c.seed = seed;
    c.validate();
    return c;
  }
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
}

// --- denoise / changepoints ------------------------------------------------

struct DenoiseCommand {
  std::string graph_file;
  std::string gen;
  std::string signal_file;
  std::string stock_file;
  std::string truth_file;
  std::string from;
  std::string to;
  std::string price_column;
  std::string date_column = "Date";
  bool log_returns = false;
  std::string method = "t";
  std::vector<NodeId> root_list;
  double level = 0.95;
  std::string out_dir;
  std::string format = "json";
  SamplerFlags sampler;
  HyperFlags hyper;

  void attach(CLI::App& cmd, bool full) {
    auto* graph = cmd.add_option("--graph", graph_file, "Edge-list file")->check(CLI::ExistingFile)->group("Input");
    auto* generated = cmd.add_option("--gen", gen, "Generated graph: chain:N | lattice:RxC | trees:SEED")->group("Input");
    graph->excludes(generated);
    auto* signal = cmd.add_option("--signal", signal_file, "Signal file, one value per line")
                       ->check(CLI::ExistingFile)
                       ->group("Input");
    auto* stock = cmd.add_option("--stock", stock_file, "Price CSV; denoises cumulative returns on a chain")
                      ->check(CLI::ExistingFile)
                      ->group("Input");
    signal->excludes(stock);
    stock->excludes(graph)->excludes(generated);
    cmd.add_option("--truth", truth_file, "True signal, for MSE reporting")->check(CLI::ExistingFile)->group("Input");
    cmd.add_option("--from", from, "First date kept (YYYY-MM-DD or MM/DD/YYYY)")->group("Stock");
    cmd.add_option("--to", to, "Last date kept")->group("Stock");
    cmd.add_option("--price-column", price_column, "Price column (default: adjusted close)")->group("Stock");
    cmd.add_option("--date-column", date_column, "Date column")->capture_default_str()->group("Stock");
    cmd.add_flag("--log-returns", log_returns, "Accumulate log returns instead of simple returns")->group("Stock");
    cmd.add_option("--method", method, "Estimator")
        ->check(CLI::IsMember({"t", "laplace", "l1"}))
        ->capture_default_str();
    cmd.add_option("--root", root_list, "Explicit DFS root (repeatable)")->group("Sampler");
    cmd.add_option("--level", level, "Credible band probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    cmd.add_option("--out", out_dir, full ? "Output directory" : "Also write changepoints.txt here");
    if (full) {
      cmd.add_option("--format", format, "Summary format")
          ->check(CLI::IsMember({"json", "csv"}))
          ->capture_default_str();
    }
    sampler.attach(cmd);
    hyper.attach(cmd);
  }

  struct Loaded {
    Graph graph;
    std::vector<double> y;
    std::vector<std::string> labels;  // dates for stock input
  };

  Loaded load() const {
    if (!stock_file.empty()) {
      StockOptions opts;
      opts.date_column = date_column;
      opts.price_column = price_column;
      opts.log_returns = log_returns;
      auto date = [](const std::string& text, const char* flag) {
        const auto d = parse_date(text);
        if (!d) throw std::invalid_argument(std::string(flag) + ": cannot parse date '" + text + "'");
        return *d;
      };
      if (!from.empty()) opts.from = date(from, "--from");
      if (!to.empty()) opts.to = date(to, "--to");
      StockSeries series = ingest_stock_csv(fs::path(stock_file), opts);
      if (series.skipped_rows > 0) {
        std::cerr << "graphfuse: warning: skipped " << series.skipped_rows << " unparseable rows\n";
      }
      Loaded l{series.graph(), std::move(series.y), {}};
      for (const Date& d : series.dates) l.labels.push_back(format_date(d));
      return l;
    }
    if (signal_file.empty()) throw std::invalid_argument("one of --signal or --stock is required");
    if (graph_file.empty() && gen.empty()) throw std::invalid_argument("one of --graph or --gen is required");
    Graph g = graph_file.empty() ? generate_graph(gen) : load_graph(graph_file);
    return {std::move(g), load_signal(signal_file), {}};
  }

  DenoiseReport run(const Loaded& in) const {
    DenoiseOptions opts;
    opts.method = parse_method(method);
    opts.sampler = sampler.config();
    opts.roots = sampler.roots;
    opts.root_list = root_list;
    if (hyper.any()) opts.hyper = hyper.apply(in.y.size());
    opts.tv_lambda = sampler.lambda;
    opts.cv_folds = sampler.folds;
    opts.level = level;
    opts.workers = 0;
    DenoiseReport report = denoise(in.y, in.graph, opts, in.labels);
    if (!truth_file.empty()) {
      const auto truth = load_signal(truth_file);
      if (truth.size() != in.y.size()) throw std::invalid_argument("--truth length does not match the signal");
      report.mse = mse(report.theta_mean, truth);
      double norm2 = 0.0;
      for (double v : truth) norm2 += v * v;
      if (norm2 > 0.0) report.adj_mse = adj_mse(report.theta_mean, truth);
    }
    return report;
  }
};

void write_changepoints(std::ostream& out, const DenoiseReport& report) {
  for (std::size_t i = 0; i < report.change_points.size(); ++i) {
    out << report.change_points[i] << '\t' << report.change_point_labels[i] << '\n';
  }
}

int cmd_denoise(const DenoiseCommand& c) {
  const auto in = c.load();
  const DenoiseReport report = c.run(in);
  const fs::path dir = c.out_dir.empty() ? fs::path(".") : fs::path(c.out_dir);
  ensure_dir(dir);
  if (c.format == "json") {
    open_out(dir / "summary.json") << report_to_json(report);
  } else {
    auto out = open_out(dir / "summary.csv");
    write_report_csv(out, report);
  }
  {
    auto out = open_out(dir / "changepoints.txt");
    write_changepoints(out, report);
  }
  {
    std::vector<std::string> index = in.labels;
    if (index.empty()) {
      for (std::size_t i = 0; i < in.y.size(); ++i) index.push_back(std::to_string(i));
    }
    auto out = open_out(dir / "plot.csv");
    write_plot_csv(out, index, in.y, report);
  }
  std::size_t blocks = 0;
  for (std::size_t b : report.blocks) blocks = std::max(blocks, b + 1);
  std::cout << "method " << display_name(parse_method(report.method)) << ": " << blocks << " blocks, "
            << report.change_points.size() << " change points";
  if (report.mse) std::cout << ", MSE " << format_exact(*report.mse);
  std::cout << "\nwrote " << (dir / (c.format == "json" ? "summary.json" : "summary.csv")).string() << ", "
            << (dir / "changepoints.txt").string() << ", " << (dir / "plot.csv").string() << '\n';
  return 0;
}

int cmd_changepoints(const DenoiseCommand& c) {
  const DenoiseReport report = c.run(c.load());
  write_changepoints(std::cout, report);
  if (!c.out_dir.empty()) {
    ensure_dir(c.out_dir);
    auto out = open_out(fs::path(c.out_dir) / "changepoints.txt");
    write_changepoints(out, report);
  }
  return 0;
}

// --- simulate / table --------------------------------------------------------

struct HarnessCommand {
  std::string design = "chain:even";
  std::string table = "chain";
  std::size_t n = 100;
  double sigma = 0.1;
  std::size_t reps = 100;
  std::vector<std::string> methods{"t", "laplace", "l1"};
  std::string out_dir;
  bool write_data = false;
  SamplerFlags sampler;

  void attach(CLI::App& cmd, bool simulate) {
    if (simulate) {
      cmd.add_option("--design", design, "chain:even | chain:uneven | chain:very_uneven | lattice:KAPPA | tree")
          ->capture_default_str();
      cmd.add_option("--sigma", sigma, "Noise standard deviation")->check(CLI::PositiveNumber)->capture_default_str();
      cmd.add_flag("--write-data", write_data, "Also write graph.txt, truth.txt and signal.txt of replication 0");
      reps = 20;
    } else {
      cmd.add_option("--table", table, "Table to regenerate")
          ->check(CLI::IsMember({"chain", "lattice", "tree", "all"}))
          ->capture_default_str();
    }
    cmd.add_option("--n", n, "Chain length for chain designs")->check(CLI::Range(10, 1 << 24))->capture_default_str();
    cmd.add_option("--reps", reps, "Monte-Carlo replications")->check(CLI::Range(2, 1 << 24))->capture_default_str();
    cmd.add_option("--methods", methods, "Estimators to compare")
        ->delimiter(',')
        ->check(CLI::IsMember({"t", "laplace", "l1"}))
        ->capture_default_str();
    cmd.add_option("--out", out_dir, "Output directory for results.csv and table.txt");
    sampler.attach(cmd);
  }

  CellSpec design_cell() const {
    const auto colon = design.find(':');
    const std::string family = design.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : design.substr(colon + 1);
    if (family == "chain") {
      parse_chain_design(arg);
      return {"chain", arg, static_cast<double>(n), sigma};
    }
    if (family == "lattice") {
      std::size_t used = 0;
      double kappa = 0.0;
      try {
        kappa = std::stod(arg, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (arg.empty() || used != arg.size()) throw std::invalid_argument("--design lattice:KAPPA needs a number");
      return {"lattice", "kappa", kappa, sigma};
    }
    if (family == "tree" && arg.empty()) return {"tree", "tree", 0.0, sigma};
    throw std::invalid_argument("unknown design '" + design + "'");
  }

  TableConfig config(std::vector<CellSpec> cells) const {
    TableConfig cfg;
    cfg.cells = std::move(cells);
    cfg.methods.clear();
    for (const auto& m : methods) cfg.methods.push_back(parse_method(m));
    cfg.reps = reps;
    cfg.seed = sampler.seed;
    cfg.fit.sampler = sampler.config();
    cfg.fit.roots = sampler.roots;
    cfg.fit.tv_lambda = sampler.lambda;
    cfg.fit.cv_folds = sampler.folds;
    cfg.workers = 0;
    return cfg;
  }

  void emit(const std::vector<CellResult>& results) const {
    const std::string text = format_results_table(results);
    std::cout << text;
    if (out_dir.empty()) return;
    ensure_dir(out_dir);
    {
      auto out = open_out(fs::path(out_dir) / "results.csv");
      write_results_csv(out, to_rows(results));
    }
    open_out(fs::path(out_dir) / "table.txt") << text;
  }
};

int cmd_simulate(const HarnessCommand& c) {
  const TableConfig cfg = c.config({c.design_cell()});
  if (c.write_data) {
    if (c.out_dir.empty()) throw std::invalid_argument("--write-data requires --out");
    ensure_dir(c.out_dir);
    SignalSpec spec = make_signal(cfg.cells.front(), cell_graph_seed(cfg.seed, 0));
    const auto y = replication_data(spec, replication_seed(cfg.seed, 0, 0));
    {
      auto out = open_out(fs::path(c.out_dir) / "graph.txt");
      write_edge_list(out, spec.graph);
    }
    {
      auto out = open_out(fs::path(c.out_dir) / "truth.txt");
      write_signal(out, spec.theta0);
    }
    auto out = open_out(fs::path(c.out_dir) / "signal.txt");
    write_signal(out, y);
  }
  c.emit(run_table(cfg));
  return 0;
}

int cmd_table(const HarnessCommand& c) {
  std::vector<CellSpec> cells;
  auto append = [&](std::vector<CellSpec> more) { cells.insert(cells.end(), more.begin(), more.end()); };
  if (c.table == "chain" || c.table == "all") append(chain_table_cells(c.n));
  if (c.table == "lattice" || c.table == "all") append(lattice_table_cells());
  if (c.table == "tree" || c.table == "all") append(tree_table_cells());
  c.emit(run_table(c.config(std::move(cells))));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise-constant signal denoising on graphs with t-shrinkage fusion"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);
  app.set_version_flag("--version", "graphfuse 0.1.0");

  DenoiseCommand denoise_cmd;
  auto* denoise = app.add_subcommand("denoise", "Denoise a signal and write summary, change points and plot data");
  denoise_cmd.attach(*denoise, true);

  DenoiseCommand cp_cmd;
  auto* changepoints = app.add_subcommand("changepoints", "Print detected change points");
  cp_cmd.attach(*changepoints, false);

  HarnessCommand sim_cmd;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo comparison on one design");
  sim_cmd.attach(*simulate, true);

  HarnessCommand table_cmd;
  auto* table = app.add_subcommand("table", "Regenerate a simulation table");
  table_cmd.attach(*table, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*denoise) return cmd_denoise(denoise_cmd);
    if (*changepoints) return cmd_changepoints(cp_cmd);
    if (*simulate) return cmd_simulate(sim_cmd);
    if (*table) return cmd_table(table_cmd);
  } catch (const std::exception& e) {
    std::cerr << "graphfuse: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "graphfuse/experiments.hpp"
#include "graphfuse/graph.hpp"
#include "graphfuse/pipeline.hpp"
#include "graphfuse/posterior.hpp"
#include "graphfuse/tfusion.hpp"
#include "graphfuse/tv.hpp"
#include "oracles.hpp"

using namespace graphfuse;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = false;
  std::string details;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

// 1. theta-sweep moments against the dense Gaussian.
Outcome sampler_correctness() {
  const auto start = Clock::now();
  const std::size_t n = 4;
  ChainData data{{0.3, -0.4, 1.2, 0.9}, identity_chain(n), default_hyperparams(n)};
  FusionState state = init_state(data);
  state.sigma2 = 0.6;
  state.lambda = {0.2, 1.5, 0.05};
  const auto g = oracle::chain_posterior(data.y, data.chain, state.lambda, state.sigma2, data.hyper.lambda0);

  const std::size_t draws = 200'000;
  std::vector<std::vector<double>> x(n, std::vector<double>(draws));
  Rng rng(split_seed(kSeed, 1));
  for (std::size_t k = 0; k < draws; ++k) {
    update_thetas(state, data, rng);
    for (std::size_t i = 0; i < n; ++i) x[i][k] = state.theta[i];
  }
  double worst = 0.0;  // largest |error| / SE over all mean and covariance entries
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    worst = std::max(worst, std::abs(oracle::mean(x[i]) - g.mean(ii)) / oracle::batch_means_se(x[i]));
    for (std::size_t j = i; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      std::vector<double> prod(draws);
      for (std::size_t k = 0; k < draws; ++k) prod[k] = (x[i][k] - g.mean(ii)) * (x[j][k] - g.mean(jj));
      worst = std::max(worst, std::abs(oracle::mean(prod) - g.cov(ii, jj)) / oracle::batch_means_se(prod));
    }
  }
  const double secs = seconds_since(start);
  return {worst < 4.0 && secs < 30.0, "max |err|/SE = " + fmt(worst) + ", " + fmt(secs, 3) + " s"};
}

// 2. KS tests of the lambda and sigma2 conditionals at a fixed state.
Outcome conditional_laws() {
  const std::size_t draws = 100'000;
  ChainData data{{0.5, -0.1, 0.8, 2.0, 1.1}, identity_chain(5), default_hyperparams(5)};
  FusionState state = init_state(data);
  state.theta = {0.2, 0.1, 0.9, 1.7, 1.6};
  state.sigma2 = 0.3;
  state.lambda = {0.01, 0.5, 0.2, 0.03};
  Rng rng(split_seed(kSeed, 2));

  // Edge 1 joins positions 1 and 2: d = 0.8.
  const double d = state.theta[2] - state.theta[1];
  const double shape_l = data.hyper.a_t + 0.5;
  const double rate_l = data.hyper.b_t + d * d / (2.0 * state.sigma2);
  std::vector<double> lam(draws);
  for (double& v : lam) {
    FusionState s = state;
    update_lambdas(s, data, rng);
    v = s.lambda[1];
  }
  const double p_lambda = oracle::ks_pvalue(
      oracle::ks_statistic(lam, [&](double v) { return oracle::inverse_gamma_cdf(v, shape_l, rate_l); }), draws);

  const double shape_s = data.hyper.a_sigma + 5.0;
  const double rate_s =
      oracle::sigma2_rate(data.y, state.theta, state.lambda, data.chain, data.hyper.b_sigma, data.hyper.lambda0);
  std::vector<double> sig(draws);
  for (double& v : sig) {
    FusionState s = state;
    update_sigma2(s, data, rng);
    v = s.sigma2;
  }
  const double p_sigma = oracle::ks_pvalue(
      oracle::ks_statistic(sig, [&](double v) { return oracle::inverse_gamma_cdf(v, shape_s, rate_s); }), draws);
  return {p_lambda > 1e-3 && p_sigma > 1e-3, "KS p(lambda) = " + fmt(p_lambda) + ", p(sigma2) = " + fmt(p_sigma)};
}

// 3. Successive-conditional simulator against prior moments.
Outcome geweke() {
  const std::size_t n = 5;
  const std::size_t cycles = 50'000;
  Hyperparams h = default_hyperparams(n);
  h.a_sigma = 6.0;
  h.b_sigma = 5.0;
  h.lambda0 = 5.0;
  h.set_t_prior(3.0, 0.5);
  ChainData data{std::vector<double>(n, 0.0), identity_chain(n), h};
  Rng rng(split_seed(kSeed, 3));

  // Start from an exact prior draw of (sigma2, lambda, theta, y).
  FusionState state;
  state.sigma2 = sample_inverse_gamma(h.a_sigma, h.b_sigma, rng);
  state.lambda.resize(n - 1);
  for (double& l : state.lambda) l = sample_inverse_gamma(h.a_t, h.b_t, rng);
  state.theta.resize(n);
  state.theta[0] = sample_normal(0.0, h.lambda0 * state.sigma2, rng);
  for (std::size_t t = 1; t < n; ++t) {
    state.theta[t] = state.theta[t - 1] + sample_normal(0.0, state.lambda[t - 1] * state.sigma2, rng);
  }
  for (std::size_t i = 0; i < n; ++i) data.y[i] = sample_normal(state.theta[i], state.sigma2, rng);

  std::vector<double> s1(cycles), s2(cycles), r1(cycles), r2(cycles);
  for (std::size_t k = 0; k < cycles; ++k) {
    update_lambdas(state, data, rng);
    update_sigma2(state, data, rng);
    update_thetas(state, data, rng);
    for (std::size_t i = 0; i < n; ++i) data.y[i] = sample_normal(state.theta[i], state.sigma2, rng);
    s1[k] = state.sigma2;
    s2[k] = state.sigma2 * state.sigma2;
    r1[k] = state.theta[0];
    r2[k] = state.theta[0] * state.theta[0];
  }
  // sigma2 ~ IG(6, 5): E = 1, E[sigma^4] = 25 / (5 * 4); theta_r ~ N(0, 5 sigma2).
  const double targets[] = {1.0, 1.25, 0.0, 5.0};
  const std::vector<double>* series[] = {&s1, &s2, &r1, &r2};
  const char* names[] = {"E s2", "E s4", "E th", "E th2"};
  double worst = 0.0;
  std::string details;
  for (int i = 0; i < 4; ++i) {
    const double m = oracle::mean(*series[i]);
    const double z = std::abs(m - targets[i]) / oracle::batch_means_se(*series[i]);
    worst = std::max(worst, z);
    details += std::string(i ? ", " : "") + names[i] + " = " + fmt(m) + " (z " + fmt(z, 2) + ")";
  }
  return {worst < 4.0, details};
}

MethodResult find_method(const CellResult& cell, Method m) {
  for (const MethodResult& r : cell.methods) {
    if (r.method == m) return r;
  }
  throw std::logic_error("method missing from results");
}

TableConfig table(std::vector<CellSpec> cells, std::vector<Method> methods, std::size_t reps) {
  TableConfig cfg;
  cfg.cells = std::move(cells);
  cfg.methods = std::move(methods);
  cfg.reps = reps;
  cfg.seed = kSeed;
  return cfg;
}

// 4. Chain table ordering.
Outcome chain_table() {
  const auto start = Clock::now();
  const auto res = run_table(table({{"chain", "even", 100.0, 0.1}, {"chain", "even", 100.0, 0.5}},
                                   {Method::t_fusion, Method::laplace, Method::l1}, 30));
  const double t1 = find_method(res[0], Method::t_fusion).mse.mean;
  const double lap1 = find_method(res[0], Method::laplace).mse.mean;
  const double lap5 = find_method(res[1], Method::laplace).mse.mean;
  const double l15 = find_method(res[1], Method::l1).mse.mean;
  const double secs = seconds_since(start);
  const bool pass = t1 < 0.02 && lap1 > 5.0 * t1 && l15 < lap5 && secs < 600.0;
  return {pass, "sigma=0.1: t " + fmt(t1) + ", laplace " + fmt(lap1) + "; sigma=0.5: l1 " + fmt(l15) +
                    ", laplace " + fmt(lap5) + "; " + fmt(secs, 3) + " s"};
}

// 5. Lattice with a strong disk.
Outcome lattice_table() {
  const auto start = Clock::now();
  const auto res = run_table(table({{"lattice", "kappa", 10.0, 0.3}}, {Method::t_fusion, Method::laplace}, 20));
  const double t = find_method(res[0], Method::t_fusion).adj_mse.mean;
  const double lap = find_method(res[0], Method::laplace).adj_mse.mean;
  const double secs = seconds_since(start);
  return {t < 0.01 && lap > 0.05 && secs < 600.0,
          "adj MSE t " + fmt(t) + ", laplace " + fmt(lap) + "; " + fmt(secs, 3) + " s"};
}

// 6. Linked trees.
Outcome tree_table() {
  const auto start = Clock::now();
  const auto res = run_table(table(tree_table_cells(), {Method::t_fusion, Method::laplace, Method::l1}, 20));
  const double t = find_method(res[0], Method::t_fusion).mse.mean;
  const double lap = find_method(res[0], Method::laplace).mse.mean;
  const double l1 = find_method(res[0], Method::l1).mse.mean;
  const double secs = seconds_since(start);
  return {t < 0.01 && lap > 0.03 && l1 < 0.01 && secs < 600.0,
          "MSE t " + fmt(t) + ", laplace " + fmt(lap) + ", l1 " + fmt(l1) + "; " + fmt(secs, 3) + " s"};
}

// 7. Chain TV never exceeds twice the graph TV.
Outcome tv_doubling() {
  std::mt19937_64 rng(split_seed(kSeed, 7));
  std::normal_distribution<double> z(0.0, 1.0);
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 49;
    std::vector<Edge> edges;
    for (std::size_t v = 1; v < n; ++v) edges.push_back({static_cast<NodeId>(rng() % v), static_cast<NodeId>(v)});
    const std::size_t extra = rng() % (n + 1);
    for (std::size_t k = 0; k < extra; ++k) {
      const auto a = static_cast<NodeId>(rng() % n);
      const auto b = static_cast<NodeId>(rng() % n);
      if (a != b) edges.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
      return std::pair(x.u, x.v) < std::pair(y.u, y.v);
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const Edge& x, const Edge& y) { return x.u == y.u && x.v == y.v; }),
                edges.end());
    const Graph g(n, edges);
    std::vector<double> theta(n);
    for (double& v : theta) v = trial % 2 ? z(rng) : std::round(2.0 * z(rng));
    const ChainOrder chain = dfs_chain(g, static_cast<NodeId>(rng() % n));
    const double graph_tv = total_variation(theta, g.edges());
    const double chain_tv = total_variation(theta, chain.chain_edges);
    if (chain_tv > 2.0 * graph_tv) ++violations;
    if (graph_tv > 0.0) worst_ratio = std::max(worst_ratio, chain_tv / graph_tv);
  }
  return {violations == 0, std::to_string(violations) + " violations, max ratio " + fmt(worst_ratio)};
}

// 8. Fused-lasso optimality and limits.
Outcome fused_lasso_exactness() {
  std::mt19937_64 rng(split_seed(kSeed, 8));
  std::normal_distribution<double> z(0.0, 1.0);
  double worst_kkt = 0.0;
  double worst_limit = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    std::vector<double> y(n);
    double level = 0.0;
    for (double& v : y) {
      if (rng() % 10 == 0) level = 3.0 * z(rng);
      v = level + 0.5 * z(rng);
    }
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> links;
    for (std::size_t t = 0; t + 1 < n; ++t) {
      links.push_back({std::min(perm[t], perm[t + 1]), std::max(perm[t], perm[t + 1])});
    }
    const ChainOrder chain = dfs_chain(Graph(n, links), perm[0]);
    const double lambda = std::exp(std::uniform_real_distribution<double>(-4.0, 3.0)(rng));
    const TvSolution sol = tv_denoise_chain(y, chain, lambda);
    worst_kkt = std::max(worst_kkt, oracle::kkt_violation(y, sol.theta_hat, lambda, chain));

    const auto same = tv_denoise_chain(y, chain, 0.0).theta_hat;
    for (std::size_t i = 0; i < n; ++i) worst_limit = std::max(worst_limit, std::abs(same[i] - y[i]));
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    const auto flat = tv_denoise_chain(y, chain, static_cast<double>(n) * (*hi - *lo) + 1.0).theta_hat;
    for (double v : flat) worst_limit = std::max(worst_limit, std::abs(v - mean));
  }
  return {worst_kkt < 1e-8 && worst_limit <= 1e-10,
          "max KKT violation " + fmt(worst_kkt) + ", max limit error " + fmt(worst_limit)};
}

// 9. Change points from clean and constant data.
Outcome sparsification() {
  const SignalSpec spec = gen_chain_signal(ChainDesign::even);
  DenoiseOptions opt;
  opt.sampler.seed = kSeed;
  const DenoiseReport clean = denoise(spec.theta0, spec.graph, opt);
  const std::vector<std::size_t> truth{9, 19, 29, 39, 49, 59, 69, 79, 89};
  const DenoiseReport flat = denoise(std::vector<double>(100, 2.5), spec.graph, opt);
  std::string found;
  for (std::size_t t : clean.change_points) found += (found.empty() ? "" : ",") + std::to_string(t);
  return {clean.change_points == truth && flat.change_points.empty(),
          "clean: [" + found + "], constant: " + std::to_string(flat.change_points.size()) + " change points"};
}

// 10. Error shrinks as the even chain grows.
Outcome contraction() {
  const auto start = Clock::now();
  const auto res =
      run_table(table({{"chain", "even", 100.0, 0.3}, {"chain", "even", 400.0, 0.3}}, {Method::t_fusion}, 20));
  const double small = res[0].methods[0].mse.mean;
  const double large = res[1].methods[0].mse.mean;
  const double secs = seconds_since(start);
  return {large < small && secs < 300.0,
          "MSE n=100 " + fmt(small) + ", n=400 " + fmt(large) + "; " + fmt(secs, 3) + " s"};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// 11. Byte-identical CLI output across repeats and thread counts.
Outcome cli_determinism() {
#ifndef GRAPHFUSE_CLI_PATH
  return {false, "command-line tool not built"};
#else
  const fs::path base = fs::temp_directory_path() / ("graphfuse_accept_" + std::to_string(::getpid()));
  fs::remove_all(base);
  const std::string cli = GRAPHFUSE_CLI_PATH;
  const fs::path data = base / "data";
  fs::create_directories(data);
  const std::string prep = "GRAPHFUSE_THREADS=1 \"" + cli +
                           "\" simulate --design lattice:5 --reps 2 --iters 200 --burnin 50 --seed 3 "
                           "--methods t --write-data --out \"" + data.string() + "\" > /dev/null";
  if (std::system(prep.c_str()) != 0) return {false, "simulate --write-data failed"};

  const std::string graph = (data / "graph.txt").string();
  const std::string signal = (data / "signal.txt").string();
  struct Command {
    std::string name;
    std::string args;  // "{out}" expands to the run's output directory
  };
  const std::vector<Command> commands{
      {"denoise", "denoise --graph \"" + graph + "\" --signal \"" + signal +
                      "\" --roots 3 --iters 300 --burnin 100 --seed 5 --out {out}"},
      {"denoise-l1", "denoise --gen lattice:16x16 --signal \"" + signal + "\" --method l1 --seed 5 --out {out}"},
      {"changepoints", "changepoints --gen lattice:16x16 --signal \"" + signal +
                           "\" --iters 300 --burnin 100 --seed 5 --out {out}"},
      {"simulate", "simulate --design chain:uneven --reps 3 --iters 300 --burnin 100 --seed 9 --write-data --out {out}"},
      {"table", "table --table tree --reps 2 --iters 200 --burnin 50 --seed 9 --out {out}"},
  };

  std::size_t mismatches = 0;
  std::size_t files = 0;
  std::string details;
  for (const Command& c : commands) {
    std::vector<fs::path> dirs;
    for (const char* threads : {"1", "4", "4"}) {
      // Every repeat writes to the same path (it is echoed on stdout), then
      // the results are moved aside for comparison.
      const fs::path work = base / "run";
      fs::create_directories(work);
      std::string args = c.args;
      const auto pos = args.find("{out}");
      args.replace(pos, 5, "\"" + work.string() + "\"");
      const std::string cmd = std::string("GRAPHFUSE_THREADS=") + threads + " \"" + cli + "\" " + args +
                              " > \"" + (work / "stdout.txt").string() + "\" 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        details += c.name + " exited with an error; ";
        ++mismatches;
      }
      const fs::path dir = base / (c.name + "_" + threads + "_" + std::to_string(dirs.size()));
      fs::rename(work, dir);
      dirs.push_back(dir);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const std::string reference = slurp(entry.path());
      ++files;
      for (std::size_t k = 1; k < dirs.size(); ++k) {
        if (slurp(dirs[k] / entry.path().filename()) != reference) {
          details += c.name + "/" + entry.path().filename().string() + " differs; ";
          ++mismatches;
        }
      }
    }
  }
  fs::remove_all(base);
  return {mismatches == 0 && files > 0,
          details + std::to_string(files) + " output files compared over " + std::to_string(commands.size()) +
              " commands, " + std::to_string(mismatches) + " mismatches"};
#endif
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"sampler correctness", sampler_correctness},
      {"conditional laws", conditional_laws},
      {"Geweke joint test", geweke},
      {"chain table ordering", chain_table},
      {"lattice table", lattice_table},
      {"tree table", tree_table},
      {"chain TV doubling", tv_doubling},
      {"fused-lasso exactness", fused_lasso_exactness},
      {"sparsification", sparsification},
      {"contraction proxy", contraction},
      {"CLI determinism", cli_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << i + 1 << ' ' << criteria[i].first << ": " << o.details
              << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failures) << '/' << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}

#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphfuse/graph.hpp"

namespace graphfuse {

// Signal file: one real per line; blank lines and '#' comments ignored.
std::vector<double> read_signal(std::istream& in);
void write_signal(std::ostream& out, std::span<const double> values);

Graph load_graph(const std::filesystem::path& path);

// Generator spec: "chain:N", "lattice:RxC" or "trees:SEED" (four linked
// 50-node trees, 3 children per node).
Graph generate_graph(std::string_view spec);
std::vector<double> load_signal(const std::filesystem::path& path);

struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  friend auto operator<=>(const Date&, const Date&) = default;
};

// Accepts YYYY-MM-DD and MM/DD/YYYY.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& date);

struct StockOptions {
  std::string date_column = "Date";
  std::string price_column;  // empty: first of "Adj Close", "Adjusted Close", "Adj_Close", "AdjClose"
  std::optional<Date> from;
  std::optional<Date> to;
  bool log_returns = false;
};

struct StockSeries {
  std::vector<Date> dates;  // date of each cumulative-return point
  std::vector<double> y;    // cumulative returns
  std::size_t skipped_rows = 0;

  Graph graph() const { return gen_chain(y.size()); }
};

// Daily returns r_t = p_t / p_{t-1} - 1 (or log p_t / p_{t-1}) on rows in
// [from, to], accumulated to y_t = sum_{u <= t} r_u. Unparseable rows are
// skipped and counted. Throws on missing columns or fewer than 3 usable rows.
StockSeries ingest_stock_csv(std::istream& in, const StockOptions& options = {});
StockSeries ingest_stock_csv(const std::filesystem::path& path, const StockOptions& options = {});

// Sparsification of a single root's draws, kept for diagnostics.
struct RootPartition {
  NodeId root = 0;
  std::size_t num_blocks = 0;
  std::vector<std::size_t> change_points;

  friend bool operator==(const RootPartition&, const RootPartition&) = default;
};

// Everything `denoise` writes as JSON. Band and sigma fields are absent for
// point-estimate methods.
struct DenoiseReport {
  std::string method;
  std::vector<double> theta_mean;
  std::optional<std::vector<double>> band_lo;
  std::optional<std::vector<double>> band_hi;
  std::optional<double> sigma_hat;
  std::optional<double> level;
  std::vector<std::size_t> blocks;
  std::vector<std::size_t> change_points;
  std::vector<std::string> change_point_labels;
  double threshold = 0.0;
  std::optional<double> tv_lambda;  // fused-lasso penalty actually used
  std::optional<double> mse;
  std::optional<double> adj_mse;
  std::vector<RootPartition> per_root;

  friend bool operator==(const DenoiseReport&, const DenoiseReport&) = default;
};

std::string report_to_json(const DenoiseReport& report);
DenoiseReport report_from_json(std::string_view text);
void write_report_csv(std::ostream& out, const DenoiseReport& report);

// Plot data: index,y,estimate,lo,hi. Band columns repeat the estimate when
// the report has no bands.
void write_plot_csv(std::ostream& out, std::span<const std::string> index, std::span<const double> y,
                    const DenoiseReport& report);

// Shortest round-trip decimal form.
std::string format_exact(double value);

}  // namespace graphfuse

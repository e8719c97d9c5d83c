#include "graphfuse/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace graphfuse {

using nlohmann::json;

std::string format_exact(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc()) throw std::runtime_error("format_exact: conversion failed");
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    auto field = trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
      field = field.substr(1, field.size() - 2);
    }
    fields.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::vector<double> read_signal(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto v = parse_real(view);
    if (!v || !std::isfinite(*v)) {
      throw std::runtime_error("signal file: bad value on line " + std::to_string(line_no));
    }
    values.push_back(*v);
  }
  if (values.empty()) throw std::runtime_error("signal file: no values");
  return values;
}

void write_signal(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << format_exact(v) << '\n';
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path.string());
  return read_edge_list(in);
}

Graph generate_graph(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("graph spec '" + std::string(spec) + "' lacks ':'");
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view arg = spec.substr(colon + 1);
  auto count = [&](std::string_view text) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
      throw std::invalid_argument("graph spec '" + std::string(spec) + "': bad number '" +
                                  std::string(text) + "'");
    }
    return v;
  };
  if (kind == "chain") return gen_chain(count(arg));
  if (kind == "lattice") {
    const auto x = arg.find('x');
    if (x == std::string_view::npos) throw std::invalid_argument("lattice spec must be RxC");
    return gen_lattice(count(arg.substr(0, x)), count(arg.substr(x + 1)));
  }
  if (kind == "trees") return gen_linked_trees(4, 50, 3, count(arg));
  throw std::invalid_argument("unknown graph generator '" + std::string(kind) + "'");
}

std::vector<double> load_signal(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open signal file " + path.string());
  return read_signal(in);
}

std::optional<Date> parse_date(std::string_view text) {
  text = trim(text);
  auto number = [](std::string_view s) -> std::optional<int> {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
  };
  Date d;
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    const auto y = number(text.substr(0, 4)), m = number(text.substr(5, 2)), dd = number(text.substr(8, 2));
    if (!y || !m || !dd) return std::nullopt;
    d = {*y, *m, *dd};
  } else {
    const auto s1 = text.find('/');
    const auto s2 = s1 == std::string_view::npos ? s1 : text.find('/', s1 + 1);
    if (s2 == std::string_view::npos) return std::nullopt;
    const auto m = number(text.substr(0, s1));
    const auto dd = number(text.substr(s1 + 1, s2 - s1 - 1));
    const auto y = number(text.substr(s2 + 1));
    if (!y || !m || !dd || text.size() - s2 - 1 != 4) return std::nullopt;
    d = {*y, *m, *dd};
  }
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) return std::nullopt;
  return d;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", date.year, date.month, date.day);
  return buf;
}

StockSeries ingest_stock_csv(std::istream& in, const StockOptions& options) {
  std::string header_line;
  if (!std::getline(in, header_line)) throw std::runtime_error("stock CSV: empty file");
  const auto header = split_csv(header_line);

  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto date_col = column(options.date_column);
  if (!date_col) throw std::runtime_error("stock CSV: missing column '" + options.date_column + "'");
  std::optional<std::size_t> price_col;
  if (!options.price_column.empty()) {
    price_col = column(options.price_column);
    if (!price_col) throw std::runtime_error("stock CSV: missing column '" + options.price_column + "'");
  } else {
    for (const char* name : {"Adj Close", "Adjusted Close", "Adj_Close", "AdjClose"}) {
      if ((price_col = column(name))) break;
    }
    if (!price_col) throw std::runtime_error("stock CSV: no adjusted-close column");
  }

  std::vector<std::pair<Date, double>> rows;
  StockSeries series;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() <= std::max(*date_col, *price_col)) {
      ++series.skipped_rows;
      continue;
    }
    const auto date = parse_date(fields[*date_col]);
    const auto price = parse_real(fields[*price_col]);
    if (!date || !price || !(*price > 0.0) || !std::isfinite(*price)) {
      ++series.skipped_rows;
      continue;
    }
    if (options.from && *date < *options.from) continue;
    if (options.to && *date > *options.to) continue;
    rows.emplace_back(*date, *price);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  if (rows.size() < 3) {
    throw std::runtime_error("stock CSV: need at least 3 usable rows in range, found " +
                             std::to_string(rows.size()));
  }

  double cumulative = 0.0;
  for (std::size_t t = 1; t < rows.size(); ++t) {
    const double ratio = rows[t].second / rows[t - 1].second;
    cumulative += options.log_returns ? std::log(ratio) : ratio - 1.0;
    series.dates.push_back(rows[t].first);
    series.y.push_back(cumulative);
  }
  return series;
}

StockSeries ingest_stock_csv(const std::filesystem::path& path, const StockOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stock file " + path.string());
  return ingest_stock_csv(in, options);
}

std::string report_to_json(const DenoiseReport& r) {
  json j;
  j["method"] = r.method;
  j["theta_mean"] = r.theta_mean;
  j["band_lo"] = r.band_lo ? json(*r.band_lo) : json(nullptr);
  j["band_hi"] = r.band_hi ? json(*r.band_hi) : json(nullptr);
  j["sigma_hat"] = r.sigma_hat ? json(*r.sigma_hat) : json(nullptr);
  j["level"] = r.level ? json(*r.level) : json(nullptr);
  j["blocks"] = r.blocks;
  j["change_points"] = r.change_points;
  j["change_point_labels"] = r.change_point_labels;
  j["threshold"] = r.threshold;
  if (r.tv_lambda) j["tv_lambda"] = *r.tv_lambda;
  if (r.mse) j["mse"] = *r.mse;
  if (r.adj_mse) j["adj_mse"] = *r.adj_mse;
  json roots = json::array();
  for (const RootPartition& p : r.per_root) {
    roots.push_back({{"root", p.root}, {"num_blocks", p.num_blocks}, {"change_points", p.change_points}});
  }
  j["per_root"] = std::move(roots);
  return j.dump(2) + "\n";
}

DenoiseReport report_from_json(std::string_view text) {
  const json j = json::parse(text);
  auto opt_vec = [&](const char* key) -> std::optional<std::vector<double>> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<std::vector<double>>();
  };
  auto opt_num = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
  };
  DenoiseReport r;
  r.method = j.at("method").get<std::string>();
  r.theta_mean = j.at("theta_mean").get<std::vector<double>>();
  r.band_lo = opt_vec("band_lo");
  r.band_hi = opt_vec("band_hi");
  r.sigma_hat = opt_num("sigma_hat");
  r.level = opt_num("level");
  r.blocks = j.at("blocks").get<std::vector<std::size_t>>();
  r.change_points = j.at("change_points").get<std::vector<std::size_t>>();
  r.change_point_labels = j.at("change_point_labels").get<std::vector<std::string>>();
  r.threshold = j.at("threshold").get<double>();
  r.tv_lambda = opt_num("tv_lambda");
  r.mse = opt_num("mse");
  r.adj_mse = opt_num("adj_mse");
  if (j.contains("per_root")) {
    for (const json& p : j["per_root"]) {
      r.per_root.push_back({p.at("root").get<NodeId>(), p.at("num_blocks").get<std::size_t>(),
                            p.at("change_points").get<std::vector<std::size_t>>()});
    }
  }
  return r;
}

void write_report_csv(std::ostream& out, const DenoiseReport& r) {
  out << "node,theta_mean,band_lo,band_hi,block\n";
  for (std::size_t i = 0; i < r.theta_mean.size(); ++i) {
    out << i << ',' << format_exact(r.theta_mean[i]) << ','
        << (r.band_lo ? format_exact((*r.band_lo)[i]) : "") << ','
        << (r.band_hi ? format_exact((*r.band_hi)[i]) : "") << ',' << r.blocks.at(i) << '\n';
  }
}

void write_plot_csv(std::ostream& out, std::span<const std::string> index, std::span<const double> y,
                    const DenoiseReport& report) {
  const std::size_t n = y.size();
  if (index.size() != n || report.theta_mean.size() != n) {
    throw std::invalid_argument("write_plot_csv: length mismatch");
  }
  out << "index,y,estimate,lo,hi\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double est = report.theta_mean[i];
    out << index[i] << ',' << format_exact(y[i]) << ',' << format_exact(est) << ','
        << format_exact(report.band_lo ? (*report.band_lo)[i] : est) << ','
        << format_exact(report.band_hi ? (*report.band_hi)[i] : est) << '\n';
  }
}

}  // namespace graphfuse

#include "lobflow/exports.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace lobflow {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "bin_center,density\n";
  for (std::size_t i = 0; i < h.bins(); ++i) {
    out += format_double(h.bin_center(i));
    out += ',';
    out += format_double(h.density[i]);
    out += '\n';
  }
  return out;
}

std::string atoms_csv(const Histogram& h) {
  std::string out = "value,mass,count\n";
  for (const auto& a : h.atoms) {
    out += format_double(a.value);
    out += ',';
    out += format_double(a.mass);
    out += ',';
    out += std::to_string(a.count);
    out += '\n';
  }
  return out;
}

namespace {

BinningSpec with_atoms(BinningSpec spec) {
  spec.extract_atoms = true;
  return spec;
}

ordered_json histogram_json(const Histogram& h) {
  ordered_json j;
  j["edges"] = h.edges;
  j["counts"] = h.counts;
  j["density"] = h.density;
  ordered_json atoms = ordered_json::array();
  for (const auto& a : h.atoms) {
    atoms.push_back({{"value", a.value}, {"count", a.count}, {"mass", a.mass}});
  }
  j["atoms"] = std::move(atoms);
  j["n_total"] = h.n_total;
  j["n_binned"] = h.n_binned;
  j["n_underflow"] = h.n_underflow;
  j["n_overflow"] = h.n_overflow;
  return j;
}

ordered_json optional_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

ordered_json view_json(const std::optional<BookView>& v) {
  if (!v) return nullptr;
  ordered_json j;
  j["best_bid"] = v->best_bid;
  j["best_ask"] = v->best_ask;
  j["bid_quote_volume"] = v->bid_quote_volume;
  j["ask_quote_volume"] = v->ask_quote_volume;
  j["spread_ticks"] = v->spread_ticks;
  j["gap_behind_bid"] = v->gap_behind_bid ? ordered_json(*v->gap_behind_bid) : nullptr;
  j["gap_behind_ask"] = v->gap_behind_ask ? ordered_json(*v->gap_behind_ask) : nullptr;
  return j;
}

}  // namespace

Histogram relative_price_histogram(const DayAnalysis& a) {
  return build_histogram(a.inspread_rel_price, with_atoms(BinningSpec::uniform(0.05, 0.0, 1.0)));
}

Histogram prior_spread_histogram(const DayAnalysis& a) {
  return build_histogram(a.inspread_prior_spread, with_atoms(BinningSpec::uniform(1.0)));
}

Histogram deviation_histogram(const DayAnalysis& a) {
  return build_histogram(a.abs_deviation, with_atoms(BinningSpec::uniform(1.0)));
}

Histogram relative_volume_histogram(const DayAnalysis& a) {
  return build_histogram(a.relative_volumes, with_atoms(BinningSpec::uniform(0.05)));
}

Histogram return_histogram(const DayAnalysis& a) {
  return build_histogram(a.returns, with_atoms(BinningSpec::uniform(a.return_bin_width)));
}

std::string summary_json(const DayAnalysis& a) {
  ordered_json j;
  j["ticker"] = a.ticker;
  j["date"] = a.date;
  j["session_events"] = a.stats.session_events;
  j["warmup_events"] = a.stats.warmup_events;
  j["hidden_trades"] = a.stats.hidden_trades;

  ordered_json freq;
  freq["mou"] = optional_json(a.freq.mou);
  freq["mo"] = optional_json(a.freq.mo);
  freq["act"] = optional_json(a.freq.act);
  freq["sprd"] = optional_json(a.freq.sprd);
  freq["n_market_orders"] = a.freq.n_market_orders;
  freq["n_undirected"] = a.freq.n_undirected;
  freq["n_adds"] = a.freq.n_adds;
  freq["n_active_adds"] = a.freq.n_active_adds;
  freq["n_inspread_adds"] = a.freq.n_inspread_adds;
  j["frequency"] = std::move(freq);

  j["onquote_share"] = {{"buy", optional_json(a.onquote_buy)},
                        {"sell", optional_json(a.onquote_sell)}};
  j["volume_quote_correlation"] = {{"all", optional_json(a.corr_all)},
                                   {"movers", optional_json(a.corr_movers)}};

  ordered_json sizes = ordered_json::object();
  for (const auto& [size, count] : cluster_size_counts(a.orders)) {
    sizes[std::to_string(size)] = count;
  }
  j["cluster_size_counts"] = std::move(sizes);

  ordered_json hists = ordered_json::object();
  const auto put = [&](const char* name, const std::vector<double>& samples, auto build) {
    hists[name] = samples.empty() ? ordered_json(nullptr) : histogram_json(build(a));
  };
  put("inspread_relative_price", a.inspread_rel_price, relative_price_histogram);
  put("prior_spread_ticks", a.inspread_prior_spread, prior_spread_histogram);
  put("abs_deviation_ticks", a.abs_deviation, deviation_histogram);
  put("relative_volume", a.relative_volumes, relative_volume_histogram);
  put("impact_return", a.returns, return_histogram);
  hists["cluster_size"] =
      a.orders.empty() ? ordered_json(nullptr) : histogram_json(cluster_size_histogram(a.orders));
  j["histograms"] = std::move(hists);

  j["median_mid"] = a.median_mid;
  j["return_bin_width"] = a.return_bin_width;
  return j.dump(2) + "\n";
}

std::string mo_jsonl(const std::vector<MarketOrder>& orders) {
  std::string out;
  for (const auto& mo : orders) {
    ordered_json j;
    j["first_ts"] = mo.first_ts;
    j["last_ts"] = mo.last_ts;
    j["side"] = mo.undirected() ? "undirected" : to_string(mo.side);
    j["cluster_size"] = mo.cluster_size();
    j["total_volume"] = mo.total_volume;
    j["visible_volume"] = mo.visible_volume;
    j["has_hidden"] = mo.has_hidden;
    j["book_before"] = view_json(mo.book_before);
    j["book_after"] = view_json(mo.book_after);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string matrix_csv(const DistanceMatrix& m) {
  std::string out = "label";
  for (const auto& l : m.labels) {
    out += ',';
    out += l;
  }
  out += '\n';
  for (std::size_t i = 0; i < m.n; ++i) {
    out += m.labels[i];
    for (std::size_t jx = 0; jx < m.n; ++jx) {
      out += ',';
      out += format_double(m.at(i, jx));
    }
    out += '\n';
  }
  return out;
}

DistanceMatrix reorder_by_cluster(const DistanceMatrix& m, const std::vector<int>& labels) {
  std::vector<std::size_t> order(m.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  DistanceMatrix out;
  out.n = m.n;
  out.labels.reserve(m.n);
  out.values.resize(m.n * m.n);
  for (std::size_t i = 0; i < m.n; ++i) out.labels.push_back(m.labels[order[i]]);
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t jx = 0; jx < m.n; ++jx) {
      out.at(i, jx) = m.at(order[i], order[jx]);
    }
  }
  return out;
}

std::string assignment_json(const DistanceMatrix& m, const ClusterAssignment& a) {
  ordered_json j;
  j["k"] = a.k;
  j["mean_silhouette"] = a.mean_silhouette;
  j["objective"] = a.objective;
  j["seed"] = a.seed;
  j["restarts"] = a.restarts;
  j["negative_distance_count"] = a.negative_distance_count;
  ordered_json labels = ordered_json::object();
  for (std::size_t i = 0; i < m.n; ++i) labels[m.labels[i]] = a.labels[i];
  j["labels"] = std::move(labels);
  return j.dump(2) + "\n";
}

std::string silhouette_csv(const std::vector<std::pair<int, double>>& rows) {
  std::string out = "k,mean_silhouette\n";
  for (const auto& [k, s] : rows) {
    out += std::to_string(k);
    out += ',';
    out += format_double(s);
    out += '\n';
  }
  return out;
}

std::string ground_truth_json(const GeneratedDay& g) {
  ordered_json j;
  j["regime"] = g.truth.regime;
  j["ticker"] = g.day.ticker;
  j["date"] = g.day.date;
  j["n_market_orders"] = g.truth.orders.size();
  j["n_all_hidden"] = g.truth.all_hidden_count();
  ordered_json orders = ordered_json::array();
  for (const auto& o : g.truth.orders) {
    orders.push_back({{"side", o.all_hidden ? "undirected" : to_string(o.side)},
                      {"all_hidden", o.all_hidden},
                      {"trade_indices", o.trade_indices}});
  }
  j["orders"] = std::move(orders);
  return j.dump() + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

}  // namespace lobflow

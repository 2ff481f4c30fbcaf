#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lobflow/book.hpp"
#include "lobflow/ingest.hpp"
#include "lobflow/market_orders.hpp"
#include "lobflow/observables.hpp"
#include "lobflow/types.hpp"

namespace lobflow {

struct AnalyzeOptions {
  SessionConfig session;
  bool exclude_mixed_hidden = false;  // drop hidden-carrying MOs from impact stats
  double return_bin_width = 0;        // 0 = tick / (2 * median pre-trade midpoint)
  std::size_t snapshot_stride = 0;    // 0 = no book snapshots
};

// Collects inside-of-book snapshots every `stride` session events.
class SnapshotCollector final : public ReplayObserver {
 public:
  explicit SnapshotCollector(std::size_t stride) : stride_(stride) {}

  void on_event(const Event& e, const std::optional<BookView>& /*before*/,
                const std::optional<BookView>& after) override {
    ++count_;
    if (stride_ == 0 || count_ % stride_ != 0 || !after) return;
    lines_.push_back(book_view_json(e.timestamp_ms, *after));
  }

  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::size_t stride_;
  std::size_t count_ = 0;
  std::vector<std::string> lines_;
};

// Everything the pipeline measures on one instrument-day, from one replay.
struct DayAnalysis {
  std::string ticker;
  int date = 0;
  ReplayStats stats;

  std::vector<MarketOrder> orders;
  std::vector<PlacementSample> placements;
  std::vector<ImpactSample> impacts;
  FrequencySummary freq;

  std::optional<double> onquote_buy;
  std::optional<double> onquote_sell;
  std::optional<double> corr_all;     // volume/quote correlation, every MO
  std::optional<double> corr_movers;  // only midpoint-moving MOs

  // raw samples feeding the exported histograms
  std::vector<double> inspread_rel_price;
  std::vector<double> inspread_prior_spread;
  std::vector<double> abs_deviation;  // on-quote and off-spread adds, in ticks
  std::vector<double> relative_volumes;
  std::vector<double> returns;

  double median_mid = 0;  // median pre-trade midpoint, price units
  double return_bin_width = 0;
  std::vector<std::string> snapshots;
};

DayAnalysis analyze_day(const InstrumentDay& day, const AnalyzeOptions& options);

std::string day_key(const DayAnalysis& a);  // "<date>_<ticker>"

}  // namespace lobflow

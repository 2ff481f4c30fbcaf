#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "lobflow/book.hpp"
#include "lobflow/market_orders.hpp"
#include "lobflow/types.hpp"

namespace lobflow {

enum class PlacementKind { InSpread, OnQuote, OffSpread };

const char* to_string(PlacementKind kind);

// Where a limit order landed relative to the same-side quote.
struct PlacementSample {
  PlacementKind kind = PlacementKind::OnQuote;
  Side side = Side::Buy;
  double relative_price = 0;              // InSpread only, in (0, 1)
  std::int64_t abs_deviation_ticks = 0;   // OnQuote (= 0) and OffSpread
  std::int64_t prior_spread_ticks = 0;    // InSpread only, >= 2
  Price quote_price = 0;                  // same-side quote before the add
};

// Classifies an Add against the pre-event book.  Throws if the add prices at
// or through the opposite quote; validated streams never contain such adds.
PlacementSample classify_placement(const Event& add, const BookView& before);

struct FrequencySummary {
  // Each ratio is absent when its denominator is zero.
  std::optional<double> mou;   // undirected MOs / all MOs
  std::optional<double> mo;    // MOs / (MOs + adds)
  std::optional<double> act;   // adds later executed at least once / adds
  std::optional<double> sprd;  // in-spread adds / adds
  std::size_t n_market_orders = 0;
  std::size_t n_undirected = 0;
  std::size_t n_adds = 0;
  std::size_t n_active_adds = 0;
  std::size_t n_inspread_adds = 0;
};

struct ImpactSample {
  double relative_volume = 0;  // visible MO volume / quote volume on hit side
  double ret = 0;              // (mid_after - mid_before) / mid_before
  Side side = Side::Buy;
  Volume visible_volume = 0;
  Volume quote_volume = 0;
  bool has_hidden = false;
  MidpointX2 mid_before_x2 = 0;
  std::optional<std::int64_t> gap_behind_hit;  // ticks behind the hit quote
};

// Collects placement samples for every session Add with a two-sided book.
class PlacementCollector final : public ReplayObserver {
 public:
  void on_event(const Event& e, const std::optional<BookView>& before,
                const std::optional<BookView>& after) override;

  const std::vector<PlacementSample>& samples() const { return samples_; }
  std::size_t skipped_one_sided() const { return skipped_one_sided_; }

 private:
  std::vector<PlacementSample> samples_;
  std::size_t skipped_one_sided_ = 0;
};

// Counts adds, in-spread adds, and adds that later execute.
class AddActivityTracker final : public ReplayObserver {
 public:
  void on_event(const Event& e, const std::optional<BookView>& before,
                const std::optional<BookView>& after) override;

  std::size_t n_adds() const { return n_adds_; }
  std::size_t n_inspread_adds() const { return n_inspread_adds_; }
  std::size_t n_active_adds() const { return executed_.size(); }

 private:
  std::size_t n_adds_ = 0;
  std::size_t n_inspread_adds_ = 0;
  std::unordered_set<OrderId> added_;
  std::unordered_set<OrderId> executed_;
};

FrequencySummary frequency_summary(const InstrumentDay& day,
                                   const std::vector<MarketOrder>& orders,
                                   const SessionConfig& config);

// Same summary from already-collected pieces (avoids a second replay).
FrequencySummary frequency_summary(const AddActivityTracker& adds,
                                   const std::vector<MarketOrder>& orders);

// OnQuote / (OnQuote + OffSpread) among one side's adds; absent if none.
std::optional<double> onquote_share(const std::vector<PlacementSample>& samples, Side side);

// Visible MO volume over the quote volume it hit.  Throws for undirected
// orders and for orders missing a two-sided pre-trade book.
double relative_mo_volume(const MarketOrder& mo);

// Midpoint return across the market order, per the doubled-midpoint
// arithmetic: exact zero whenever the midpoint is unchanged.
double impact_return(const MarketOrder& mo);

// Impact samples for all directed MOs with two-sided books around them.
// exclude_mixed_hidden drops clusters containing hidden trades.
std::vector<ImpactSample> collect_impact_samples(const std::vector<MarketOrder>& orders,
                                                 bool exclude_mixed_hidden = false);

// Pearson correlation of visible MO volume vs quote volume; absent when
// fewer than two samples or a coordinate has zero variance.
std::optional<double> volume_quote_correlation(const std::vector<ImpactSample>& samples,
                                               bool only_midpoint_movers);

}  // namespace lobflow

#pragma once

#include <map>
#include <optional>
#include <vector>

#include "lobflow/book.hpp"
#include "lobflow/histogram.hpp"
#include "lobflow/ingest.hpp"
#include "lobflow/types.hpp"

namespace lobflow {

// One consolidated market order: a maximal run of trade events that executed
// against the same side of the book with nothing in between.
struct MarketOrder {
  TimestampMs first_ts = 0;
  TimestampMs last_ts = 0;
  std::vector<Event> trades;
  // Side of the market order (the aggressor), i.e. opposite of the resting
  // limit orders it consumed.  Unknown when every trade was hidden.
  Side side = Side::Unknown;
  Volume total_volume = 0;
  Volume visible_volume = 0;
  bool has_hidden = false;
  // Book state immediately before the first trade and after the last one.
  std::optional<BookView> book_before;
  std::optional<BookView> book_after;

  std::size_t cluster_size() const { return trades.size(); }
  bool undirected() const { return side == Side::Unknown; }
};

// Streaming consolidator.  Feed it the replay event stream; runs are closed
// greedily as soon as an event cannot extend the current one.
class Consolidator final : public ReplayObserver {
 public:
  explicit Consolidator(const SessionConfig& config) : window_ms_(config.mo_window_ms) {}

  void on_event(const Event& e, const std::optional<BookView>& before,
                const std::optional<BookView>& after) override;
  void on_finish() override;

  std::vector<MarketOrder>& orders() { return orders_; }
  const std::vector<MarketOrder>& orders() const { return orders_; }

 private:
  bool extends_run(const Event& e) const;
  void open_run(const Event& e, const std::optional<BookView>& before);
  void extend_run(const Event& e);
  void close_run();

  TimestampMs window_ms_;
  std::vector<MarketOrder> orders_;
  std::optional<MarketOrder> run_;
  std::optional<BookView> last_after_;
};

// Replays the day and returns its consolidated market orders.
std::vector<MarketOrder> consolidate(const InstrumentDay& day, const SessionConfig& config);

// cluster size -> number of market orders of that size
std::map<std::size_t, std::size_t> cluster_size_counts(const std::vector<MarketOrder>& orders);

// Cluster-size distribution as exact point masses (every size is an atom).
Histogram cluster_size_histogram(const std::vector<MarketOrder>& orders);

// Market-order counts for a range of consolidation windows, on one pass per
// window.  Counts are non-increasing in the window size.
std::vector<std::pair<TimestampMs, std::size_t>> window_sensitivity(
    const InstrumentDay& day, const SessionConfig& config,
    const std::vector<TimestampMs>& windows);

}  // namespace lobflow

// Price-time-priority limit order book and the event replay driver.
//
// The book keeps one FIFO queue of resting orders per occupied price
// level plus an id index, so every event applies in O(log levels).
// Executions must hit the front of the quote queue; hidden executions
// leave the visible book untouched.
#pragma once

#include <cstddef>
#include <list>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lobflow/ingest.hpp"
#include "lobflow/types.hpp"

namespace lobflow {

// Snapshot of the inside of the book.  Gaps measure the tick distance
// from a quote to the next occupied level on the same side; a quote with
// nothing behind it reports nullopt rather than a fabricated depth.
struct BookView {
  Price best_bid = 0;
  Price best_ask = 0;
  Volume bid_quote_volume = 0;
  Volume ask_quote_volume = 0;
  std::int64_t spread_ticks = 0;
  std::optional<std::int64_t> gap_behind_bid;
  std::optional<std::int64_t> gap_behind_ask;

  MidpointX2 mid_x2() const { return best_bid + best_ask; }
};

// Quote movement caused by one event.
struct BookDelta {
  std::optional<Price> bid_before, bid_after;
  std::optional<Price> ask_before, ask_after;

  bool quote_changed() const {
    return bid_before != bid_after || ask_before != ask_after;
  }
};

class Book {
 public:
  struct QueueEntry {
    OrderId id;
    Volume remaining;
  };
  struct Level {
    std::list<QueueEntry> fifo;
    Volume total = 0;
  };
  using BidMap = std::map<Price, Level, std::greater<Price>>;
  using AskMap = std::map<Price, Level, std::less<Price>>;

  explicit Book(Price tick = kDefaultTick) : tick_(tick) {}

  // Mutates the book; throws BookError on any integrity violation
  // (off-grid price, crossed book, execute against a non-resting id,
  // execution bypassing time priority, over-large reduction).
  BookDelta apply_event(const Event& e);

  // Inside snapshot; throws BookError when either side is empty.
  BookView view() const;
  std::optional<BookView> try_view() const;

  std::optional<Price> best_bid() const;
  std::optional<Price> best_ask() const;

  struct OrderInfo {
    Side side;
    Price price;
    Volume remaining;
  };
  std::optional<OrderInfo> find(OrderId id) const;

  const BidMap& bids() const { return bids_; }
  const AskMap& asks() const { return asks_; }
  Volume total_volume(Side side) const {
    return side == Side::Buy ? bid_volume_ : ask_volume_;
  }
  Volume total_volume() const { return bid_volume_ + ask_volume_; }
  std::size_t live_orders() const { return index_.size(); }
  Price tick() const { return tick_; }

 private:
  struct Locator {
    Side side;
    Price price;
    std::list<QueueEntry>::iterator pos;
  };

  void add_order(const Event& e);
  void remove_order(const Event& e, bool check_full_volume);
  void reduce_order(const Event& e);
  Level* find_level(Side side, Price price);

  Price tick_;
  BidMap bids_;
  AskMap asks_;
  std::unordered_map<OrderId, Locator> index_;
  Volume bid_volume_ = 0;
  Volume ask_volume_ = 0;
};

// Replay observer: called once per in-session event with the inside view
// immediately before and after the event (nullopt while a side is still
// empty).  Callbacks run synchronously on the replay thread.
class ReplayObserver {
 public:
  virtual ~ReplayObserver() = default;
  virtual void on_event(const Event& event, const std::optional<BookView>& before,
                        const std::optional<BookView>& after) = 0;
  virtual void on_finish() {}
};

struct ReplayStats {
  std::size_t warmup_events = 0;
  std::size_t session_events = 0;
  std::size_t hidden_trades = 0;
};

// Applies warmup events silently, then every session event in file
// order, notifying each observer after each event.  Deterministic for a
// given InstrumentDay; integrity errors propagate with the event index.
ReplayStats replay(const InstrumentDay& day, const SessionConfig& config,
                   std::span<ReplayObserver* const> observers);

// Streams BookView snapshots every `stride` session events as JSON lines.
std::string book_view_json(TimestampMs ts, const BookView& v);

} // namespace lobflow

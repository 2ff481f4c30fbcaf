// Core domain types shared by every module: integer price arithmetic,
// order-flow events and the trading-session window.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lobflow {

// Prices are integers in units of 1/10000 USD, so one cent = 100 units.
// All visible-book prices sit on the tick grid; keeping them integral
// removes every floating-point comparison from the book path.  Returns
// are the only floating-point quantities in the pipeline.
using Price = std::int64_t;
using Volume = std::int64_t;     // shares
using OrderId = std::uint64_t;
using TimestampMs = std::int64_t; // milliseconds after midnight, exchange-local

// Twice the midpoint, same units as Price.  Doubling keeps half-tick
// midpoints exact integers.
using MidpointX2 = std::int64_t;

inline constexpr Price kDefaultTick = 100; // $0.01

enum class Side : std::uint8_t { Buy, Sell, Unknown };

enum class EventKind : std::uint8_t {
  Add,
  CancelPartial,
  Delete,
  ExecuteFull,
  ExecutePartial,
  ExecuteHidden,
};

inline constexpr bool is_trade(EventKind k) {
  return k == EventKind::ExecuteFull || k == EventKind::ExecutePartial ||
         k == EventKind::ExecuteHidden;
}

inline constexpr Side opposite(Side s) {
  switch (s) {
    case Side::Buy: return Side::Sell;
    case Side::Sell: return Side::Buy;
    default: return Side::Unknown;
  }
}

inline const char* to_string(Side s) {
  switch (s) {
    case Side::Buy: return "buy";
    case Side::Sell: return "sell";
    default: return "unknown";
  }
}

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Add: return "add";
    case EventKind::CancelPartial: return "cancel_partial";
    case EventKind::Delete: return "delete";
    case EventKind::ExecuteFull: return "execute_full";
    case EventKind::ExecutePartial: return "execute_partial";
    case EventKind::ExecuteHidden: return "execute_hidden";
  }
  return "?";
}

// One order-flow message.  side is the side of the resting limit order;
// it is Unknown exactly for executions against hidden orders, which
// carry no order id (order_id == 0).
struct Event {
  TimestampMs timestamp_ms = 0;
  EventKind kind = EventKind::Add;
  OrderId order_id = 0;
  Side side = Side::Unknown;
  Price price = 0;
  Volume volume = 0;
};

// Trading-session window and per-instrument constants.  The window is
// half-open [start, end) so a day partitions cleanly.  Defaults cover
// 10:00 to 15:30 exchange-local.
struct SessionConfig {
  TimestampMs session_start_ms = 36'000'000; // 10:00:00.000
  TimestampMs session_end_ms = 55'800'000;   // 15:30:00.000
  TimestampMs mo_window_ms = 1; // max first-to-last trade gap in one market order
  Price tick = kDefaultTick;
};

inline bool in_session(TimestampMs t, const SessionConfig& cfg) {
  return t >= cfg.session_start_ms && t < cfg.session_end_ms;
}

// Book-state violation (crossed book, bad execute target, priority break).
struct BookError : std::runtime_error {
  explicit BookError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem-level failure (open, read, write).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline MidpointX2 midpoint_x2(Price best_bid, Price best_ask) {
  if (best_bid >= best_ask) {
    throw BookError("crossed book: bid " + std::to_string(best_bid) +
                    " >= ask " + std::to_string(best_ask));
  }
  return best_bid + best_ask;
}

} // namespace lobflow

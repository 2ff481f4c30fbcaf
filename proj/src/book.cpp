#include "lobflow/book.hpp"

#include <cstdio>
#include <string>

namespace lobflow {

namespace {

[[noreturn]] void integrity_error(const Event& e, const std::string& what) {
  throw BookError(what + " (event: " + serialize_event(e) + ")");
}

} // namespace

Book::Level* Book::find_level(Side side, Price price) {
  if (side == Side::Buy) {
    auto it = bids_.find(price);
    return it == bids_.end() ? nullptr : &it->second;
  }
  auto it = asks_.find(price);
  return it == asks_.end() ? nullptr : &it->second;
}

// Every check precedes the first mutation, so a throwing event leaves the
// book exactly as it was.
void Book::add_order(const Event& e) {
  if (e.price % tick_ != 0) integrity_error(e, "price off the tick grid");
  if (index_.count(e.order_id)) integrity_error(e, "duplicate add of live order id");
  if (e.side == Side::Buy) {
    const auto ask = best_ask();
    if (ask && e.price >= *ask) integrity_error(e, "buy add at or through the ask");
  } else {
    const auto bid = best_bid();
    if (bid && e.price <= *bid) integrity_error(e, "sell add at or through the bid");
  }
  Level& level = e.side == Side::Buy ? bids_[e.price] : asks_[e.price];
  level.fifo.push_back(QueueEntry{e.order_id, e.volume});
  level.total += e.volume;
  auto pos = std::prev(level.fifo.end());
  index_.emplace(e.order_id, Locator{e.side, e.price, pos});
  (e.side == Side::Buy ? bid_volume_ : ask_volume_) += e.volume;
}

void Book::remove_order(const Event& e, bool check_full_volume) {
  auto it = index_.find(e.order_id);
  if (it == index_.end()) integrity_error(e, "reference to non-resting order id");
  const Locator& loc = it->second;
  if (loc.side != e.side || loc.price != e.price) {
    integrity_error(e, "side/price contradicts resting order");
  }
  if (check_full_volume && loc.pos->remaining != e.volume) {
    integrity_error(e, "volume contradicts resting order");
  }
  if (e.kind == EventKind::ExecuteFull) {
    // price-time priority: an execution at the quote must hit the queue front
    const auto best = e.side == Side::Buy ? best_bid() : best_ask();
    if (best && *best == e.price) {
      Level* level = find_level(e.side, e.price);
      if (loc.pos != level->fifo.begin()) {
        integrity_error(e, "execution bypasses time priority");
      }
    }
  }
  Level* level = find_level(e.side, e.price);
  level->total -= loc.pos->remaining;
  (e.side == Side::Buy ? bid_volume_ : ask_volume_) -= loc.pos->remaining;
  level->fifo.erase(loc.pos);
  if (level->fifo.empty()) {
    if (e.side == Side::Buy) {
      bids_.erase(e.price);
    } else {
      asks_.erase(e.price);
    }
  }
  index_.erase(it);
}

void Book::reduce_order(const Event& e) {
  auto it = index_.find(e.order_id);
  if (it == index_.end()) integrity_error(e, "reference to non-resting order id");
  Locator& loc = it->second;
  if (loc.side != e.side || loc.price != e.price) {
    integrity_error(e, "side/price contradicts resting order");
  }
  if (e.volume > loc.pos->remaining) {
    integrity_error(e, "reduction exceeds resting volume");
  }
  if (e.kind == EventKind::ExecutePartial) {
    const auto best = e.side == Side::Buy ? best_bid() : best_ask();
    if (best && *best == e.price) {
      Level* level = find_level(e.side, e.price);
      if (loc.pos != level->fifo.begin()) {
        integrity_error(e, "execution bypasses time priority");
      }
    }
  }
  if (e.volume == loc.pos->remaining) {
    // exhausting reduction is applied as full removal
    remove_order(e, false);
    return;
  }
  loc.pos->remaining -= e.volume;
  find_level(e.side, e.price)->total -= e.volume;
  (e.side == Side::Buy ? bid_volume_ : ask_volume_) -= e.volume;
}

BookDelta Book::apply_event(const Event& e) {
  BookDelta delta;
  delta.bid_before = best_bid();
  delta.ask_before = best_ask();

  switch (e.kind) {
    case EventKind::Add:
      add_order(e);
      break;
    case EventKind::Delete:
      remove_order(e, true);
      break;
    case EventKind::ExecuteFull:
      remove_order(e, true);
      break;
    case EventKind::CancelPartial:
    case EventKind::ExecutePartial:
      reduce_order(e);
      break;
    case EventKind::ExecuteHidden:
      break; // hidden liquidity is not part of the visible book
  }

  delta.bid_after = best_bid();
  delta.ask_after = best_ask();
  return delta;
}

std::optional<Price> Book::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return bids_.begin()->first;
}

std::optional<Price> Book::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return asks_.begin()->first;
}

std::optional<BookView> Book::try_view() const {
  if (bids_.empty() || asks_.empty()) return std::nullopt;
  BookView v;
  const auto bid_it = bids_.begin();
  const auto ask_it = asks_.begin();
  v.best_bid = bid_it->first;
  v.best_ask = ask_it->first;
  v.bid_quote_volume = bid_it->second.total;
  v.ask_quote_volume = ask_it->second.total;
  v.spread_ticks = (v.best_ask - v.best_bid) / tick_;
  if (bids_.size() > 1) {
    v.gap_behind_bid = (v.best_bid - std::next(bid_it)->first) / tick_;
  }
  if (asks_.size() > 1) {
    v.gap_behind_ask = (std::next(ask_it)->first - v.best_ask) / tick_;
  }
  return v;
}

BookView Book::view() const {
  auto v = try_view();
  if (!v) {
    throw BookError(std::string("empty ") + (bids_.empty() ? "bid" : "ask") + " side");
  }
  return *v;
}

std::optional<Book::OrderInfo> Book::find(OrderId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return OrderInfo{it->second.side, it->second.price, it->second.pos->remaining};
}

ReplayStats replay(const InstrumentDay& day, const SessionConfig& config,
                   std::span<ReplayObserver* const> observers) {
  Book book(config.tick);
  ReplayStats stats;
  for (std::size_t i = 0; i < day.warmup_events.size(); ++i) {
    try {
      book.apply_event(day.warmup_events[i]);
    } catch (const BookError& be) {
      throw BookError("warmup event #" + std::to_string(i) + ": " + be.what());
    }
    ++stats.warmup_events;
  }
  for (std::size_t i = 0; i < day.events.size(); ++i) {
    const Event& e = day.events[i];
    const auto before = book.try_view();
    try {
      book.apply_event(e);
    } catch (const BookError& be) {
      throw BookError("event #" + std::to_string(i) + ": " + be.what());
    }
    const auto after = book.try_view();
    if (e.kind == EventKind::ExecuteHidden) ++stats.hidden_trades;
    ++stats.session_events;
    for (ReplayObserver* obs : observers) {
      obs->on_event(e, before, after);
    }
  }
  for (ReplayObserver* obs : observers) obs->on_finish();
  return stats;
}

std::string book_view_json(TimestampMs ts, const BookView& v) {
  const std::string gb = v.gap_behind_bid ? std::to_string(*v.gap_behind_bid) : "null";
  const std::string ga = v.gap_behind_ask ? std::to_string(*v.gap_behind_ask) : "null";
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "{\"ts\":%lld,\"bid\":%lld,\"ask\":%lld,\"bid_vol\":%lld,"
                "\"ask_vol\":%lld,\"spread_ticks\":%lld,\"gap_bid\":%s,\"gap_ask\":%s}",
                static_cast<long long>(ts), static_cast<long long>(v.best_bid),
                static_cast<long long>(v.best_ask),
                static_cast<long long>(v.bid_quote_volume),
                static_cast<long long>(v.ask_quote_volume),
                static_cast<long long>(v.spread_ticks), gb.c_str(), ga.c_str());
  return buf;
}

} // namespace lobflow

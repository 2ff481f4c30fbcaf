#include "lobflow/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "lobflow/book.hpp"
#include "lobflow/parallel.hpp"
#include "lobflow/rng.hpp"

namespace lobflow {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("regime params: ") + what);
}

bool is_probability(double p) { return p >= 0 && p <= 1; }

std::string ticker_code(const std::string& regime) {
  if (regime == "large_tick") return "LGT";
  if (regime == "small_tick") return "SMT";
  if (regime == "intermediate_a") return "INA";
  if (regime == "intermediate_b") return "INB";
  std::string code;
  for (char c : regime) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      code.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      if (code.size() == 3) break;
    }
  }
  return code.empty() ? "SYN" : code;
}

}  // namespace

void RegimeParams::validate() const {
  require(add_rate > 0 && cancel_rate > 0 && mo_rate > 0, "rates must be positive");
  require(is_probability(on_quote_prob), "on_quote_prob out of [0,1]");
  require(depth_decay > 0 && depth_decay < 1, "depth_decay out of (0,1)");
  require(is_probability(inspread_prob), "inspread_prob out of [0,1]");
  require(inspread_first_weight > 0, "inspread_first_weight must be positive");
  require(inspread_offset_decay > 0 && inspread_offset_decay < 1,
          "inspread_offset_decay out of (0,1)");
  require(spread_target_ticks >= 2, "spread_target_ticks must be >= 2");
  require(is_probability(reclose_prob), "reclose_prob out of [0,1]");
  require(is_probability(mo_match_prob) && is_probability(mo_exceed_prob) &&
              mo_match_prob + mo_exceed_prob <= 1,
          "mo volume law probabilities must lie in [0,1] and sum to <= 1");
  require(is_probability(hidden_rate), "hidden_rate out of [0,1]");
  require(is_probability(mixed_hidden_rate), "mixed_hidden_rate out of [0,1]");
  require(target_live_orders >= 16, "target_live_orders must be >= 16");
  require(base_mid > 0, "base_mid must be positive");
  require(warmup_levels >= 3, "warmup_levels must be >= 3");
  require(mo_max_span_ms >= 0, "mo_max_span_ms must be >= 0");
}

RegimeParams RegimeParams::preset(const std::string& name) {
  RegimeParams p;
  p.name = name;
  if (name == "large_tick") {
    p.add_rate = 3.2;
    p.cancel_rate = 1.6;
    p.mo_rate = 0.9;
    p.on_quote_prob = 0.55;
    p.depth_decay = 0.75;  // dense levels, gaps mostly one tick
    p.inspread_prob = 0.5;
    p.inspread_first_weight = 1.0;
    p.inspread_offset_decay = 0.05;  // stay least aggressive
    p.spread_target_ticks = 2;
    p.reclose_prob = 0.85;
    p.target_live_orders = 140;
    p.warmup_levels = 12;
  } else if (name == "small_tick") {
    p.add_rate = 3.2;
    p.cancel_rate = 1.4;
    p.mo_rate = 1.4;
    p.on_quote_prob = 0.35;
    p.depth_decay = 0.32;  // sparse levels, wide gaps
    p.inspread_prob = 0.45;
    p.inspread_first_weight = 0.15;
    p.inspread_offset_decay = 0.55;  // mode at the second least aggressive offset
    p.spread_target_ticks = 12;
    p.target_live_orders = 120;
    p.warmup_levels = 12;
  } else if (name == "intermediate_a") {
    p.add_rate = 3.0;
    p.cancel_rate = 1.4;
    p.mo_rate = 0.9;
    p.on_quote_prob = 0.5;
    p.depth_decay = 0.45;
    p.inspread_prob = 0.35;
    p.inspread_first_weight = 1.0;
    p.inspread_offset_decay = 0.95;  // near-uniform aggressiveness
    p.spread_target_ticks = 10;
    p.target_live_orders = 120;
    p.warmup_levels = 12;
  } else if (name == "intermediate_b") {
    p.add_rate = 3.0;
    p.cancel_rate = 1.4;
    p.mo_rate = 0.9;
    p.on_quote_prob = 0.3;
    p.depth_decay = 0.4;
    p.inspread_prob = 0.3;
    p.inspread_first_weight = 0.15;
    p.inspread_offset_decay = 0.35;
    p.inspread_aggressive = true;  // mode near the opposite quote
    p.spread_target_ticks = 8;
    p.target_live_orders = 120;
    p.warmup_levels = 12;
  } else {
    throw std::invalid_argument("unknown regime preset: " + name);
  }
  return p;
}

const std::vector<std::string>& RegimeParams::preset_names() {
  static const std::vector<std::string> names = {"large_tick", "small_tick", "intermediate_a",
                                                 "intermediate_b"};
  return names;
}

std::size_t GroundTruth::all_hidden_count() const {
  std::size_t n = 0;
  for (const auto& o : orders) {
    if (o.all_hidden) ++n;
  }
  return n;
}

namespace {

struct LevelSnap {
  Price price = 0;
  Volume total = 0;
  std::vector<Book::QueueEntry> entries;
};

template <class Map>
void snap_front_levels(const Map& map, LevelSnap& quote, std::optional<LevelSnap>& next) {
  auto it = map.begin();
  quote.price = it->first;
  quote.total = it->second.total;
  quote.entries.assign(it->second.fifo.begin(), it->second.fifo.end());
  auto nx = std::next(it);
  if (nx != map.end()) {
    next.emplace();
    next->price = nx->first;
    next->total = nx->second.total;
    next->entries.assign(nx->second.fifo.begin(), nx->second.fifo.end());
  }
}

class DayBuilder {
 public:
  DayBuilder(const RegimeParams& params, const SessionConfig& config, std::string ticker,
             int date)
      : p_(params), cfg_(config), rng_(params.seed), book_(config.tick) {
    day_.ticker = std::move(ticker);
    day_.date = date;
    truth_.regime = p_.name;
  }

  GeneratedDay build() {
    seed_book();
    run();
    return {std::move(day_), std::move(truth_)};
  }

 private:
  Price tick() const { return cfg_.tick; }

  void track_add(OrderId id) {
    live_pos_[id] = live_.size();
    live_.push_back(id);
  }

  void track_remove(OrderId id) {
    const auto it = live_pos_.find(id);
    const std::size_t idx = it->second;
    live_pos_[live_.back()] = idx;
    live_[idx] = live_.back();
    live_.pop_back();
    live_pos_.erase(it);
  }

  std::size_t push_session(const Event& e) {
    book_.apply_event(e);
    day_.events.push_back(e);
    if (e.kind == EventKind::Add) track_add(e.order_id);
    if (e.kind == EventKind::Delete || e.kind == EventKind::ExecuteFull) {
      track_remove(e.order_id);
    }
    return day_.events.size() - 1;
  }

  Volume draw_add_volume() { return 100 * (1 + static_cast<Volume>(rng_.below(5))); }

  void seed_book() {
    const Price t = tick();
    Price ask0 = p_.base_mid + ((p_.spread_target_ticks + 1) / 2) * t;
    ask0 = (ask0 / t) * t;
    const Price bid0 = ask0 - p_.spread_target_ticks * t;
    TimestampMs ts = std::max<TimestampMs>(0, cfg_.session_start_ms - 20'000);

    const auto seed_side = [&](Side side, Price quote, Price dir) {
      Price price = quote;
      for (int level = 0; level < p_.warmup_levels; ++level) {
        if (level > 0) {
          price += dir * (1 + static_cast<Price>(rng_.geometric(p_.depth_decay))) * t;
        }
        const int orders = 2 + static_cast<int>(rng_.below(2));
        for (int i = 0; i < orders; ++i) {
          Event e{ts++, EventKind::Add, next_id_++, side, price, draw_add_volume()};
          book_.apply_event(e);
          day_.warmup_events.push_back(e);
          track_add(e.order_id);
        }
      }
    };
    seed_side(Side::Sell, ask0, 1);
    seed_side(Side::Buy, bid0, -1);
  }

  bool done() const {
    if (now_ >= cfg_.session_end_ms - 16) return true;
    return p_.max_session_events != 0 && day_.events.size() >= p_.max_session_events;
  }

  void run() {
    now_ = cfg_.session_start_ms;
    const double total_rate = p_.add_rate + p_.cancel_rate + p_.mo_rate;
    for (;;) {
      now_ += std::max<TimestampMs>(
          1, static_cast<TimestampMs>(std::llround(rng_.exponential(total_rate) * 1000.0)));
      if (done()) return;
      const double load =
          static_cast<double>(live_.size()) / static_cast<double>(p_.target_live_orders);
      const double wa = p_.add_rate;
      const double wc = p_.cancel_rate * load;
      const double wm = p_.mo_rate;
      const double u = rng_.uniform() * (wa + wc + wm);
      if (u < wa) {
        emit_add();
      } else if (u < wa + wc) {
        emit_cancel();
      } else {
        emit_market_order();
      }
    }
  }

  // Throttles spread-narrowing placements quadratically below the target
  // spread so wide-spread regimes do not collapse to one tick.
  double inspread_chance(std::int64_t spread_ticks) const {
    if (p_.spread_target_ticks <= 2) return p_.inspread_prob;
    const double f = std::min(1.0, static_cast<double>(spread_ticks - 2) /
                                       static_cast<double>(p_.spread_target_ticks - 2));
    return p_.inspread_prob * f * f;
  }

  // offset in [1, spread_ticks - 1] per the regime's aggressiveness law
  std::int64_t draw_offset(std::int64_t spread_ticks) {
    const std::int64_t hi = spread_ticks - 1;
    if (hi == 1) return 1;
    const auto base = [&](std::int64_t j) {
      return j == 1 ? p_.inspread_first_weight
                    : std::pow(p_.inspread_offset_decay, static_cast<double>(j - 2));
    };
    double total = 0;
    for (std::int64_t j = 1; j <= hi; ++j) {
      total += base(p_.inspread_aggressive ? spread_ticks - j : j);
    }
    double u = rng_.uniform() * total;
    for (std::int64_t j = 1; j <= hi; ++j) {
      u -= base(p_.inspread_aggressive ? spread_ticks - j : j);
      if (u < 0) return j;
    }
    return hi;
  }

  void emit_add() {
    const auto view = book_.try_view();
    if (!view) {
      emit_rescue_add();
      return;
    }
    const Side side = rng_.chance(0.5) ? Side::Buy : Side::Sell;
    const Price t = tick();
    const Price quote = side == Side::Buy ? view->best_bid : view->best_ask;
    Price price;
    if (view->spread_ticks >= 2 && rng_.chance(inspread_chance(view->spread_ticks))) {
      const std::int64_t offset = draw_offset(view->spread_ticks);
      price = side == Side::Buy ? view->best_bid + offset * t : view->best_ask - offset * t;
    } else if (rng_.chance(p_.on_quote_prob)) {
      price = quote;
    } else {
      const Price off = 1 + static_cast<Price>(rng_.geometric(p_.depth_decay));
      price = side == Side::Buy ? quote - off * t : quote + off * t;
    }
    push_session({now_, EventKind::Add, next_id_++, side, price, draw_add_volume()});
  }

  // Repairs an empty side; only reachable if the level guards were defeated.
  void emit_rescue_add() {
    const Price t = tick();
    const auto bid = book_.best_bid();
    const auto ask = book_.best_ask();
    Side side;
    Price price;
    if (!bid) {
      side = Side::Buy;
      price = (ask ? *ask : p_.base_mid + t) - p_.spread_target_ticks * t;
    } else {
      side = Side::Sell;
      price = *bid + p_.spread_target_ticks * t;
    }
    price = std::max(price, t);
    push_session({now_, EventKind::Add, next_id_++, side, price, draw_add_volume()});
  }

  std::size_t side_levels(Side side) const {
    return side == Side::Buy ? book_.bids().size() : book_.asks().size();
  }

  Volume level_total(Side side, Price price) const {
    if (side == Side::Buy) return book_.bids().at(price).total;
    return book_.asks().at(price).total;
  }

  void emit_cancel() {
    if (live_.empty()) {
      emit_add();
      return;
    }
    const OrderId id = live_[rng_.below(live_.size())];
    const auto info = book_.find(id);
    const bool full = info->remaining < 2 || rng_.chance(0.7);
    if (!full) {
      const Volume amount =
          1 + static_cast<Volume>(rng_.below(static_cast<std::uint64_t>(info->remaining - 1)));
      push_session({now_, EventKind::CancelPartial, id, info->side, info->price, amount});
      return;
    }
    // keep every side at two price levels minimum
    if (level_total(info->side, info->price) == info->remaining &&
        side_levels(info->side) <= 2) {
      emit_add();
      return;
    }
    push_session({now_, EventKind::Delete, id, info->side, info->price, info->remaining});
  }

  // Spaces trade timestamps across at most mo_max_span_ms.
  void stamp_trades(std::vector<Event>& trades) {
    TimestampMs t = now_;
    const TimestampMs last_allowed = now_ + p_.mo_max_span_ms;
    for (auto& e : trades) {
      e.timestamp_ms = t;
      if (t < last_allowed && rng_.chance(0.4)) {
        t += 1 + static_cast<TimestampMs>(rng_.below(static_cast<std::uint64_t>(last_allowed - t)));
      }
    }
  }

  void finish_market_order(std::vector<Event>& trades, Side aggressor, bool all_hidden,
                           bool quote_wiped) {
    stamp_trades(trades);
    TrueOrder order;
    order.side = all_hidden ? Side::Unknown : aggressor;
    order.all_hidden = all_hidden;
    for (const auto& e : trades) order.trade_indices.push_back(push_session(e));
    truth_.orders.push_back(std::move(order));
    now_ = trades.back().timestamp_ms;
    if (p_.enforce_separation) now_ += cfg_.mo_window_ms + 1;
    if (quote_wiped && rng_.chance(p_.reclose_prob)) emit_reclose_add();
  }

  void emit_reclose_add() {
    now_ += 1;
    if (done()) return;
    const auto view = book_.try_view();
    if (!view || view->spread_ticks < 2) return;
    const Side side = rng_.chance(0.5) ? Side::Buy : Side::Sell;
    const Price price = side == Side::Buy ? view->best_bid + tick() : view->best_ask - tick();
    push_session({now_, EventKind::Add, next_id_++, side, price, draw_add_volume()});
  }

  void emit_hidden_mo() {
    const auto view = book_.try_view();
    if (!view) {
      emit_rescue_add();
      return;
    }
    const Price mid = (view->best_bid + view->best_ask) / 2;
    const std::size_t n = 1 + rng_.below(3);
    std::vector<Event> trades;
    trades.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      trades.push_back({0, EventKind::ExecuteHidden, 0, Side::Unknown, mid,
                        50 * (1 + static_cast<Volume>(rng_.below(6)))});
    }
    finish_market_order(trades, Side::Unknown, true, false);
  }

  void emit_market_order() {
    if (rng_.chance(p_.hidden_rate)) {
      emit_hidden_mo();
      return;
    }
    const Side aggressor = rng_.chance(0.5) ? Side::Buy : Side::Sell;
    const Side resting = opposite(aggressor);

    LevelSnap quote;
    std::optional<LevelSnap> next;
    if (aggressor == Side::Buy) {
      if (book_.asks().empty()) {
        emit_rescue_add();
        return;
      }
      snap_front_levels(book_.asks(), quote, next);
    } else {
      if (book_.bids().empty()) {
        emit_rescue_add();
        return;
      }
      snap_front_levels(book_.bids(), quote, next);
    }
    const std::size_t levels = side_levels(resting);

    enum class Fill { Match, Exceed, Below };
    Fill fill;
    const double u = rng_.uniform();
    if (u < p_.mo_match_prob) {
      fill = Fill::Match;
    } else if (u < p_.mo_match_prob + p_.mo_exceed_prob) {
      fill = Fill::Exceed;
    } else {
      fill = Fill::Below;
    }
    if (fill != Fill::Below && levels < 3) fill = Fill::Below;
    if (fill == Fill::Below && quote.total < 2) {
      if (levels >= 3) {
        fill = Fill::Match;
      } else {
        emit_add();
        return;
      }
    }
    if (fill == Fill::Exceed && (!next || next->total < 2)) fill = Fill::Match;

    Volume volume = 0;
    switch (fill) {
      case Fill::Match:
        volume = quote.total;
        break;
      case Fill::Below:
        volume = 1 + static_cast<Volume>(rng_.below(static_cast<std::uint64_t>(quote.total - 1)));
        break;
      case Fill::Exceed:
        volume = quote.total +
                 1 + static_cast<Volume>(rng_.below(static_cast<std::uint64_t>(next->total - 1)));
        break;
    }

    std::vector<Event> trades;
    Volume rem = volume;
    const auto consume = [&](const LevelSnap& level) {
      for (const auto& entry : level.entries) {
        if (rem == 0) return;
        if (rem >= entry.remaining) {
          trades.push_back(
              {0, EventKind::ExecuteFull, entry.id, resting, level.price, entry.remaining});
          rem -= entry.remaining;
        } else {
          trades.push_back({0, EventKind::ExecutePartial, entry.id, resting, level.price, rem});
          rem = 0;
        }
      }
    };
    consume(quote);
    if (rem > 0 && next) consume(*next);

    if (rng_.chance(p_.mixed_hidden_rate)) {
      const auto view = book_.try_view();
      if (view) {
        const Event hidden{0, EventKind::ExecuteHidden, 0, Side::Unknown,
                           (view->best_bid + view->best_ask) / 2,
                           50 * (1 + static_cast<Volume>(rng_.below(6)))};
        trades.insert(trades.begin() + static_cast<std::ptrdiff_t>(rng_.below(trades.size() + 1)),
                      hidden);
      }
    }
    finish_market_order(trades, aggressor, false, fill != Fill::Below);
  }

  RegimeParams p_;
  SessionConfig cfg_;
  Rng rng_;
  Book book_;
  InstrumentDay day_;
  GroundTruth truth_;
  std::vector<OrderId> live_;
  std::unordered_map<OrderId, std::size_t> live_pos_;
  OrderId next_id_ = 1;
  TimestampMs now_ = 0;
};

}  // namespace

GeneratedDay generate_instrument_day(const RegimeParams& params, const SessionConfig& config,
                                     std::string ticker, int date) {
  params.validate();
  if (ticker.empty()) ticker = ticker_code(params.name) + "0";
  DayBuilder builder(params, config, std::move(ticker), date);
  return builder.build();
}

std::vector<GeneratedDay> generate_cohort(std::size_t n_per_regime,
                                          const std::vector<RegimeParams>& regimes,
                                          std::uint64_t master_seed,
                                          const SessionConfig& config, unsigned jobs) {
  if (n_per_regime == 0) throw std::invalid_argument("generate_cohort: n_per_regime must be >= 1");
  if (regimes.empty()) throw std::invalid_argument("generate_cohort: no regimes");
  for (const auto& r : regimes) r.validate();

  // Regimes whose names abbreviate identically get an index suffix so every
  // instrument-day in the cohort keeps a distinct ticker.
  std::vector<std::string> codes(regimes.size());
  std::map<std::string, std::size_t> uses;
  for (std::size_t r = 0; r < regimes.size(); ++r) ++uses[ticker_code(regimes[r].name)];
  std::map<std::string, std::size_t> seen;
  for (std::size_t r = 0; r < regimes.size(); ++r) {
    const std::string code = ticker_code(regimes[r].name);
    codes[r] = uses[code] > 1 ? code + std::to_string(seen[code]) : code;
    ++seen[code];
  }

  std::vector<GeneratedDay> out(regimes.size() * n_per_regime);
  parallel_for(out.size(), jobs, [&](std::size_t idx) {
    const std::size_t r = idx / n_per_regime;
    const std::size_t i = idx % n_per_regime;
    RegimeParams params = regimes[r];
    params.seed = derive_seed(master_seed, idx);
    const std::string ticker = codes[r] + std::to_string(i);
    out[idx] = generate_instrument_day(params, config, ticker, 20260104 + static_cast<int>(i));
  });
  return out;
}

}  // namespace lobflow

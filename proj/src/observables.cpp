#include "lobflow/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace lobflow {

const char* to_string(PlacementKind kind) {
  switch (kind) {
    case PlacementKind::InSpread: return "in_spread";
    case PlacementKind::OnQuote: return "on_quote";
    case PlacementKind::OffSpread: return "off_spread";
  }
  return "?";
}

namespace {

Price infer_tick(const BookView& v) {
  return (v.best_ask - v.best_bid) / v.spread_ticks;
}

}  // namespace

PlacementSample classify_placement(const Event& add, const BookView& before) {
  if (add.kind != EventKind::Add) {
    throw std::invalid_argument("classify_placement: not an add event");
  }
  if (add.side == Side::Unknown) {
    throw std::invalid_argument("classify_placement: add without a side");
  }
  const Price tick = infer_tick(before);
  PlacementSample s;
  s.side = add.side;
  const Price p = add.price;
  const Price quote = add.side == Side::Buy ? before.best_bid : before.best_ask;
  s.quote_price = quote;

  if (p > before.best_bid && p < before.best_ask) {
    s.kind = PlacementKind::InSpread;
    s.prior_spread_ticks = before.spread_ticks;
    const Price off = add.side == Side::Buy ? p - quote : quote - p;
    s.relative_price =
        static_cast<double>(off) / static_cast<double>(before.best_ask - before.best_bid);
    return s;
  }
  const bool crossing = add.side == Side::Buy ? p >= before.best_ask : p <= before.best_bid;
  if (crossing) {
    throw std::invalid_argument("classify_placement: add prices through the opposite quote");
  }
  const Price away = add.side == Side::Buy ? quote - p : p - quote;
  s.abs_deviation_ticks = away / tick;
  s.kind = s.abs_deviation_ticks == 0 ? PlacementKind::OnQuote : PlacementKind::OffSpread;
  return s;
}

void PlacementCollector::on_event(const Event& e, const std::optional<BookView>& before,
                                  const std::optional<BookView>&) {
  if (e.kind != EventKind::Add) return;
  if (!before) {
    ++skipped_one_sided_;
    return;
  }
  samples_.push_back(classify_placement(e, *before));
}

void AddActivityTracker::on_event(const Event& e, const std::optional<BookView>& before,
                                  const std::optional<BookView>&) {
  switch (e.kind) {
    case EventKind::Add:
      ++n_adds_;
      added_.insert(e.order_id);
      if (before && e.price > before->best_bid && e.price < before->best_ask) {
        ++n_inspread_adds_;
      }
      break;
    case EventKind::ExecuteFull:
    case EventKind::ExecutePartial:
      if (added_.count(e.order_id)) executed_.insert(e.order_id);
      break;
    default:
      break;
  }
}

FrequencySummary frequency_summary(const AddActivityTracker& adds,
                                   const std::vector<MarketOrder>& orders) {
  FrequencySummary f;
  f.n_market_orders = orders.size();
  for (const auto& mo : orders) {
    if (mo.undirected()) ++f.n_undirected;
  }
  f.n_adds = adds.n_adds();
  f.n_active_adds = adds.n_active_adds();
  f.n_inspread_adds = adds.n_inspread_adds();

  const auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  f.mou = ratio(f.n_undirected, f.n_market_orders);
  f.mo = ratio(f.n_market_orders, f.n_market_orders + f.n_adds);
  f.act = ratio(f.n_active_adds, f.n_adds);
  f.sprd = ratio(f.n_inspread_adds, f.n_adds);
  return f;
}

FrequencySummary frequency_summary(const InstrumentDay& day,
                                   const std::vector<MarketOrder>& orders,
                                   const SessionConfig& config) {
  AddActivityTracker adds;
  ReplayObserver* obs[] = {&adds};
  replay(day, config, obs);
  return frequency_summary(adds, orders);
}

std::optional<double> onquote_share(const std::vector<PlacementSample>& samples, Side side) {
  std::size_t on = 0;
  std::size_t off = 0;
  for (const auto& s : samples) {
    if (s.side != side) continue;
    if (s.kind == PlacementKind::OnQuote) ++on;
    if (s.kind == PlacementKind::OffSpread) ++off;
  }
  if (on + off == 0) return std::nullopt;
  return static_cast<double>(on) / static_cast<double>(on + off);
}

double relative_mo_volume(const MarketOrder& mo) {
  if (mo.undirected()) {
    throw std::invalid_argument("relative_mo_volume: undirected market order");
  }
  if (!mo.book_before) {
    throw std::invalid_argument("relative_mo_volume: book one-sided before market order");
  }
  const Volume quote_volume = mo.side == Side::Buy ? mo.book_before->ask_quote_volume
                                                   : mo.book_before->bid_quote_volume;
  return static_cast<double>(mo.visible_volume) / static_cast<double>(quote_volume);
}

double impact_return(const MarketOrder& mo) {
  if (!mo.book_before || !mo.book_after) {
    throw std::invalid_argument("impact_return: book one-sided around market order");
  }
  const MidpointX2 m2_before = mo.book_before->mid_x2();
  const MidpointX2 m2_after = mo.book_after->mid_x2();
  if (m2_after == m2_before) return 0.0;
  return static_cast<double>(m2_after - m2_before) / static_cast<double>(m2_before);
}

std::vector<ImpactSample> collect_impact_samples(const std::vector<MarketOrder>& orders,
                                                 bool exclude_mixed_hidden) {
  std::vector<ImpactSample> out;
  out.reserve(orders.size());
  for (const auto& mo : orders) {
    if (mo.undirected()) continue;
    if (!mo.book_before || !mo.book_after) continue;
    if (exclude_mixed_hidden && mo.has_hidden) continue;
    ImpactSample s;
    s.side = mo.side;
    s.visible_volume = mo.visible_volume;
    s.quote_volume = mo.side == Side::Buy ? mo.book_before->ask_quote_volume
                                          : mo.book_before->bid_quote_volume;
    s.relative_volume = relative_mo_volume(mo);
    s.ret = impact_return(mo);
    s.has_hidden = mo.has_hidden;
    s.mid_before_x2 = mo.book_before->mid_x2();
    s.gap_behind_hit = mo.side == Side::Buy ? mo.book_before->gap_behind_ask
                                            : mo.book_before->gap_behind_bid;
    out.push_back(s);
  }
  return out;
}

std::optional<double> volume_quote_correlation(const std::vector<ImpactSample>& samples,
                                               bool only_midpoint_movers) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(samples.size());
  for (const auto& s : samples) {
    if (only_midpoint_movers && s.ret == 0.0) continue;
    pts.emplace_back(static_cast<double>(s.visible_volume),
                     static_cast<double>(s.quote_volume));
  }
  if (pts.size() < 2) return std::nullopt;
  double mx = 0;
  double my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0;
  double syy = 0;
  double sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace lobflow

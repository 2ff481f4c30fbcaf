#include "lobflow/market_orders.hpp"

#include <stdexcept>
#include <utility>

namespace lobflow {

bool Consolidator::extends_run(const Event& e) const {
  // A partially executed limit order means the incoming market order was
  // exhausted there, so nothing after it can belong to the same run.
  if (run_->trades.back().kind == EventKind::ExecutePartial) return false;
  if (e.timestamp_ms - run_->first_ts > window_ms_) return false;
  if (e.side != Side::Unknown && run_->side != Side::Unknown &&
      e.side != opposite(run_->side)) {
    return false;
  }
  return true;
}

void Consolidator::open_run(const Event& e, const std::optional<BookView>& before) {
  run_.emplace();
  run_->first_ts = e.timestamp_ms;
  run_->last_ts = e.timestamp_ms;
  run_->trades.push_back(e);
  run_->side = e.side == Side::Unknown ? Side::Unknown : opposite(e.side);
  run_->total_volume = e.volume;
  run_->visible_volume = e.kind == EventKind::ExecuteHidden ? 0 : e.volume;
  run_->has_hidden = e.kind == EventKind::ExecuteHidden;
  run_->book_before = before;
}

void Consolidator::extend_run(const Event& e) {
  run_->last_ts = e.timestamp_ms;
  run_->trades.push_back(e);
  if (run_->side == Side::Unknown && e.side != Side::Unknown) run_->side = opposite(e.side);
  run_->total_volume += e.volume;
  if (e.kind == EventKind::ExecuteHidden) {
    run_->has_hidden = true;
  } else {
    run_->visible_volume += e.volume;
  }
}

void Consolidator::close_run() {
  run_->book_after = last_after_;
  orders_.push_back(std::move(*run_));
  run_.reset();
}

void Consolidator::on_event(const Event& e, const std::optional<BookView>& before,
                            const std::optional<BookView>& after) {
  if (!is_trade(e.kind)) {
    if (run_) close_run();
    return;
  }
  if (run_ && extends_run(e)) {
    extend_run(e);
  } else {
    if (run_) close_run();
    open_run(e, before);
  }
  last_after_ = after;
}

void Consolidator::on_finish() {
  if (run_) close_run();
}

std::vector<MarketOrder> consolidate(const InstrumentDay& day, const SessionConfig& config) {
  Consolidator c(config);
  ReplayObserver* obs[] = {&c};
  replay(day, config, obs);
  return std::move(c.orders());
}

std::map<std::size_t, std::size_t> cluster_size_counts(const std::vector<MarketOrder>& orders) {
  std::map<std::size_t, std::size_t> counts;
  for (const auto& mo : orders) ++counts[mo.cluster_size()];
  return counts;
}

Histogram cluster_size_histogram(const std::vector<MarketOrder>& orders) {
  if (orders.empty()) throw std::invalid_argument("cluster_size_histogram: no market orders");
  std::vector<double> sizes;
  sizes.reserve(orders.size());
  for (const auto& mo : orders) sizes.push_back(static_cast<double>(mo.cluster_size()));
  BinningSpec spec = BinningSpec::uniform(1.0);
  spec.extract_atoms = true;
  spec.atom_min_count = 1;
  return build_histogram(std::move(sizes), spec);
}

std::vector<std::pair<TimestampMs, std::size_t>> window_sensitivity(
    const InstrumentDay& day, const SessionConfig& config,
    const std::vector<TimestampMs>& windows) {
  std::vector<Consolidator> consolidators;
  consolidators.reserve(windows.size());
  for (TimestampMs w : windows) {
    SessionConfig c = config;
    c.mo_window_ms = w;
    consolidators.emplace_back(c);
  }
  std::vector<ReplayObserver*> obs;
  obs.reserve(consolidators.size());
  for (auto& c : consolidators) obs.push_back(&c);
  replay(day, config, obs);

  std::vector<std::pair<TimestampMs, std::size_t>> out;
  out.reserve(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    out.emplace_back(windows[i], consolidators[i].orders().size());
  }
  return out;
}

}  // namespace lobflow

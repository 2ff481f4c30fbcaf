#include "lobflow/analysis.hpp"

#include <algorithm>
#include <utility>

namespace lobflow {

DayAnalysis analyze_day(const InstrumentDay& day, const AnalyzeOptions& options) {
  DayAnalysis a;
  a.ticker = day.ticker;
  a.date = day.date;

  Consolidator consolidator(options.session);
  PlacementCollector placements;
  AddActivityTracker adds;
  SnapshotCollector snapshots(options.snapshot_stride);
  ReplayObserver* obs[] = {&consolidator, &placements, &adds, &snapshots};
  a.stats = replay(day, options.session, obs);

  a.orders = std::move(consolidator.orders());
  a.placements = placements.samples();
  a.impacts = collect_impact_samples(a.orders, options.exclude_mixed_hidden);
  a.freq = frequency_summary(adds, a.orders);
  a.onquote_buy = onquote_share(a.placements, Side::Buy);
  a.onquote_sell = onquote_share(a.placements, Side::Sell);
  a.corr_all = volume_quote_correlation(a.impacts, false);
  a.corr_movers = volume_quote_correlation(a.impacts, true);
  a.snapshots = snapshots.lines();

  for (const auto& s : a.placements) {
    if (s.kind == PlacementKind::InSpread) {
      a.inspread_rel_price.push_back(s.relative_price);
      a.inspread_prior_spread.push_back(static_cast<double>(s.prior_spread_ticks));
    } else {
      a.abs_deviation.push_back(static_cast<double>(s.abs_deviation_ticks));
    }
  }
  for (const auto& s : a.impacts) {
    a.relative_volumes.push_back(s.relative_volume);
    a.returns.push_back(s.ret);
  }

  if (!a.impacts.empty()) {
    std::vector<double> mids;
    mids.reserve(a.impacts.size());
    for (const auto& s : a.impacts) {
      mids.push_back(static_cast<double>(s.mid_before_x2) / 2.0);
    }
    std::nth_element(mids.begin(), mids.begin() + static_cast<std::ptrdiff_t>(mids.size() / 2),
                     mids.end());
    a.median_mid = mids[mids.size() / 2];
  }
  if (options.return_bin_width > 0) {
    a.return_bin_width = options.return_bin_width;
  } else if (a.median_mid > 0) {
    a.return_bin_width = static_cast<double>(options.session.tick) / (2.0 * a.median_mid);
  } else {
    a.return_bin_width = 1e-4;
  }
  return a;
}

std::string day_key(const DayAnalysis& a) {
  return std::to_string(a.date) + "_" + a.ticker;
}

}  // namespace lobflow

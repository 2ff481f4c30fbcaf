#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lobflow/analysis.hpp"
#include "lobflow/ingest.hpp"
#include "lobflow/market_orders.hpp"
#include "lobflow/synthgen.hpp"
#include "lobflow/types.hpp"

using namespace lobflow;

namespace {

std::vector<Event> full_stream(const InstrumentDay& day) {
  std::vector<Event> all = day.warmup_events;
  all.insert(all.end(), day.events.begin(), day.events.end());
  return all;
}

// Maps consolidated runs back to event indices by consuming the stream's
// trade subsequence in order.
std::vector<std::vector<std::size_t>> run_indices(const InstrumentDay& day,
                                                  const std::vector<MarketOrder>& orders) {
  std::vector<std::size_t> trade_at;
  for (std::size_t i = 0; i < day.events.size(); ++i)
    if (is_trade(day.events[i].kind)) trade_at.push_back(i);

  std::vector<std::vector<std::size_t>> out;
  std::size_t next = 0;
  for (const auto& mo : orders) {
    std::vector<std::size_t> idx;
    for (const auto& t : mo.trades) {
      REQUIRE(next < trade_at.size());
      REQUIRE(serialize_event(day.events[trade_at[next]]) == serialize_event(t));
      idx.push_back(trade_at[next++]);
    }
    out.push_back(std::move(idx));
  }
  REQUIRE(next == trade_at.size());
  return out;
}

RegimeParams capped_preset(const std::string& name, std::uint64_t seed,
                           std::size_t cap) {
  RegimeParams p = RegimeParams::preset(name);
  p.seed = seed;
  p.max_session_events = cap;
  return p;
}

}  // namespace

TEST_CASE("presets are the four named regimes and all validate") {
  const auto& names = RegimeParams::preset_names();
  REQUIRE(names.size() == 4);
  const std::vector<std::string> expected = {"large_tick", "small_tick",
                                             "intermediate_a", "intermediate_b"};
  for (const auto& n : expected) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
    CHECK_NOTHROW(RegimeParams::preset(n).validate());
  }
  CHECK_THROWS_AS(RegimeParams::preset("mid_tick"), std::invalid_argument);
}

TEST_CASE("parameter validation rejects out-of-range knobs") {
  const RegimeParams good;
  CHECK_NOTHROW(good.validate());

  auto broken = [&](auto&& mutate) {
    RegimeParams p = good;
    mutate(p);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  };
  broken([](RegimeParams& p) { p.add_rate = 0; });
  broken([](RegimeParams& p) { p.mo_rate = -1; });
  broken([](RegimeParams& p) { p.on_quote_prob = 1.5; });
  broken([](RegimeParams& p) { p.depth_decay = 1.0; });
  broken([](RegimeParams& p) { p.inspread_offset_decay = 0.0; });
  broken([](RegimeParams& p) { p.spread_target_ticks = 1; });
  broken([](RegimeParams& p) { p.mo_match_prob = 0.7; p.mo_exceed_prob = 0.4; });
  broken([](RegimeParams& p) { p.hidden_rate = -0.1; });
  broken([](RegimeParams& p) { p.target_live_orders = 8; });
  broken([](RegimeParams& p) { p.base_mid = 0; });
  broken([](RegimeParams& p) { p.warmup_levels = 2; });
  broken([](RegimeParams& p) { p.mo_max_span_ms = -1; });
}

TEST_CASE("generated days survive ingestion byte-for-byte") {
  const SessionConfig config;
  for (const auto& name : RegimeParams::preset_names()) {
    CAPTURE(name);
    const auto gen = generate_instrument_day(capped_preset(name, 11, 4000),
                                             config, "RT", 20260104);
    const std::string text = serialize_events(full_stream(gen.day));
    const auto loaded = load_instrument_day_text(text, "RT", 20260104, config);

    REQUIRE(loaded.report.accepted());
    CHECK(loaded.report.orphan_references == 0);
    CHECK(loaded.report.reference_mismatches == 0);
    CHECK(loaded.report.price_grid_violations == 0);
    CHECK(loaded.report.exhausting_reductions == 0);
    // warmup events land before the session open, so they count as both
    CHECK(loaded.report.out_of_session == gen.day.warmup_events.size());
    CHECK(loaded.report.warmup_events == gen.day.warmup_events.size());

    // The loader's warmup/session split must reproduce the generator's.
    CHECK(serialize_events(loaded.day.warmup_events) ==
          serialize_events(gen.day.warmup_events));
    CHECK(serialize_events(loaded.day.events) == serialize_events(gen.day.events));

    // And the stream replays against a real book without integrity errors.
    const auto stats = replay(gen.day, config, {});
    CHECK(stats.session_events == gen.day.events.size());
  }
}

TEST_CASE("generation is a pure function of its parameters") {
  const auto p = capped_preset("intermediate_b", 99, 3000);
  const auto a = generate_instrument_day(p);
  const auto b = generate_instrument_day(p);
  CHECK(serialize_events(full_stream(a.day)) == serialize_events(full_stream(b.day)));
  REQUIRE(a.truth.orders.size() == b.truth.orders.size());
  for (std::size_t i = 0; i < a.truth.orders.size(); ++i) {
    CHECK(a.truth.orders[i].trade_indices == b.truth.orders[i].trade_indices);
    CHECK(a.truth.orders[i].side == b.truth.orders[i].side);
  }

  auto q = p;
  q.seed = 100;
  const auto c = generate_instrument_day(q);
  CHECK(serialize_events(c.day.events) != serialize_events(a.day.events));
}

TEST_CASE("cohort generation is deterministic and jobs-invariant") {
  std::vector<RegimeParams> regimes = {capped_preset("large_tick", 1, 1500),
                                       capped_preset("small_tick", 1, 1500)};
  const auto seq = generate_cohort(2, regimes, 2026, SessionConfig{}, 1);
  const auto par = generate_cohort(2, regimes, 2026, SessionConfig{}, 4);
  REQUIRE(seq.size() == 4);
  REQUIRE(par.size() == 4);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].day.ticker == par[i].day.ticker);
    CHECK(seq[i].truth.regime == par[i].truth.regime);
    CHECK(serialize_events(full_stream(seq[i].day)) ==
          serialize_events(full_stream(par[i].day)));
  }

  // Distinct tickers, one per instrument-day, prefixed per regime.
  std::map<std::string, int> seen;
  for (const auto& g : seq) ++seen[g.day.ticker];
  CHECK(seen.size() == 4);
  for (const auto& [ticker, n] : seen) {
    CHECK(n == 1);
    CHECK(ticker.size() >= 4);
  }

  // A different master seed changes the streams.
  const auto other = generate_cohort(2, regimes, 2027, SessionConfig{}, 1);
  CHECK(serialize_events(other[0].day.events) != serialize_events(seq[0].day.events));
}

TEST_CASE("separated streams reconstruct to the exact ground truth") {
  const SessionConfig config;
  for (const auto& name : RegimeParams::preset_names()) {
    CAPTURE(name);
    const auto gen = generate_instrument_day(capped_preset(name, 7, 6000), config);
    REQUIRE(gen.truth.orders.size() > 20);
    CHECK(gen.truth.all_hidden_count() == 0);

    const auto orders = consolidate(gen.day, config);
    REQUIRE(orders.size() == gen.truth.orders.size());
    const auto indices = run_indices(gen.day, orders);
    for (std::size_t i = 0; i < orders.size(); ++i) {
      CHECK(indices[i] == gen.truth.orders[i].trade_indices);
      CHECK(orders[i].side == gen.truth.orders[i].side);
      CHECK_FALSE(orders[i].undirected());
    }
  }
}

TEST_CASE("hidden orders appear in the truth and reconstruct as undirected") {
  auto p = capped_preset("intermediate_a", 31, 8000);
  p.hidden_rate = 0.12;
  const auto gen = generate_instrument_day(p);

  const std::size_t hidden = gen.truth.all_hidden_count();
  REQUIRE(hidden > 0);
  CHECK(hidden < gen.truth.orders.size());

  const auto orders = consolidate(gen.day, SessionConfig{});
  REQUIRE(orders.size() == gen.truth.orders.size());
  std::size_t undirected = 0;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    CHECK(orders[i].undirected() == gen.truth.orders[i].all_hidden);
    if (orders[i].undirected()) ++undirected;
  }
  CHECK(undirected == hidden);
}

TEST_CASE("session cap and timestamps hold across regimes") {
  const SessionConfig config;
  const auto gen = generate_instrument_day(capped_preset("large_tick", 3, 2000), config);
  CHECK(gen.day.events.size() <= 2000);
  CHECK(gen.day.events.size() > 1000);
  for (const auto& e : gen.day.warmup_events)
    CHECK(e.timestamp_ms < config.session_start_ms);
  TimestampMs prev = 0;
  for (const auto& e : gen.day.events) {
    CHECK(e.timestamp_ms >= config.session_start_ms);
    CHECK(e.timestamp_ms < config.session_end_ms);
    CHECK(e.timestamp_ms >= prev);
    prev = e.timestamp_ms;
  }
}

TEST_CASE("large_tick regime pins the spread and the central placement") {
  const auto gen = generate_instrument_day(capped_preset("large_tick", 17, 12000));
  const auto a = analyze_day(gen.day, AnalyzeOptions{});

  REQUIRE(a.inspread_prior_spread.size() > 200);
  std::size_t at_two = 0;
  for (double s : a.inspread_prior_spread)
    if (s == 2.0) ++at_two;
  CHECK(static_cast<double>(at_two) / a.inspread_prior_spread.size() > 0.9);

  std::size_t at_half = 0;
  for (double p : a.inspread_rel_price)
    if (p == 0.5) ++at_half;
  CHECK(static_cast<double>(at_half) / a.inspread_rel_price.size() > 0.9);
}

TEST_CASE("small_tick regime places in-spread orders near its own quote") {
  const auto gen = generate_instrument_day(capped_preset("small_tick", 17, 12000));
  const auto a = analyze_day(gen.day, AnalyzeOptions{});
  REQUIRE(a.inspread_rel_price.size() > 200);

  // Offset in ticks from the same-side quote: p * s rounded to the grid.
  std::map<long, std::size_t> offsets;
  for (std::size_t i = 0; i < a.inspread_rel_price.size(); ++i) {
    const double ticks = a.inspread_rel_price[i] * a.inspread_prior_spread[i];
    ++offsets[std::lround(ticks)];
  }
  const auto modal =
      std::max_element(offsets.begin(), offsets.end(),
                       [](const auto& x, const auto& y) { return x.second < y.second; });
  CHECK(modal->first == 2);
  CHECK(offsets[1] < offsets[2]);
  CHECK(offsets[3] < offsets[2]);
}

TEST_CASE("mixed hidden fills mark impact samples but keep the stream valid") {
  auto p = capped_preset("intermediate_b", 23, 6000);
  p.mixed_hidden_rate = 0.3;
  const auto gen = generate_instrument_day(p);

  const std::string text = serialize_events(full_stream(gen.day));
  const auto loaded = load_instrument_day_text(text, "HX", 20260104, SessionConfig{});
  REQUIRE(loaded.report.accepted());

  const auto orders = consolidate(gen.day, SessionConfig{});
  std::size_t mixed = 0;
  for (const auto& mo : orders)
    if (!mo.undirected() && mo.has_hidden) ++mixed;
  CHECK(mixed > 0);
}

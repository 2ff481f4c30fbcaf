#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstddef>
#include <vector>

#include "lobflow/market_orders.hpp"
#include "lobflow/rng.hpp"
#include "lobflow/synthgen.hpp"
#include "lobflow/types.hpp"
#include "support/oracles.hpp"
#include "support/stream_builder.hpp"

using namespace lobflow;
using testsupport::StreamBuilder;

namespace {

constexpr TimestampMs kT0 = 36'000'000;

// Book with stacked ask and bid queues so several executions can run.
StreamBuilder deep_book() {
  StreamBuilder b;
  b.warm_add(Side::Buy, 1'000'000, 300);
  b.warm_add(Side::Buy, 1'000'000, 300);
  b.warm_add(Side::Buy, 999'900, 500);
  b.warm_add(Side::Sell, 1'000'200, 300);
  b.warm_add(Side::Sell, 1'000'200, 300);
  b.warm_add(Side::Sell, 1'000'300, 500);
  return b;
}

std::vector<MarketOrder> run(const StreamBuilder& b, TimestampMs window_ms = 1) {
  SessionConfig cfg;
  cfg.mo_window_ms = window_ms;
  return consolidate(b.day, cfg);
}

}  // namespace

TEST_CASE("adjacent same-side executions fuse into one buy market order") {
  StreamBuilder b = deep_book();
  b.exec(kT0, 4, 300);  // front ask order
  b.exec(kT0, 5, 300);
  const auto orders = run(b);
  REQUIRE(orders.size() == 1);
  CHECK(orders[0].side == Side::Buy);
  CHECK(orders[0].cluster_size() == 2);
  CHECK(orders[0].total_volume == 600);
  CHECK(orders[0].visible_volume == 600);
  CHECK_FALSE(orders[0].has_hidden);
  CHECK(orders[0].first_ts == kT0);
  CHECK(orders[0].last_ts == kT0);
}

TEST_CASE("an interleaved add splits the run") {
  StreamBuilder b = deep_book();
  b.exec(kT0, 4, 300);
  b.add(kT0, Side::Buy, 999'800, 100);
  b.exec(kT0, 5, 300);
  const auto orders = run(b);
  REQUIRE(orders.size() == 2);
  CHECK(orders[0].cluster_size() == 1);
  CHECK(orders[1].cluster_size() == 1);
}

TEST_CASE("a partial execution ends its market order") {
  StreamBuilder b = deep_book();
  b.exec(kT0, 4, 100);  // partial: order 4 keeps 200
  b.exec(kT0, 4, 200);  // full, same millisecond, stream-adjacent
  const auto orders = run(b);
  REQUIRE(orders.size() == 2);
  CHECK(orders[0].trades[0].kind == EventKind::ExecutePartial);
  CHECK(orders[1].trades[0].kind == EventKind::ExecuteFull);
}

TEST_CASE("hidden executions join a visible run without a side") {
  StreamBuilder b = deep_book();
  b.exec(kT0, 4, 300);
  b.hidden(kT0, 1'000'100, 50);
  b.exec(kT0, 5, 300);
  const auto orders = run(b);
  REQUIRE(orders.size() == 1);
  CHECK(orders[0].side == Side::Buy);
  CHECK(orders[0].cluster_size() == 3);
  CHECK(orders[0].total_volume == 650);
  CHECK(orders[0].visible_volume == 600);
  CHECK(orders[0].has_hidden);
}

TEST_CASE("an all-hidden run is undirected") {
  StreamBuilder b = deep_book();
  b.hidden(kT0, 1'000'100, 50);
  b.hidden(kT0, 1'000'100, 70);
  const auto orders = run(b);
  REQUIRE(orders.size() == 1);
  CHECK(orders[0].side == Side::Unknown);
  CHECK(orders[0].undirected());
  CHECK(orders[0].cluster_size() == 2);
  CHECK(orders[0].visible_volume == 0);
}

TEST_CASE("opposite-side executions never fuse") {
  StreamBuilder b = deep_book();
  b.exec(kT0, 4, 300);  // ask side
  b.exec(kT0, 1, 300);  // bid side, stream-adjacent, same ms
  const auto orders = run(b);
  REQUIRE(orders.size() == 2);
  CHECK(orders[0].side == Side::Buy);
  CHECK(orders[1].side == Side::Sell);
}

TEST_CASE("a hidden-led run picks up its direction from the first visible trade") {
  StreamBuilder b = deep_book();
  b.hidden(kT0, 1'000'100, 10);
  b.exec(kT0, 1, 300);  // bid side -> sell market order
  const auto orders = run(b);
  REQUIRE(orders.size() == 1);
  CHECK(orders[0].side == Side::Sell);
  CHECK(orders[0].has_hidden);
}

TEST_CASE("the window caps first-to-last, not gap-to-gap") {
  // gaps of 2 ms each; with window 3 the third trade breaches first-to-last
  StreamBuilder b = deep_book();
  b.exec(kT0, 4, 300);
  b.exec(kT0 + 2, 5, 300);
  b.exec(kT0 + 4, 6, 500);
  SessionConfig cfg;
  cfg.mo_window_ms = 3;
  const auto orders = consolidate(b.day, cfg);
  REQUIRE(orders.size() == 2);
  CHECK(orders[0].cluster_size() == 2);
  CHECK(orders[1].cluster_size() == 1);
}

TEST_CASE("two runs 2 ms apart merge only once the window allows it") {
  StreamBuilder b = deep_book();
  b.exec(kT0, 4, 300);
  b.exec(kT0 + 2, 5, 300);
  CHECK(run(b, 1).size() == 2);
  CHECK(run(b, 5).size() == 1);

  const auto table = window_sensitivity(b.day, SessionConfig{}, {1, 5});
  REQUIRE(table.size() == 2);
  CHECK(table[0] == std::pair<TimestampMs, std::size_t>{1, 2});
  CHECK(table[1] == std::pair<TimestampMs, std::size_t>{5, 1});
}

TEST_CASE("book_before and book_after bracket the cluster") {
  StreamBuilder b = deep_book();
  b.exec(kT0, 4, 300);
  b.exec(kT0, 5, 300);              // ask level 1'000'200 now empty
  b.add(kT0 + 5, Side::Sell, 1'000'200, 40);  // after the run closed
  const auto orders = run(b);
  REQUIRE(orders.size() == 1);
  REQUIRE(orders[0].book_before);
  REQUIRE(orders[0].book_after);
  CHECK(orders[0].book_before->best_ask == 1'000'200);
  CHECK(orders[0].book_before->ask_quote_volume == 600);
  // captured right after the last trade, before the re-add
  CHECK(orders[0].book_after->best_ask == 1'000'300);
  CHECK(orders[0].book_after->ask_quote_volume == 500);
}

TEST_CASE("a run closed by end of stream still gets its book_after") {
  StreamBuilder b = deep_book();
  b.exec(kT0, 4, 300);
  const auto orders = run(b);
  REQUIRE(orders.size() == 1);
  REQUIRE(orders[0].book_after);
  CHECK(orders[0].book_after->ask_quote_volume == 300);
}

TEST_CASE("cluster size bookkeeping matches the spec example") {
  StreamBuilder b = deep_book();
  b.exec(kT0, 4, 300);              // size 1
  b.add(kT0 + 3, Side::Sell, 1'000'200, 40);
  b.exec(kT0 + 6, 5, 300);          // size 1
  b.add(kT0 + 9, Side::Sell, 1'000'200, 40);
  b.exec(kT0 + 12, 1, 300);         // size 2
  b.exec(kT0 + 12, 2, 300);
  const auto orders = run(b);
  const auto counts = cluster_size_counts(orders);
  CHECK(counts.at(1) == 2);
  CHECK(counts.at(2) == 1);

  const Histogram h = cluster_size_histogram(orders);
  REQUIRE(h.atoms.size() == 2);
  CHECK(h.atoms[0].value == 1.0);
  CHECK(h.atoms[0].mass == doctest::Approx(2.0 / 3.0));
  CHECK(h.atoms[1].value == 2.0);
  CHECK(h.atoms[1].mass == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(cluster_size_histogram({}), std::invalid_argument);
}

TEST_CASE("consolidation partitions the trade subsequence in order") {
  RegimeParams params = RegimeParams::preset("intermediate_a");
  params.seed = 404;
  params.hidden_rate = 0.15;
  params.mixed_hidden_rate = 0.25;
  params.enforce_separation = false;
  params.mo_max_span_ms = 3;
  params.max_session_events = 20'000;
  const GeneratedDay g = generate_instrument_day(params);

  const auto orders = consolidate(g.day, SessionConfig{});
  std::vector<Event> from_orders;
  for (const auto& mo : orders) {
    for (const auto& t : mo.trades) from_orders.push_back(t);
  }
  std::vector<Event> trades;
  for (const auto& e : g.day.events) {
    if (is_trade(e.kind)) trades.push_back(e);
  }
  REQUIRE(from_orders.size() == trades.size());
  for (std::size_t i = 0; i < trades.size(); ++i) {
    CHECK(from_orders[i].timestamp_ms == trades[i].timestamp_ms);
    CHECK(from_orders[i].order_id == trades[i].order_id);
    CHECK(from_orders[i].kind == trades[i].kind);
  }
}

TEST_CASE("market order count is non-increasing in the window") {
  RegimeParams params = RegimeParams::preset("large_tick");
  params.seed = 505;
  params.enforce_separation = false;
  params.mo_max_span_ms = 5;
  params.max_session_events = 20'000;
  const GeneratedDay g = generate_instrument_day(params);

  const auto table =
      window_sensitivity(g.day, SessionConfig{}, {0, 1, 2, 3, 5, 10, 100});
  for (std::size_t i = 1; i < table.size(); ++i) {
    CHECK(table[i].second <= table[i - 1].second);
  }
  CHECK(table.back().second >= 1);
}

TEST_CASE("consolidate agrees with the brute-force scanner on adversarial flow") {
  const char* presets[] = {"large_tick", "small_tick", "intermediate_a", "intermediate_b"};
  std::size_t checked_orders = 0;
  for (int rep = 0; rep < 12; ++rep) {
    RegimeParams params = RegimeParams::preset(presets[rep % 4]);
    params.seed = derive_seed(1700, static_cast<std::uint64_t>(rep));
    params.hidden_rate = 0.2;
    params.mixed_hidden_rate = 0.3;
    params.enforce_separation = false;
    params.mo_max_span_ms = 3;
    params.max_session_events = 8'000;
    const GeneratedDay g = generate_instrument_day(params);

    for (TimestampMs window : {TimestampMs{0}, TimestampMs{1}, TimestampMs{2}}) {
      SessionConfig cfg;
      cfg.mo_window_ms = window;
      const auto got = consolidate(g.day, cfg);
      const auto want = testsupport::oracle_consolidate(g.day.events, window);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        REQUIRE(got[i].cluster_size() == want[i].trade_indices.size());
        CHECK(got[i].side == want[i].aggressor);
        for (std::size_t j = 0; j < want[i].trade_indices.size(); ++j) {
          const Event& expect = g.day.events[want[i].trade_indices[j]];
          CHECK(got[i].trades[j].timestamp_ms == expect.timestamp_ms);
          CHECK(got[i].trades[j].order_id == expect.order_id);
          CHECK(got[i].trades[j].volume == expect.volume);
        }
      }
      checked_orders += got.size();
    }
  }
  CHECK(checked_orders > 1'000);  // the fixture really exercised the rules
}

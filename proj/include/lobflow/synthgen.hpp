#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lobflow/ingest.hpp"
#include "lobflow/types.hpp"

namespace lobflow {

// Knobs for one synthetic flow regime.  Rates are events/second; the
// placement laws control where limit orders land relative to the quotes.
struct RegimeParams {
  std::string name = "custom";
  std::uint64_t seed = 1;

  double add_rate = 3.0;
  double cancel_rate = 1.5;
  double mo_rate = 0.8;

  double on_quote_prob = 0.5;  // non-in-spread adds landing exactly on the quote
  double depth_decay = 0.5;    // geometric parameter for off-spread depth offsets

  double inspread_prob = 0.3;  // chance an add goes in-spread, spread permitting
  // in-spread offset law: weight(1) = first_weight, weight(j>=2) = decay^(j-2);
  // aggressive mirrors the law toward the opposite quote
  double inspread_first_weight = 0.5;
  double inspread_offset_decay = 0.5;
  bool inspread_aggressive = false;
  int spread_target_ticks = 2;  // in-spread placements throttle below this
  double reclose_prob = 0.0;    // immediate least-aggressive add after a quote wipe

  double mo_match_prob = 0.4;   // MO volume exactly the quote volume
  double mo_exceed_prob = 0.05; // MO volume spilling into the next level
  double hidden_rate = 0.0;     // chance an MO is entirely hidden
  double mixed_hidden_rate = 0.0;  // chance a visible MO carries a hidden fill

  std::size_t target_live_orders = 120;  // both sides combined
  Price base_mid = 1'000'000;
  int warmup_levels = 10;

  std::size_t max_session_events = 0;  // 0 = fill the whole session
  // Separation pushes the clock past the consolidation window after every MO
  // so reconstruction recovers the generated boundaries exactly; turning it
  // off (plus a nonzero span) produces adversarial streams for oracle tests.
  bool enforce_separation = true;
  TimestampMs mo_max_span_ms = 0;

  void validate() const;
  static RegimeParams preset(const std::string& name);
  static const std::vector<std::string>& preset_names();
};

// One generated market order: indices into InstrumentDay.events.
struct TrueOrder {
  std::vector<std::size_t> trade_indices;
  Side side = Side::Unknown;  // aggressor side; Unknown when all hidden
  bool all_hidden = false;
};

struct GroundTruth {
  std::string regime;
  std::vector<TrueOrder> orders;

  std::size_t all_hidden_count() const;
};

struct GeneratedDay {
  InstrumentDay day;
  GroundTruth truth;
};

GeneratedDay generate_instrument_day(const RegimeParams& params,
                                     const SessionConfig& config = SessionConfig{},
                                     std::string ticker = "", int date = 20260104);

// n_per_regime days per regime with independently derived seeds; tickers are
// <regime-code><index>, e.g. LGT0.
std::vector<GeneratedDay> generate_cohort(std::size_t n_per_regime,
                                          const std::vector<RegimeParams>& regimes,
                                          std::uint64_t master_seed,
                                          const SessionConfig& config = SessionConfig{},
                                          unsigned jobs = 1);

}  // namespace lobflow

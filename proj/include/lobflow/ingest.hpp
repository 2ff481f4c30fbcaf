// Message-file ingestion: parse the 6-column CSV order-flow format into
// validated Event streams, filtered to the trading session.
//
// File format (one event per line, LF-terminated, no header):
//   col 1: timestamp, integer milliseconds after midnight exchange-local
//   col 2: type code  1=Add 2=CancelPartial 3=Delete 4=ExecuteFull
//                     6=ExecutePartial 5=ExecuteHidden
//   col 3: order id, positive integer (0 for ExecuteHidden)
//   col 4: volume, positive integer shares
//   col 5: price, integer in 1/10000 USD
//   col 6: direction  1=buy -1=sell 0=unknown (only with type 5)
// Files are named <YYYYMMDD>_<TICKER>.csv.
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lobflow/types.hpp"

namespace lobflow {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Per-file ingestion log.  A stream is accepted only when it is free of
// internal contradictions: no reference to an unknown or dead order id,
// no size/side/price mismatch against the resting order, and every
// visible-book price on the tick grid.
struct ValidationReport {
  std::array<std::size_t, 6> kind_counts{}; // indexed by EventKind
  std::size_t lines_total = 0;
  std::size_t session_events = 0;
  std::size_t warmup_events = 0;       // pre-session book-shaping events kept for warmup
  std::size_t out_of_session = 0;      // events outside [start, end), excluded from statistics
  std::size_t orphan_references = 0;   // delete/cancel/execute against unknown or dead id, or duplicate add
  std::size_t reference_mismatches = 0; // side/price/volume contradicts the resting order
  std::size_t price_grid_violations = 0;
  std::size_t exhausting_reductions = 0; // partial cancel/execute that zeroes an order; treated as full removal
  std::string first_problem;           // human-readable locator for the first defect

  bool accepted() const {
    return orphan_references == 0 && reference_mismatches == 0 &&
           price_grid_violations == 0 && lines_total > 0;
  }
};

struct ValidationError : std::runtime_error {
  ValidationError(const std::string& what, ValidationReport rep)
      : std::runtime_error(what), report(std::move(rep)) {}
  ValidationReport report;
};

// One instrument on one day.  `events` holds the in-session stream in
// file order; `warmup_events` holds pre-session book-shaping events
// (everything except hidden executions) that bring the book to its
// correct 10:00 state but are excluded from all statistics.
struct InstrumentDay {
  std::string ticker;
  int date = 0; // YYYYMMDD, 0 when the filename does not carry one
  std::vector<Event> events;
  std::vector<Event> warmup_events;
};

struct LoadResult {
  InstrumentDay day;
  ValidationReport report;
};

// Parse one CSV line (no trailing newline). Throws ParseError on any
// malformed field, bad column count, non-positive volume, unknown type
// code, or a direction/id combination inconsistent with the type code.
Event parse_message_line(std::string_view line);

// Exact inverse of parse_message_line for accepted events.
std::string serialize_event(const Event& e);
std::string serialize_events(const std::vector<Event>& events);

// Splits "<YYYYMMDD>_<TICKER>" stems; falls back to (stem, 0).
std::pair<std::string, int> split_day_stem(const std::string& stem);

// Load, session-filter and validate one message file.  Throws ParseError
// with a line locator, ValidationError carrying the report, or
// IoError on open/read failure.  Empty files are rejected.
LoadResult load_instrument_day(const std::filesystem::path& path,
                               const SessionConfig& config);

// Same, from an in-memory buffer (ticker/date supplied by the caller).
LoadResult load_instrument_day_text(std::string_view text, const std::string& ticker,
                                    int date, const SessionConfig& config);

} // namespace lobflow

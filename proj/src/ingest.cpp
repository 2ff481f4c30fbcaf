#include "lobflow/ingest.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace lobflow {

namespace {

std::int64_t parse_int(std::string_view field, std::string_view what) {
  std::int64_t value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || field.empty()) {
    throw ParseError("non-numeric " + std::string(what) + " field '" +
                     std::string(field) + "'");
  }
  return value;
}

EventKind kind_from_code(std::int64_t code) {
  switch (code) {
    case 1: return EventKind::Add;
    case 2: return EventKind::CancelPartial;
    case 3: return EventKind::Delete;
    case 4: return EventKind::ExecuteFull;
    case 5: return EventKind::ExecuteHidden;
    case 6: return EventKind::ExecutePartial;
    default:
      throw ParseError("unknown type code " + std::to_string(code));
  }
}

int code_from_kind(EventKind k) {
  switch (k) {
    case EventKind::Add: return 1;
    case EventKind::CancelPartial: return 2;
    case EventKind::Delete: return 3;
    case EventKind::ExecuteFull: return 4;
    case EventKind::ExecuteHidden: return 5;
    case EventKind::ExecutePartial: return 6;
  }
  return 0;
}

} // namespace

Event parse_message_line(std::string_view line) {
  std::array<std::string_view, 6> cols;
  std::size_t n_cols = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (n_cols == 6) throw ParseError("expected 6 columns");
      cols[n_cols++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (n_cols != 6) {
    throw ParseError("expected 6 columns, got " + std::to_string(n_cols));
  }

  Event e;
  e.timestamp_ms = parse_int(cols[0], "timestamp");
  const std::int64_t code = parse_int(cols[1], "type");
  e.kind = kind_from_code(code);
  const std::int64_t id = parse_int(cols[2], "order id");
  e.volume = parse_int(cols[3], "volume");
  e.price = parse_int(cols[4], "price");
  const std::int64_t dir = parse_int(cols[5], "direction");

  if (e.timestamp_ms < 0) throw ParseError("negative timestamp");
  if (e.volume < 1) throw ParseError("non-positive volume");
  if (e.price < 1) throw ParseError("non-positive price");
  if (id < 0) throw ParseError("negative order id");

  if (e.kind == EventKind::ExecuteHidden) {
    if (dir != 0) throw ParseError("hidden execution must have direction 0");
    if (id != 0) throw ParseError("hidden execution must have order id 0");
    e.side = Side::Unknown;
    e.order_id = 0;
  } else {
    if (dir != 1 && dir != -1) {
      throw ParseError("direction must be 1 or -1 for type " + std::to_string(code));
    }
    if (id == 0) throw ParseError("order id 0 is reserved for hidden executions");
    e.side = dir == 1 ? Side::Buy : Side::Sell;
    e.order_id = static_cast<OrderId>(id);
  }
  return e;
}

std::string serialize_event(const Event& e) {
  const int dir = e.side == Side::Buy ? 1 : e.side == Side::Sell ? -1 : 0;
  char buf[128];
  const int n = std::snprintf(buf, sizeof buf, "%lld,%d,%llu,%lld,%lld,%d",
                              static_cast<long long>(e.timestamp_ms),
                              code_from_kind(e.kind),
                              static_cast<unsigned long long>(e.order_id),
                              static_cast<long long>(e.volume),
                              static_cast<long long>(e.price), dir);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string serialize_events(const std::vector<Event>& events) {
  std::string out;
  out.reserve(events.size() * 32);
  for (const Event& e : events) {
    out += serialize_event(e);
    out += '\n';
  }
  return out;
}

std::pair<std::string, int> split_day_stem(const std::string& stem) {
  if (stem.size() > 9 && stem[8] == '_') {
    bool digits = true;
    for (int i = 0; i < 8; ++i) {
      digits = digits && stem[i] >= '0' && stem[i] <= '9';
    }
    if (digits) return {stem.substr(9), std::stoi(stem.substr(0, 8))};
  }
  return {stem, 0};
}

namespace {

struct LiveOrder {
  Side side;
  Price price;
  Volume remaining;
};

class StreamValidator {
 public:
  StreamValidator(ValidationReport& report, const SessionConfig& config)
      : report_(report), config_(config) {}

  // Feeds one warmup or session event through the referential-integrity
  // check; returns false once a hard defect has been seen.
  void check(const Event& e, std::size_t line_no) {
    switch (e.kind) {
      case EventKind::Add:
        if (!on_grid(e.price)) {
          grid_problem(e, line_no);
          return;
        }
        if (!live_.emplace(e.order_id, LiveOrder{e.side, e.price, e.volume}).second) {
          problem(report_.orphan_references, line_no, "duplicate add of live order id");
        }
        return;
      case EventKind::ExecuteHidden:
        return; // no visible-book reference, price may sit off-grid (e.g. midpoint)
      default:
        break;
    }

    if (!on_grid(e.price)) {
      grid_problem(e, line_no);
      return;
    }
    auto it = live_.find(e.order_id);
    if (it == live_.end()) {
      problem(report_.orphan_references, line_no, "reference to unknown or dead order id");
      return;
    }
    LiveOrder& order = it->second;
    if (order.side != e.side || order.price != e.price) {
      problem(report_.reference_mismatches, line_no, "side/price contradicts resting order");
      return;
    }
    switch (e.kind) {
      case EventKind::Delete:
      case EventKind::ExecuteFull:
        if (e.volume != order.remaining) {
          problem(report_.reference_mismatches, line_no, "volume contradicts resting order");
          return;
        }
        live_.erase(it);
        return;
      case EventKind::CancelPartial:
      case EventKind::ExecutePartial:
        if (e.volume > order.remaining) {
          problem(report_.reference_mismatches, line_no, "reduction exceeds resting volume");
          return;
        }
        if (e.volume == order.remaining) {
          ++report_.exhausting_reductions; // accepted, applied as full removal
          live_.erase(it);
          return;
        }
        order.remaining -= e.volume;
        return;
      default:
        return;
    }
  }

 private:
  bool on_grid(Price p) const { return p % config_.tick == 0; }

  void grid_problem(const Event& e, std::size_t line_no) {
    problem(report_.price_grid_violations, line_no,
            "price " + std::to_string(e.price) + " off the tick grid");
  }

  void problem(std::size_t& counter, std::size_t line_no, const std::string& what) {
    ++counter;
    if (report_.first_problem.empty()) {
      report_.first_problem = "line " + std::to_string(line_no) + ": " + what;
    }
  }

  ValidationReport& report_;
  const SessionConfig& config_;
  std::unordered_map<OrderId, LiveOrder> live_;
};

} // namespace

LoadResult load_instrument_day_text(std::string_view text, const std::string& ticker,
                                    int date, const SessionConfig& config) {
  LoadResult result;
  result.day.ticker = ticker;
  result.day.date = date;
  ValidationReport& report = result.report;
  StreamValidator validator(report, config);

  std::size_t line_no = 0;
  std::size_t pos = 0;
  TimestampMs prev_ts = -1;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;

    Event e;
    try {
      e = parse_message_line(line);
    } catch (const ParseError& pe) {
      throw ParseError("line " + std::to_string(line_no) + ": " + pe.what());
    }
    ++report.lines_total;
    ++report.kind_counts[static_cast<std::size_t>(e.kind)];

    if (e.timestamp_ms < prev_ts) {
      throw ParseError("line " + std::to_string(line_no) + ": timestamps not non-decreasing");
    }
    prev_ts = e.timestamp_ms;

    if (e.timestamp_ms >= config.session_end_ms) {
      ++report.out_of_session;
      continue;
    }
    if (e.timestamp_ms < config.session_start_ms) {
      ++report.out_of_session;
      if (e.kind != EventKind::ExecuteHidden) {
        validator.check(e, line_no);
        result.day.warmup_events.push_back(e);
        ++report.warmup_events;
      }
      continue;
    }
    validator.check(e, line_no);
    result.day.events.push_back(e);
    ++report.session_events;
  }

  if (report.lines_total == 0) {
    throw ValidationError("empty input: no events in " + ticker, report);
  }
  if (!report.accepted()) {
    throw ValidationError("validation failed (" + report.first_problem + ")", report);
  }
  return result;
}

LoadResult load_instrument_day(const std::filesystem::path& path,
                               const SessionConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("read error on " + path.string());
  }
  const auto [ticker, date] = split_day_stem(path.stem().string());
  try {
    return load_instrument_day_text(buf.str(), ticker, date, config);
  } catch (const ParseError& pe) {
    throw ParseError(path.string() + ": " + pe.what());
  } catch (const ValidationError& ve) {
    throw ValidationError(path.string() + ": " + ve.what(), ve.report);
  }
}

} // namespace lobflow

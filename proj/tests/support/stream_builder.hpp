// Builds book-valid event streams for replay-driven tests.  Tracks resting
// orders so executions and cancels carry the matching side/price/volume.
#pragma once

#include <map>
#include <stdexcept>

#include "lobflow/ingest.hpp"
#include "lobflow/types.hpp"

namespace testsupport {

struct StreamBuilder {
  lobflow::InstrumentDay day;
  lobflow::OrderId next_id = 1;

  struct Resting {
    lobflow::Side side;
    lobflow::Price price;
    lobflow::Volume remaining;
  };
  std::map<lobflow::OrderId, Resting> open;

  StreamBuilder() {
    day.ticker = "TEST";
    day.date = 20260104;
  }

  lobflow::OrderId warm_add(lobflow::Side side, lobflow::Price price, lobflow::Volume volume,
                            lobflow::TimestampMs ts = 35'000'000) {
    const lobflow::OrderId id = next_id++;
    open[id] = {side, price, volume};
    day.warmup_events.push_back({ts, lobflow::EventKind::Add, id, side, price, volume});
    return id;
  }

  lobflow::OrderId add(lobflow::TimestampMs ts, lobflow::Side side, lobflow::Price price,
                       lobflow::Volume volume) {
    const lobflow::OrderId id = next_id++;
    open[id] = {side, price, volume};
    day.events.push_back({ts, lobflow::EventKind::Add, id, side, price, volume});
    return id;
  }

  // ExecuteFull when volume matches the remainder, ExecutePartial otherwise.
  void exec(lobflow::TimestampMs ts, lobflow::OrderId id, lobflow::Volume volume) {
    Resting& o = open.at(id);
    if (volume > o.remaining) throw std::logic_error("exec exceeds resting volume");
    const auto kind = volume == o.remaining ? lobflow::EventKind::ExecuteFull
                                            : lobflow::EventKind::ExecutePartial;
    day.events.push_back({ts, kind, id, o.side, o.price, volume});
    if (volume == o.remaining) {
      open.erase(id);
    } else {
      o.remaining -= volume;
    }
  }

  void exec_all(lobflow::TimestampMs ts, lobflow::OrderId id) {
    exec(ts, id, open.at(id).remaining);
  }

  void hidden(lobflow::TimestampMs ts, lobflow::Price price, lobflow::Volume volume) {
    day.events.push_back(
        {ts, lobflow::EventKind::ExecuteHidden, 0, lobflow::Side::Unknown, price, volume});
  }

  void cancel(lobflow::TimestampMs ts, lobflow::OrderId id, lobflow::Volume volume) {
    Resting& o = open.at(id);
    if (volume >= o.remaining) throw std::logic_error("cancel should stay partial");
    day.events.push_back({ts, lobflow::EventKind::CancelPartial, id, o.side, o.price, volume});
    o.remaining -= volume;
  }

  void remove(lobflow::TimestampMs ts, lobflow::OrderId id) {
    const Resting o = open.at(id);
    day.events.push_back({ts, lobflow::EventKind::Delete, id, o.side, o.price, o.remaining});
    open.erase(id);
  }
};

}  // namespace testsupport

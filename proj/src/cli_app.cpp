#include "lobflow/cli_app.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lobflow/analysis.hpp"
#include "lobflow/clustering.hpp"
#include "lobflow/exports.hpp"
#include "lobflow/ingest.hpp"
#include "lobflow/parallel.hpp"
#include "lobflow/rng.hpp"
#include "lobflow/synthgen.hpp"

namespace lobflow {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitCompute = 4;
constexpr int kExitIo = 5;

bool valid_hhmm(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return false;
  int h = 0;
  int m = 0;
  int sec = 0;
  const int fields = std::sscanf(s.c_str(), "%d:%d:%d", &h, &m, &sec);
  if (fields < 2) return false;
  return h >= 0 && h < 24 && m >= 0 && m < 60 && sec >= 0 && sec < 60;
}

TimestampMs hhmm_to_ms(const std::string& s) {
  int h = 0;
  int m = 0;
  int sec = 0;
  std::sscanf(s.c_str(), "%d:%d:%d", &h, &m, &sec);
  return (static_cast<TimestampMs>(h) * 3600 + m * 60 + sec) * 1000;
}

std::size_t resolve_jobs(std::size_t jobs) {
  if (jobs != 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct SessionFlags {
  std::string start;
  std::string end;
  TimestampMs mo_window_ms = 1;

  SessionConfig config() const {
    SessionConfig cfg;
    if (!start.empty()) cfg.session_start_ms = hhmm_to_ms(start);
    if (!end.empty()) cfg.session_end_ms = hhmm_to_ms(end);
    cfg.mo_window_ms = mo_window_ms;
    return cfg;
  }
};

void add_session_flags(CLI::App* cmd, SessionFlags& flags) {
  const auto hhmm = CLI::Validator(
      [](std::string& s) { return valid_hhmm(s) ? "" : "expected HH:MM or HH:MM:SS"; }, "TIME");
  cmd->add_option("--session-start", flags.start, "session window start (HH:MM)")->check(hhmm);
  cmd->add_option("--session-end", flags.end, "session window end (HH:MM)")->check(hhmm);
  cmd->add_option("--mo-window-ms", flags.mo_window_ms,
                  "max first-to-last trade gap in one market order (ms)")
      ->check(CLI::NonNegativeNumber);
}

int cmd_validate(const std::vector<std::string>& paths, const SessionConfig& cfg) {
  bool any_parse = false;
  bool any_invalid = false;
  for (const auto& path : paths) {
    try {
      const LoadResult r = load_instrument_day(path, cfg);
      std::printf("%s: OK session_events=%zu warmup=%zu out_of_session=%zu exhausting=%zu\n",
                  path.c_str(), r.report.session_events, r.report.warmup_events,
                  r.report.out_of_session, r.report.exhausting_reductions);
    } catch (const ValidationError& e) {
      any_invalid = true;
      const auto& rep = e.report;
      std::printf("%s: INVALID %s (orphans=%zu mismatches=%zu grid=%zu)\n", path.c_str(),
                  e.what(), rep.orphan_references, rep.reference_mismatches,
                  rep.price_grid_violations);
    } catch (const ParseError& e) {
      any_parse = true;
      std::printf("%s: PARSE ERROR %s\n", path.c_str(), e.what());
    }
  }
  if (any_parse) return kExitParse;
  if (any_invalid) return kExitValidation;
  return kExitOk;
}

std::vector<LoadResult> load_all(const std::vector<std::string>& paths,
                                 const SessionConfig& cfg) {
  std::vector<LoadResult> days;
  days.reserve(paths.size());
  for (const auto& path : paths) days.push_back(load_instrument_day(path, cfg));
  return days;
}

struct AnalyzeFlags {
  std::vector<std::string> paths;
  std::string out;
  SessionFlags session;
  std::size_t jobs = 0;
  bool dump_mos = false;
  std::size_t snapshot_stride = 0;
  double return_bin_width = 0;
  bool exclude_mixed_hidden = false;
};

int cmd_analyze(const AnalyzeFlags& flags) {
  const SessionConfig cfg = flags.session.config();
  AnalyzeOptions options;
  options.session = cfg;
  options.exclude_mixed_hidden = flags.exclude_mixed_hidden;
  options.return_bin_width = flags.return_bin_width;
  options.snapshot_stride = flags.snapshot_stride;

  const std::vector<LoadResult> days = load_all(flags.paths, cfg);
  std::vector<DayAnalysis> analyses(days.size());
  parallel_for(days.size(), resolve_jobs(flags.jobs),
               [&](std::size_t i) { analyses[i] = analyze_day(days[i].day, options); });

  const std::filesystem::path out_dir(flags.out);
  std::filesystem::create_directories(out_dir);
  for (const auto& a : analyses) {
    const std::string key = day_key(a);
    write_text_file(out_dir / (key + ".summary.json"), summary_json(a));
    const auto dump_hist = [&](const char* name, bool have, auto build) {
      if (!have) return;
      const Histogram h = build(a);
      write_text_file(out_dir / (key + "." + name + ".csv"), histogram_csv(h));
      write_text_file(out_dir / (key + "." + name + ".atoms.csv"), atoms_csv(h));
    };
    dump_hist("inspread_relative_price", !a.inspread_rel_price.empty(),
              relative_price_histogram);
    dump_hist("prior_spread", !a.inspread_prior_spread.empty(), prior_spread_histogram);
    dump_hist("abs_deviation", !a.abs_deviation.empty(), deviation_histogram);
    dump_hist("relative_volume", !a.relative_volumes.empty(), relative_volume_histogram);
    dump_hist("impact_return", !a.returns.empty(), return_histogram);
    if (!a.orders.empty()) {
      const Histogram h = cluster_size_histogram(a.orders);
      write_text_file(out_dir / (key + ".cluster_size.csv"), histogram_csv(h));
      write_text_file(out_dir / (key + ".cluster_size.atoms.csv"), atoms_csv(h));
    }
    if (flags.dump_mos) write_text_file(out_dir / (key + ".mos.jsonl"), mo_jsonl(a.orders));
    if (flags.snapshot_stride > 0) {
      std::string lines;
      for (const auto& l : a.snapshots) {
        lines += l;
        lines += '\n';
      }
      write_text_file(out_dir / (key + ".book.jsonl"), lines);
    }
  }
  std::printf("analyzed %zu instrument-days -> %s\n", analyses.size(), flags.out.c_str());
  return kExitOk;
}

struct ClusterFlags {
  std::vector<std::string> paths;
  std::string out;
  SessionFlags session;
  std::size_t jobs = 0;
  int k_min = 2;
  int k_max = 8;
  std::uint64_t seed = 1;
  unsigned restarts = kDefaultRestarts;
  bool per_day = false;
  bool equal_day_weights = false;
};

int cmd_cluster(const ClusterFlags& flags) {
  const SessionConfig cfg = flags.session.config();
  AnalyzeOptions options;
  options.session = cfg;

  const std::vector<LoadResult> days = load_all(flags.paths, cfg);
  std::vector<DayAnalysis> analyses(days.size());
  const std::size_t jobs = resolve_jobs(flags.jobs);
  parallel_for(days.size(), jobs,
               [&](std::size_t i) { analyses[i] = analyze_day(days[i].day, options); });

  // one object per instrument-day, or per ticker with days pooled
  std::vector<std::string> labels;
  std::vector<Ecdf> ecdfs;
  if (flags.per_day) {
    for (const auto& a : analyses) {
      if (a.inspread_rel_price.empty()) {
        throw std::invalid_argument("no in-spread samples for " + day_key(a));
      }
      labels.push_back(day_key(a));
      ecdfs.push_back(Ecdf::from_samples(a.inspread_rel_price));
    }
  } else {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const DayAnalysis*>> by_ticker;
    for (const auto& a : analyses) {
      if (by_ticker[a.ticker].empty()) order.push_back(a.ticker);
      by_ticker[a.ticker].push_back(&a);
    }
    for (const auto& ticker : order) {
      labels.push_back(ticker);
      if (flags.equal_day_weights) {
        std::vector<std::pair<double, double>> weighted;
        for (const DayAnalysis* a : by_ticker[ticker]) {
          if (a->inspread_rel_price.empty()) continue;
          const double w = 1.0 / static_cast<double>(a->inspread_rel_price.size());
          for (double v : a->inspread_rel_price) weighted.emplace_back(v, w);
        }
        if (weighted.empty()) {
          throw std::invalid_argument("no in-spread samples for " + ticker);
        }
        ecdfs.push_back(Ecdf::from_weighted(std::move(weighted)));
      } else {
        std::vector<double> pooled;
        for (const DayAnalysis* a : by_ticker[ticker]) {
          pooled.insert(pooled.end(), a->inspread_rel_price.begin(),
                        a->inspread_rel_price.end());
        }
        if (pooled.empty()) throw std::invalid_argument("no in-spread samples for " + ticker);
        ecdfs.push_back(Ecdf::from_samples(std::move(pooled)));
      }
    }
  }

  if (ecdfs.size() < 2) {
    throw std::invalid_argument("clustering needs at least 2 instruments, got " +
                                std::to_string(ecdfs.size()));
  }
  int k_min = flags.k_min;
  int k_max = flags.k_max;
  const int n = static_cast<int>(ecdfs.size());
  if (k_max > n) {
    std::fprintf(stderr, "warning: clamping k range [%d,%d] to n=%d instruments\n", k_min,
                 k_max, n);
    k_max = n;
    k_min = std::min(k_min, k_max);
  }

  const DistanceMatrix matrix = distance_matrix(ecdfs, labels, static_cast<unsigned>(jobs));

  // same per-k seeding as select_k, so the table matches the selection
  std::vector<std::pair<int, double>> table;
  std::optional<ClusterAssignment> best;
  for (int k = k_min; k <= k_max; ++k) {
    ClusterAssignment a =
        relational_kmeans(matrix, k, derive_seed(flags.seed, static_cast<std::uint64_t>(k)),
                          flags.restarts, static_cast<unsigned>(jobs));
    table.emplace_back(k, a.mean_silhouette);
    if (!best || a.mean_silhouette > best->mean_silhouette) best = std::move(a);
  }
  best->seed = flags.seed;

  const std::filesystem::path out_dir(flags.out);
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / "matrix.csv", matrix_csv(matrix));
  write_text_file(out_dir / "matrix_ordered.csv",
                  matrix_csv(reorder_by_cluster(matrix, best->labels)));
  write_text_file(out_dir / "assignment.json", assignment_json(matrix, *best));
  write_text_file(out_dir / "silhouette.csv", silhouette_csv(table));
  std::printf("clustered %zu instruments: k=%d mean_silhouette=%s -> %s\n", ecdfs.size(),
              best->k, format_double(best->mean_silhouette).c_str(), flags.out.c_str());
  return kExitOk;
}

RegimeParams regime_from_json(const nlohmann::json& j) {
  RegimeParams p =
      j.contains("preset") ? RegimeParams::preset(j.at("preset").get<std::string>())
                           : RegimeParams{};
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("name", p.name);
  get("seed", p.seed);
  get("add_rate", p.add_rate);
  get("cancel_rate", p.cancel_rate);
  get("mo_rate", p.mo_rate);
  get("on_quote_prob", p.on_quote_prob);
  get("depth_decay", p.depth_decay);
  get("inspread_prob", p.inspread_prob);
  get("inspread_first_weight", p.inspread_first_weight);
  get("inspread_offset_decay", p.inspread_offset_decay);
  get("inspread_aggressive", p.inspread_aggressive);
  get("spread_target_ticks", p.spread_target_ticks);
  get("reclose_prob", p.reclose_prob);
  get("mo_match_prob", p.mo_match_prob);
  get("mo_exceed_prob", p.mo_exceed_prob);
  get("hidden_rate", p.hidden_rate);
  get("mixed_hidden_rate", p.mixed_hidden_rate);
  get("target_live_orders", p.target_live_orders);
  get("base_mid", p.base_mid);
  get("warmup_levels", p.warmup_levels);
  get("max_session_events", p.max_session_events);
  get("enforce_separation", p.enforce_separation);
  get("mo_max_span_ms", p.mo_max_span_ms);
  return p;
}

struct SynthFlags {
  std::string out;
  std::vector<std::string> presets;
  std::string params_file;
  std::size_t days = 1;
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
  SessionFlags session;
};

int cmd_synth(const SynthFlags& flags) {
  const SessionConfig cfg = flags.session.config();
  std::vector<RegimeParams> regimes;
  if (!flags.params_file.empty()) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text_file(flags.params_file));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(flags.params_file + ": " + e.what());
    }
    if (j.is_array()) {
      for (const auto& item : j) regimes.push_back(regime_from_json(item));
    } else {
      regimes.push_back(regime_from_json(j));
    }
  } else if (!flags.presets.empty()) {
    for (const auto& name : flags.presets) regimes.push_back(RegimeParams::preset(name));
  } else {
    for (const auto& name : RegimeParams::preset_names()) {
      regimes.push_back(RegimeParams::preset(name));
    }
  }

  const auto cohort =
      generate_cohort(flags.days, regimes, flags.seed, cfg, resolve_jobs(flags.jobs));

  const std::filesystem::path out_dir(flags.out);
  std::filesystem::create_directories(out_dir);
  for (const auto& g : cohort) {
    const std::string key = std::to_string(g.day.date) + "_" + g.day.ticker;
    std::vector<Event> all = g.day.warmup_events;
    all.insert(all.end(), g.day.events.begin(), g.day.events.end());
    write_text_file(out_dir / (key + ".csv"), serialize_events(all));
    write_text_file(out_dir / (key + ".truth.json"), ground_truth_json(g));
  }
  std::printf("generated %zu instrument-days (%zu regimes x %zu days) -> %s\n", cohort.size(),
              regimes.size(), flags.days, flags.out.c_str());
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"limit-order-book flow analytics"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI/TOML file");

  SessionFlags validate_session;
  std::vector<std::string> validate_paths;
  CLI::App* validate = app.add_subcommand("validate", "check message files for consistency");
  validate->add_option("paths", validate_paths, "message CSV files")
      ->required()
      ->check(CLI::ExistingFile);
  add_session_flags(validate, validate_session);

  AnalyzeFlags analyze;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "per-day order-flow statistics");
  analyze_cmd->add_option("paths", analyze.paths, "message CSV files")
      ->required()
      ->check(CLI::ExistingFile);
  analyze_cmd->add_option("--out", analyze.out, "output directory")->required();
  add_session_flags(analyze_cmd, analyze.session);
  analyze_cmd->add_option("--jobs", analyze.jobs, "worker threads (0 = hardware)");
  analyze_cmd->add_flag("--dump-mos", analyze.dump_mos, "write consolidated market orders");
  analyze_cmd->add_option("--snapshot-stride", analyze.snapshot_stride,
                          "book snapshot every N events (0 = off)");
  analyze_cmd->add_option("--bins-return-width", analyze.return_bin_width,
                          "impact-return bin width (0 = tick / 2*median mid)");
  analyze_cmd->add_flag("--exclude-mixed-hidden", analyze.exclude_mixed_hidden,
                        "drop hidden-carrying market orders from impact stats");

  ClusterFlags cluster;
  CLI::App* cluster_cmd =
      app.add_subcommand("cluster", "KS-distance clustering of relative-price distributions");
  cluster_cmd->add_option("paths", cluster.paths, "message CSV files")
      ->required()
      ->check(CLI::ExistingFile);
  cluster_cmd->add_option("--out", cluster.out, "output directory")->required();
  add_session_flags(cluster_cmd, cluster.session);
  cluster_cmd->add_option("--jobs", cluster.jobs, "worker threads (0 = hardware)");
  cluster_cmd->add_option("--k-min", cluster.k_min, "smallest cluster count")
      ->check(CLI::Range(2, 4096));
  cluster_cmd->add_option("--k-max", cluster.k_max, "largest cluster count")
      ->check(CLI::Range(2, 4096));
  cluster_cmd->final_callback([&cluster] {
    if (cluster.k_min > cluster.k_max)
      throw CLI::ValidationError("--k-min must not exceed --k-max");
  });
  cluster_cmd->add_option("--seed", cluster.seed, "clustering seed");
  cluster_cmd->add_option("--restarts", cluster.restarts, "k-means restarts")
      ->check(CLI::Range(1u, 1u << 20));
  cluster_cmd->add_flag("--per-day,!--pool-days", cluster.per_day,
                        "one object per instrument-day (default pools days per ticker)");
  cluster_cmd->add_flag("--equal-day-weights", cluster.equal_day_weights,
                        "weight each day equally when pooling");

  SynthFlags synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate synthetic instrument-days");
  synth_cmd->add_option("--out", synth.out, "output directory")->required();
  synth_cmd->add_option("--preset", synth.presets,
                        "regime preset(s): large_tick, small_tick, intermediate_a, "
                        "intermediate_b (default: all four)");
  synth_cmd->add_option("--params", synth.params_file, "JSON regime parameter file")
      ->check(CLI::ExistingFile);
  synth_cmd->add_option("--days", synth.days, "instrument-days per regime")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  synth_cmd->add_option("--seed", synth.seed, "master seed");
  synth_cmd->add_option("--jobs", synth.jobs, "worker threads (0 = hardware)");
  add_session_flags(synth_cmd, synth.session);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (app.got_subcommand(validate)) {
      return cmd_validate(validate_paths, validate_session.config());
    }
    if (app.got_subcommand(analyze_cmd)) return cmd_analyze(analyze);
    if (app.got_subcommand(cluster_cmd)) return cmd_cluster(cluster);
    if (app.got_subcommand(synth_cmd)) return cmd_synth(synth);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitParse;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCompute;
  }
  return kExitOk;
}

}  // namespace lobflow

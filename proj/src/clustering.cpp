#include "lobflow/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "lobflow/parallel.hpp"
#include "lobflow/rng.hpp"

namespace lobflow {

Ecdf Ecdf::from_samples(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("ecdf: empty sample set");
  std::sort(samples.begin(), samples.end());
  Ecdf e;
  e.n = samples.size();
  std::size_t i = 0;
  std::size_t seen = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    seen += j - i;
    e.values.push_back(samples[i]);
    e.cum.push_back(static_cast<double>(seen) / static_cast<double>(e.n));
    i = j;
  }
  e.cum.back() = 1.0;
  return e;
}

Ecdf Ecdf::from_weighted(std::vector<std::pair<double, double>> weighted) {
  if (weighted.empty()) throw std::invalid_argument("ecdf: empty sample set");
  std::sort(weighted.begin(), weighted.end());
  double total = 0;
  for (const auto& [v, w] : weighted) {
    if (!(w > 0)) throw std::invalid_argument("ecdf: weights must be positive");
    total += w;
  }
  Ecdf e;
  e.n = weighted.size();
  double seen = 0;
  std::size_t i = 0;
  while (i < weighted.size()) {
    std::size_t j = i;
    double w = 0;
    while (j < weighted.size() && weighted[j].first == weighted[i].first) {
      w += weighted[j].second;
      ++j;
    }
    seen += w;
    e.values.push_back(weighted[i].first);
    e.cum.push_back(seen / total);
    i = j;
  }
  e.cum.back() = 1.0;
  return e;
}

double ks_distance(const Ecdf& a, const Ecdf& b) {
  if (a.values.empty() || b.values.empty()) {
    throw std::invalid_argument("ks_distance: empty distribution");
  }
  // Walk the union grid; |Fa − Fb| right after each jump covers both the
  // value points and all left limits.
  std::size_t i = 0;
  std::size_t j = 0;
  double fa = 0;
  double fb = 0;
  double sup = 0;
  while (i < a.values.size() || j < b.values.size()) {
    double v;
    if (j >= b.values.size() || (i < a.values.size() && a.values[i] <= b.values[j])) {
      v = a.values[i];
    } else {
      v = b.values[j];
    }
    while (i < a.values.size() && a.values[i] == v) fa = a.cum[i++];
    while (j < b.values.size() && b.values[j] == v) fb = b.cum[j++];
    sup = std::max(sup, std::abs(fa - fb));
  }
  return sup;
}

DistanceMatrix distance_matrix(const std::vector<Ecdf>& ecdfs,
                               const std::vector<std::string>& labels, unsigned jobs) {
  if (ecdfs.size() < 2) throw std::invalid_argument("distance_matrix: need at least 2 ecdfs");
  if (labels.size() != ecdfs.size()) {
    throw std::invalid_argument("distance_matrix: label/ecdf count mismatch");
  }
  DistanceMatrix m;
  m.labels = labels;
  m.n = ecdfs.size();
  m.values.assign(m.n * m.n, 0.0);
  parallel_for(m.n, jobs, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < m.n; ++j) {
      try {
        const double d = ks_distance(ecdfs[i], ecdfs[j]);
        m.at(i, j) = d;
        m.at(j, i) = d;
      } catch (const std::invalid_argument& err) {
        throw std::invalid_argument(std::string(err.what()) + " (pair " + labels[i] + ", " +
                                    labels[j] + ")");
      }
    }
  });
  return m;
}

namespace {

struct KmeansResult {
  std::vector<int> labels;  // 0-based cluster ids
  double objective = 0;
  std::size_t negative_distances = 0;
};

constexpr int kMaxIterations = 200;

// One seeded run: farthest-point init, batch reassignment to a fixed point.
KmeansResult kmeans_run(const DistanceMatrix& m, const std::vector<double>& d2, int k,
                        std::uint64_t seed) {
  const std::size_t n = m.n;
  const auto kk = static_cast<std::size_t>(k);
  Rng rng(seed);

  std::vector<std::size_t> seeds;
  seeds.reserve(kk);
  std::vector<bool> chosen(n, false);
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  seeds.push_back(static_cast<std::size_t>(rng.below(n)));
  chosen[seeds[0]] = true;
  while (seeds.size() < kk) {
    for (std::size_t x = 0; x < n; ++x) {
      min_dist[x] = std::min(min_dist[x], m.at(x, seeds.back()));
    }
    std::size_t best = n;
    double best_d = -1;
    for (std::size_t x = 0; x < n; ++x) {
      if (!chosen[x] && min_dist[x] > best_d) {
        best_d = min_dist[x];
        best = x;
      }
    }
    seeds.push_back(best);
    chosen[best] = true;
  }

  std::vector<int> labels(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    int best_c = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < kk; ++c) {
      const double d = m.at(x, seeds[c]);
      if (d < best_d) {
        best_d = d;
        best_c = static_cast<int>(c);
      }
    }
    labels[x] = best_c;
  }

  std::vector<std::vector<std::size_t>> members(kk);
  std::vector<double> w(kk);      // sum over ordered member pairs of d²
  std::vector<double> term2(kk);  // W_C / (2|C|²)
  const auto rebuild = [&] {
    for (auto& v : members) v.clear();
    for (std::size_t x = 0; x < n; ++x) {
      members[static_cast<std::size_t>(labels[x])].push_back(x);
    }
  };
  const auto cluster_stats = [&] {
    for (std::size_t c = 0; c < kk; ++c) {
      const auto& mem = members[c];
      double sum = 0;
      for (std::size_t a : mem) {
        for (std::size_t b : mem) sum += d2[a * n + b];
      }
      w[c] = sum;
      const auto sz = static_cast<double>(mem.size());
      term2[c] = mem.empty() ? 0 : sum / (2 * sz * sz);
    }
  };
  const auto point_to_cluster = [&](std::size_t x, std::size_t c) {
    double s = 0;
    for (std::size_t y : members[c]) s += d2[x * n + y];
    return s / static_cast<double>(members[c].size()) - term2[c];
  };

  std::size_t negative = 0;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    rebuild();
    // Reseed any empty cluster with the object farthest from its own centroid.
    for (;;) {
      std::size_t empty = kk;
      for (std::size_t c = 0; c < kk; ++c) {
        if (members[c].empty()) {
          empty = c;
          break;
        }
      }
      if (empty == kk) break;
      cluster_stats();
      std::size_t farthest = n;
      double farthest_d = -std::numeric_limits<double>::infinity();
      for (std::size_t x = 0; x < n; ++x) {
        const auto c = static_cast<std::size_t>(labels[x]);
        if (members[c].size() < 2) continue;
        const double d = point_to_cluster(x, c);
        if (d > farthest_d) {
          farthest_d = d;
          farthest = x;
        }
      }
      labels[farthest] = static_cast<int>(empty);
      rebuild();
    }
    cluster_stats();

    bool changed = false;
    negative = 0;
    std::vector<int> next(n);
    for (std::size_t x = 0; x < n; ++x) {
      int best_c = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < kk; ++c) {
        const double d = point_to_cluster(x, c);
        if (d < best_d) {
          best_d = d;
          best_c = static_cast<int>(c);
        }
      }
      if (best_d < 0) ++negative;
      next[x] = best_c;
      if (next[x] != labels[x]) changed = true;
    }
    labels = std::move(next);
    if (!changed) break;
  }

  rebuild();
  KmeansResult r;
  r.labels = std::move(labels);
  r.negative_distances = negative;
  for (std::size_t c = 0; c < kk; ++c) {
    if (members[c].empty()) continue;
    double sum = 0;
    for (std::size_t a : members[c]) {
      for (std::size_t b : members[c]) sum += d2[a * n + b];
    }
    r.objective += sum / (2 * static_cast<double>(members[c].size()));
  }
  return r;
}

// Renumber cluster ids to 1..k in order of first appearance.
std::vector<int> canonical_labels(const std::vector<int>& raw) {
  std::unordered_map<int, int> remap;
  std::vector<int> out(raw.size());
  int next = 1;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(raw[i], next);
    if (inserted) ++next;
    out[i] = it->second;
  }
  return out;
}

}  // namespace

ClusterAssignment relational_kmeans(const DistanceMatrix& matrix, int k, std::uint64_t seed,
                                    unsigned restarts, unsigned jobs) {
  const std::size_t n = matrix.n;
  if (k < 2 || static_cast<std::size_t>(k) > n) {
    throw std::invalid_argument("relational_kmeans: k out of range [2, n]");
  }
  if (restarts == 0) throw std::invalid_argument("relational_kmeans: restarts must be >= 1");

  std::vector<double> d2(n * n);
  for (std::size_t i = 0; i < n * n; ++i) d2[i] = matrix.values[i] * matrix.values[i];

  std::vector<KmeansResult> runs(restarts);
  parallel_for(restarts, jobs,
               [&](std::size_t r) { runs[r] = kmeans_run(matrix, d2, k, derive_seed(seed, r)); });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].objective < runs[best].objective) best = r;
  }

  ClusterAssignment a;
  a.labels = canonical_labels(runs[best].labels);
  a.k = k;
  a.objective = runs[best].objective;
  a.seed = seed;
  a.restarts = restarts;
  a.negative_distance_count = runs[best].negative_distances;
  a.mean_silhouette = mean_silhouette(matrix, a.labels);
  return a;
}

double mean_silhouette(const DistanceMatrix& matrix, const std::vector<int>& labels) {
  const std::size_t n = matrix.n;
  if (labels.size() != n) throw std::invalid_argument("mean_silhouette: label count mismatch");
  std::unordered_map<int, std::size_t> sizes;
  for (int label : labels) ++sizes[label];
  if (sizes.size() < 2) throw std::invalid_argument("mean_silhouette: need at least 2 clusters");

  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int mine = labels[i];
    if (sizes[mine] == 1) continue;  // contributes 0
    std::unordered_map<int, double> sum;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sum[labels[j]] += matrix.at(i, j);
    }
    const double a = sum[mine] / static_cast<double>(sizes[mine] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [label, count] : sizes) {
      if (label == mine) continue;
      b = std::min(b, sum[label] / static_cast<double>(count));
    }
    const double denom = std::max(a, b);
    total += denom > 0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

ClusterAssignment select_k(const DistanceMatrix& matrix, int k_min, int k_max,
                           std::uint64_t seed, unsigned restarts, unsigned jobs) {
  if (k_min < 2 || k_min > k_max || static_cast<std::size_t>(k_max) > matrix.n) {
    throw std::invalid_argument("select_k: need 2 <= k_min <= k_max <= n");
  }
  ClusterAssignment best;
  for (int k = k_min; k <= k_max; ++k) {
    ClusterAssignment a =
        relational_kmeans(matrix, k, derive_seed(seed, static_cast<std::uint64_t>(k)),
                          restarts, jobs);
    if (best.k == 0 || a.mean_silhouette > best.mean_silhouette) best = std::move(a);
  }
  best.seed = seed;
  return best;
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("adjusted_rand_index: label vectors must match and be nonempty");
  }
  const auto comb2 = [](double x) { return x * (x - 1) / 2; };
  std::unordered_map<int, std::size_t> rows;
  std::unordered_map<int, std::size_t> cols;
  std::unordered_map<std::uint64_t, std::size_t> cells;
  std::unordered_map<int, int> ra;
  std::unordered_map<int, int> rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int ia = ra.try_emplace(a[i], static_cast<int>(ra.size())).first->second;
    const int ib = rb.try_emplace(b[i], static_cast<int>(rb.size())).first->second;
    ++rows[ia];
    ++cols[ib];
    ++cells[(static_cast<std::uint64_t>(ia) << 32) | static_cast<std::uint32_t>(ib)];
  }
  double sum_cells = 0;
  for (const auto& [key, count] : cells) sum_cells += comb2(static_cast<double>(count));
  double sum_rows = 0;
  for (const auto& [key, count] : rows) sum_rows += comb2(static_cast<double>(count));
  double sum_cols = 0;
  for (const auto& [key, count] : cols) sum_cols += comb2(static_cast<double>(count));
  const double total = comb2(static_cast<double>(a.size()));
  const double expected = sum_rows * sum_cols / total;
  const double maximum = (sum_rows + sum_cols) / 2;
  if (maximum == expected) return sum_cells == expected ? 1.0 : 0.0;
  return (sum_cells - expected) / (maximum - expected);
}

}  // namespace lobflow

#include "lobflow/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lobflow {

BinningSpec BinningSpec::uniform(double width) {
  BinningSpec spec;
  spec.width = width;
  return spec;
}

BinningSpec BinningSpec::uniform(double width, double lo, double hi) {
  BinningSpec spec;
  spec.width = width;
  spec.has_range = true;
  spec.lo = lo;
  spec.hi = hi;
  return spec;
}

BinningSpec BinningSpec::with_edges(std::vector<double> edges) {
  BinningSpec spec;
  spec.edges = std::move(edges);
  return spec;
}

double Histogram::integral() const {
  double sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    sum += density[i] * (edges[i + 1] - edges[i]);
  }
  return sum;
}

double Histogram::atom_mass() const {
  double sum = 0;
  for (const auto& a : atoms) sum += a.mass;
  return sum;
}

namespace {

void validate_spec(const BinningSpec& spec) {
  if (!spec.edges.empty()) {
    if (spec.edges.size() < 2) throw std::invalid_argument("binning: need at least 2 edges");
    for (std::size_t i = 1; i < spec.edges.size(); ++i) {
      if (!(spec.edges[i] > spec.edges[i - 1])) {
        throw std::invalid_argument("binning: edges must be strictly increasing");
      }
    }
    return;
  }
  if (!(spec.width > 0)) throw std::invalid_argument("binning: width must be positive");
  if (spec.has_range && !(spec.hi > spec.lo)) {
    throw std::invalid_argument("binning: hi must exceed lo");
  }
}

std::vector<double> make_edges(const BinningSpec& spec, double min_v, double max_v) {
  if (!spec.edges.empty()) return spec.edges;
  double lo = spec.has_range ? spec.lo : spec.width * std::floor(min_v / spec.width);
  double hi = spec.has_range ? spec.hi : spec.width * std::ceil(max_v / spec.width);
  if (!(hi > lo)) hi = lo + spec.width;
  const auto bins = static_cast<std::size_t>(std::llround((hi - lo) / spec.width));
  std::vector<double> edges(std::max<std::size_t>(bins, 1) + 1);
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = lo + static_cast<double>(i) * spec.width;
  edges.back() = hi;
  return edges;
}

}  // namespace

Histogram build_histogram(std::vector<double> samples, const BinningSpec& spec) {
  if (samples.empty()) throw std::invalid_argument("build_histogram: empty sample set");
  validate_spec(spec);
  std::sort(samples.begin(), samples.end());

  Histogram h;
  h.n_total = samples.size();

  // Exactly repeated values become point masses, excluded from the bins.
  std::vector<double> rest;
  if (spec.extract_atoms) {
    rest.reserve(samples.size());
    std::size_t i = 0;
    while (i < samples.size()) {
      std::size_t j = i;
      while (j < samples.size() && samples[j] == samples[i]) ++j;
      const std::size_t count = j - i;
      if (count >= spec.atom_min_count) {
        h.atoms.push_back({samples[i], count,
                           static_cast<double>(count) / static_cast<double>(h.n_total)});
      } else {
        rest.insert(rest.end(), samples.begin() + static_cast<std::ptrdiff_t>(i),
                    samples.begin() + static_cast<std::ptrdiff_t>(j));
      }
      i = j;
    }
  } else {
    rest = std::move(samples);
  }

  const double min_v = rest.empty() ? (h.atoms.front().value) : rest.front();
  const double max_v = rest.empty() ? (h.atoms.back().value) : rest.back();
  h.edges = make_edges(spec, min_v, max_v);
  h.counts.assign(h.edges.size() - 1, 0);

  for (double x : rest) {
    if (x < h.edges.front()) {
      ++h.n_underflow;
      continue;
    }
    if (x > h.edges.back()) {
      ++h.n_overflow;
      continue;
    }
    // bins are [e_i, e_{i+1}), the last one closed on the right
    auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - h.edges.begin());
    idx = idx == 0 ? 0 : idx - 1;
    if (idx >= h.counts.size()) idx = h.counts.size() - 1;
    ++h.counts[idx];
    ++h.n_binned;
  }

  h.density.resize(h.counts.size());
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double width = h.edges[i + 1] - h.edges[i];
    h.density[i] =
        static_cast<double>(h.counts[i]) / (static_cast<double>(h.n_total) * width);
  }
  return h;
}

}  // namespace lobflow

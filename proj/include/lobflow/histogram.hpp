#pragma once

#include <cstddef>
#include <vector>

namespace lobflow {

// Uniform binning (width > 0, range derived from the data unless lo/hi are
// set) or explicit strictly increasing edges.
struct BinningSpec {
  double width = 0;
  bool has_range = false;
  double lo = 0;
  double hi = 0;
  std::vector<double> edges;
  bool extract_atoms = false;
  std::size_t atom_min_count = 2;

  static BinningSpec uniform(double width);
  static BinningSpec uniform(double width, double lo, double hi);
  static BinningSpec with_edges(std::vector<double> edges);
};

struct HistogramAtom {
  double value = 0;
  std::size_t count = 0;
  double mass = 0;  // count / n_total
};

struct Histogram {
  std::vector<double> edges;        // bins + 1
  std::vector<std::size_t> counts;  // atom and out-of-range samples excluded
  std::vector<double> density;      // counts[i] / (n_total * bin width)
  std::vector<HistogramAtom> atoms;
  std::size_t n_total = 0;   // all samples
  std::size_t n_binned = 0;  // samples contributing to counts
  std::size_t n_underflow = 0;
  std::size_t n_overflow = 0;

  std::size_t bins() const { return counts.size(); }
  double bin_center(std::size_t i) const { return (edges[i] + edges[i + 1]) / 2; }
  // integral of density plus atom masses plus out-of-range mass equals 1
  double integral() const;
  double atom_mass() const;
};

Histogram build_histogram(std::vector<double> samples, const BinningSpec& spec);

}  // namespace lobflow

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lobflow {

// Right-continuous empirical CDF: distinct sorted values with cumulative
// probabilities, the last exactly 1.
struct Ecdf {
  std::vector<double> values;
  std::vector<double> cum;
  std::size_t n = 0;

  static Ecdf from_samples(std::vector<double> samples);
  // value/weight pairs, weights > 0; equal values are merged
  static Ecdf from_weighted(std::vector<std::pair<double, double>> weighted);
};

// Sup-norm distance between two ECDFs, exact on atoms.
double ks_distance(const Ecdf& a, const Ecdf& b);

struct DistanceMatrix {
  std::vector<std::string> labels;
  std::size_t n = 0;
  std::vector<double> values;  // row-major n*n

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
};

DistanceMatrix distance_matrix(const std::vector<Ecdf>& ecdfs,
                               const std::vector<std::string>& labels, unsigned jobs = 1);

inline constexpr unsigned kDefaultRestarts = 32;

struct ClusterAssignment {
  std::vector<int> labels;  // per object, cluster index in 1..k
  int k = 0;
  double objective = 0;        // sum over clusters of W_C / (2|C|)
  double mean_silhouette = 0;  // filled by relational_kmeans / select_k
  std::uint64_t seed = 0;
  unsigned restarts = 0;
  // assignments where the relational point-to-centroid distance went negative
  std::size_t negative_distance_count = 0;
};

// Relational k-means on a dissimilarity matrix: assigns each object to the
// cluster minimizing D(x,C) = (1/|C|) sum_c d²(x,c) − (1/(2|C|²)) sum_{c,c'} d²(c,c'),
// best of `restarts` farthest-point initializations by the final objective.
ClusterAssignment relational_kmeans(const DistanceMatrix& matrix, int k, std::uint64_t seed,
                                    unsigned restarts = kDefaultRestarts, unsigned jobs = 1);

// Mean over objects of (b−a)/max(a,b); singleton clusters contribute 0.
double mean_silhouette(const DistanceMatrix& matrix, const std::vector<int>& labels);

// Runs relational_kmeans for each k in [k_min, k_max] and keeps the highest
// mean silhouette, ties toward smaller k.
ClusterAssignment select_k(const DistanceMatrix& matrix, int k_min, int k_max,
                           std::uint64_t seed, unsigned restarts = kDefaultRestarts,
                           unsigned jobs = 1);

// Chance-corrected partition agreement in [-1, 1]; 1 iff identical partitions.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace lobflow

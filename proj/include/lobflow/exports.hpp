#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lobflow/analysis.hpp"
#include "lobflow/clustering.hpp"
#include "lobflow/histogram.hpp"
#include "lobflow/synthgen.hpp"

namespace lobflow {

// Shortest representation that round-trips; used for every CSV number.
std::string format_double(double v);

std::string histogram_csv(const Histogram& h);  // bin_center,density
std::string atoms_csv(const Histogram& h);      // value,mass,count

// Binning used by the exported per-day histograms.
Histogram relative_price_histogram(const DayAnalysis& a);
Histogram prior_spread_histogram(const DayAnalysis& a);
Histogram deviation_histogram(const DayAnalysis& a);
Histogram relative_volume_histogram(const DayAnalysis& a);
Histogram return_histogram(const DayAnalysis& a);

std::string summary_json(const DayAnalysis& a);
std::string mo_jsonl(const std::vector<MarketOrder>& orders);

std::string matrix_csv(const DistanceMatrix& m);
DistanceMatrix reorder_by_cluster(const DistanceMatrix& m, const std::vector<int>& labels);
std::string assignment_json(const DistanceMatrix& m, const ClusterAssignment& a);
std::string silhouette_csv(const std::vector<std::pair<int, double>>& rows);

std::string ground_truth_json(const GeneratedDay& g);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace lobflow

#pragma once

// File formats
//   interaction matrix CSV : header "node,<id1>,...,<idn>", then one row per
//                            node "<id>,<v1>,...,<vn>"
//   structural edge CSV    : header "src,dst,weight", node ids as strings
//   labels CSV             : header "node,label"
//   truth CSV              : header "node,label,component"
//   heatmap CSV            : header "group,0,...,Q-1", NaN cells written as "NA"
//   occurrence CSV         : header "site,<taxon1>,...", 0/1 body
//   coordinates CSV        : header "site_id,lat,lon"
// Doubles are written with 17 significant digits so files round-trip exactly.

#include "spclust/emission.hpp"
#include "spclust/geo.hpp"
#include "spclust/graph.hpp"
#include "spclust/simulation.hpp"
#include "spclust/vem.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace spclust::io {

std::vector<std::string> split_csv_line(const std::string& line);
std::string format_double(double v);

InteractionNetwork read_interaction_csv(const std::filesystem::path& path);
void write_interaction_csv(const std::filesystem::path& path, const InteractionNetwork& Y);

/// Ids in the file must all appear in node_ids. Throws DataError otherwise.
StructuralNetwork read_structural_csv(const std::filesystem::path& path,
                                      const std::vector<std::string>& node_ids);
void write_structural_csv(const std::filesystem::path& path, const StructuralNetwork& X);

/// Node ids of a labels or truth CSV, in file order.
std::vector<std::string> read_label_ids(const std::filesystem::path& path);
/// Every node must appear exactly once. Q is 1 + the largest label unless
/// given. `column` picks the label column (truth files also carry
/// "component").
Partition read_labels_csv(const std::filesystem::path& path,
                          const std::vector<std::string>& node_ids, int Q = 0,
                          const std::string& column = "label");
void write_labels_csv(const std::filesystem::path& path, const std::vector<std::string>& node_ids,
                      const Partition& z);
void write_truth_csv(const std::filesystem::path& path, const std::vector<std::string>& node_ids,
                     const Partition& truth, const std::vector<int>& component);

void write_heatmap_csv(const std::filesystem::path& path, const Matrix& m);

OccurrenceTable read_occurrence_tables(const std::filesystem::path& occurrences,
                                       const std::filesystem::path& coords);

nlohmann::json to_json(const EmissionFamily& f);
EmissionFamily emission_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FitResult& fit, const std::vector<std::string>& node_ids,
                       bool include_tau = true);
/// Restores a FitResult written by to_json. Without "tau" in the document
/// tau is rebuilt from the labels.
FitResult fit_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimDesign& d);
SimDesign design_from_json(const nlohmann::json& j);

void write_text(const std::filesystem::path& path, const std::string& text);
nlohmann::json read_json(const std::filesystem::path& path);

} // namespace spclust::io

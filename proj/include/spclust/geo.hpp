#pragma once

// Hydrothermal-style inputs: Jaccard distances between taxon sets and a
// thresholded great-circle proximity network.

#include "spclust/graph.hpp"

#include <string>
#include <vector>

namespace spclust {

inline constexpr double kEarthRadiusKm = 6371.0;

struct LatLon {
    double lat;
    double lon;
};

struct Site {
    std::string id;
    LatLon pos;
};

struct OccurrenceTable {
    std::vector<Site> sites;
    std::vector<std::string> taxa;
    std::vector<std::vector<unsigned char>> presence;  // sites x taxa, 0/1

    /// Throws DataError on out-of-range coordinates or a ragged / non-binary
    /// presence matrix. Warns on sites with no taxa.
    void validate() const;
};

/// Y_ij = 1 - |A n B| / |A u B|. Two empty sites get distance 1 (warned).
InteractionNetwork jaccard_network(const OccurrenceTable& table);

/// Haversine distance on a sphere of radius 6371 km. Throws
/// std::invalid_argument on invalid coordinates.
double great_circle_km(LatLon a, LatLon b);

enum class WeightReference {
    RetainedMax,  // max over edges kept under the threshold
    GlobalMax,    // max over all pairs
};

/// Keeps pairs with d <= threshold_km, weighted max(d) - d. Throws DataError
/// listing the isolated nodes if any site ends without an edge.
StructuralNetwork build_structural(const std::vector<Site>& sites, double threshold_km,
                                   WeightReference ref = WeightReference::RetainedMax);

} // namespace spclust

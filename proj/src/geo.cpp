#include "spclust/geo.hpp"

#include "spclust/log.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spclust {

namespace {

bool valid(LatLon p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
           p.lon >= -180.0 && p.lon <= 180.0;
}

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

} // namespace

void OccurrenceTable::validate() const {
    if (presence.size() != sites.size())
        throw DataError("occurrence table: " + std::to_string(presence.size()) +
                        " presence rows for " + std::to_string(sites.size()) + " sites");
    for (std::size_t s = 0; s < sites.size(); ++s) {
        if (!valid(sites[s].pos))
            throw DataError("site '" + sites[s].id + "' has invalid coordinates");
        if (presence[s].size() != taxa.size())
            throw DataError("site '" + sites[s].id + "' has " + std::to_string(presence[s].size()) +
                            " presence values for " + std::to_string(taxa.size()) + " taxa");
        bool any = false;
        for (auto v : presence[s]) {
            if (v > 1)
                throw DataError("site '" + sites[s].id + "' has a non-binary presence value");
            any = any || v == 1;
        }
        if (!any)
            warn("site '" + sites[s].id + "' has no recorded taxa");
    }
}

InteractionNetwork jaccard_network(const OccurrenceTable& table) {
    table.validate();
    const std::size_t n = table.sites.size();
    if (n < 2)
        throw DataError("jaccard_network: need at least 2 sites");
    Matrix Y(n, n);
    std::size_t empty_pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            std::size_t inter = 0, uni = 0;
            for (std::size_t t = 0; t < table.taxa.size(); ++t) {
                const bool a = table.presence[i][t] != 0, b = table.presence[j][t] != 0;
                inter += a && b;
                uni += a || b;
            }
            double d = 1.0;
            if (uni == 0)
                ++empty_pairs;
            else
                d = 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
            Y(i, j) = Y(j, i) = d;
        }
    if (empty_pairs > 0)
        warn(std::to_string(empty_pairs) + " site pair(s) with no taxa at either site; distance set to 1");
    std::vector<std::string> ids;
    ids.reserve(n);
    for (const auto& s : table.sites)
        ids.push_back(s.id);
    return InteractionNetwork(std::move(ids), std::move(Y));
}

double great_circle_km(LatLon a, LatLon b) {
    if (!valid(a) || !valid(b))
        throw std::invalid_argument("great_circle_km: latitude must lie in [-90,90] and longitude in [-180,180]");
    const double phi1 = radians(a.lat), phi2 = radians(b.lat);
    const double dphi = phi2 - phi1, dlam = radians(b.lon - a.lon);
    const double s1 = std::sin(0.5 * dphi), s2 = std::sin(0.5 * dlam);
    const double h = std::min(1.0, s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2);
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

StructuralNetwork build_structural(const std::vector<Site>& sites, double threshold_km,
                                   WeightReference ref) {
    if (!(threshold_km > 0.0))
        throw std::invalid_argument("build_structural: threshold must be positive");
    const std::size_t n = sites.size();
    std::vector<Edge> kept;
    double retained_max = 0.0, global_max = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = great_circle_km(sites[i].pos, sites[j].pos);
            global_max = std::max(global_max, d);
            if (d <= threshold_km) {
                kept.push_back({i, j, d});
                retained_max = std::max(retained_max, d);
            }
        }
    std::vector<char> touched(n, 0);
    for (const auto& e : kept)
        touched[e.i] = touched[e.j] = 1;
    std::string isolated;
    for (std::size_t i = 0; i < n; ++i)
        if (!touched[i])
            isolated += (isolated.empty() ? "" : ", ") + sites[i].id;
    if (!isolated.empty())
        throw DataError("threshold " + std::to_string(threshold_km) +
                        " km leaves isolated node(s): " + isolated);

    const double ref_d = ref == WeightReference::RetainedMax ? retained_max : global_max;
    for (auto& e : kept)
        e.w = ref_d - e.w;
    std::vector<std::string> ids;
    ids.reserve(n);
    for (const auto& s : sites)
        ids.push_back(s.id);
    return StructuralNetwork(std::move(ids), std::move(kept));
}

} // namespace spclust

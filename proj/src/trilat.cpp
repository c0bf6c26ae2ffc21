#include "locus/trilat.hpp"

#include <cmath>

namespace locus {

Position trilaterate(const std::vector<Position>& anchors,
                     const std::vector<double>& distances_m) {
    if (anchors.size() < 3) {
        throw Error(ErrorCode::too_few_anchors,
                    "trilateration needs at least 3 anchors, got " + std::to_string(anchors.size()));
    }
    if (anchors.size() != distances_m.size()) {
        throw Error(ErrorCode::insufficient_matches,
                    "got " + std::to_string(distances_m.size()) + " distances for " +
                        std::to_string(anchors.size()) + " anchors");
    }
    for (const auto& p : anchors) validate_position(p);
    for (double d : distances_m) {
        if (!std::isfinite(d) || d <= 0.0) {
            throw Error(ErrorCode::non_positive_distance,
                        "range estimates must be finite and positive");
        }
    }

    // Subtracting the first circle equation from each of the others leaves a
    // linear system a_i*x + b_i*y = c_i, solved in least squares through the
    // 2x2 normal equations.
    const double x0 = anchors[0].x;
    const double y0 = anchors[0].y;
    const double d0 = distances_m[0];

    double saa = 0.0, sab = 0.0, sbb = 0.0, sac = 0.0, sbc = 0.0;
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        const double xi = anchors[i].x;
        const double yi = anchors[i].y;
        const double di = distances_m[i];
        const double a = 2.0 * (xi - x0);
        const double b = 2.0 * (yi - y0);
        const double c = d0 * d0 - di * di + xi * xi - x0 * x0 + yi * yi - y0 * y0;
        saa += a * a;
        sab += a * b;
        sbb += b * b;
        sac += a * c;
        sbc += b * c;
    }

    const double det = saa * sbb - sab * sab;
    const double scale = saa * sbb;
    if (scale == 0.0 || det <= 1e-10 * scale) {
        throw Error(ErrorCode::degenerate_geometry,
                    "anchors are collinear or coincident; position is not determined");
    }

    Position out;
    out.x = (sac * sbb - sbc * sab) / det;
    out.y = (saa * sbc - sab * sac) / det;
    return out;
}

Position locate_trilateration(const AnchorSet& anchors,
                              const ModelSet& models,
                              const RssiScan& scan) {
    if (anchors.empty()) {
        throw Error(ErrorCode::empty_anchor_set, "anchor set is empty");
    }
    std::vector<Position> positions;
    std::vector<double> distances;
    positions.reserve(scan.size());
    distances.reserve(scan.size());
    for (const auto& [id, rssi] : scan.entries()) {
        const Anchor& anchor = anchors.get(id);
        positions.push_back(anchor.position);
        distances.push_back(estimate_distance(models.lookup(id), rssi));
    }
    if (positions.size() < 3) {
        throw Error(ErrorCode::too_few_anchors,
                    "scan heard " + std::to_string(positions.size()) +
                        " anchors; trilateration needs at least 3");
    }
    return trilaterate(positions, distances);
}

} // namespace locus

#pragma once

#include <cstdint>
#include <vector>

#include "barylab/common.hpp"
#include "barylab/metric.hpp"
#include "barylab/transport.hpp"

namespace barylab {

enum class MapKind { VectorMean, TreeExact, HyperbolicKarcher };

// Barycenter assignment on a space, carrying its contraction constant
// Gamma (W_p -> point map) and inequality constant K at exponent p.
struct BarycentricMap {
  MetricSpace space;
  MapKind kind = MapKind::VectorMean;
  double p = 2;
  double K = 1;
  double Gamma = 1;
};

// Euclidean / tree / hyperbolic-disk spaces ship with p=2, K=1, Gamma=1.
BarycentricMap make_map(const MetricSpace& s);
// Coordinate mean on an l_p ball; K must come from calibration.
BarycentricMap make_lp_mean_map(const MetricSpace& s, double K, double p = 2);
// {"space": {...}, "K"?: , "p"?: } -- K/p consulted only for l_p spaces.
BarycentricMap map_from_json(const json& j);

Point barycenter(const BarycentricMap& map, const DiscreteMeasure& mu);
// Unnormalized nonnegative weights; total mass must be positive.
Point barycenter_points(const BarycentricMap& map,
                        const std::vector<Point>& pts,
                        const std::vector<double>& w);
// Barycenter of the sub-measure carried by `subset` (indices into pts).
Point conditional_barycenter(const BarycentricMap& map,
                             const std::vector<Point>& pts,
                             const std::vector<double>& w,
                             const std::vector<int>& subset);

struct BarycentricCheck {
  int samples = 0;
  double worst_p_residual = 0;   // violation of the K-inequality
  double worst_wp_ratio = 0;     // d(B mu, B nu) / W_p(mu, nu)
  double worst_delta_residual = 0;  // d(B delta_x, x)
};
BarycentricCheck check_barycentric(const BarycentricMap& map, int trials,
                                   std::uint64_t seed);

// Smallest K making the inequality hold on random instances (kInf when
// some instance admits no finite K).
double calibrate_K(const BarycentricMap& map, int trials, std::uint64_t seed);

}  // namespace barylab

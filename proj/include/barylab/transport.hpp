#pragma once

#include <vector>

#include "barylab/metric.hpp"

namespace barylab {

// Finitely supported probability measure on a metric space. Support points
// are distinct (canonical representation) and weights are strictly positive
// and sum to one.
struct DiscreteMeasure {
  std::vector<Point> support;
  std::vector<double> w;

  int size() const { return static_cast<int>(support.size()); }
};

// Validates and normalizes. Rejects duplicate support points, nonpositive
// weights, and weight sums off by more than 1e-12.
DiscreteMeasure make_measure(const MetricSpace& s, std::vector<Point> support,
                             std::vector<double> w);

// Same, but exact duplicates are merged (their weights added) and zero
// weights dropped first. Barycenter evaluation funnels measures through
// this.
DiscreteMeasure merge_duplicates(const MetricSpace& s,
                                 std::vector<Point> support,
                                 std::vector<double> w);

DiscreteMeasure measure_from_json(const MetricSpace& s, const json& j);
json measure_to_json(const MetricSpace& s, const DiscreteMeasure& m);

struct Coupling {
  std::vector<std::vector<double>> pi;  // |mu| x |nu|
  double cost = 0.0;                    // sum pi_ij d^p
};

struct WassersteinResult {
  double value = 0.0;  // W_p
  double p = 1.0;
  Coupling coupling;
  // optimality certificate: most negative reduced cost at termination
  // (>= -1e-12 * scale) from the dual potentials of the final basis
  double dual_violation = 0.0;
  int iterations = 0;
};

// Exact W_p by a network-simplex over the bipartite support graph. Costs
// d(x,y)^p are accumulated in extended precision. Marginals of the returned
// coupling match the inputs to 1e-12.
WassersteinResult wasserstein(const MetricSpace& s, const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu, double p);

}  // namespace barylab

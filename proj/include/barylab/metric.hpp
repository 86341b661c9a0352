#pragma once

#include <optional>
#include <string>
#include <vector>

#include "barylab/common.hpp"

namespace barylab {

enum class SpaceKind { Euclidean, Lp, Tree, HyperbolicDisk, Matrix };

std::string kind_name(SpaceKind k);

// A point in one of the supported spaces. The host space kind decides which
// members are meaningful:
//   Euclidean / Lp / HyperbolicDisk : coordinate vector `x`
//   Matrix                          : vertex id `id`
//   Tree                            : position on edge (u,v), offset t from u;
//                                     vertices are canonicalized to (v,v,0)
struct Point {
  std::vector<double> x;
  int id = -1;
  int u = -1, v = -1;
  double t = 0.0;

  static Point vec(std::vector<double> coords) {
    Point p;
    p.x = std::move(coords);
    return p;
  }
  static Point node(int i) {
    Point p;
    p.id = i;
    return p;
  }
  static Point on_edge(int u, int v, double t) {
    Point p;
    p.u = u;
    p.v = v;
    p.t = t;
    return p;
  }
  bool operator==(const Point& o) const {
    return x == o.x && id == o.id && u == o.u && v == o.v && t == o.t;
  }
};

struct TreeEdge {
  int u = 0, v = 0;
  double w = 1.0;
};

struct MetricSpace {
  SpaceKind kind = SpaceKind::Euclidean;
  int dim = 0;               // coordinate dimension (hyperbolic: 2)
  double lp_exponent = 2.0;  // Lp spaces
  double alpha = 1.0;        // snowflake exponent applied to the base distance
  // tree
  int n_vertices = 0;
  std::vector<TreeEdge> edges;
  // matrix
  std::vector<std::vector<double>> dmat;
  bool pseudometric = false;

  static MetricSpace euclidean(int dim);
  static MetricSpace lp(int dim, double p);
  static MetricSpace tree(const std::vector<TreeEdge>& edges);
  static MetricSpace hyperbolic_disk();
  static MetricSpace matrix(std::vector<std::vector<double>> d,
                            bool pseudometric = false);

  double dist(const Point& a, const Point& b) const;

  // Canonical representation (tree edge orientation, endpoint snapping).
  Point canonical(Point p) const;
  // Rejects points that do not belong to the space.
  void check_point(const Point& p) const;

  // Deterministic sampling; vector kinds land in the radius-1 ball.
  Point sample(Rng& rng) const;
  // Small random displacement used by search heuristics; returns a valid
  // point. `step` is roughly the displacement scale.
  Point perturb(const Point& p, double step, Rng& rng) const;

  // tree helpers
  double vertex_dist(int a, int b) const;
  const std::vector<TreeEdge>& tree_edges() const { return edges; }

  json point_to_json(const Point& p) const;
  Point point_from_json(const json& j) const;

  json to_json() const;
  static MetricSpace from_json(const json& j);

 private:
  std::vector<std::vector<double>> treedist_;
  double base_dist(const Point& a, const Point& b) const;
};

// d -> d^a for a in (0,1]; composes with any existing snowflake exponent.
MetricSpace snowflake(const MetricSpace& s, double a);

struct MetricValidation {
  int samples = 0;
  int violations = 0;
  double worst_excess = 0.0;      // max of d(a,c) - d(a,b) - d(b,c)
  std::vector<Point> worst_triple;
};

// Samples random triples and reports triangle-inequality violations beyond
// 1e-12 (scaled). Construction-time checks already reject malformed
// matrices; this exercises the continuous kinds.
MetricValidation validate_metric(const MetricSpace& s, int sample_size,
                                 std::uint64_t seed);

}  // namespace barylab

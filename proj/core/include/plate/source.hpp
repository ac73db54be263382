#pragma once

#include "plate/errors.hpp"
#include "plate/mesh.hpp"
#include "plate/polynomial.hpp"

#include <array>
#include <functional>
#include <vector>

namespace plate {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Eigen::Vector2d(const Point&)>;
using MatrixField = std::function<Eigen::Matrix2d(const Point&)>;

/// General H^-2 source
///   F(v) = (f0, v) + (f1, grad v) + (f2, D^2 v) + sum_lines (g_j, d^j v / d nu^j) + sum_points beta v(z).
/// f2 is the symmetric matrix [[f_20, f_11 / 2], [f_11 / 2, f_02]]. Empty callables mean zero.
struct SourceSpec {
  struct LineLoad {
    Point a, b;      // segment on the mesh skeleton
    int order = 0;   // 0: acts on values, 1: on the normal derivative
    ScalarField g;   // density; for order 1 relative to the normal (b - a) rotated clockwise
  };
  struct PointLoad {
    Point location;  // must coincide with an interior vertex
    double beta = 0.0;
  };

  ScalarField f0;
  VectorField f1;
  MatrixField f2;
  std::vector<LineLoad> lines;
  std::vector<PointLoad> points;

  [[nodiscard]] bool empty() const { return !f0 && !f1 && !f2 && lines.empty() && points.empty(); }
};

/// Line and point loads of a SourceSpec located on a concrete mesh.
struct ResolvedLoads {
  struct EdgeLoad {
    int edge;
    int order;
    ScalarField g;  // order 1 densities already oriented along the edge normal
  };
  struct VertexLoad {
    int vertex;
    double beta;
  };
  std::vector<EdgeLoad> edges;
  std::vector<VertexLoad> vertices;
};

/// Throws Error if a point load is not at an interior vertex or a line load is
/// not a union of interior edges.
[[nodiscard]] ResolvedLoads resolve_loads(const Mesh& mesh, const SourceSpec& source);

/// Polynomial degrees of the data approximation; -1 replaces the component by zero.
struct ApproximationDegrees {
  int f0 = 2, f1 = 2, f2 = 2, g0 = 2, g1 = 2;
};

/// Piecewise polynomial data (F_0, F_1, F_2, G_0, G_1). Volume pieces use the
/// triangle frame (centroid, diameter); edge pieces the parameter t from A to B.
/// G_1 is relative to the edge normal. Point loads are carried along unchanged.
struct SourceApproximation {
  std::vector<Polynomial> F0;
  std::vector<std::array<Polynomial, 2>> F1;
  std::vector<std::array<Polynomial, 3>> F2;  // entries xx, xy, yy
  std::vector<EdgePolynomial> G0, G1;         // zero off the load lines
  std::vector<char> on_gamma0, on_gamma1;
  std::vector<ResolvedLoads::VertexLoad> points;

  /// All-zero data on a mesh (degree-0 pieces).
  [[nodiscard]] static SourceApproximation zero(const Mesh& mesh);
  void scale(double s);
};

/// Elementwise L^2 projections of the data onto polynomials of the given degrees.
[[nodiscard]] SourceApproximation approximate_source(const Mesh& mesh, const SourceSpec& source,
                                                     const ApproximationDegrees& degrees = {});

/// L^2(T) projection of a scalar function onto P_k(T) in the triangle frame (degree-10 quadrature).
[[nodiscard]] Polynomial project_element(const Mesh& mesh, int t, const ScalarField& f, int k);
/// L^2(E) projection onto P_k(E) in the edge parameter.
[[nodiscard]] EdgePolynomial project_edge(const Mesh& mesh, int e, const ScalarField& g, int k);

/// Which data assumption is needed for the unsmoothed (Q = id) estimator.
enum class UnsmoothedFamily { NonconformingP2, C0InteriorPenalty };

/// Throws DataAssumptionError naming the first violated assumption.
void require_unsmoothed_assumptions(const SourceApproximation& data, UnsmoothedFamily family);

}  // namespace plate

#include "plate/source.hpp"

#include "plate/quadrature.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace plate {

const char* describe(DataAssumption a) noexcept {
  switch (a) {
    case DataAssumption::FirstOrderVanishes: return "first-order volume data F_alpha, |alpha| = 1, must vanish";
    case DataAssumption::SecondOrderConstant:
      return "second-order volume data F_alpha, |alpha| = 2, must be piecewise constant";
    case DataAssumption::SecondOrderVanishes: return "second-order volume data F_alpha, |alpha| = 2, must vanish";
    case DataAssumption::NormalLineLoadVanishes: return "the normal-derivative line load G_1 must vanish";
  }
  return "unknown assumption";
}

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

ResolvedLoads resolve_loads(const Mesh& mesh, const SourceSpec& source) {
  ResolvedLoads out;
  const double scale = mesh.max_diameter();
  for (const auto& p : source.points) {
    int found = -1;
    for (int v = 0; v < mesh.num_vertices(); ++v)
      if ((mesh.vertex(v) - p.location).norm() <= 1e-12 * std::max(1.0, scale)) {
        found = v;
        break;
      }
    if (found < 0)
      throw Error("point load at (" + std::to_string(p.location.x()) + ", " + std::to_string(p.location.y()) +
                  ") is not a mesh vertex");
    if (mesh.is_boundary_vertex(found)) throw Error("point load on a boundary vertex is not supported");
    out.vertices.push_back({found, p.beta});
  }
  for (const auto& line : source.lines) {
    if (line.order != 0 && line.order != 1) throw Error("line load order must be 0 or 1");
    const double L = (line.b - line.a).norm();
    if (!(L > 0.0)) throw Error("line load segment has zero length");
    const Point d = (line.b - line.a) / L;
    const Point ns(d.y(), -d.x());
    const double tol = 1e-10 * L;
    auto on_segment = [&](const Point& p) {
      const double s = (p - line.a).dot(d);
      return std::abs(cross(d, p - line.a)) <= tol && s >= -tol && s <= L + tol;
    };
    double covered = 0.0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const Edge& E = mesh.edge(e);
      if (!on_segment(mesh.vertex(E.vertices[0])) || !on_segment(mesh.vertex(E.vertices[1]))) continue;
      if (E.boundary()) throw Error("line loads must lie on interior edges");
      covered += E.length;
      ScalarField g = line.g ? line.g : ScalarField([](const Point&) { return 0.0; });
      if (line.order == 1 && ns.dot(E.normal) < 0.0) g = [g](const Point& x) { return -g(x); };
      out.edges.push_back({e, line.order, std::move(g)});
    }
    if (std::abs(covered - L) > 1e-9 * L) throw Error("line load segment is not a union of mesh edges");
  }
  return out;
}

Polynomial project_element(const Mesh& mesh, int t, const ScalarField& f, int k) {
  const Point c = mesh.centroid(t);
  const double h = mesh.diameter(t);
  Polynomial p(k, c, h);
  const int n = monomial_count(k);
  const QuadratureRule& q = quad_triangle(10);
  const Triangle& tri = mesh.triangle(t);
  const Point a = mesh.vertex(tri[0]), b = mesh.vertex(tri[1]), d = mesh.vertex(tri[2]);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Point x = a + (b - a) * q.points[i].x() + (d - a) * q.points[i].y();
    const double w = 2.0 * mesh.area(t) * q.weights[i];
    const Eigen::RowVectorXd m = MonomialTable(k, x, c, h).v;
    M.noalias() += w * m.transpose() * m;
    rhs += (w * f(x)) * m.transpose();
  }
  p.coefficients() = M.ldlt().solve(rhs);
  return p;
}

EdgePolynomial project_edge(const Mesh& mesh, int e, const ScalarField& g, int k) {
  const Edge& E = mesh.edge(e);
  const Point A = mesh.vertex(E.vertices[0]), B = mesh.vertex(E.vertices[1]);
  const QuadratureRule q = gauss_legendre(8);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(k + 1, k + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double t = q.points[i].x();
    Eigen::VectorXd m(k + 1);
    m[0] = 1.0;
    for (int j = 1; j <= k; ++j) m[j] = m[j - 1] * t;
    M.noalias() += q.weights[i] * m * m.transpose();
    rhs += (q.weights[i] * g(A + t * (B - A))) * m;
  }
  return EdgePolynomial(M.ldlt().solve(rhs));
}

SourceApproximation SourceApproximation::zero(const Mesh& mesh) {
  SourceApproximation s;
  const int nt = mesh.num_triangles();
  for (int t = 0; t < nt; ++t) {
    const Polynomial z(0, mesh.centroid(t), mesh.diameter(t));
    s.F0.push_back(z);
    s.F1.push_back({z, z});
    s.F2.push_back({z, z, z});
  }
  s.G0.assign(mesh.num_edges(), EdgePolynomial());
  s.G1.assign(mesh.num_edges(), EdgePolynomial());
  s.on_gamma0.assign(mesh.num_edges(), 0);
  s.on_gamma1.assign(mesh.num_edges(), 0);
  return s;
}

void SourceApproximation::scale(double s) {
  for (auto& p : F0) p *= s;
  for (auto& a : F1)
    for (auto& p : a) p *= s;
  for (auto& a : F2)
    for (auto& p : a) p *= s;
  for (auto& g : G0) g = EdgePolynomial(g.coefficients() * s);
  for (auto& g : G1) g = EdgePolynomial(g.coefficients() * s);
  for (auto& p : points) p.beta *= s;
}

SourceApproximation approximate_source(const Mesh& mesh, const SourceSpec& source, const ApproximationDegrees& deg) {
  SourceApproximation s = SourceApproximation::zero(mesh);
  const ResolvedLoads loads = resolve_loads(mesh, source);
  s.points = loads.vertices;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (source.f0 && deg.f0 >= 0) s.F0[t] = project_element(mesh, t, source.f0, deg.f0);
    if (source.f1 && deg.f1 >= 0)
      for (int i = 0; i < 2; ++i)
        s.F1[t][i] = project_element(mesh, t, [&](const Point& x) { return source.f1(x)[i]; }, deg.f1);
    if (source.f2 && deg.f2 >= 0) {
      const int idx[3][2] = {{0, 0}, {0, 1}, {1, 1}};
      for (int i = 0; i < 3; ++i)
        s.F2[t][i] = project_element(
            mesh, t, [&](const Point& x) { return source.f2(x)(idx[i][0], idx[i][1]); }, deg.f2);
    }
  }
  for (int order = 0; order < 2; ++order) {
    const int k = order == 0 ? deg.g0 : deg.g1;
    auto& G = order == 0 ? s.G0 : s.G1;
    auto& on = order == 0 ? s.on_gamma0 : s.on_gamma1;
    std::vector<std::vector<const ScalarField*>> per_edge(mesh.num_edges());
    for (const auto& l : loads.edges)
      if (l.order == order) per_edge[l.edge].push_back(&l.g);
    for (int e = 0; e < mesh.num_edges(); ++e) {
      if (per_edge[e].empty()) continue;
      on[e] = 1;
      if (k < 0) continue;
      const auto& list = per_edge[e];
      G[e] = project_edge(mesh, e, [&](const Point& x) {
        double sum = 0.0;
        for (const ScalarField* g : list) sum += (*g)(x);
        return sum;
      }, k);
    }
  }
  return s;
}

void require_unsmoothed_assumptions(const SourceApproximation& data, UnsmoothedFamily family) {
  double ref = 1.0;
  auto grow = [&ref](const Eigen::VectorXd& c) {
    if (c.size() > 0) ref = std::max(ref, c.cwiseAbs().maxCoeff());
  };
  for (const auto& p : data.F0) grow(p.coefficients());
  for (const auto& a : data.F1)
    for (const auto& p : a) grow(p.coefficients());
  for (const auto& a : data.F2)
    for (const auto& p : a) grow(p.coefficients());
  for (const auto& g : data.G0) grow(g.coefficients());
  for (const auto& g : data.G1) grow(g.coefficients());
  const double tol = 1e-13 * ref;

  if (family == UnsmoothedFamily::NonconformingP2) {
    for (const auto& a : data.F1)
      for (const auto& p : a)
        if (!p.is_zero(tol)) throw DataAssumptionError(DataAssumption::FirstOrderVanishes);
    for (const auto& a : data.F2)
      for (const auto& p : a)
        if (p.degree() > 0 && !p.coefficients().tail(p.coefficients().size() - 1).isZero(tol))
          throw DataAssumptionError(DataAssumption::SecondOrderConstant);
  } else {
    for (const auto& a : data.F2)
      for (const auto& p : a)
        if (!p.is_zero(tol)) throw DataAssumptionError(DataAssumption::SecondOrderVanishes);
    for (const auto& g : data.G1)
      if (!g.is_zero(tol)) throw DataAssumptionError(DataAssumption::NormalLineLoadVanishes);
  }
}

}  // namespace plate

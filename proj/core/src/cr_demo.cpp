#include "plate/cr_demo.hpp"

#include "plate/errors.hpp"
#include "plate/report.hpp"
#include "plate/spaces.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace plate {

namespace {

// grad lambda_i on a counterclockwise triangle.
std::array<Eigen::Vector2d, 3> barycentric_gradients(const Mesh& m, int t) {
  const Triangle& tri = m.triangle(t);
  const double two_area = 2.0 * m.area(t);
  std::array<Eigen::Vector2d, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Point d = m.vertex(tri[(i + 2) % 3]) - m.vertex(tri[(i + 1) % 3]);
    g[i] = Eigen::Vector2d(-d.y(), d.x()) / two_area;
  }
  return g;
}

}  // namespace

Eigen::Vector2d cr_gradient(const Mesh& m, const CrSolution& u, int t) {
  // psi_i = 1 - 2 lambda_i belongs to the edge opposite vertex i.
  const auto g = barycentric_gradients(m, t);
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int i = 0; i < 3; ++i) out += -2.0 * u.edge_value[m.triangle_edge(t, i)] * g[i];
  return out;
}

double cr_value(const Mesh& m, const CrSolution& u, int t, const Point& x) {
  const Eigen::Vector3d l = m.barycentric(t, x);
  double v = 0.0;
  for (int i = 0; i < 3; ++i) v += u.edge_value[m.triangle_edge(t, i)] * (1.0 - 2.0 * l[i]);
  return v;
}

CrSolution solve_cr_poisson(const Mesh& m, const ScalarField& f) {
  std::vector<int> dof(m.num_edges(), -1);
  int n = 0;
  for (int e = 0; e < m.num_edges(); ++e)
    if (!m.edge(e).boundary()) dof[e] = n++;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto g = barycentric_gradients(m, t);
    int d[3];
    for (int i = 0; i < 3; ++i) d[i] = dof[m.triangle_edge(t, i)];
    for (int i = 0; i < 3; ++i) {
      if (d[i] < 0) continue;
      for (int j = 0; j < 3; ++j)
        if (d[j] >= 0) trip.emplace_back(d[i], d[j], 4.0 * m.area(t) * g[i].dot(g[j]));
    }
    if (!f) continue;
    const ElementRule r = element_rule(m, t, 6);
    for (std::size_t q = 0; q < r.w.size(); ++q) {
      const Eigen::Vector3d l = m.barycentric(t, r.x[q]);
      const double fx = f(r.x[q]);
      for (int i = 0; i < 3; ++i)
        if (d[i] >= 0) b[d[i]] += r.w[q] * fx * (1.0 - 2.0 * l[i]);
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  CrSolution u;
  u.edge_value.assign(m.num_edges(), 0.0);
  if (n == 0) return u;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw NumericalError("CR stiffness factorization failed");
  const Eigen::VectorXd x = ldlt.solve(b);
  for (int e = 0; e < m.num_edges(); ++e)
    if (dof[e] >= 0) u.edge_value[e] = x[dof[e]];
  return u;
}

CrSolution interpolate_cr(const Mesh& m, const ScalarField& v) {
  CrSolution u;
  u.edge_value.resize(m.num_edges());
  for (int e = 0; e < m.num_edges(); ++e) {
    const EdgeRule r = edge_rule(m, e, 9);
    double s = 0.0;
    for (std::size_t q = 0; q < r.w.size(); ++q) s += r.w[q] * v(r.x[q]);
    u.edge_value[e] = s / m.edge(e).length;
  }
  return u;
}

double cr_interpolation_ratio(const Mesh& m, const GradField& v) {
  const CrSolution iv = interpolate_cr(m, v.value);
  double num = 0.0, den = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const double h = m.diameter(t);
    const ElementRule r = element_rule(m, t, 10);
    for (std::size_t q = 0; q < r.w.size(); ++q) {
      const double d = v.value(r.x[q]) - cr_value(m, iv, t, r.x[q]);
      num += r.w[q] * d * d / (h * h);
      den += r.w[q] * v.grad(r.x[q]).squaredNorm();
    }
  }
  return std::sqrt(num / den);
}

CrStudy cr_poisson_demo(int levels, bool zero_source) {
  const ScalarField f = zero_source ? ScalarField([](const Point&) { return 0.0; })
                                    : ScalarField([](const Point& p) {
                                        return 2.0 * (p.x() * (1 - p.x()) + p.y() * (1 - p.y()));
                                      });
  auto grad_u = [zero_source](const Point& p) -> Eigen::Vector2d {
    if (zero_source) return Eigen::Vector2d::Zero();
    const double x = p.x(), y = p.y();
    return {(1 - 2 * x) * y * (1 - y), (1 - 2 * y) * x * (1 - x)};
  };
  CrStudy study;
  Mesh m = refine_uniform(unit_square_mesh(2), 1);
  std::vector<double> hs, errs;
  for (int level = 0; level < levels; ++level) {
    if (level > 0) m = refine_uniform(m);
    const CrSolution u = solve_cr_poisson(m, f);
    CrLevel rec;
    rec.level = level;
    rec.ndof = m.num_interior_edges();
    rec.hmax = m.max_diameter();
    std::vector<double> hf2(m.num_triangles(), 0.0);
    double err2 = 0.0;
    for (int t = 0; t < m.num_triangles(); ++t) {
      const ElementRule r = element_rule(m, t, 8);
      const Eigen::Vector2d g = cr_gradient(m, u, t);
      const double h = m.diameter(t);
      for (std::size_t q = 0; q < r.w.size(); ++q) {
        err2 += r.w[q] * (grad_u(r.x[q]) - g).squaredNorm();
        const double fx = f(r.x[q]);
        hf2[t] += r.w[q] * h * h * fx * fx;
      }
    }
    double jump2 = 0.0;
    for (int e = 0; e < m.num_edges(); ++e) {
      const Edge& E = m.edge(e);
      if (E.boundary()) continue;
      const double j = (cr_gradient(m, u, E.t_plus) - cr_gradient(m, u, E.t_minus)).dot(E.normal);
      const double eta2 = E.length * E.length * j * j;  // h_E ||[grad u . nu]||^2_E
      jump2 += eta2;
      const double patch = std::sqrt(hf2[E.t_plus] + hf2[E.t_minus]);
      if (patch > 0.0) rec.jump_constant = std::max(rec.jump_constant, std::sqrt(eta2) / patch);
    }
    double hf = 0.0;
    for (double v : hf2) hf += v;
    rec.error = std::sqrt(err2);
    rec.hf = std::sqrt(hf);
    rec.jump = std::sqrt(jump2);
    study.levels.push_back(rec);
    hs.push_back(rec.hmax);
    errs.push_back(rec.error);
  }
  if (!zero_source && levels >= 2) study.slope = loglog_slope(hs, errs);
  return study;
}

}  // namespace plate

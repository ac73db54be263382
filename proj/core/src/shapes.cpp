#include "plate/shapes.hpp"

#include "plate/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace plate {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

ShapeSet::ShapeSet(ElementKind kind, const std::array<Point, 3>& vertices)
    : kind_(kind), x_(vertices) {
  scale_ = std::max({(x_[1] - x_[0]).norm(), (x_[2] - x_[1]).norm(), (x_[0] - x_[2]).norm()});
  const double area = 0.5 * cross(x_[1] - x_[0], x_[2] - x_[0]);
  if (!(std::abs(area) > 1e-13 * scale_ * scale_))
    throw MeshError("shape functions requested on a degenerate triangle");
  switch (kind_) {
    case ElementKind::P2Lagrange: build_p2(false); break;
    case ElementKind::Morley: build_p2(true); break;
    case ElementKind::HCT: build_hct(); break;
  }
}

Point ShapeSet::outer_normal(int i) const {
  const Point t = (x_[(i + 2) % 3] - x_[(i + 1) % 3]).normalized();
  // Counterclockwise input has the outside on the right of t.
  const double orient = cross(x_[1] - x_[0], x_[2] - x_[0]) > 0 ? 1.0 : -1.0;
  return orient * Point(t.y(), -t.x());
}

void ShapeSet::build_p2(bool morley) {
  const int nm = monomial_count(2);
  const Point c = centroid();
  Eigen::MatrixXd D(6, nm);
  dofs_.clear();
  for (int i = 0; i < 3; ++i) {
    dofs_.push_back({DofKind::VertexValue, i});
    D.row(i) = MonomialTable(2, x_[i], c, scale_).v;
  }
  for (int i = 0; i < 3; ++i) {
    const Point mid = 0.5 * (x_[(i + 1) % 3] + x_[(i + 2) % 3]);
    const MonomialTable m(2, mid, c, scale_);
    if (morley) {
      // Gradients of quadratics are affine: the midpoint value is the edge mean.
      dofs_.push_back({DofKind::EdgeNormalMean, i});
      const Point n = outer_normal(i);
      D.row(3 + i) = n.x() * m.dx + n.y() * m.dy;
    } else {
      dofs_.push_back({DofKind::EdgeMidpointValue, i});
      D.row(3 + i) = m.v;
    }
  }
  coef_ = D.fullPivLu().inverse();
}

void ShapeSet::build_hct() {
  const int nm = monomial_count(3);
  const int ncols = 3 * nm;
  const Point c = centroid();

  // C1 constraints across the three interior segments v_k -> centroid, shared by
  // pieces i and j with k = 3 - i - j: a cubic difference vanishing at 4 points
  // and a quadratic normal-derivative difference vanishing at 3 points.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(21, ncols);
  int row = 0;
  const int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (const auto& pr : pairs) {
    const int i = pr[0];
    const int j = pr[1];
    const int k = 3 - i - j;
    const Point d = c - x_[k];
    const Point n = Point(d.y(), -d.x()).normalized();
    for (double t : {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}) {
      const MonomialTable m(3, x_[k] + t * d, c, scale_);
      C.block(row, i * nm, 1, nm) = m.v;
      C.block(row, j * nm, 1, nm) = -m.v;
      ++row;
    }
    for (double t : {0.0, 0.5, 1.0}) {
      const MonomialTable m(3, x_[k] + t * d, c, scale_);
      const Eigen::RowVectorXd dn = n.x() * m.dx + n.y() * m.dy;
      C.block(row, i * nm, 1, nm) = dn;
      C.block(row, j * nm, 1, nm) = -dn;
      ++row;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv[17] <= 1e-8 * sv[0] || sv[18] > 1e-9 * sv[0])
    throw NumericalError("HCT constraint system does not have the expected rank 18");
  const Eigen::MatrixXd N = svd.matrixV().rightCols(12);

  dofs_.clear();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(12, ncols);
  for (int i = 0; i < 3; ++i) {
    const int p = (i + 1) % 3;
    const MonomialTable m(3, x_[i], c, scale_);
    dofs_.push_back({DofKind::VertexValue, i});
    D.block(i, p * nm, 1, nm) = m.v;
  }
  for (int i = 0; i < 3; ++i) {
    const int p = (i + 1) % 3;
    const MonomialTable m(3, x_[i], c, scale_);
    dofs_.push_back({DofKind::VertexGradientX, i});
    dofs_.push_back({DofKind::VertexGradientY, i});
    D.block(3 + 2 * i, p * nm, 1, nm) = m.dx;
    D.block(4 + 2 * i, p * nm, 1, nm) = m.dy;
  }
  for (int i = 0; i < 3; ++i) {
    const Point mid = 0.5 * (x_[(i + 1) % 3] + x_[(i + 2) % 3]);
    const Point n = outer_normal(i);
    const MonomialTable m(3, mid, c, scale_);
    dofs_.push_back({DofKind::EdgeMidpointNormal, i});
    D.block(9 + i, i * nm, 1, nm) = n.x() * m.dx + n.y() * m.dy;
  }
  const Eigen::MatrixXd M = D * N;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) throw NumericalError("HCT dof system is singular");
  coef_ = N * lu.inverse();
}

int ShapeSet::piece_of(const Point& x) const {
  if (kind_ != ElementKind::HCT) return 0;
  const double inv = 1.0 / cross(x_[1] - x_[0], x_[2] - x_[0]);
  const double l0 = cross(x_[1] - x, x_[2] - x) * inv;
  const double l1 = cross(x_[2] - x, x_[0] - x) * inv;
  const double l2 = 1.0 - l0 - l1;
  if (l0 <= l1 && l0 <= l2) return 0;
  return l1 <= l2 ? 1 : 2;
}

std::array<Point, 3> ShapeSet::piece_vertices(int p) const {
  if (kind_ != ElementKind::HCT) return x_;
  return {x_[(p + 1) % 3], x_[(p + 2) % 3], centroid()};
}

Jet ShapeSet::eval_piece(int shape, int piece, const Point& x) const {
  const int nm = monomials();
  const MonomialTable m(degree(), x, centroid(), scale_);
  const auto c = coef_.col(shape).segment(piece * nm, nm);
  Jet j;
  j.value = m.v.dot(c);
  j.grad = {m.dx.dot(c), m.dy.dot(c)};
  const double xy = m.dxy.dot(c);
  j.hess << m.dxx.dot(c), xy, xy, m.dyy.dot(c);
  return j;
}

Jet ShapeSet::eval(int shape, const Point& x) const { return eval_piece(shape, piece_of(x), x); }

Jet ShapeSet::eval_combination(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const Point& x,
                               int piece) const {
  if (piece < 0) piece = piece_of(x);
  const int nm = monomials();
  const Eigen::VectorXd c = coef_.middleRows(piece * nm, nm) * coeffs;
  const MonomialTable m(degree(), x, centroid(), scale_);
  Jet j;
  j.value = m.v.dot(c);
  j.grad = {m.dx.dot(c), m.dy.dot(c)};
  const double xy = m.dxy.dot(c);
  j.hess << m.dxx.dot(c), xy, xy, m.dyy.dot(c);
  return j;
}

void ShapeSet::eval_all(const Point& x, std::vector<Jet>& out, int piece) const {
  if (piece < 0) piece = piece_of(x);
  const int nm = monomials();
  const auto block = coef_.middleRows(piece * nm, nm);
  const MonomialTable m(degree(), x, centroid(), scale_);
  const Eigen::RowVectorXd v = m.v * block, dx = m.dx * block, dy = m.dy * block;
  const Eigen::RowVectorXd dxx = m.dxx * block, dxy = m.dxy * block, dyy = m.dyy * block;
  out.resize(size());
  for (int j = 0; j < size(); ++j) {
    out[j].value = v[j];
    out[j].grad = {dx[j], dy[j]};
    out[j].hess << dxx[j], dxy[j], dxy[j], dyy[j];
  }
}

ShapeSet shapes(ElementKind kind, const std::array<Point, 3>& vertices) {
  return ShapeSet(kind, vertices);
}

}  // namespace plate

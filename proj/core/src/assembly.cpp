#include "plate/assembly.hpp"

#include "plate/errors.hpp"
#include "plate/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace plate {

const char* to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::Morley: return "morley";
    case Scheme::DG1: return "dg1";
    case Scheme::DG2: return "dg2";
    case Scheme::C0IP: return "c0ip";
    case Scheme::WOPSIP: return "wopsip";
  }
  return "?";
}

const char* to_string(Smoother q) noexcept { return q == Smoother::Identity ? "identity" : "companion"; }

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

Scheme parse_scheme(const std::string& name) {
  const std::string n = lower(name);
  for (Scheme s : {Scheme::Morley, Scheme::DG1, Scheme::DG2, Scheme::C0IP, Scheme::WOPSIP})
    if (n == to_string(s)) return s;
  throw ConfigError("unknown scheme '" + name + "' (expected morley, dg1, dg2, c0ip or wopsip)");
}

Smoother parse_smoother(const std::string& name) {
  const std::string n = lower(name);
  if (n == "identity" || n == "id" || n == "none") return Smoother::Identity;
  if (n == "companion" || n == "jh" || n == "j_h") return Smoother::Companion;
  throw ConfigError("unknown smoother '" + name + "' (expected identity or companion)");
}

SpaceKind space_of(Scheme s) noexcept {
  switch (s) {
    case Scheme::Morley: return SpaceKind::Morley;
    case Scheme::C0IP: return SpaceKind::C0IP;
    default: return SpaceKind::DGP2;
  }
}

void SchemeConfig::validate() const {
  if (scheme == Scheme::DG1 || scheme == Scheme::DG2 || scheme == Scheme::C0IP) {
    if (!(theta >= -1.0 && theta <= 1.0)) throw ConfigError("theta must lie in [-1, 1]");
  }
  if (scheme == Scheme::DG1 || scheme == Scheme::DG2) {
    if (!(sigma1 > 0.0)) throw ConfigError("sigma1 must be positive");
    if (!(sigma2 > 0.0)) throw ConfigError("sigma2 must be positive");
  }
  if (scheme == Scheme::C0IP && !(sigma_ip > 0.0)) throw ConfigError("sigma_ip must be positive");
}

bool SchemeConfig::symmetric() const noexcept {
  return scheme == Scheme::Morley || scheme == Scheme::WOPSIP || theta == 1.0;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Triplet lists per chunk, concatenated in chunk order.
template <class Body>
SparseMatrix parallel_assemble(int rows, int cols, std::size_t n, const Body& body) {
  std::vector<Triplets> parts(static_cast<std::size_t>(chunk_count(n)));
  parallel_chunks(n, [&](int c, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) body(static_cast<int>(i), parts[c]);
  });
  Triplets all;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  all.reserve(total);
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  SparseMatrix a(rows, cols);
  a.setFromTriplets(all.begin(), all.end());
  return a;
}

void scatter(const Eigen::MatrixXd& local, const std::vector<int>& row_dof, const std::vector<double>& row_sign,
             const std::vector<int>& col_dof, const std::vector<double>& col_sign, Triplets& out) {
  for (std::size_t a = 0; a < row_dof.size(); ++a) {
    if (row_dof[a] < 0) continue;
    for (std::size_t b = 0; b < col_dof.size(); ++b) {
      if (col_dof[b] < 0) continue;
      const double v = row_sign[a] * col_sign[b] * local(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (v != 0.0) out.emplace_back(row_dof[a], col_dof[b], v);
    }
  }
}

bool is_macro(const DofMap& d) { return d.kind() == SpaceKind::HCT; }

int element_degree(const DofMap& d) { return is_macro(d) ? 2 : 1; }

// Basis traces of the one or two triangles adjacent to an edge.
struct EdgeBasis {
  std::vector<int> dof;
  std::vector<double> sign;
  std::vector<int> side_begin;  // offset of each side
  std::vector<int> tri;
  std::vector<int> piece;
  std::vector<double> jump_sign;  // +1 on T+, -1 on T-
  double avg = 1.0;               // 1/2 on interior edges, 1 on boundary edges
};

EdgeBasis edge_basis(const DofMap& d, int e) {
  const Mesh& m = d.mesh();
  const Edge& E = m.edge(e);
  EdgeBasis b;
  b.avg = E.boundary() ? 1.0 : 0.5;
  const int sides = E.boundary() ? 1 : 2;
  for (int s = 0; s < sides; ++s) {
    const int t = s == 0 ? E.t_plus : E.t_minus;
    b.side_begin.push_back(static_cast<int>(b.dof.size()));
    b.tri.push_back(t);
    b.piece.push_back(is_macro(d) ? m.local_edge_index(t, e) : 0);
    b.jump_sign.push_back(s == 0 ? 1.0 : -1.0);
    const auto g = d.local_to_global(t);
    const auto sg = d.local_sign(t);
    b.dof.insert(b.dof.end(), g.begin(), g.end());
    b.sign.insert(b.sign.end(), sg.begin(), sg.end());
  }
  return b;
}

// Jumps and averages of every local basis function at one point of an edge.
struct EdgePoint {
  Eigen::VectorXd value_jump, normal_jump, value_avg, normal_avg, lap_avg;
  Eigen::MatrixXd grad_jump;  // 2 x n
  Eigen::MatrixXd hess_nu;    // 2 x n, <D^2 phi> nu
};

EdgePoint edge_point(const DofMap& d, const EdgeBasis& b, const Point& x, const Point& nu, std::vector<Jet>& jets) {
  const int n = static_cast<int>(b.dof.size());
  EdgePoint p;
  p.value_jump.resize(n);
  p.normal_jump.resize(n);
  p.value_avg.resize(n);
  p.normal_avg.resize(n);
  p.lap_avg.resize(n);
  p.grad_jump.resize(2, n);
  p.hess_nu.resize(2, n);
  for (std::size_t s = 0; s < b.tri.size(); ++s) {
    d.shape_set(b.tri[s]).eval_all(x, jets, b.piece[s]);
    const int off = b.side_begin[s];
    for (std::size_t j = 0; j < jets.size(); ++j) {
      const int a = off + static_cast<int>(j);
      const Jet& J = jets[j];
      p.value_jump[a] = b.jump_sign[s] * J.value;
      p.grad_jump.col(a) = b.jump_sign[s] * J.grad;
      p.normal_jump[a] = b.jump_sign[s] * J.grad.dot(nu);
      p.value_avg[a] = b.avg * J.value;
      p.normal_avg[a] = b.avg * J.grad.dot(nu);
      p.lap_avg[a] = b.avg * J.hess.trace();
      p.hess_nu.col(a) = b.avg * (J.hess * nu);
    }
  }
  return p;
}

void element_block(const DofMap& d, int t, bool laplacian, Triplets& out) {
  const ElementRule rule = element_rule(d.mesh(), t, element_degree(d), is_macro(d));
  const int n = d.local_size();
  Eigen::MatrixXd H(laplacian ? 1 : 4, n);
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
  std::vector<Jet> jets;
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    d.shape_set(t).eval_all(rule.x[k], jets);
    for (int j = 0; j < n; ++j) {
      const Eigen::Matrix2d& h = jets[j].hess;
      if (laplacian)
        H(0, j) = h.trace();
      else
        H.col(j) << h(0, 0), h(0, 1), h(1, 0), h(1, 1);
    }
    local.noalias() += rule.w[k] * H.transpose() * H;
  }
  const auto g = d.local_to_global(t);
  const auto s = d.local_sign(t);
  const std::vector<int> dof(g.begin(), g.end());
  const std::vector<double> sign(s.begin(), s.end());
  scatter(local, dof, sign, dof, sign, out);
}

void interior_penalty_block(const DofMap& d, int e, const SchemeConfig& cfg, Triplets& out) {
  const Mesh& m = d.mesh();
  const Edge& E = m.edge(e);
  const EdgeBasis b = edge_basis(d, e);
  const int n = static_cast<int>(b.dof.size());
  const EdgeRule rule = edge_rule(m, e, 4);
  const double h = E.length;
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
  std::vector<Jet> jets;
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    const EdgePoint p = edge_point(d, b, rule.x[k], E.normal, jets);
    const double w = rule.w[k];
    // J(phi_b, phi_a) in column b, row a.
    Eigen::MatrixXd J;
    if (cfg.scheme == Scheme::DG2)
      J = p.lap_avg * p.normal_jump.transpose();
    else
      J = p.hess_nu.transpose() * p.grad_jump;
    local.noalias() += w * (-cfg.theta * J - J.transpose());
    if (cfg.scheme == Scheme::C0IP) {
      local.noalias() += (w * cfg.sigma_ip / h) * p.normal_jump * p.normal_jump.transpose();
    } else {
      local.noalias() += (w * cfg.sigma1 / (h * h * h)) * p.value_jump * p.value_jump.transpose();
      local.noalias() += (w * cfg.sigma2 / h) * p.normal_jump * p.normal_jump.transpose();
    }
  }
  scatter(local, b.dof, b.sign, b.dof, b.sign, out);
}

void jump_gram_block(const DofMap& d, int e, double h_power, Triplets& out) {
  const Mesh& m = d.mesh();
  const Edge& E = m.edge(e);
  const EdgeBasis b = edge_basis(d, e);
  const int n = static_cast<int>(b.dof.size());
  const double h = E.length;
  std::vector<Jet> jets;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
  const EdgeRule rule = edge_rule(m, e, 4);
  for (std::size_t k = 0; k < rule.x.size(); ++k)
    mean += (rule.w[k] / h) * edge_point(d, b, rule.x[k], E.normal, jets).normal_jump;
  Eigen::MatrixXd local = mean * mean.transpose();
  for (int v : E.vertices) {
    const Eigen::VectorXd jv = edge_point(d, b, m.vertex(v), E.normal, jets).value_jump;
    local.noalias() += (1.0 / (h * h)) * jv * jv.transpose();
  }
  local *= std::pow(h, h_power);
  scatter(local, b.dof, b.sign, b.dof, b.sign, out);
}

}  // namespace

SparseMatrix stiffness_pw(const DofMap& d) {
  return parallel_assemble(d.size(), d.size(), static_cast<std::size_t>(d.mesh().num_triangles()),
                           [&](int t, Triplets& out) { element_block(d, t, false, out); });
}

SparseMatrix mixed_stiffness_pw(const DofMap& test, const DofMap& trial) {
  if (&test.mesh() != &trial.mesh()) throw Error("mixed_stiffness_pw: dof maps live on different meshes");
  const bool split = is_macro(test) || is_macro(trial);
  return parallel_assemble(
      test.size(), trial.size(), static_cast<std::size_t>(test.mesh().num_triangles()), [&](int t, Triplets& out) {
        const ElementRule rule = element_rule(test.mesh(), t, split ? 2 : 1, split);
        const int n = test.local_size(), k = trial.local_size();
        Eigen::MatrixXd A(4, n), B(4, k);
        Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, k);
        std::vector<Jet> ja, jb;
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
          test.shape_set(t).eval_all(rule.x[q], ja);
          trial.shape_set(t).eval_all(rule.x[q], jb);
          for (int j = 0; j < n; ++j) A.col(j) = Eigen::Map<const Eigen::Vector4d>(ja[j].hess.data());
          for (int j = 0; j < k; ++j) B.col(j) = Eigen::Map<const Eigen::Vector4d>(jb[j].hess.data());
          local.noalias() += rule.w[q] * A.transpose() * B;
        }
        const auto ga = test.local_to_global(t);
        const auto sa = test.local_sign(t);
        const auto gb = trial.local_to_global(t);
        const auto sb = trial.local_sign(t);
        scatter(local, {ga.begin(), ga.end()}, {sa.begin(), sa.end()}, {gb.begin(), gb.end()}, {sb.begin(), sb.end()},
                out);
      });
}

SparseMatrix jump_gram(const DofMap& d, double h_power) {
  return parallel_assemble(d.size(), d.size(), static_cast<std::size_t>(d.mesh().num_edges()),
                           [&](int e, Triplets& out) { jump_gram_block(d, e, h_power, out); });
}

SparseMatrix norm_h_gram(const DofMap& d) {
  SparseMatrix g = stiffness_pw(d);
  if (d.kind() != SpaceKind::HCT) g += jump_gram(d, 0.0);
  return g;
}

SparseMatrix assemble_matrix(const DofMap& d, const SchemeConfig& cfg) {
  cfg.validate();
  if (d.kind() != space_of(cfg.scheme))
    throw Error(std::string("scheme ") + to_string(cfg.scheme) + " needs a " + to_string(space_of(cfg.scheme)) +
                " dof map");
  const bool lap = cfg.scheme == Scheme::DG2;
  SparseMatrix a = parallel_assemble(d.size(), d.size(), static_cast<std::size_t>(d.mesh().num_triangles()),
                                     [&](int t, Triplets& out) { element_block(d, t, lap, out); });
  switch (cfg.scheme) {
    case Scheme::Morley: break;
    case Scheme::WOPSIP: a += jump_gram(d, -2.0); break;
    default:
      a += parallel_assemble(d.size(), d.size(), static_cast<std::size_t>(d.mesh().num_edges()),
                             [&](int e, Triplets& out) { interior_penalty_block(d, e, cfg, out); });
  }
  a.prune(0.0);
  return a;
}

Eigen::VectorXd load_vector(const DofMap& d, const SourceSpec& source) {
  const Mesh& m = d.mesh();
  const ResolvedLoads loads = resolve_loads(m, source);
  const int nt = m.num_triangles();
  const int n = d.local_size();
  std::vector<Eigen::VectorXd> parts(static_cast<std::size_t>(chunk_count(static_cast<std::size_t>(nt))),
                                     Eigen::VectorXd::Zero(d.size()));
  if (source.f0 || source.f1 || source.f2) {
    parallel_chunks(static_cast<std::size_t>(nt), [&](int c, std::size_t b, std::size_t e) {
      std::vector<Jet> jets;
      Eigen::VectorXd local(n);
      for (std::size_t ti = b; ti < e; ++ti) {
        const int t = static_cast<int>(ti);
        const ElementRule rule = element_rule(m, t, 10, is_macro(d));
        local.setZero();
        for (std::size_t k = 0; k < rule.x.size(); ++k) {
          const Point& x = rule.x[k];
          d.shape_set(t).eval_all(x, jets);
          const double f0 = source.f0 ? source.f0(x) : 0.0;
          const Eigen::Vector2d f1 = source.f1 ? source.f1(x) : Eigen::Vector2d::Zero();
          const Eigen::Matrix2d f2 = source.f2 ? source.f2(x) : Eigen::Matrix2d::Zero();
          for (int j = 0; j < n; ++j)
            local[j] += rule.w[k] * (f0 * jets[j].value + f1.dot(jets[j].grad) + (f2.cwiseProduct(jets[j].hess)).sum());
        }
        const auto g = d.local_to_global(t);
        const auto s = d.local_sign(t);
        for (int j = 0; j < n; ++j)
          if (g[j] >= 0) parts[c][g[j]] += s[j] * local[j];
      }
    });
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d.size());
  for (const auto& p : parts) b += p;

  std::vector<Jet> jets;
  for (const auto& load : loads.edges) {
    const Edge& E = m.edge(load.edge);
    const EdgeBasis basis = edge_basis(d, load.edge);
    const EdgeRule rule = edge_rule(m, load.edge, 9);
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      const EdgePoint p = edge_point(d, basis, rule.x[k], E.normal, jets);
      const double gk = rule.w[k] * load.g(rule.x[k]);
      const Eigen::VectorXd& avg = load.order == 0 ? p.value_avg : p.normal_avg;
      for (std::size_t a = 0; a < basis.dof.size(); ++a)
        if (basis.dof[a] >= 0) b[basis.dof[a]] += basis.sign[a] * gk * avg[static_cast<Eigen::Index>(a)];
    }
  }
  for (const auto& load : loads.vertices) {
    const auto patch = m.vertex_patch(load.vertex);
    const double share = load.beta / static_cast<double>(patch.size());
    const Point& z = m.vertex(load.vertex);
    for (int t : patch) {
      d.shape_set(t).eval_all(z, jets);
      const auto g = d.local_to_global(t);
      const auto s = d.local_sign(t);
      for (int j = 0; j < n; ++j)
        if (g[j] >= 0) b[g[j]] += share * s[j] * jets[j].value;
    }
  }
  return b;
}

Eigen::VectorXd assemble_rhs(const DofMap& d, const SchemeConfig& cfg, const SourceSpec& source) {
  if (cfg.smoother == Smoother::Identity) return load_vector(d, source);
  const DofMap hct(d.mesh_ptr(), SpaceKind::HCT);
  const SparseMatrix S = smoother_matrix(d, hct);
  return S.transpose() * load_vector(hct, source);
}

LinearSystem assemble(const DofMap& d, const SchemeConfig& cfg, const SourceSpec& source) {
  LinearSystem sys;
  sys.matrix = assemble_matrix(d, cfg);
  sys.rhs = assemble_rhs(d, cfg, source);
  sys.symmetric = cfg.symmetric();
  return sys;
}

double penalty_energy(const DiscreteField& v, const SchemeConfig& cfg) {
  const Mesh& m = v.mesh();
  switch (cfg.scheme) {
    case Scheme::Morley: return 0.0;
    case Scheme::WOPSIP: {
      const std::vector<double> terms = jh_edge_terms(m, v);
      double sum = 0.0;
      for (int e = 0; e < m.num_edges(); ++e) sum += terms[e] / (m.edge(e).length * m.edge(e).length);
      return sum;
    }
    default: break;
  }
  double sum = 0.0;
  for (int e = 0; e < m.num_edges(); ++e) {
    const EdgeSamples s = edge_jumps(m, v, e, 4);
    const double h = m.edge(e).length;
    for (std::size_t k = 0; k < s.rule.x.size(); ++k) {
      const double nj = s.normal_jump[k] * s.normal_jump[k];
      if (cfg.scheme == Scheme::C0IP)
        sum += s.rule.w[k] * cfg.sigma_ip / h * nj;
      else
        sum += s.rule.w[k] * (cfg.sigma1 / (h * h * h) * s.value_jump[k] * s.value_jump[k] + cfg.sigma2 / h * nj);
    }
  }
  return sum;
}

}  // namespace plate

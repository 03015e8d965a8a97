#include "oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

std::vector<std::pair<double, double>> gauss_legendre_01(int npts) {
  // Roots of P_n on [-1,1] by Newton from the Chebyshev initial guess.
  std::vector<std::pair<double, double>> out(npts);
  for (int i = 0; i < npts; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= npts; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = npts * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= npts; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = npts * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out[i] = {0.5 * (x + 1.0), 0.5 * w};
  }
  return out;
}

std::vector<QPoint> triangle_points(const std::array<nsns::Point2, 3>& verts, int npts_1d) {
  auto gl = gauss_legendre_01(npts_1d);
  // Reference map via Duffy: (a,b) in [0,1]^2 -> (xi,eta) = (a, b(1-a)),
  // jacobian (1-a); then affine to the physical triangle.
  double x0 = verts[0].x, y0 = verts[0].y;
  double ax = verts[1].x - x0, ay = verts[1].y - y0;
  double bx = verts[2].x - x0, by = verts[2].y - y0;
  double det = ax * by - bx * ay;
  std::vector<QPoint> pts;
  pts.reserve(gl.size() * gl.size());
  for (auto [a, wa] : gl)
    for (auto [b, wb] : gl) {
      double xi = a, eta = b * (1.0 - a);
      double w = wa * wb * (1.0 - a) * std::abs(det);
      pts.push_back({x0 + ax * xi + bx * eta, y0 + ay * xi + by * eta, w});
    }
  return pts;
}

std::vector<QPoint> segment_points(nsns::Point2 a, nsns::Point2 b, int npts) {
  auto gl = gauss_legendre_01(npts);
  double len = std::hypot(b.x - a.x, b.y - a.y);
  std::vector<QPoint> pts;
  pts.reserve(gl.size());
  for (auto [t, w] : gl) pts.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), w * len});
  return pts;
}

EdgeFrame edge_frame(const std::array<nsns::Point2, 3>& verts, nsns::Point2 a, nsns::Point2 b) {
  EdgeFrame f;
  Eigen::Vector2d d(b.x - a.x, b.y - a.y);
  f.length = d.norm();
  Eigen::Vector2d n(d[1] / f.length, -d[0] / f.length);
  Eigen::Vector2d centroid((verts[0].x + verts[1].x + verts[2].x) / 3.0, (verts[0].y + verts[1].y + verts[2].y) / 3.0);
  Eigen::Vector2d mid(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
  if (n.dot(mid - centroid) < 0.0) n = -n;
  f.n = n;
  f.tau = Eigen::Vector2d(-n[1], n[0]);
  return f;
}

PhysBasis::PhysBasis(Family family, const std::array<nsns::Point2, 3>& verts) {
  n_ = family == P1 ? 3 : 6;
  std::vector<nsns::Point2> nodes(verts.begin(), verts.end());
  if (family == P2) {
    nodes.push_back({0.5 * (verts[1].x + verts[2].x), 0.5 * (verts[1].y + verts[2].y)});
    nodes.push_back({0.5 * (verts[0].x + verts[2].x), 0.5 * (verts[0].y + verts[2].y)});
    nodes.push_back({0.5 * (verts[0].x + verts[1].x), 0.5 * (verts[0].y + verts[1].y)});
  }
  Eigen::MatrixXd V(n_, n_);
  for (int r = 0; r < n_; ++r) {
    double x = nodes[r].x, y = nodes[r].y;
    V(r, 0) = 1.0;
    V(r, 1) = x;
    V(r, 2) = y;
    if (n_ == 6) {
      V(r, 3) = x * x;
      V(r, 4) = x * y;
      V(r, 5) = y * y;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
  if (!lu.isInvertible()) throw std::runtime_error("degenerate triangle in PhysBasis");
  coef_ = lu.solve(Eigen::MatrixXd::Identity(n_, n_));
}

double PhysBasis::value(int i, double x, double y) const {
  const auto& c = coef_.col(i);
  double v = c[0] + c[1] * x + c[2] * y;
  if (n_ == 6) v += c[3] * x * x + c[4] * x * y + c[5] * y * y;
  return v;
}

Eigen::Vector2d PhysBasis::grad(int i, double x, double y) const {
  const auto& c = coef_.col(i);
  Eigen::Vector2d g(c[1], c[2]);
  if (n_ == 6) {
    g[0] += 2.0 * c[3] * x + c[4] * y;
    g[1] += c[4] * x + 2.0 * c[5] * y;
  }
  return g;
}

double PhysBasis::laplacian(int i) const {
  if (n_ == 3) return 0.0;
  const auto& c = coef_.col(i);
  return 2.0 * c[3] + 2.0 * c[5];
}

namespace {

Eigen::Matrix2d strain(const Eigen::Vector2d& grad, int component) {
  // D(phi e_c) = grad(phi) e_c^T + e_c grad(phi)^T
  Eigen::Matrix2d D = Eigen::Matrix2d::Zero();
  for (int l = 0; l < 2; ++l) {
    D(component, l) += grad[l];
    D(l, component) += grad[l];
  }
  return D;
}

struct FieldEval {
  const PhysBasis& p2;
  const Eigen::VectorXd& local;  // 12 velocity coefficients

  Eigen::Vector2d value(double x, double y) const {
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    for (int l = 0; l < 6; ++l) {
      double phi = p2.value(l, x, y);
      v[0] += phi * local[2 * l];
      v[1] += phi * local[2 * l + 1];
    }
    return v;
  }
  Eigen::Matrix2d gradient(double x, double y) const {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    for (int l = 0; l < 6; ++l) {
      Eigen::Vector2d gl = p2.grad(l, x, y);
      for (int d = 0; d < 2; ++d) {
        g(0, d) += gl[d] * local[2 * l];
        g(1, d) += gl[d] * local[2 * l + 1];
      }
    }
    return g;
  }
  Eigen::Vector2d laplacian() const {
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    for (int l = 0; l < 6; ++l) {
      double lap = p2.laplacian(l);
      v[0] += lap * local[2 * l];
      v[1] += lap * local[2 * l + 1];
    }
    return v;
  }
};

}  // namespace

Eigen::MatrixXd viscous_matrix(const Verts& verts, double nu) {
  PhysBasis b(PhysBasis::P2, verts);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(12, 12);
  for (const QPoint& p : triangle_points(verts)) {
    for (int i = 0; i < 6; ++i) {
      Eigen::Vector2d gi = b.grad(i, p.x, p.y);
      for (int c = 0; c < 2; ++c) {
        Eigen::Matrix2d Dtest = strain(gi, c);
        for (int j = 0; j < 6; ++j) {
          Eigen::Vector2d gj = b.grad(j, p.x, p.y);
          for (int d = 0; d < 2; ++d)
            K(2 * i + c, 2 * j + d) += 0.5 * nu * (strain(gj, d).cwiseProduct(Dtest)).sum() * p.w;
        }
      }
    }
  }
  return K;
}

Eigen::MatrixXd divergence_matrix(const Verts& verts) {
  PhysBasis b2(PhysBasis::P2, verts);
  PhysBasis b1(PhysBasis::P1, verts);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 12);
  for (const QPoint& p : triangle_points(verts))
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 6; ++j) {
        Eigen::Vector2d gj = b2.grad(j, p.x, p.y);
        for (int d = 0; d < 2; ++d) B(i, 2 * j + d) -= b1.value(i, p.x, p.y) * gj[d] * p.w;
      }
  return B;
}

Eigen::MatrixXd mass_matrix(const Verts& verts, double scale) {
  PhysBasis b(PhysBasis::P2, verts);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(12, 12);
  for (const QPoint& p : triangle_points(verts))
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        double v = scale * b.value(i, p.x, p.y) * b.value(j, p.x, p.y) * p.w;
        M(2 * i, 2 * j) += v;
        M(2 * i + 1, 2 * j + 1) += v;
      }
  return M;
}

Eigen::MatrixXd convection_matrix(const Verts& verts, const Eigen::VectorXd& w_local, bool newton) {
  PhysBasis b(PhysBasis::P2, verts);
  FieldEval w{b, w_local};
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(12, 12);
  for (const QPoint& p : triangle_points(verts)) {
    Eigen::Vector2d wv = w.value(p.x, p.y);
    Eigen::Matrix2d gw = w.gradient(p.x, p.y);
    for (int i = 0; i < 6; ++i) {
      double phi_i = b.value(i, p.x, p.y);
      for (int j = 0; j < 6; ++j) {
        double adv = wv.dot(b.grad(j, p.x, p.y)) * phi_i * p.w;
        for (int c = 0; c < 2; ++c) K(2 * i + c, 2 * j + c) += adv;
        if (newton) {
          double m = phi_i * b.value(j, p.x, p.y) * p.w;
          for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d) K(2 * i + c, 2 * j + d) += m * gw(c, d);
        }
      }
    }
  }
  return K;
}

Eigen::VectorXd load_vector(const Verts& verts, const std::function<Eigen::Vector2d(double, double)>& f) {
  PhysBasis b(PhysBasis::P2, verts);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(12);
  for (const QPoint& p : triangle_points(verts)) {
    Eigen::Vector2d fv = f(p.x, p.y);
    for (int i = 0; i < 6; ++i) {
      double phi = b.value(i, p.x, p.y);
      rhs[2 * i] += fv[0] * phi * p.w;
      rhs[2 * i + 1] += fv[1] * phi * p.w;
    }
  }
  return rhs;
}

Eigen::MatrixXd nitsche_consistency(const Verts& verts, nsns::Point2 a, nsns::Point2 b, double nu) {
  PhysBasis basis(PhysBasis::P2, verts);
  EdgeFrame fr = edge_frame(verts, a, b);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(12, 12);
  for (const QPoint& p : segment_points(a, b)) {
    for (int j = 0; j < 6; ++j) {
      Eigen::Vector2d gj = basis.grad(j, p.x, p.y);
      for (int d = 0; d < 2; ++d) {
        double flux = nu * fr.n.dot(strain(gj, d) * fr.n);
        for (int i = 0; i < 6; ++i) {
          double vn_i = basis.value(i, p.x, p.y);
          for (int c = 0; c < 2; ++c) K(2 * i + c, 2 * j + d) += flux * vn_i * fr.n[c] * p.w;
        }
      }
    }
  }
  return K;
}

Eigen::MatrixXd nitsche_friction(const Verts& verts, nsns::Point2 a, nsns::Point2 b, double beta) {
  PhysBasis basis(PhysBasis::P2, verts);
  EdgeFrame fr = edge_frame(verts, a, b);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(12, 12);
  for (const QPoint& p : segment_points(a, b))
    for (int i = 0; i < 6; ++i)
      for (int c = 0; c < 2; ++c)
        for (int j = 0; j < 6; ++j)
          for (int d = 0; d < 2; ++d)
            K(2 * i + c, 2 * j + d) +=
                beta * basis.value(i, p.x, p.y) * fr.tau[c] * basis.value(j, p.x, p.y) * fr.tau[d] * p.w;
  return K;
}

Eigen::MatrixXd nitsche_penalty(const Verts& verts, nsns::Point2 a, nsns::Point2 b, double gamma) {
  PhysBasis basis(PhysBasis::P2, verts);
  EdgeFrame fr = edge_frame(verts, a, b);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(12, 12);
  for (const QPoint& p : segment_points(a, b))
    for (int i = 0; i < 6; ++i)
      for (int c = 0; c < 2; ++c)
        for (int j = 0; j < 6; ++j)
          for (int d = 0; d < 2; ++d)
            K(2 * i + c, 2 * j + d) += gamma / fr.length * basis.value(i, p.x, p.y) * fr.n[c] *
                                       basis.value(j, p.x, p.y) * fr.n[d] * p.w;
  return K;
}

Eigen::MatrixXd pressure_normal_matrix(const Verts& verts, nsns::Point2 a, nsns::Point2 b) {
  PhysBasis b2(PhysBasis::P2, verts);
  PhysBasis b1(PhysBasis::P1, verts);
  EdgeFrame fr = edge_frame(verts, a, b);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 12);
  for (const QPoint& p : segment_points(a, b))
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 6; ++j)
        for (int d = 0; d < 2; ++d)
          B(i, 2 * j + d) += b1.value(i, p.x, p.y) * b2.value(j, p.x, p.y) * fr.n[d] * p.w;
  return B;
}

double energy_seminorm_sq(const Verts& verts, const Eigen::VectorXd& u_local) {
  PhysBasis b(PhysBasis::P2, verts);
  FieldEval u{b, u_local};
  double acc = 0.0;
  for (const QPoint& p : triangle_points(verts)) acc += u.gradient(p.x, p.y).squaredNorm() * p.w;
  return acc;
}

double edge_normal_trace_sq(const Verts& verts, nsns::Point2 a, nsns::Point2 b, const Eigen::VectorXd& u_local) {
  PhysBasis basis(PhysBasis::P2, verts);
  FieldEval u{basis, u_local};
  EdgeFrame fr = edge_frame(verts, a, b);
  double acc = 0.0;
  for (const QPoint& p : segment_points(a, b)) {
    double un = u.value(p.x, p.y).dot(fr.n);
    acc += un * un * p.w;
  }
  return acc;
}

namespace {

struct VmsEval {
  PhysBasis p2;
  PhysBasis p1;
  const VmsLocal& d;

  VmsEval(const Verts& verts, const VmsLocal& data) : p2(PhysBasis::P2, verts), p1(PhysBasis::P1, verts), d(data) {}

  Eigen::Vector2d data_term(double x, double y) const {
    FieldEval ubdf{p2, d.u_bdf};
    Eigen::Vector2d out = ubdf.value(x, y) / d.dt;
    if (d.force) out += d.force(x, y);
    return out;
  }
  double trial_op(int j, double x, double y, const Eigen::Vector2d& uext) const {
    return d.alpha / d.dt * p2.value(j, x, y) + uext.dot(p2.grad(j, x, y)) - d.nu * p2.laplacian(j);
  }
  Eigen::Vector2d r_ext(double x, double y) const {
    FieldEval uext{p2, d.u_ext};
    Eigen::Vector2d ue = uext.value(x, y);
    Eigen::Vector2d pg = Eigen::Vector2d::Zero();
    for (int l = 0; l < 3; ++l) pg += d.p_ext[l] * p1.grad(l, x, y);
    return d.alpha / d.dt * ue + uext.gradient(x, y) * ue - d.nu * uext.laplacian() + pg - data_term(x, y);
  }

  // Accumulates (weight_vec . S_M r_M) pairings for one row.
  void pair(Eigen::MatrixXd& M, Eigen::VectorXd& rhs, int row, const Eigen::Vector2d& wv, double sign, double x,
            double y, const Eigen::Vector2d& uext, double w) const {
    for (int j = 0; j < 6; ++j) {
      double L = trial_op(j, x, y, uext);
      for (int dc = 0; dc < 2; ++dc) M(row, 2 * j + dc) += sign * wv[dc] * d.sm * L * w;
    }
    for (int j = 0; j < 3; ++j) M(row, 12 + j) += sign * d.sm * wv.dot(p1.grad(j, x, y)) * w;
    rhs[row] += sign * d.sm * wv.dot(data_term(x, y)) * w;
  }
};

}  // namespace

void vms_supg_terms(const Verts& verts, const VmsLocal& d, Eigen::MatrixXd& M, Eigen::VectorXd& rhs) {
  M = Eigen::MatrixXd::Zero(15, 15);
  rhs = Eigen::VectorXd::Zero(15);
  VmsEval ev(verts, d);
  FieldEval uext{ev.p2, d.u_ext};
  for (const QPoint& p : triangle_points(verts)) {
    Eigen::Vector2d ue = uext.value(p.x, p.y);
    for (int i = 0; i < 6; ++i) {
      Eigen::Vector2d gi = ev.p2.grad(i, p.x, p.y);
      double adv = ue.dot(gi);
      for (int c = 0; c < 2; ++c) {
        Eigen::Vector2d wv = Eigen::Vector2d::Zero();
        wv[c] = adv;
        ev.pair(M, rhs, 2 * i + c, wv, 1.0, p.x, p.y, ue, p.w);
        // grad-div
        for (int j = 0; j < 6; ++j) {
          Eigen::Vector2d gj = ev.p2.grad(j, p.x, p.y);
          for (int dc = 0; dc < 2; ++dc) M(2 * i + c, 2 * j + dc) += d.sc * gi[c] * gj[dc] * p.w;
        }
      }
    }
    if (d.c_tilde != 0.0)
      for (int i = 0; i < 3; ++i)
        ev.pair(M, rhs, 12 + i, (-d.c_tilde * ev.p1.grad(i, p.x, p.y)).eval(), 1.0, p.x, p.y, ue, p.w);
  }
}

void vms_cross_volume_terms(const Verts& verts, const VmsLocal& d, Eigen::MatrixXd& M, Eigen::VectorXd& rhs) {
  M = Eigen::MatrixXd::Zero(15, 15);
  rhs = Eigen::VectorXd::Zero(15);
  VmsEval ev(verts, d);
  FieldEval uext{ev.p2, d.u_ext};
  for (const QPoint& p : triangle_points(verts)) {
    Eigen::Vector2d ue = uext.value(p.x, p.y);
    for (int i = 0; i < 6; ++i) {
      Eigen::Vector2d gi = ev.p2.grad(i, p.x, p.y);
      for (int c = 0; c < 2; ++c) ev.pair(M, rhs, 2 * i + c, (ue[c] * gi).eval(), 1.0, p.x, p.y, ue, p.w);
    }
  }
}

void vms_cross_boundary_terms(const Verts& verts, nsns::Point2 a, nsns::Point2 b, const VmsLocal& d,
                              Eigen::MatrixXd& M, Eigen::VectorXd& rhs) {
  M = Eigen::MatrixXd::Zero(15, 15);
  rhs = Eigen::VectorXd::Zero(15);
  VmsEval ev(verts, d);
  FieldEval uext{ev.p2, d.u_ext};
  EdgeFrame fr = edge_frame(verts, a, b);
  for (const QPoint& p : segment_points(a, b)) {
    Eigen::Vector2d ue = uext.value(p.x, p.y);
    // -int S_C r_C (n.v)
    for (int i = 0; i < 6; ++i) {
      double phi = ev.p2.value(i, p.x, p.y);
      for (int c = 0; c < 2; ++c)
        for (int j = 0; j < 6; ++j) {
          Eigen::Vector2d gj = ev.p2.grad(j, p.x, p.y);
          for (int dc = 0; dc < 2; ++dc) M(2 * i + c, 2 * j + dc) += -d.sc * phi * fr.n[c] * gj[dc] * p.w;
        }
    }
    // -int q (n . S_M r_M)
    for (int i = 0; i < 3; ++i) {
      double psi = ev.p1.value(i, p.x, p.y);
      for (int j = 0; j < 6; ++j) {
        double L = ev.trial_op(j, p.x, p.y, ue);
        for (int dc = 0; dc < 2; ++dc) M(12 + i, 2 * j + dc) += -psi * d.sm * fr.n[dc] * L * p.w;
      }
      for (int j = 0; j < 3; ++j) M(12 + i, 12 + j) += -psi * d.sm * fr.n.dot(ev.p1.grad(j, p.x, p.y)) * p.w;
      rhs[12 + i] += -psi * d.sm * fr.n.dot(ev.data_term(p.x, p.y)) * p.w;
    }
  }
}

void vms_les_terms(const Verts& verts, const VmsLocal& d, Eigen::MatrixXd& M, Eigen::VectorXd& rhs) {
  M = Eigen::MatrixXd::Zero(15, 15);
  rhs = Eigen::VectorXd::Zero(15);
  VmsEval ev(verts, d);
  FieldEval uext{ev.p2, d.u_ext};
  for (const QPoint& p : triangle_points(verts)) {
    Eigen::Vector2d ue = uext.value(p.x, p.y);
    Eigen::Vector2d rext = ev.r_ext(p.x, p.y);
    for (int i = 0; i < 6; ++i) {
      Eigen::Vector2d gi = ev.p2.grad(i, p.x, p.y);
      for (int c = 0; c < 2; ++c)
        ev.pair(M, rhs, 2 * i + c, (d.sm * rext[c] * gi).eval(), -1.0, p.x, p.y, ue, p.w);
    }
  }
}

}  // namespace oracle

#pragma once

// Primal-dual interior-point method for ConicProgram.
//
//   primal:  min c^T x   s.t.  G x + s = h,  A x = b,  s in K
//   dual:    max -h^T z - b^T y   s.t.  G^T z + A^T y + c = 0,  z in K
//
// with G = -F and h = f stacked over all cone constraints. The iteration
// follows the homogeneous self-dual embedding with Nesterov-Todd scaling and
// a Mehrotra predictor-corrector step, so infeasible and unbounded programs
// are detected from certificates rather than by iteration limits.
//
// Everything is dense and single-threaded; results are bit-stable for a
// given program and options.

#include "inertid/conic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace inertid {

struct SolverOptions {
  double abstol = 1e-8;   ///< absolute duality gap
  double reltol = 1e-8;   ///< relative duality gap
  double feastol = 1e-8;  ///< relative primal / dual residuals
  int max_iter = 100;
  int refinement = 8;     ///< most iterative refinement passes on the KKT system
  double step = 0.99;     ///< fraction of the distance to the boundary
  bool equilibrate = true;  ///< Ruiz scaling of variables and cone blocks
};

namespace ipm {

struct Block {
  ConeKind kind;
  int order;
  int offset;
  int dim;
};

/// Nesterov-Todd scaling for the product cone. For every block
/// W z = W^{-T} s = lambda.
class Scaling {
 public:
  explicit Scaling(const std::vector<Block>& blocks) : blocks_(&blocks) {
    for (const auto& b : blocks) {
      Entry e;
      switch (b.kind) {
        case ConeKind::nonnegative: e.d = Eigen::VectorXd::Ones(b.dim); break;
        case ConeKind::second_order:
          e.beta = 1.0;
          e.v = Eigen::VectorXd::Zero(b.dim);
          e.v[0] = 1.0;
          break;
        case ConeKind::psd:
          e.R = Eigen::MatrixXd::Identity(b.order, b.order);
          e.Rinv = e.R;
          break;
      }
      entries_.push_back(std::move(e));
    }
  }

  enum class Op { W, Wt, Winv, Winvt };

  /// Applies the requested operator to each column of X (rows = cone rows).
  void apply_inplace(Op op, Eigen::Ref<Eigen::MatrixXd> X) const {
    for (std::size_t k = 0; k < blocks_->size(); ++k) {
      const Block& b = (*blocks_)[k];
      const Entry& e = entries_[k];
      auto rows = X.middleRows(b.offset, b.dim);
      switch (b.kind) {
        case ConeKind::nonnegative:
          if (op == Op::W || op == Op::Wt) rows = e.d.asDiagonal() * rows;
          else rows = e.d.cwiseInverse().asDiagonal() * rows;
          break;
        case ConeKind::second_order: {
          // W = beta (2 v v^T - J), W^{-1} = (1/beta)(2 J v v^T J - J); both symmetric.
          const bool inv = (op == Op::Winv || op == Op::Winvt);
          Eigen::VectorXd u = e.v;
          if (inv) u.tail(b.dim - 1) *= -1.0;
          const Eigen::RowVectorXd ut_x = u.transpose() * rows;
          rows.bottomRows(b.dim - 1) *= -1.0;
          rows *= -1.0;  // -J rows
          rows.noalias() += 2.0 * u * ut_x;
          rows *= inv ? 1.0 / e.beta : e.beta;
          break;
        }
        case ConeKind::psd: {
          const Eigen::MatrixXd* L = nullptr;
          bool transpose_left = false;
          // W: R^T U R, Wt: R U R^T, Winv: R^-T U R^-1, Winvt: R^-1 U R^-T
          switch (op) {
            case Op::W: L = &e.R; transpose_left = true; break;
            case Op::Wt: L = &e.R; transpose_left = false; break;
            case Op::Winv: L = &e.Rinv; transpose_left = true; break;
            case Op::Winvt: L = &e.Rinv; transpose_left = false; break;
          }
          for (Eigen::Index c = 0; c < rows.cols(); ++c) {
            const Eigen::MatrixXd U = smat(rows.col(c), b.order);
            Eigen::MatrixXd out;
            if (transpose_left) out = L->transpose() * U * (*L);
            else out = (*L) * U * L->transpose();
            rows.col(c) = svec(out);
          }
          break;
        }
      }
    }
  }

  Eigen::VectorXd apply(Op op, const Eigen::VectorXd& x) const {
    Eigen::MatrixXd m = x;
    apply_inplace(op, m);
    return m.col(0);
  }

  /// Recomputes the scaling from (s, z) for nonnegative and second-order
  /// blocks and from the scaled step for PSD blocks. `s_scaled`/`z_scaled`
  /// hold the new iterate in the current scaled coordinates; they are only
  /// read for PSD blocks. Returns false if a block left the cone interior.
  bool update(const Eigen::VectorXd& s, const Eigen::VectorXd& z, const Eigen::VectorXd& s_scaled,
              const Eigen::VectorXd& z_scaled, Eigen::VectorXd& lambda) {
    lambda.resize(s.size());
    for (std::size_t k = 0; k < blocks_->size(); ++k) {
      const Block& b = (*blocks_)[k];
      Entry& e = entries_[k];
      switch (b.kind) {
        case ConeKind::nonnegative: {
          const auto sb = s.segment(b.offset, b.dim);
          const auto zb = z.segment(b.offset, b.dim);
          if ((sb.array() <= 0.0).any() || (zb.array() <= 0.0).any()) return false;
          e.d = (sb.array() / zb.array()).sqrt();
          lambda.segment(b.offset, b.dim) = (sb.array() * zb.array()).sqrt();
          break;
        }
        case ConeKind::second_order: {
          const Eigen::VectorXd sb = s.segment(b.offset, b.dim);
          const Eigen::VectorXd zb = z.segment(b.offset, b.dim);
          const double sn = soc_jnorm(sb), zn = soc_jnorm(zb);
          if (!(sn > 0.0) || !(zn > 0.0)) return false;
          const Eigen::VectorXd sbar = sb / sn;
          const Eigen::VectorXd zbar = zb / zn;
          const double gamma = std::sqrt(0.5 * (1.0 + sbar.dot(zbar)));
          Eigen::VectorXd wbar = sbar;
          wbar[0] += zbar[0];
          wbar.tail(b.dim - 1) -= zbar.tail(b.dim - 1);
          wbar /= 2.0 * gamma;
          e.beta = std::sqrt(sn / zn);
          e.v = wbar;
          e.v[0] += 1.0;
          e.v /= std::sqrt(2.0 * (wbar[0] + 1.0));
          // lambda = W z = beta (2 (v^T z) v - J z)
          Eigen::VectorXd lam = zb;
          lam[0] = -zb[0];
          lam += 2.0 * e.v.dot(zb) * e.v;
          lambda.segment(b.offset, b.dim) = e.beta * lam;
          break;
        }
        case ConeKind::psd: {
          const Eigen::MatrixXd S = smat(s_scaled.segment(b.offset, b.dim), b.order);
          const Eigen::MatrixXd Z = smat(z_scaled.segment(b.offset, b.dim), b.order);
          Eigen::LLT<Eigen::MatrixXd> ls(S), lz(Z);
          if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
          const Eigen::MatrixXd Ls = ls.matrixL();
          const Eigen::MatrixXd Lz = lz.matrixL();
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
          const Eigen::VectorXd sig = svd.singularValues();
          if (!(sig.minCoeff() > 0.0)) return false;
          const Eigen::VectorXd isq = sig.cwiseSqrt().cwiseInverse();
          const Eigen::MatrixXd Rt = Ls * svd.matrixV() * isq.asDiagonal();
          const Eigen::MatrixXd Rt_inv = isq.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
          e.R = e.R * Rt;
          e.Rinv = Rt_inv * e.Rinv;
          lambda.segment(b.offset, b.dim) = svec(Eigen::MatrixXd(sig.asDiagonal()));
          e.eig = sig;
          break;
        }
      }
    }
    return true;
  }

  const Eigen::VectorXd& psd_eigenvalues(std::size_t k) const { return entries_[k].eig; }

  /// sqrt(x0^2 - |x1|^2), or 0 outside the cone interior.
  static double soc_jnorm(const Eigen::VectorXd& x) {
    const double n1 = x.tail(x.size() - 1).norm();
    const double a = x[0] - n1, b = x[0] + n1;
    if (!(a > 0.0)) return 0.0;
    return std::sqrt(a) * std::sqrt(b);
  }

 private:
  struct Entry {
    Eigen::VectorXd d;
    double beta = 1.0;
    Eigen::VectorXd v;
    Eigen::MatrixXd R, Rinv;
    Eigen::VectorXd eig;
  };
  const std::vector<Block>* blocks_;
  std::vector<Entry> entries_;
};

/// Jordan product x o y blockwise.
inline Eigen::VectorXd jordan_product(const std::vector<Block>& blocks, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& y) {
  Eigen::VectorXd r(x.size());
  for (const auto& b : blocks) {
    const auto xb = x.segment(b.offset, b.dim);
    const auto yb = y.segment(b.offset, b.dim);
    switch (b.kind) {
      case ConeKind::nonnegative: r.segment(b.offset, b.dim) = xb.cwiseProduct(yb); break;
      case ConeKind::second_order:
        r[b.offset] = xb.dot(yb);
        r.segment(b.offset + 1, b.dim - 1) = xb[0] * yb.tail(b.dim - 1) + yb[0] * xb.tail(b.dim - 1);
        break;
      case ConeKind::psd: {
        const Eigen::MatrixXd X = smat(xb, b.order), Y = smat(yb, b.order);
        r.segment(b.offset, b.dim) = svec(Eigen::MatrixXd(0.5 * (X * Y + Y * X)));
        break;
      }
    }
  }
  return r;
}

/// Solves lambda o u = d for u, with lambda the scaled point (diagonal in
/// PSD blocks).
inline Eigen::VectorXd jordan_divide(const std::vector<Block>& blocks, const Eigen::VectorXd& lambda,
                                     const Scaling& W, const Eigen::VectorXd& d) {
  Eigen::VectorXd u(d.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const Block& b = blocks[k];
    const auto lb = lambda.segment(b.offset, b.dim);
    const auto db = d.segment(b.offset, b.dim);
    switch (b.kind) {
      case ConeKind::nonnegative: u.segment(b.offset, b.dim) = db.cwiseQuotient(lb); break;
      case ConeKind::second_order: {
        const double l0 = lb[0];
        const auto l1 = lb.tail(b.dim - 1);
        const double det = (l0 - l1.norm()) * (l0 + l1.norm());
        const double u0 = (l0 * db[0] - l1.dot(db.tail(b.dim - 1))) / det;
        u[b.offset] = u0;
        u.segment(b.offset + 1, b.dim - 1) = (db.tail(b.dim - 1) - u0 * l1) / l0;
        break;
      }
      case ConeKind::psd: {
        const Eigen::VectorXd& lam = W.psd_eigenvalues(k);
        Eigen::MatrixXd D = smat(db, b.order);
        for (int j = 0; j < b.order; ++j)
          for (int i = 0; i < b.order; ++i) D(i, j) *= 2.0 / (lam[i] + lam[j]);
        u.segment(b.offset, b.dim) = svec(D);
        break;
      }
    }
  }
  return u;
}

inline Eigen::VectorXd identity_element(const std::vector<Block>& blocks, int m) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  for (const auto& b : blocks) {
    switch (b.kind) {
      case ConeKind::nonnegative: e.segment(b.offset, b.dim).setOnes(); break;
      case ConeKind::second_order: e[b.offset] = 1.0; break;
      case ConeKind::psd: e.segment(b.offset, b.dim) = svec(Eigen::MatrixXd::Identity(b.order, b.order)); break;
    }
  }
  return e;
}

/// Smallest t with x + t e in the cone, maximized over blocks (-min eigenvalue).
inline double boundary_shift(const std::vector<Block>& blocks, const Eigen::VectorXd& x) {
  double t = -std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) {
    const auto xb = x.segment(b.offset, b.dim);
    switch (b.kind) {
      case ConeKind::nonnegative: t = std::max(t, -xb.minCoeff()); break;
      case ConeKind::second_order: t = std::max(t, xb.tail(b.dim - 1).norm() - xb[0]); break;
      case ConeKind::psd: {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(smat(xb, b.order), Eigen::EigenvaluesOnly);
        t = std::max(t, -es.eigenvalues()[0]);
        break;
      }
    }
  }
  return t;
}

/// Largest alpha with lambda + alpha d in the cone, lambda interior and
/// diagonal in PSD blocks. Returns +inf if unbounded.
inline double max_step(const std::vector<Block>& blocks, const Scaling& W, const Eigen::VectorXd& lambda,
                       const Eigen::VectorXd& d) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const Block& b = blocks[k];
    const auto lb = lambda.segment(b.offset, b.dim);
    const auto db = d.segment(b.offset, b.dim);
    switch (b.kind) {
      case ConeKind::nonnegative:
        for (int i = 0; i < b.dim; ++i)
          if (db[i] < 0.0) alpha = std::min(alpha, -lb[i] / db[i]);
        break;
      case ConeKind::second_order: {
        // f(a) = (l0 + a d0)^2 - |l1 + a d1|^2 = qa a^2 + 2 qb a + qc
        const double qa = db[0] * db[0] - db.tail(b.dim - 1).squaredNorm();
        const double qb = lb[0] * db[0] - lb.tail(b.dim - 1).dot(db.tail(b.dim - 1));
        const double qc = (lb[0] - lb.tail(b.dim - 1).norm()) * (lb[0] + lb.tail(b.dim - 1).norm());
        double root = std::numeric_limits<double>::infinity();
        if (std::abs(qa) < 1e-300 * std::max(1.0, qb * qb)) {
          if (qb < 0.0) root = -qc / (2.0 * qb);
        } else {
          const double disc = qb * qb - qa * qc;
          if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            // numerically stable roots of qa a^2 + 2 qb a + qc
            const double qq = -(qb + std::copysign(sq, qb));
            const double r1 = qq / qa, r2 = qc / qq;
            for (double r : {r1, r2})
              if (r > 0.0 && std::isfinite(r)) root = std::min(root, r);
          }
        }
        // the cone may also be left through the apex region where l0 + a d0 < 0
        if (db[0] < 0.0) root = std::min(root, -lb[0] / db[0]);
        alpha = std::min(alpha, root);
        break;
      }
      case ConeKind::psd: {
        const Eigen::VectorXd isq = W.psd_eigenvalues(k).cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXd D = isq.asDiagonal() * smat(db, b.order) * isq.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D, Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues()[0];
        if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
        break;
      }
    }
  }
  return alpha;
}

}  // namespace ipm

class InteriorPointSolver {
 public:
  explicit InteriorPointSolver(SolverOptions opts = {}) : opts_(opts) {}

  Solution solve(const ConicProgram& prog) const {
    const auto t0 = std::chrono::steady_clock::now();
    prog.validate();
    Problem P = assemble(prog, opts_);
    Solution sol = run(P);
    unscale(P, sol);
    map_back(prog, P, sol);
    sol.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
  }

 private:
  struct Problem {
    int n = 0, m = 0, p = 0;
    Eigen::VectorXd c, h, b;
    Eigen::MatrixXd G, A;
    std::vector<ipm::Block> blocks;
    std::vector<std::string> labels;
    int degree = 0;
    /// x = D x', z = E z', y = Ey y' for the equilibrated data.
    Eigen::VectorXd D, E, Ey;
  };

  /// Ruiz equilibration. Cone rows share one factor per block so each cone
  /// maps onto itself; equality rows scale individually.
  static void equilibrate(Problem& P, int passes) {
    P.D = Eigen::VectorXd::Ones(P.n);
    P.E = Eigen::VectorXd::Ones(P.m);
    P.Ey = Eigen::VectorXd::Ones(P.p);
    auto inv_sqrt = [](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 1.0; };
    for (int it = 0; it < passes; ++it) {
      Eigen::VectorXd col = Eigen::VectorXd::Zero(P.n);
      for (const auto& b : P.blocks) {
        const double r = P.G.middleRows(b.offset, b.dim).cwiseAbs().maxCoeff();
        const double f = inv_sqrt(r);
        P.G.middleRows(b.offset, b.dim) *= f;
        P.h.segment(b.offset, b.dim) *= f;
        P.E.segment(b.offset, b.dim) *= f;
      }
      for (int i = 0; i < P.p; ++i) {
        const double f = inv_sqrt(P.A.row(i).cwiseAbs().maxCoeff());
        P.A.row(i) *= f;
        P.b[i] *= f;
        P.Ey[i] *= f;
      }
      for (int j = 0; j < P.n; ++j) {
        col[j] = P.m ? P.G.col(j).cwiseAbs().maxCoeff() : 0.0;
        if (P.p) col[j] = std::max(col[j], P.A.col(j).cwiseAbs().maxCoeff());
        const double f = inv_sqrt(col[j]);
        P.G.col(j) *= f;
        if (P.p) P.A.col(j) *= f;
        P.c[j] *= f;
        P.D[j] *= f;
      }
    }
  }

  static void unscale(const Problem& P, Solution& sol) {
    if (sol.x.size() == P.n) sol.x = sol.x.cwiseProduct(P.D);
    if (sol.z.size() == P.m) sol.z = sol.z.cwiseProduct(P.E);
    if (sol.y.size() == P.p) sol.y = sol.y.cwiseProduct(P.Ey);
  }

  static Problem assemble(const ConicProgram& prog, const SolverOptions& opts) {
    Problem P;
    P.n = prog.num_variables();
    P.m = prog.cone_rows();
    P.p = static_cast<int>(prog.equality_matrix().rows());
    P.c = prog.objective();
    P.G.resize(P.m, P.n);
    P.h.resize(P.m);
    int off = 0;
    for (const auto& cone : prog.cones()) {
      P.blocks.push_back({cone.kind, cone.order, off, cone.dim()});
      P.labels.push_back(cone.label);
      P.G.middleRows(off, cone.dim()) = -cone.F;
      P.h.segment(off, cone.dim()) = cone.f;
      P.degree += cone.degree();
      off += cone.dim();
    }
    if (P.p > 0) {
      P.A = prog.equality_matrix();
      P.b = prog.equality_rhs();
    } else {
      P.A.resize(0, P.n);
      P.b.resize(0);
    }
    equilibrate(P, opts.equilibrate ? 8 : 0);
    return P;
  }

  /// Factorization of [0 A^T G^T; A 0 0; G 0 -W^T W].
  class Kkt {
   public:
    Kkt(const Problem& P, const ipm::Scaling& W, int refinement) : P_(P), W_(W), refinement_(refinement) {
      Gs_ = P.G;
      W.apply_inplace(ipm::Scaling::Op::Winvt, Gs_);
      Eigen::MatrixXd H = Eigen::MatrixXd::Zero(P.n, P.n);
      H.selfadjointView<Eigen::Lower>().rankUpdate(Gs_.transpose());
      H = H.selfadjointView<Eigen::Lower>();
      const double scale = std::max(1.0, H.diagonal().maxCoeff());
      llt_.compute(H);
      double reg = 0.0;
      while (llt_.info() != Eigen::Success) {
        reg = (reg == 0.0) ? 1e-14 * scale : reg * 100.0;
        if (reg > 1e-4 * scale) {
          ok_ = false;
          return;
        }
        llt_.compute(H + reg * Eigen::MatrixXd::Identity(P.n, P.n));
      }
      if (P.p > 0) {
        HiAt_ = llt_.solve(P.A.transpose());
        Eigen::MatrixXd S = P.A * HiAt_;
        schur_.compute(S);
        if (schur_.info() != Eigen::Success) {
          const double s2 = std::max(1.0, S.diagonal().maxCoeff());
          schur_.compute(S + 1e-13 * s2 * Eigen::MatrixXd::Identity(P.p, P.p));
          if (schur_.info() != Eigen::Success) ok_ = false;
        }
      }
    }

    bool ok() const { return ok_; }

    /// Solves with right-hand side (bx, by, bz) for (ux, uy, uz).
    void solve(const Eigen::VectorXd& bx, const Eigen::VectorXd& by, const Eigen::VectorXd& bz,
               Eigen::VectorXd& ux, Eigen::VectorXd& uy, Eigen::VectorXd& uz) const {
      base_solve(bx, by, bz, ux, uy, uz);
      const double scale = 1.0 + std::sqrt(bx.squaredNorm() + by.squaredNorm() + bz.squaredNorm());
      Eigen::VectorXd r1, r2, r3;
      double res = residual(bx, by, bz, ux, uy, uz, r1, r2, r3);
      for (int it = 0; it < refinement_ && res > 1e-15 * scale; ++it) {
        Eigen::VectorXd dx, dy, dz;
        base_solve(r1, r2, r3, dx, dy, dz);
        Eigen::VectorXd vx = ux + dx, vy = P_.p > 0 ? Eigen::VectorXd(uy + dy) : uy, vz = uz + dz;
        Eigen::VectorXd s1, s2, s3;
        const double next = residual(bx, by, bz, vx, vy, vz, s1, s2, s3);
        if (!(next < res)) break;
        const bool slow = next > 0.5 * res;
        ux.swap(vx);
        uy.swap(vy);
        uz.swap(vz);
        r1.swap(s1);
        r2.swap(s2);
        r3.swap(s3);
        res = next;
        if (slow) break;
      }
    }

   private:
    double residual(const Eigen::VectorXd& bx, const Eigen::VectorXd& by, const Eigen::VectorXd& bz,
                    const Eigen::VectorXd& ux, const Eigen::VectorXd& uy, const Eigen::VectorXd& uz,
                    Eigen::VectorXd& r1, Eigen::VectorXd& r2, Eigen::VectorXd& r3) const {
      const Eigen::VectorXd WtWuz = W_.apply(ipm::Scaling::Op::Wt, W_.apply(ipm::Scaling::Op::W, uz));
      r1 = bx - P_.G.transpose() * uz;
      if (P_.p > 0) r1 -= P_.A.transpose() * uy;
      r2 = (P_.p > 0) ? Eigen::VectorXd(by - P_.A * ux) : Eigen::VectorXd(0);
      r3 = bz - (P_.G * ux - WtWuz);
      return std::sqrt(r1.squaredNorm() + r2.squaredNorm() + r3.squaredNorm());
    }

    void base_solve(const Eigen::VectorXd& bx, const Eigen::VectorXd& by, const Eigen::VectorXd& bz,
                    Eigen::VectorXd& ux, Eigen::VectorXd& uy, Eigen::VectorXd& uz) const {
      const Eigen::VectorXd wbz = W_.apply(ipm::Scaling::Op::Winvt, bz);
      const Eigen::VectorXd r = bx + Gs_.transpose() * wbz;
      if (P_.p > 0) {
        uy = schur_.solve(HiAt_.transpose() * r - by);
        ux = llt_.solve(r - P_.A.transpose() * uy);
      } else {
        uy.resize(0);
        ux = llt_.solve(r);
      }
      const Eigen::VectorXd uzt = Gs_ * ux - wbz;
      uz = W_.apply(ipm::Scaling::Op::Winv, uzt);
    }

    const Problem& P_;
    const ipm::Scaling& W_;
    int refinement_;
    Eigen::MatrixXd Gs_, HiAt_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::LLT<Eigen::MatrixXd> schur_;
    bool ok_ = true;
  };

  Solution run(const Problem& P) const {
    using Op = ipm::Scaling::Op;
    Solution sol;
    const auto& blocks = P.blocks;
    const Eigen::VectorXd e = ipm::identity_element(blocks, P.m);

    ipm::Scaling W(blocks);
    Eigen::VectorXd x, y, z, s;
    {
      // Least-norm starting points with W = I.
      Kkt K(P, W, opts_.refinement);
      if (!K.ok()) {
        sol.status = SolveStatus::numerical;
        sol.diagnostic = "initial KKT system is singular (constraints do not determine all variables)";
        return sol;
      }
      Eigen::VectorXd ux, uy, uz;
      K.solve(Eigen::VectorXd::Zero(P.n), P.b, P.h, ux, uy, uz);
      x = ux;
      s = -uz;
      K.solve(-P.c, Eigen::VectorXd::Zero(P.p), Eigen::VectorXd::Zero(P.m), ux, uy, uz);
      y = uy;
      z = uz;
    }
    auto push_interior = [&](Eigen::VectorXd& v) {
      const double t = ipm::boundary_shift(blocks, v);
      if (t >= -1e-8 * std::max(1.0, v.norm())) v += (1.0 + t) * e;
    };
    push_interior(s);
    push_interior(z);
    double tau = 1.0, kappa = 1.0;

    Eigen::VectorXd lambda;
    // For the first scaling the "current" coordinates are unscaled.
    if (!W.update(s, z, s, z, lambda)) {
      sol.status = SolveStatus::numerical;
      sol.diagnostic = "failed to initialize interior point";
      return sol;
    }

    const double resx0 = std::max(1.0, P.c.norm());
    const double resy0 = std::max(1.0, P.b.size() ? P.b.norm() : 0.0);
    const double resz0 = std::max(1.0, P.h.norm());

    for (int iter = 0;; ++iter) {
      // Residuals of the embedding.
      Eigen::VectorXd hrx = P.G.transpose() * z;
      if (P.p > 0) hrx += P.A.transpose() * y;
      const Eigen::VectorXd hry = P.p > 0 ? Eigen::VectorXd(P.A * x) : Eigen::VectorXd(0);
      const Eigen::VectorXd hrz = s + P.G * x;
      const Eigen::VectorXd R1 = hrx + tau * P.c;
      const Eigen::VectorXd R2 = P.p > 0 ? Eigen::VectorXd(-hry + tau * P.b) : Eigen::VectorXd(0);
      const Eigen::VectorXd R3 = hrz - tau * P.h;
      const double cx = P.c.dot(x);
      const double by_hz = (P.p > 0 ? P.b.dot(y) : 0.0) + P.h.dot(z);
      const double R4 = kappa + cx + by_hz;
      const double sz = s.dot(z);
      const double mu = (sz + tau * kappa) / (P.degree + 1);

      const double pcost = cx / tau, dcost = -by_hz / tau;
      const double gap = sz / (tau * tau);
      double relgap = std::numeric_limits<double>::infinity();
      if (pcost < 0.0) relgap = gap / -pcost;
      else if (dcost > 0.0) relgap = gap / dcost;
      const double pres = std::max(P.p > 0 ? R2.norm() / resy0 : 0.0, R3.norm() / resz0) / tau;
      const double dres = R1.norm() / resx0 / tau;
      double pinfres = std::numeric_limits<double>::infinity();
      double dinfres = std::numeric_limits<double>::infinity();
      if (by_hz < 0.0) pinfres = hrx.norm() / resx0 / -by_hz;
      if (cx < 0.0) dinfres = std::max(P.p > 0 ? hry.norm() / resy0 : 0.0, hrz.norm() / resz0) / -cx;

      sol.iterations = iter;
      sol.primal_objective = pcost;
      sol.dual_objective = dcost;
      sol.gap = gap;
      sol.primal_residual = pres;
      sol.dual_residual = dres;
      sol.x = x / tau;
      sol.y = y / tau;
      sol.z = z / tau;

      if (pres <= opts_.feastol && dres <= opts_.feastol &&
          (gap <= opts_.abstol || relgap <= opts_.reltol)) {
        sol.status = SolveStatus::optimal;
        return sol;
      }
      if (pinfres <= opts_.feastol) {
        sol.status = SolveStatus::infeasible;
        sol.x.resize(0);
        sol.y = y / -by_hz;
        sol.z = z / -by_hz;
        sol.diagnostic = "primal infeasible; certificate concentrated on: " + dominant_labels(P, sol.z);
        return sol;
      }
      if (dinfres <= opts_.feastol) {
        sol.status = SolveStatus::unbounded;
        sol.x = x / -cx;
        sol.diagnostic = "dual infeasible (objective unbounded below)";
        return sol;
      }
      if (iter >= opts_.max_iter) {
        sol.status = SolveStatus::max_iter;
        sol.diagnostic = "iteration limit reached";
        return sol;
      }

      Kkt K(P, W, opts_.refinement);
      if (!K.ok()) {
        sol.status = SolveStatus::numerical;
        sol.diagnostic = "KKT factorization failed";
        return sol;
      }
      Eigen::VectorXd x1, y1, z1;
      K.solve(-P.c, P.b, P.h, x1, y1, z1);
      const double denom = -kappa / tau + P.c.dot(x1) + (P.p > 0 ? P.b.dot(y1) : 0.0) + P.h.dot(z1);

      struct Direction {
        Eigen::VectorXd dx, dy, dz, ds_tilde, dz_tilde;
        double dtau = 0.0, dkappa = 0.0;
      };
      auto direction = [&](double eta, const Eigen::VectorXd& dsz, double dtk) {
        Direction d;
        const Eigen::VectorXd ds0 = ipm::jordan_divide(blocks, lambda, W, dsz);
        Eigen::VectorXd bz = -eta * R3 - W.apply(Op::Wt, ds0);
        Eigen::VectorXd x0, y0, z0;
        K.solve(-eta * R1, eta * R2, bz, x0, y0, z0);
        const double num = -eta * R4 - dtk / tau - P.c.dot(x0) - (P.p > 0 ? P.b.dot(y0) : 0.0) - P.h.dot(z0);
        d.dtau = num / denom;
        d.dx = x0 + d.dtau * x1;
        d.dy = P.p > 0 ? Eigen::VectorXd(y0 + d.dtau * y1) : Eigen::VectorXd(0);
        d.dz = z0 + d.dtau * z1;
        d.dz_tilde = W.apply(Op::W, d.dz);
        d.ds_tilde = ds0 - d.dz_tilde;
        d.dkappa = (dtk - kappa * d.dtau) / tau;
        return d;
      };
      auto step_to_boundary = [&](const Direction& d) {
        double a = std::min(ipm::max_step(blocks, W, lambda, d.ds_tilde), ipm::max_step(blocks, W, lambda, d.dz_tilde));
        if (d.dtau < 0.0) a = std::min(a, -tau / d.dtau);
        if (d.dkappa < 0.0) a = std::min(a, -kappa / d.dkappa);
        return a;
      };

      const Eigen::VectorXd lsq = ipm::jordan_product(blocks, lambda, lambda);
      const Direction aff = direction(1.0, -lsq, -tau * kappa);
      const double alpha_aff = std::min(1.0, step_to_boundary(aff));
      const double sigma = std::pow(std::clamp(1.0 - alpha_aff, 0.0, 1.0), 3);

      const Eigen::VectorXd dsz = -lsq - ipm::jordan_product(blocks, aff.ds_tilde, aff.dz_tilde) + sigma * mu * e;
      const double dtk = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
      const Direction dir = direction(1.0 - sigma, dsz, dtk);
      if (!dir.dx.allFinite() || !std::isfinite(dir.dtau)) {
        sol.status = SolveStatus::numerical;
        sol.diagnostic = "non-finite search direction";
        return sol;
      }
      const double alpha = std::min(1.0, opts_.step * step_to_boundary(dir));

      const Eigen::VectorXd s_scaled = lambda + alpha * dir.ds_tilde;
      const Eigen::VectorXd z_scaled = lambda + alpha * dir.dz_tilde;
      x += alpha * dir.dx;
      if (P.p > 0) y += alpha * dir.dy;
      z += alpha * dir.dz;
      s += alpha * W.apply(Op::Wt, dir.ds_tilde);
      tau += alpha * dir.dtau;
      kappa += alpha * dir.dkappa;
      if (!W.update(s, z, s_scaled, z_scaled, lambda)) {
        sol.status = SolveStatus::numerical;
        sol.diagnostic = "iterate left the cone interior";
        return sol;
      }
    }
  }

  static std::string dominant_labels(const Problem& P, const Eigen::VectorXd& z) {
    std::vector<std::pair<double, std::string>> w;
    double total = 0.0;
    for (std::size_t k = 0; k < P.blocks.size(); ++k) {
      const double v = z.segment(P.blocks[k].offset, P.blocks[k].dim).norm();
      total += v;
      w.emplace_back(v, P.labels[k].empty() ? std::string("cone#") + std::to_string(k) : P.labels[k]);
    }
    // eq multipliers are not included; cone shares are what identify the family
    std::stable_sort(w.begin(), w.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::ostringstream os;
    int shown = 0;
    for (const auto& [v, l] : w) {
      if (v < 0.05 * total || shown >= 4) break;
      os << (shown ? ", " : "") << l;
      ++shown;
    }
    return shown ? os.str() : std::string("(none)");
  }

  static void map_back(const ConicProgram& prog, const Problem&, Solution& sol) {
    if (sol.status == SolveStatus::optimal || sol.status == SolveStatus::max_iter ||
        sol.status == SolveStatus::numerical) {
      if (sol.x.size() == prog.num_variables()) {
        sol.primal_objective += prog.objective_offset;
        sol.dual_objective += prog.objective_offset;
      }
    }
  }

  SolverOptions opts_;
};

inline Solution solve(const ConicProgram& prog, const SolverOptions& opts = {}) {
  return InteriorPointSolver(opts).solve(prog);
}

}  // namespace inertid

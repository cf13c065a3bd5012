#pragma once

// Physical-consistency conditions on inertial parameters.
//
//   semi-consistent     I(pi) > 0  (m > 0 and CoM inertia > 0)
//   fully consistent    J(pi) > 0  (m > 0 and density covariance > 0)
//   S-realizable        J(pi) > 0 and Tr(J(pi) Q) >= 0 for an ellipsoid S
//
// PSD verdicts are scale aware: "PSD" means lambda_min >= -1e-10 max(1, lambda_max)
// and "PD" means lambda_min >= 1e-10 max(1, lambda_max), unless an explicit
// threshold is passed.

#include "inertid/conic.hpp"
#include "inertid/interior_point.hpp"
#include "inertid/spatial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace inertid {

constexpr double kPsdRelTol = 1e-10;

inline double default_threshold(double lambda_max) { return kPsdRelTol * std::max(1.0, std::abs(lambda_max)); }

struct EigenRange {
  double min = 0.0;
  double max = 0.0;
};

template <typename Derived>
EigenRange eigen_range(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(m), Eigen::EigenvaluesOnly);
  return {es.eigenvalues()[0], es.eigenvalues()[es.eigenvalues().size() - 1]};
}

inline bool psd_verdict(const EigenRange& r) { return r.min >= -default_threshold(r.max); }
inline bool pd_verdict(const EigenRange& r) { return r.min >= default_threshold(r.max); }

struct DefiniteCheck {
  bool holds = false;
  double min_eig = 0.0;
  double max_eig = 0.0;
};

/// lambda_min(I(pi)) > tol.
inline DefiniteCheck check_semi_consistent(const InertialParams& p, std::optional<double> tol = std::nullopt) {
  const EigenRange r = eigen_range(spatial_inertia(p).matrix);
  return {tol ? r.min > *tol : r.min >= default_threshold(r.max), r.min, r.max};
}

/// lambda_min(J(pi)) > tol.
inline DefiniteCheck check_fully_consistent(const InertialParams& p, std::optional<double> tol = std::nullopt) {
  const EigenRange r = eigen_range(pseudo_inertia(p).matrix);
  return {tol ? r.min > *tol : r.min >= default_threshold(r.max), r.min, r.max};
}

/// Principal moments (ascending) of the rotational inertia about the CoM and
/// the triangle margins J1 + J2 + J3 - 2 Ji. Requires m > 0.
struct PrincipalMoments {
  Vec3 moments = Vec3::Zero();
  Mat3 axes = Mat3::Identity();
  Vec3 triangle_margins = Vec3::Zero();
};

inline PrincipalMoments principal_moments(const InertialParams& p) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(p.inertia_about_com());
  PrincipalMoments pm;
  pm.moments = es.eigenvalues();
  pm.axes = es.eigenvectors();
  const double sum = pm.moments.sum();
  for (int i = 0; i < 3; ++i) pm.triangle_margins[i] = sum - 2.0 * pm.moments[i];
  return pm;
}

/// Consistency decided through m > 0, I_C > 0 and the strict triangle
/// inequalities on the principal moments of I_C. Independent of J(pi).
/// `margin` is the smallest of the normalized margins that was tested.
struct TriangleCheck {
  bool holds = false;
  double margin = 0.0;
};

inline TriangleCheck check_consistent_by_triangle(const InertialParams& p, double rel_tol = kPsdRelTol) {
  TriangleCheck out;
  if (!(p.mass > 0.0)) {
    out.margin = p.mass;
    return out;
  }
  const PrincipalMoments pm = principal_moments(p);
  const double scale = std::max({1.0, p.mass, pm.moments.cwiseAbs().maxCoeff()});
  const double m_margin = p.mass / scale;
  const double i_margin = pm.moments.minCoeff() / scale;
  const double t_margin = pm.triangle_margins.minCoeff() / scale;
  out.margin = std::min({m_margin, i_margin, t_margin});
  out.holds = out.margin > rel_tol;
  return out;
}

// ---------------------------------------------------------------------------
// Linear maps pi -> matrix used to build LMIs. Column k is svec(M(e_k)).
// ---------------------------------------------------------------------------

/// 10 x 10: svec(J(pi)) = map * pi.
inline Eigen::MatrixXd pseudo_inertia_map() {
  Eigen::MatrixXd M(10, 10);
  for (int k = 0; k < 10; ++k) M.col(k) = svec(pseudo_inertia(InertialParams::from_vector(Vec10::Unit(k))).matrix);
  return M;
}

/// 21 x 10: svec(I(pi)) = map * pi.
inline Eigen::MatrixXd spatial_inertia_map() {
  Eigen::MatrixXd M(21, 10);
  for (int k = 0; k < 10; ++k) M.col(k) = svec(spatial_inertia(InertialParams::from_vector(Vec10::Unit(k))).matrix);
  return M;
}

// ---------------------------------------------------------------------------
// Ellipsoids
// ---------------------------------------------------------------------------

/// { x : (x - center)^T shape^{-1} (x - center) <= 1 }.
struct Ellipsoid {
  Vec3 center = Vec3::Zero();
  Mat3 shape = Mat3::Identity();

  static Ellipsoid from_semi_axes(const Vec3& center, const Vec3& semi_axes,
                                  const Mat3& rotation = Mat3::Identity()) {
    Ellipsoid e;
    e.center = center;
    e.shape = rotation * semi_axes.cwiseAbs2().asDiagonal() * rotation.transpose();
    return e;
  }
  static Ellipsoid sphere(const Vec3& center, double radius) {
    return from_semi_axes(center, Vec3::Constant(radius));
  }

  /// Throws if the shape is not symmetric positive definite.
  void validate() const {
    if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, shape.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("ellipsoid shape matrix is not symmetric");
    const EigenRange r = eigen_range(shape);
    if (!(r.min > 1e-12 * r.max) || !(r.max > 0.0))
      throw std::invalid_argument("ellipsoid shape matrix is not positive definite");
  }

  Vec3 semi_axes() const {
    Eigen::SelfAdjointEigenSolver<Mat3> es(shape, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  }

  /// (x - c)^T Q_s^{-1} (x - c); <= 1 inside.
  double normalized_radius_sq(const Vec3& x) const {
    const Vec3 d = x - center;
    return d.dot(shape.ldlt().solve(d));
  }
};

struct HomogeneousEllipsoid {
  Mat4 Q = Mat4::Zero();

  /// [x;1]^T Q [x;1]: positive inside, zero on the boundary.
  double form(const Vec3& x) const {
    Vec4 y;
    y << x, 1.0;
    return y.dot(Q * y);
  }
};

inline HomogeneousEllipsoid homogeneous_q(const Ellipsoid& e) {
  e.validate();
  const Mat3 Qi = e.shape.inverse();
  HomogeneousEllipsoid h;
  h.Q.topLeftCorner<3, 3>() = -Qi;
  h.Q.block<3, 1>(0, 3) = Qi * e.center;
  h.Q.block<1, 3>(3, 0) = (Qi * e.center).transpose();
  h.Q(3, 3) = 1.0 - e.center.dot(Qi * e.center);
  h.Q = 0.5 * (h.Q + h.Q.transpose()).eval();
  return h;
}

/// Row vector q with q^T pi = Tr(J(pi) Q).
inline Vec10 trace_functional(const HomogeneousEllipsoid& hq) {
  Vec10 q;
  for (int k = 0; k < 10; ++k) q[k] = (pseudo_inertia(InertialParams::from_vector(Vec10::Unit(k))).matrix * hq.Q).trace();
  return q;
}

/// C(pi) = [m, h^T - m c_s^T; h - m c_s, m Q_s].
inline Mat4 com_lmi_matrix(const InertialParams& p, const Ellipsoid& e) {
  Mat4 C;
  const Vec3 off = p.h - p.mass * e.center;
  C(0, 0) = p.mass;
  C.block<1, 3>(0, 1) = off.transpose();
  C.block<3, 1>(1, 0) = off;
  C.bottomRightCorner<3, 3>() = p.mass * e.shape;
  return C;
}

/// 10 x 10: svec(C(pi)) = map * pi for a fixed ellipsoid.
inline Eigen::MatrixXd com_lmi_map(const Ellipsoid& e) {
  Eigen::MatrixXd M(10, 10);
  for (int k = 0; k < 10; ++k) M.col(k) = svec(com_lmi_matrix(InertialParams::from_vector(Vec10::Unit(k)), e));
  return M;
}

struct ComLmiCheck {
  Mat4 matrix = Mat4::Zero();
  double min_eig = 0.0;
  bool feasible = false;
};

inline ComLmiCheck com_ellipsoid_lmi(const InertialParams& p, const Ellipsoid& e, std::optional<double> tol = std::nullopt) {
  ComLmiCheck out;
  out.matrix = com_lmi_matrix(p, e);
  const EigenRange r = eigen_range(out.matrix);
  out.min_eig = r.min;
  out.feasible = r.min >= -tol.value_or(default_threshold(r.max));
  return out;
}

struct CovarianceEllipsoid {
  Vec3 center = Vec3::Zero();
  Mat3 axes = Mat3::Identity();         ///< columns are unit principal axes
  Vec3 semi_axis_lengths = Vec3::Zero();  ///< sqrt(mu_i / m), ascending
};

/// Requires m > 0 and a density covariance that is PSD up to tolerance;
/// slightly negative eigenvalues within tolerance are reported as length 0.
inline CovarianceEllipsoid covariance_ellipsoid(const InertialParams& p) {
  if (!(p.mass > 0.0)) throw std::domain_error("covariance ellipsoid requires positive mass");
  const Mat3 sigma_c = second_moment_from_rot_inertia(p.inertia_about_com());
  Eigen::SelfAdjointEigenSolver<Mat3> es(sigma_c);
  const Vec3 mu = es.eigenvalues();
  if (mu[0] < -default_threshold(mu[2]))
    throw std::domain_error("density covariance is indefinite (triangle inequalities violated)");
  CovarianceEllipsoid ce;
  ce.center = p.h / p.mass;
  ce.axes = es.eigenvectors();
  ce.semi_axis_lengths = (mu.cwiseMax(0.0) / p.mass).cwiseSqrt();
  return ce;
}

struct RealizabilityVerdict {
  bool realizable = false;
  bool pseudo_inertia_pd = false;
  double min_eig_J = 0.0;
  double trace_value = 0.0;
  /// J is PSD but not PD, or the trace is zero within tolerance.
  bool boundary = false;
};

inline RealizabilityVerdict check_realizable_on_ellipsoid(const InertialParams& p, const HomogeneousEllipsoid& hq,
                                                          std::optional<double> tol = std::nullopt) {
  RealizabilityVerdict v;
  const Mat4 J = pseudo_inertia(p).matrix;
  const EigenRange r = eigen_range(J);
  const double t = tol.value_or(default_threshold(r.max));
  v.min_eig_J = r.min;
  v.pseudo_inertia_pd = r.min > t;
  v.trace_value = (J * hq.Q).trace();
  const double trace_tol = tol.value_or(default_threshold(J.cwiseAbs().maxCoeff() * hq.Q.cwiseAbs().maxCoeff()));
  const bool trace_ok = v.trace_value >= -trace_tol;
  v.realizable = v.pseudo_inertia_pd && trace_ok;
  v.boundary = (r.min >= -t && r.min <= t) || std::abs(v.trace_value) <= trace_tol;
  return v;
}

// ---------------------------------------------------------------------------
// Point-mass realizations
// ---------------------------------------------------------------------------

struct PointMass {
  double mass = 0.0;
  Vec3 position = Vec3::Zero();
};

struct PointMassSet {
  std::vector<PointMass> points;
};

inline InertialParams params_from_point_masses(const PointMassSet& pts) {
  double m = 0.0;
  Vec3 h = Vec3::Zero();
  Mat3 sigma = Mat3::Zero();
  for (const auto& pm : pts.points) {
    if (!(pm.mass > 0.0)) throw std::invalid_argument("point masses must be positive");
    m += pm.mass;
    h += pm.mass * pm.position;
    sigma += pm.mass * pm.position * pm.position.transpose();
  }
  InertialParams p;
  p.mass = m;
  p.h = h;
  p.I_bar = Sym3::from_matrix(rot_inertia_from_second_moment(sigma));
  return p;
}

class RealizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const std::array<Vec3, 4>& tetrahedron() {
  static const std::array<Vec3, 4> v = {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
  return v;
}

/// Largest normalized containment violation max_k (|u_k|^2 - 1) in the
/// ellipsoid metric.
inline double containment_violation(const PointMassSet& s, const Ellipsoid& e) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& pm : s.points) worst = std::max(worst, e.normalized_radius_sq(pm.position) - 1.0);
  return worst;
}

inline PointMassSet tetra_realization(double m, const Vec3& c, const Mat3& A) {
  PointMassSet s;
  for (const auto& v : tetrahedron()) s.points.push_back({0.25 * m, c + A * v});
  return s;
}

inline double relative_moment_error(const InertialParams& target, const InertialParams& got) {
  const Mat4 Jt = pseudo_inertia(target).matrix;
  const Mat4 Jg = pseudo_inertia(got).matrix;
  return (Jt - Jg).cwiseAbs().maxCoeff() / std::max(1e-300, Jt.cwiseAbs().maxCoeff());
}

/// Deterministic rotations covering SO(3): a product grid over ZYZ Euler
/// angles.
inline std::vector<Mat3> rotation_grid(int steps) {
  std::vector<Mat3> out;
  const double pi = 3.14159265358979323846;
  for (int a = 0; a < steps; ++a)
    for (int b = 0; b <= steps / 2; ++b)
      for (int g = 0; g < steps; ++g)
        out.push_back((Eigen::AngleAxisd(2 * pi * a / steps, Vec3::UnitZ()) *
                       Eigen::AngleAxisd(pi * b / (steps / 2), Vec3::UnitY()) *
                       Eigen::AngleAxisd(2 * pi * g / steps, Vec3::UnitZ()))
                          .toRotationMatrix());
  return out;
}

/// Moment-matching refinement in unit-ball coordinates u (x = c_s + L u).
/// Points are parameterized as u = y / sqrt(1 + |y|^2) so containment holds
/// by construction; masses are exp(a). Solves the 10 moment equations with
/// minimum-norm Levenberg-Marquardt steps.
inline std::optional<PointMassSet> refine_in_ellipsoid(const InertialParams& target, const Ellipsoid& e,
                                                       const PointMassSet& seed) {
  const Mat3 L = e.shape.llt().matrixL();
  const Mat3 Linv = L.inverse();
  // Target moments in ball coordinates, normalized by mass.
  Mat4 T = Mat4::Identity();
  T.topLeftCorner<3, 3>() = Linv;
  T.block<3, 1>(0, 3) = -Linv * e.center;
  const Mat4 Jb = T * pseudo_inertia(target).matrix * T.transpose() / target.mass;

  auto point_of = [](const Vec3& y) { return Vec3(y / std::sqrt(1.0 + y.squaredNorm())); };
  auto residual = [&](const Eigen::Matrix<double, 16, 1>& z) {
    Mat4 Jz = Mat4::Zero();
    for (int k = 0; k < 4; ++k) {
      const double w = std::exp(z[4 * k]);
      Vec4 u;
      u << point_of(z.segment<3>(4 * k + 1)), 1.0;
      Jz += w * u * u.transpose();
    }
    Eigen::Matrix<double, 10, 1> r;
    int idx = 0;
    for (int j = 0; j < 4; ++j)
      for (int i = j; i < 4; ++i) r[idx++] = Jz(i, j) - Jb(i, j);
    return r;
  };

  Eigen::Matrix<double, 16, 1> z;
  for (int k = 0; k < 4; ++k) {
    const auto& pm = seed.points[static_cast<std::size_t>(k)];
    Vec3 u = Linv * (pm.position - e.center);
    const double n = u.norm();
    if (n > 0.995) u *= 0.995 / n;
    z[4 * k] = std::log(pm.mass / target.mass);
    z.segment<3>(4 * k + 1) = u / std::sqrt(1.0 - u.squaredNorm());
  }

  double damping = 1e-3;
  auto r = residual(z);
  for (int it = 0; it < 400 && r.norm() > 1e-14; ++it) {
    Eigen::Matrix<double, 10, 16> Jac;
    for (int j = 0; j < 16; ++j) {
      const double hstep = 1e-7 * std::max(1.0, std::abs(z[j]));
      auto zp = z, zm = z;
      zp[j] += hstep;
      zm[j] -= hstep;
      Jac.col(j) = (residual(zp) - residual(zm)) / (2.0 * hstep);
    }
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      const Eigen::Matrix<double, 10, 10> M = Jac * Jac.transpose() + damping * Eigen::Matrix<double, 10, 10>::Identity();
      const Eigen::Matrix<double, 16, 1> dz = -Jac.transpose() * M.ldlt().solve(r);
      const auto zn = z + dz;
      const auto rn = residual(zn);
      if (rn.allFinite() && rn.norm() < r.norm()) {
        z = zn;
        r = rn;
        damping = std::max(1e-15, damping * 0.3);
        improved = true;
        break;
      }
      damping *= 10.0;
    }
    if (!improved) break;
  }
  if (!(r.norm() <= 1e-12)) return std::nullopt;

  PointMassSet out;
  for (int k = 0; k < 4; ++k) {
    const Vec3 u = point_of(z.segment<3>(4 * k + 1));
    out.points.push_back({target.mass * std::exp(z[4 * k]), Vec3(e.center + L * u)});
  }
  return out;
}

}  // namespace detail

/// Four positive point masses that reproduce (m, h, Sigma) of a strictly
/// consistent body. With an ellipsoid, points are placed inside it; failure
/// to find such a placement raises RealizationError.
inline PointMassSet four_point_realization(const InertialParams& p, const std::optional<Ellipsoid>& e = std::nullopt) {
  if (!check_fully_consistent(p).holds)
    throw RealizationError("parameters are not strictly physically consistent (J(pi) is not positive definite)");
  if (e) {
    e->validate();
    const auto verdict = check_realizable_on_ellipsoid(p, homogeneous_q(*e));
    if (!verdict.realizable)
      throw RealizationError("parameters are not density realizable on the given ellipsoid (Tr(J Q) = " +
                             std::to_string(verdict.trace_value) + ")");
  }
  const Vec3 c = p.h / p.mass;
  const Mat3 cov = second_moment_from_rot_inertia(p.inertia_about_com()) / p.mass;
  Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
  const Mat3 A = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  PointMassSet best = detail::tetra_realization(p.mass, c, A);
  if (!e) return best;
  const double tol = 1e-10;
  double best_violation = detail::containment_violation(best, *e);
  if (best_violation <= tol) return best;

  for (const Mat3& R : detail::rotation_grid(12)) {
    PointMassSet cand = detail::tetra_realization(p.mass, c, A * R);
    const double v = detail::containment_violation(cand, *e);
    if (v < best_violation) {
      best_violation = v;
      best = std::move(cand);
      if (v <= tol) return best;
    }
  }
  if (auto refined = detail::refine_in_ellipsoid(p, *e, best)) {
    if (detail::containment_violation(*refined, *e) <= tol &&
        detail::relative_moment_error(p, params_from_point_masses(*refined)) <= 1e-10)
      return *refined;
  }
  throw RealizationError("could not place four point masses inside the ellipsoid (closest placement exceeds it by " +
                         std::to_string(best_violation) + " in normalized radius squared)");
}

// ---------------------------------------------------------------------------
// Union of ellipsoids
// ---------------------------------------------------------------------------

struct UnionVerdict {
  bool realizable = false;
  std::vector<InertialParams> parts;  ///< one per ellipsoid when realizable
  std::string diagnostic;
};

/// Splits pi = sum_j pi_j with each pi_j realizable on ellipsoid j, solved as
/// a semidefinite feasibility problem with a minimum-norm objective. Parts
/// are only required to satisfy J(pi_j) PSD (a part may carry no mass); the
/// total must be strictly consistent.
inline UnionVerdict check_realizable_on_union(const InertialParams& p, const std::vector<Ellipsoid>& ellipsoids,
                                              const SolverOptions& opts = {}) {
  if (ellipsoids.empty()) throw std::invalid_argument("ellipsoid list is empty");
  UnionVerdict out;
  if (ellipsoids.size() == 1) {
    const auto v = check_realizable_on_ellipsoid(p, homogeneous_q(ellipsoids.front()));
    out.realizable = v.realizable;
    if (v.realizable) out.parts.push_back(p);
    else out.diagnostic = "not realizable on the ellipsoid";
    return out;
  }
  if (!check_fully_consistent(p).holds) {
    out.diagnostic = "parameters are not strictly physically consistent";
    return out;
  }
  const int L = static_cast<int>(ellipsoids.size());
  // Work in units where J(pi) has unit scale.
  const double scale = std::max(1e-300, pseudo_inertia(p).matrix.cwiseAbs().maxCoeff());
  const Vec10 target = p.to_vector() / scale;

  ConicProgram prog;
  const int t_off = prog.add_block("t", 1);
  std::vector<int> offs;
  for (int j = 0; j < L; ++j) offs.push_back(prog.add_block("pi_" + std::to_string(j), 10));
  const int n = prog.num_variables();
  prog.objective()[t_off] = 1.0;

  Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(10, n);
  for (int j = 0; j < L; ++j) Aeq.middleCols(offs[j], 10).setIdentity();
  prog.add_equalities(Aeq, target);

  const Eigen::MatrixXd Jmap = pseudo_inertia_map();
  for (int j = 0; j < L; ++j) {
    const auto& e = ellipsoids[static_cast<std::size_t>(j)];
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(10, n);
    F.middleCols(offs[j], 10) = Jmap;
    prog.add_psd(4, F, Eigen::VectorXd::Zero(10), "pseudo_inertia[" + std::to_string(j) + "]");
    Eigen::MatrixXd Ft = Eigen::MatrixXd::Zero(1, n);
    Ft.block(0, offs[j], 1, 10) = trace_functional(homogeneous_q(e)).transpose();
    prog.add_nonnegative(Ft, Eigen::VectorXd::Zero(1), "ellipsoid_trace[" + std::to_string(j) + "]");
  }
  Eigen::MatrixXd Fn = Eigen::MatrixXd::Zero(1 + 10 * L, n);
  Fn(0, t_off) = 1.0;
  Fn.bottomRightCorner(10 * L, 10 * L).setIdentity();
  prog.add_second_order(Fn, Eigen::VectorXd::Zero(1 + 10 * L), "split_norm");

  const Solution sol = solve(prog, opts);
  if (sol.status == SolveStatus::infeasible) {
    out.diagnostic = "not realizable on the union (" + sol.diagnostic + ")";
    return out;
  }
  if (sol.status != SolveStatus::optimal) {
    out.diagnostic = std::string("solver did not converge: ") + status_name(sol.status) + " " + sol.diagnostic;
    return out;
  }
  Vec10 sum = Vec10::Zero();
  for (int j = 0; j < L; ++j) {
    const Vec10 part = sol.x.segment<10>(offs[j]) * scale;
    sum += part;
    out.parts.push_back(InertialParams::from_vector(part));
  }
  // Verify each part independently of the solver.
  const double part_tol = 1e-7 * scale;
  for (int j = 0; j < L; ++j) {
    const auto& part = out.parts[static_cast<std::size_t>(j)];
    const EigenRange r = eigen_range(pseudo_inertia(part).matrix);
    const double tr = (pseudo_inertia(part).matrix * homogeneous_q(ellipsoids[static_cast<std::size_t>(j)]).Q).trace();
    if (r.min < -part_tol || tr < -part_tol) {
      out.diagnostic = "solver split failed verification on ellipsoid " + std::to_string(j);
      out.parts.clear();
      return out;
    }
  }
  if ((sum - p.to_vector()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, scale)) {
    out.diagnostic = "solver split does not reproduce the parameters";
    out.parts.clear();
    return out;
  }
  out.realizable = true;
  return out;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct EllipsoidReport {
  std::string label;
  double com_lmi_min_eig = 0.0;
  bool com_inside = false;
  double trace_value = 0.0;
  bool realizable = false;
};

struct ConsistencyReport {
  bool semi_consistent = false;
  bool fully_consistent = false;
  double min_eig_I = 0.0;
  double min_eig_J = 0.0;
  /// J1 + J2 + J3 - 2 Ji on the principal CoM moments; NaN when m <= 0.
  Vec3 triangle_margins = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
  std::optional<CovarianceEllipsoid> covariance_ellipsoid;
  std::vector<EllipsoidReport> ellipsoids;
};

inline ConsistencyReport make_consistency_report(const InertialParams& p,
                                                 const std::vector<std::pair<std::string, Ellipsoid>>& ellipsoids = {}) {
  ConsistencyReport r;
  const auto semi = check_semi_consistent(p);
  const auto full = check_fully_consistent(p);
  r.semi_consistent = semi.holds;
  r.fully_consistent = full.holds;
  r.min_eig_I = semi.min_eig;
  r.min_eig_J = full.min_eig;
  if (p.mass > 0.0) {
    r.triangle_margins = principal_moments(p).triangle_margins;
    try {
      r.covariance_ellipsoid = covariance_ellipsoid(p);
    } catch (const std::domain_error&) {
    }
  }
  for (const auto& [label, e] : ellipsoids) {
    EllipsoidReport er;
    er.label = label;
    const auto com = com_ellipsoid_lmi(p, e);
    er.com_lmi_min_eig = com.min_eig;
    er.com_inside = com.feasible && p.mass > 0.0;
    const auto v = check_realizable_on_ellipsoid(p, homogeneous_q(e));
    er.trace_value = v.trace_value;
    er.realizable = v.realizable;
    r.ellipsoids.push_back(er);
  }
  return r;
}

}  // namespace inertid

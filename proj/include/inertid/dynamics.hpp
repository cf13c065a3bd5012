#pragma once

// Recursive Newton-Euler inverse dynamics and the inertial-parameter
// regressor for fixed-base trees with geared rotors. Gravity enters as an
// upward acceleration of the base.

#include "inertid/error.hpp"
#include "inertid/model.hpp"
#include "inertid/spatial.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace inertid {

constexpr double kDefaultDeadband = 1e-3;

struct TrajectorySample {
  double t = 0.0;
  Eigen::VectorXd q, qd, qdd, tau;
};

using TrajectoryDataset = std::vector<TrajectorySample>;

struct FrictionParams {
  Eigen::VectorXd viscous;  ///< B, one entry per joint
  Eigen::VectorXd coulomb;  ///< B_c, one entry per joint

  static FrictionParams zero(int nj) { return {Eigen::VectorXd::Zero(nj), Eigen::VectorXd::Zero(nj)}; }
};

struct ParamVector {
  Eigen::VectorXd pi;  ///< 10 n_b stacked body parameters
  FrictionParams friction;

  InertialParams body(int i) const { return InertialParams::from_vector(pi.segment<10>(10 * i)); }
  int num_bodies() const { return static_cast<int>(pi.size() / 10); }
};

inline void check_state(const KinematicModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                        const Eigen::VectorXd& qdd) {
  const auto nj = model.num_joints();
  if (q.size() != nj || qd.size() != nj || qdd.size() != nj)
    throw DataError("state dimension mismatch: model has " + std::to_string(nj) + " joints");
}

namespace detail {

struct Pass {
  std::vector<Mat6> X;  ///< parent -> body motion transforms
  std::vector<Vec6> S, v, a;
  std::vector<double> rate;
};

inline Pass forward_pass(const KinematicModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                         const Eigen::VectorXd& qdd, bool with_gravity) {
  const std::size_t nb = model.bodies.size();
  Pass p;
  p.X.resize(nb);
  p.S.resize(nb);
  p.v.resize(nb);
  p.a.resize(nb);
  p.rate.resize(nb);
  Vec6 a0 = Vec6::Zero();
  if (with_gravity) a0.tail<3>() = -model.gravity;
  for (std::size_t i = 0; i < nb; ++i) {
    const Body& b = model.bodies[i];
    p.X[i] = body_to_parent(b, q).motion_to_child();
    p.S[i] << b.axis, Vec3::Zero();
    const double r = b.gear_ratio;
    p.rate[i] = r;
    const Vec6 vJ = p.S[i] * (r * qd[b.joint]);
    const Vec6 vp = b.parent < 0 ? Vec6::Zero() : p.v[static_cast<std::size_t>(b.parent)];
    const Vec6 ap = b.parent < 0 ? a0 : p.a[static_cast<std::size_t>(b.parent)];
    p.v[i] = p.X[i] * vp + vJ;
    p.a[i] = p.X[i] * ap + p.S[i] * (r * qdd[b.joint]) + motion_cross(p.v[i]) * vJ;
  }
  return p;
}

}  // namespace detail

/// Generalized forces for the tree with stacked parameters pi (10 n_b).
inline Eigen::VectorXd inverse_dynamics(const KinematicModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                                        const Eigen::VectorXd& qdd, const Eigen::VectorXd& pi, bool with_gravity = true) {
  check_state(model, q, qd, qdd);
  if (pi.size() != model.num_params()) throw DataError("parameter vector must have 10 entries per body");
  const std::size_t nb = model.bodies.size();
  const detail::Pass p = detail::forward_pass(model, q, qd, qdd, with_gravity);
  std::vector<Vec6> f(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const Mat6 I = spatial_inertia(InertialParams::from_vector(pi.segment<10>(10 * static_cast<Eigen::Index>(i)))).matrix;
    f[i] = I * p.a[i] + force_cross(p.v[i]) * (I * p.v[i]);
  }
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(model.num_joints());
  for (std::size_t k = nb; k-- > 0;) {
    const Body& b = model.bodies[k];
    tau[b.joint] += p.rate[k] * p.S[k].dot(f[k]);
    if (b.parent >= 0) f[static_cast<std::size_t>(b.parent)] += p.X[k].transpose() * f[k];
  }
  return tau;
}

/// 6 x 10 matrix A with I(pi) a + v x* I(pi) v = A pi.
inline Eigen::Matrix<double, 6, 10> body_regressor(const Vec6& v, const Vec6& a) {
  const SpatialVelocity w = SpatialVelocity::from_vector(v);
  const SpatialVelocity accel = SpatialVelocity::from_vector(a);
  const Vec3& om = w.angular;
  const Vec3& vl = w.linear;
  const Vec3& al = accel.linear;
  const Vec3& dw = accel.angular;
  // Rotational inertia acting on a vector u, as a linear map of its six entries.
  auto inertia_cols = [](const Vec3& u) {
    Eigen::Matrix<double, 3, 6> L;
    L << u.x(), u.y(), u.z(), 0, 0, 0,
         0, u.x(), 0, u.y(), u.z(), 0,
         0, 0, u.x(), 0, u.y(), u.z();
    return L;
  };
  Eigen::Matrix<double, 6, 10> A;
  // n = I_bar dw + om x I_bar om + h x (al + om x vl)
  // f = m (al + om x vl) + (S(dw) + S(om)^2) h
  const Vec3 lin = al + om.cross(vl);
  A.block<3, 1>(0, 0).setZero();
  A.block<3, 3>(0, 1) = -skew(lin);
  A.block<3, 6>(0, 4) = inertia_cols(dw) + skew(om) * inertia_cols(om);
  A.block<3, 1>(3, 0) = lin;
  A.block<3, 3>(3, 1) = skew(dw) + skew(om) * skew(om);
  A.block<3, 6>(3, 4).setZero();
  return A;
}

/// n_j x 10 n_b regressor assembled by one recursive pass.
inline Eigen::MatrixXd regressor(const KinematicModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                                 const Eigen::VectorXd& qdd, bool with_gravity = true) {
  check_state(model, q, qd, qdd);
  const int nb = model.num_bodies();
  const detail::Pass p = detail::forward_pass(model, q, qd, qdd, with_gravity);
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(model.num_joints(), 10 * nb);
  for (int i = 0; i < nb; ++i) {
    Eigen::Matrix<double, 6, 10> F = body_regressor(p.v[static_cast<std::size_t>(i)], p.a[static_cast<std::size_t>(i)]);
    for (int k = i; k >= 0; k = model.bodies[static_cast<std::size_t>(k)].parent) {
      const auto ks = static_cast<std::size_t>(k);
      Y.block(model.bodies[ks].joint, 10 * i, 1, 10) += p.rate[ks] * p.S[ks].transpose() * F;
      F = p.X[ks].transpose() * F;
    }
  }
  return Y;
}

/// Column k is inverse_dynamics with the k-th unit parameter vector.
inline Eigen::MatrixXd regressor_columnwise(const KinematicModel& model, const Eigen::VectorXd& q,
                                            const Eigen::VectorXd& qd, const Eigen::VectorXd& qdd,
                                            bool with_gravity = true) {
  Eigen::MatrixXd Y(model.num_joints(), model.num_params());
  for (int k = 0; k < model.num_params(); ++k)
    Y.col(k) = inverse_dynamics(model, q, qd, qdd, Eigen::VectorXd::Unit(model.num_params(), k), with_gravity);
  return Y;
}

/// sign(x) outside the deadband |x| <= eps, else 0.
inline double sign_deadband(double x, double eps) {
  if (x > eps) return 1.0;
  if (x < -eps) return -1.0;
  return 0.0;
}

struct FrictionColumns {
  Eigen::MatrixXd viscous;  ///< diag(qd)
  Eigen::MatrixXd coulomb;  ///< diag(sign_eps(qd))
};

inline FrictionColumns friction_columns(const Eigen::VectorXd& qd, double eps = kDefaultDeadband) {
  if (eps < 0.0) throw std::invalid_argument("deadband must be nonnegative");
  FrictionColumns fc;
  fc.viscous = qd.asDiagonal();
  Eigen::VectorXd s(qd.size());
  for (Eigen::Index i = 0; i < qd.size(); ++i) s[i] = sign_deadband(qd[i], eps);
  fc.coulomb = s.asDiagonal();
  return fc;
}

/// Y pi + B qd + B_c sign_eps(qd).
inline Eigen::VectorXd model_torque(const KinematicModel& model, const ParamVector& params, const TrajectorySample& s,
                                    double eps = kDefaultDeadband) {
  Eigen::VectorXd tau = inverse_dynamics(model, s.q, s.qd, s.qdd, params.pi);
  const FrictionColumns fc = friction_columns(s.qd, eps);
  if (params.friction.viscous.size()) tau += fc.viscous * params.friction.viscous;
  if (params.friction.coulomb.size()) tau += fc.coulomb * params.friction.coulomb;
  return tau;
}

}  // namespace inertid

#pragma once

// Spatial (6D) and homogeneous (4x4) rigid-body algebra plus the inertial
// parameter representations used throughout the library.
//
// Conventions:
//   * spatial motion vectors are [omega; v], force vectors are [n; f]
//   * InertialParams are referenced to the body frame origin
//   * RigidTransform{R, p} maps child coordinates to parent coordinates,
//     x_parent = R * x_child + p

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>

namespace inertid {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec10 = Eigen::Matrix<double, 10, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

/// Symmetric 3x3 matrix stored as its six unique entries
/// [xx, xy, xz, yy, yz, zz]. Rehydration always yields an exactly
/// symmetric matrix.
class Sym3 {
 public:
  Sym3() { e_.fill(0.0); }
  Sym3(double xx, double xy, double xz, double yy, double yz, double zz)
      : e_{xx, xy, xz, yy, yz, zz} {}

  /// Takes the upper triangle; the lower triangle is ignored.
  static Sym3 from_matrix(const Mat3& m) {
    return Sym3(m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2), m(2, 2));
  }
  static Sym3 diagonal(double x, double y, double z) { return Sym3(x, 0, 0, y, 0, z); }

  Mat3 matrix() const {
    Mat3 m;
    m << e_[0], e_[1], e_[2],
         e_[1], e_[3], e_[4],
         e_[2], e_[4], e_[5];
    return m;
  }

  double trace() const { return e_[0] + e_[3] + e_[5]; }
  double operator[](std::size_t i) const { return e_[i]; }
  double& operator[](std::size_t i) { return e_[i]; }

  bool operator==(const Sym3&) const = default;

 private:
  std::array<double, 6> e_;
};

/// Ten inertial parameters of one body: mass, first mass moment h = m c and
/// rotational inertia about the body frame origin. Any vector in R^10 is
/// representable, physically consistent or not.
struct InertialParams {
  double mass = 0.0;
  Vec3 h = Vec3::Zero();
  Sym3 I_bar;

  static InertialParams from_vector(const Vec10& v) {
    InertialParams p;
    p.mass = v[0];
    p.h = v.segment<3>(1);
    p.I_bar = Sym3(v[4], v[5], v[6], v[7], v[8], v[9]);
    return p;
  }

  /// Flattened order [m, hx, hy, hz, Ixx, Ixy, Ixz, Iyy, Iyz, Izz].
  Vec10 to_vector() const {
    Vec10 v;
    v << mass, h.x(), h.y(), h.z(), I_bar[0], I_bar[1], I_bar[2], I_bar[3], I_bar[4], I_bar[5];
    return v;
  }

  /// Center of mass; requires mass > 0.
  Vec3 com() const {
    if (!(mass > 0.0)) throw std::domain_error("center of mass undefined for non-positive mass");
    return h / mass;
  }

  /// Rotational inertia about the center of mass; requires mass > 0.
  Mat3 inertia_about_com() const {
    const Vec3 c = com();
    return I_bar.matrix() - mass * skew(c) * skew(c).transpose();
  }

  bool operator==(const InertialParams& o) const {
    return mass == o.mass && h == o.h && I_bar == o.I_bar;
  }

  friend InertialParams operator+(const InertialParams& a, const InertialParams& b) {
    return from_vector(a.to_vector() + b.to_vector());
  }
  friend InertialParams operator*(double s, const InertialParams& a) {
    return from_vector(s * a.to_vector());
  }
};

/// 6x6 body inertia [I_bar, S(h); S(h)^T, m 1].
struct SpatialInertia {
  Mat6 matrix = Mat6::Zero();
};

/// 4x4 pseudo-inertia [Sigma, h; h^T, m] holding all density moments up to
/// second order.
struct PseudoInertia {
  Mat4 matrix = Mat4::Zero();

  Mat3 second_moment() const { return matrix.topLeftCorner<3, 3>(); }
  Vec3 first_moment() const { return matrix.block<3, 1>(0, 3); }
  double mass() const { return matrix(3, 3); }
};

struct SpatialVelocity {
  Vec3 angular = Vec3::Zero();
  Vec3 linear = Vec3::Zero();

  Vec6 vector() const {
    Vec6 v;
    v << angular, linear;
    return v;
  }
  static SpatialVelocity from_vector(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }

  /// Element of se(3): [S(omega), v; 0, 0].
  Mat4 homogeneous() const {
    Mat4 V = Mat4::Zero();
    V.topLeftCorner<3, 3>() = skew(angular);
    V.block<3, 1>(0, 3) = linear;
    return V;
  }
};

struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  /// Rotation by angle (rad) about a unit axis, no translation.
  static RigidTransform rotation_about(const Vec3& axis, double angle) {
    RigidTransform t;
    t.rotation = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
    return t;
  }

  /// Roll-pitch-yaw (fixed-axis x, then y, then z), i.e. R = Rz * Ry * Rx.
  static RigidTransform from_rpy(const Vec3& rpy, const Vec3& xyz) {
    RigidTransform t;
    t.rotation = (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) *
                  Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
                  Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
                     .toRotationMatrix();
    t.translation = xyz;
    return t;
  }

  Mat4 homogeneous() const {
    Mat4 T = Mat4::Identity();
    T.topLeftCorner<3, 3>() = rotation;
    T.block<3, 1>(0, 3) = translation;
    return T;
  }

  RigidTransform inverse() const {
    return {rotation.transpose(), -rotation.transpose() * translation};
  }

  /// (a * b) applies b first: x -> a(b(x)).
  friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
    return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
  }

  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }

  /// Spatial motion transform from parent coordinates to child coordinates,
  /// [E, 0; -E S(p), E] with E = R^T.
  Mat6 motion_to_child() const {
    const Mat3 E = rotation.transpose();
    Mat6 X = Mat6::Zero();
    X.topLeftCorner<3, 3>() = E;
    X.bottomRightCorner<3, 3>() = E;
    X.bottomLeftCorner<3, 3>() = -E * skew(translation);
    return X;
  }
};

inline SpatialInertia spatial_inertia(const InertialParams& p) {
  SpatialInertia si;
  si.matrix.topLeftCorner<3, 3>() = p.I_bar.matrix();
  si.matrix.topRightCorner<3, 3>() = skew(p.h);
  si.matrix.bottomLeftCorner<3, 3>() = skew(p.h).transpose();
  si.matrix.bottomRightCorner<3, 3>() = p.mass * Mat3::Identity();
  return si;
}

/// Sigma = 1/2 Tr(I) 1 - I. Also maps CoM inertia to density covariance.
inline Mat3 second_moment_from_rot_inertia(const Mat3& I) {
  return 0.5 * I.trace() * Mat3::Identity() - I;
}

/// I = Tr(Sigma) 1 - Sigma.
inline Mat3 rot_inertia_from_second_moment(const Mat3& sigma) {
  return sigma.trace() * Mat3::Identity() - sigma;
}

inline PseudoInertia pseudo_inertia(const InertialParams& p) {
  PseudoInertia J;
  J.matrix.topLeftCorner<3, 3>() = second_moment_from_rot_inertia(p.I_bar.matrix());
  J.matrix.block<3, 1>(0, 3) = p.h;
  J.matrix.block<1, 3>(3, 0) = p.h.transpose();
  J.matrix(3, 3) = p.mass;
  return J;
}

/// Inverse of pseudo_inertia; reads the upper triangle.
inline InertialParams params_from_pseudo(const PseudoInertia& J) {
  InertialParams p;
  p.mass = J.matrix(3, 3);
  p.h = J.matrix.block<3, 1>(0, 3);
  const Mat3 sigma = Sym3::from_matrix(J.matrix.topLeftCorner<3, 3>()).matrix();
  p.I_bar = Sym3::from_matrix(rot_inertia_from_second_moment(sigma));
  return p;
}

enum class InertiaReference { origin, com };

/// Re-expresses the rotational inertia about the requested point while
/// keeping (m, h). With `com`, the returned I_bar is the inertia about the
/// center of mass; with `origin`, the input I_bar is taken as CoM-referenced
/// and shifted back to the frame origin.
inline InertialParams parallel_axis(const InertialParams& p, InertiaReference about) {
  if (!(p.mass > 0.0)) throw std::domain_error("parallel axis shift requires positive mass");
  const Vec3 c = p.h / p.mass;
  const Mat3 shift = p.mass * skew(c) * skew(c).transpose();
  InertialParams out = p;
  out.I_bar = Sym3::from_matrix(about == InertiaReference::com ? Mat3(p.I_bar.matrix() - shift)
                                                               : Mat3(p.I_bar.matrix() + shift));
  return out;
}

/// Builds origin-referenced parameters from mass, CoM and CoM inertia.
inline InertialParams params_from_com(double mass, const Vec3& com, const Mat3& I_com) {
  InertialParams p;
  p.mass = mass;
  p.h = mass * com;
  p.I_bar = Sym3::from_matrix(I_com + mass * skew(com) * skew(com).transpose());
  return p;
}

/// Parameters of the same body expressed in the frame T maps into, using the
/// congruence J' = T J T^T.
inline InertialParams transform_params(const RigidTransform& T, const InertialParams& p) {
  const Mat4 H = T.homogeneous();
  PseudoInertia J;
  J.matrix = H * pseudo_inertia(p).matrix * H.transpose();
  return params_from_pseudo(J);
}

enum class EnergyForm { spatial, trace };

inline double kinetic_energy(const InertialParams& p, const SpatialVelocity& v,
                             EnergyForm form = EnergyForm::spatial) {
  if (form == EnergyForm::spatial) {
    const Vec6 x = v.vector();
    return 0.5 * x.dot(spatial_inertia(p).matrix * x);
  }
  const Mat4 V = v.homogeneous();
  return 0.5 * (V * pseudo_inertia(p).matrix * V.transpose()).trace();
}

// Spatial cross products.
inline Mat6 motion_cross(const Vec6& v) {
  Mat6 X = Mat6::Zero();
  X.topLeftCorner<3, 3>() = skew(v.head<3>());
  X.bottomRightCorner<3, 3>() = skew(v.head<3>());
  X.bottomLeftCorner<3, 3>() = skew(v.tail<3>());
  return X;
}

inline Mat6 force_cross(const Vec6& v) { return -motion_cross(v).transpose(); }

}  // namespace inertid

#pragma once

// Fixed-base kinematic trees of revolute links and geared rotors.
//
// Every link adds one actuated joint, numbered in body order. A rotor is
// rigidly mounted on its parent body and spins about its own axis at
// gear_ratio times the rate of its driven joint.

#include "inertid/consistency.hpp"
#include "inertid/error.hpp"
#include "inertid/spatial.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace inertid {

enum class BodyKind { link, rotor };

inline const char* body_kind_name(BodyKind k) { return k == BodyKind::link ? "link" : "rotor"; }

struct Body {
  std::string name;
  BodyKind kind = BodyKind::link;
  int parent = -1;  ///< 0-based body index, -1 for the world
  RigidTransform mount;  ///< joint frame at q = 0 in parent coordinates
  std::optional<Vec3> rpy;  ///< kept for faithful serialization when given
  Vec3 axis = Vec3::UnitZ();
  double gear_ratio = 1.0;
  int joint = -1;  ///< joint that drives this body
  std::optional<InertialParams> params;
  std::optional<Ellipsoid> ellipsoid;
  std::optional<Ellipsoid> com_ellipsoid;
};

struct Joint {
  std::string name;
  int body = -1;  ///< the link that defines this joint
  bool viscous = true;
  bool coulomb = true;
};

class KinematicModel {
 public:
  std::string name;
  Vec3 gravity = Vec3(0, 0, -9.81);
  std::vector<Body> bodies;

  int num_bodies() const { return static_cast<int>(bodies.size()); }
  int num_joints() const { return static_cast<int>(joints_.size()); }
  int num_params() const { return 10 * num_bodies(); }
  const std::vector<Joint>& joints() const { return joints_; }
  std::vector<Joint>& joints() { return joints_; }

  int body_index(const std::string& n) const {
    for (int i = 0; i < num_bodies(); ++i)
      if (bodies[static_cast<std::size_t>(i)].name == n) return i;
    return -1;
  }

  /// Assigns joints to links in body order, keeping friction flags of
  /// existing joints. Rotor joint indices are left as given.
  void rebuild_joints() {
    std::vector<Joint> old = joints_;
    joints_.clear();
    for (int i = 0; i < num_bodies(); ++i) {
      auto& b = bodies[static_cast<std::size_t>(i)];
      if (b.kind != BodyKind::link) continue;
      b.joint = static_cast<int>(joints_.size());
      Joint j;
      j.name = b.name;
      j.body = i;
      if (b.joint >= 0 && b.joint < static_cast<int>(old.size())) {
        j.viscous = old[static_cast<std::size_t>(b.joint)].viscous;
        j.coulomb = old[static_cast<std::size_t>(b.joint)].coulomb;
      }
      joints_.push_back(j);
    }
  }

  /// All invariant violations; empty when the model is valid.
  std::vector<std::string> violations() const {
    std::vector<std::string> v;
    if (bodies.empty()) v.push_back("model has no bodies");
    if (!gravity.allFinite()) v.push_back("gravity must be finite");
    for (int i = 0; i < num_bodies(); ++i) {
      const auto& b = bodies[static_cast<std::size_t>(i)];
      const std::string tag = "body " + std::to_string(i + 1) + " (" + b.name + "): ";
      if (b.name.empty()) v.push_back(tag + "name is empty");
      for (int k = 0; k < i; ++k)
        if (bodies[static_cast<std::size_t>(k)].name == b.name && !b.name.empty())
          v.push_back(tag + "duplicate name");
      if (b.parent >= i) v.push_back(tag + "parent must precede the body (cycle or unsorted tree)");
      if (b.parent < -1) v.push_back(tag + "invalid parent index");
      if (!b.axis.allFinite() || std::abs(b.axis.norm() - 1.0) > 1e-10) v.push_back(tag + "joint axis is not unit norm");
      const Mat3& R = b.mount.rotation;
      if (!R.allFinite() || (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-12 ||
          std::abs(R.determinant() - 1.0) > 1e-12)
        v.push_back(tag + "mount rotation is not a proper rotation");
      if (!b.mount.translation.allFinite()) v.push_back(tag + "mount translation is not finite");
      if (!(b.gear_ratio > 0.0) || !std::isfinite(b.gear_ratio)) v.push_back(tag + "gear_ratio must be positive");
      if (b.kind == BodyKind::link && b.gear_ratio != 1.0) v.push_back(tag + "links must have gear_ratio 1");
      if (b.kind == BodyKind::rotor && (b.joint < 0 || b.joint >= num_joints()))
        v.push_back(tag + "driven_joint does not refer to an existing joint");
      if (b.params && !b.params->to_vector().allFinite()) v.push_back(tag + "params are not finite");
      for (const auto* e : {&b.ellipsoid, &b.com_ellipsoid}) {
        if (!*e) continue;
        try {
          (*e)->validate();
        } catch (const std::exception& ex) {
          v.push_back(tag + ex.what());
        }
      }
    }
    return v;
  }

  void validate() const {
    auto v = violations();
    if (!v.empty()) throw ModelError(std::move(v));
  }

  bool has_all_params() const {
    for (const auto& b : bodies)
      if (!b.params) return false;
    return true;
  }

  /// Stacked per-body parameters; throws if any body lacks them.
  Eigen::VectorXd stacked_params() const {
    Eigen::VectorXd pi(num_params());
    for (int i = 0; i < num_bodies(); ++i) {
      const auto& b = bodies[static_cast<std::size_t>(i)];
      if (!b.params) throw ModelError("body " + b.name + " has no inertial parameters");
      pi.segment<10>(10 * i) = b.params->to_vector();
    }
    return pi;
  }

 private:
  std::vector<Joint> joints_;
};

struct BodyKinematics {
  RigidTransform to_parent;  ///< body frame in parent coordinates at q
  RigidTransform to_world;
  Vec6 motion_subspace = Vec6::Zero();  ///< [axis; 0] in body coordinates
};

/// Joint rotation of one body at configuration q.
inline RigidTransform body_to_parent(const Body& b, const Eigen::VectorXd& q) {
  return b.mount * RigidTransform::rotation_about(b.axis, b.gear_ratio * q[b.joint]);
}

inline std::vector<BodyKinematics> forward_kinematics(const KinematicModel& model, const Eigen::VectorXd& q) {
  if (q.size() != model.num_joints())
    throw DataError("q has " + std::to_string(q.size()) + " entries, model has " + std::to_string(model.num_joints()) +
                    " joints");
  std::vector<BodyKinematics> out(model.bodies.size());
  for (std::size_t i = 0; i < model.bodies.size(); ++i) {
    const Body& b = model.bodies[i];
    out[i].to_parent = body_to_parent(b, q);
    out[i].to_world = b.parent < 0 ? out[i].to_parent : out[static_cast<std::size_t>(b.parent)].to_world * out[i].to_parent;
    out[i].motion_subspace << b.axis, Vec3::Zero();
  }
  return out;
}

/// Body spatial velocities in body coordinates.
inline std::vector<SpatialVelocity> body_velocities(const KinematicModel& model, const Eigen::VectorXd& q,
                                                    const Eigen::VectorXd& qd) {
  const auto fk = forward_kinematics(model, q);
  if (qd.size() != model.num_joints()) throw DataError("qd dimension mismatch");
  std::vector<Vec6> v(model.bodies.size());
  std::vector<SpatialVelocity> out;
  for (std::size_t i = 0; i < model.bodies.size(); ++i) {
    const Body& b = model.bodies[i];
    const Vec6 vp = b.parent < 0 ? Vec6::Zero() : v[static_cast<std::size_t>(b.parent)];
    v[i] = fk[i].to_parent.motion_to_child() * vp + fk[i].motion_subspace * (b.gear_ratio * qd[b.joint]);
    out.push_back(SpatialVelocity::from_vector(v[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace json_io {

using nlohmann::json;

inline json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json mat3(const Mat3& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r) a.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return a;
}

inline Eigen::VectorXd read_vec(const json& j, int n, const std::string& what) {
  if (!j.is_array() || (n >= 0 && static_cast<int>(j.size()) != n))
    throw DataError(what + ": expected an array of " + std::to_string(n) + " numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw DataError(what + ": entry " + std::to_string(i) + " is not a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline Vec3 read_vec3(const json& j, const std::string& what) { return read_vec(j, 3, what); }

inline Mat3 read_mat3(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw DataError(what + ": expected a 3x3 array");
  Mat3 m;
  for (int r = 0; r < 3; ++r) m.row(r) = read_vec3(j[static_cast<std::size_t>(r)], what).transpose();
  return m;
}

inline json params(const InertialParams& p) { return vec(p.to_vector()); }

inline InertialParams read_params(const json& j, const std::string& what) {
  return InertialParams::from_vector(read_vec(j, 10, what));
}

inline json ellipsoid(const Ellipsoid& e) { return {{"center", vec(e.center)}, {"shape", mat3(e.shape)}}; }

/// {center, shape} or {center, semi_axes[, rotation]}.
inline Ellipsoid read_ellipsoid(const json& j, const std::string& what) {
  if (!j.is_object()) throw DataError(what + ": expected an object");
  const Vec3 c = j.contains("center") ? read_vec3(j["center"], what + ".center") : Vec3::Zero();
  if (j.contains("shape")) {
    Ellipsoid e;
    e.center = c;
    e.shape = read_mat3(j["shape"], what + ".shape");
    return e;
  }
  if (j.contains("semi_axes")) {
    const Mat3 R = j.contains("rotation") ? read_mat3(j["rotation"], what + ".rotation") : Mat3::Identity();
    return Ellipsoid::from_semi_axes(c, read_vec3(j["semi_axes"], what + ".semi_axes"), R);
  }
  throw DataError(what + ": needs either shape or semi_axes");
}

inline json point_masses(const PointMassSet& s) {
  json a = json::array();
  for (const auto& pm : s.points) a.push_back({{"mass", pm.mass}, {"position", vec(pm.position)}});
  return a;
}

inline json report(const ConsistencyReport& r) {
  json j;
  j["semi_consistent"] = r.semi_consistent;
  j["fully_consistent"] = r.fully_consistent;
  j["min_eig_I"] = r.min_eig_I;
  j["min_eig_J"] = r.min_eig_J;
  if (r.triangle_margins.allFinite()) j["triangle_margins"] = vec(r.triangle_margins);
  else j["triangle_margins"] = nullptr;
  if (r.covariance_ellipsoid) {
    const auto& ce = *r.covariance_ellipsoid;
    j["covariance_ellipsoid"] = {{"center", vec(ce.center)},
                                 {"axes", mat3(ce.axes.transpose())},
                                 {"semi_axis_lengths", vec(ce.semi_axis_lengths)}};
  } else {
    j["covariance_ellipsoid"] = nullptr;
  }
  json es = json::array();
  for (const auto& e : r.ellipsoids)
    es.push_back({{"label", e.label},
                  {"com_lmi_min_eig", e.com_lmi_min_eig},
                  {"com_inside", e.com_inside},
                  {"trace_value", e.trace_value},
                  {"realizable", e.realizable}});
  j["ellipsoids"] = es;
  return j;
}

}  // namespace json_io

inline nlohmann::json model_to_json(const KinematicModel& m) {
  using nlohmann::json;
  using namespace json_io;
  json j;
  j["format"] = 1;
  j["name"] = m.name;
  j["gravity"] = vec(m.gravity);
  json bodies = json::array();
  for (const auto& b : m.bodies) {
    json jb;
    jb["name"] = b.name;
    jb["kind"] = body_kind_name(b.kind);
    jb["parent"] = b.parent + 1;
    jb["xyz"] = vec(b.mount.translation);
    if (b.rpy) jb["rpy"] = vec(*b.rpy);
    else jb["rotation"] = mat3(b.mount.rotation);
    jb["axis"] = vec(b.axis);
    if (b.kind == BodyKind::rotor) {
      jb["gear_ratio"] = b.gear_ratio;
      jb["driven_joint"] = b.joint;
    } else {
      const Joint& jt = m.joints()[static_cast<std::size_t>(b.joint)];
      jb["friction"] = {{"viscous", jt.viscous}, {"coulomb", jt.coulomb}};
    }
    if (b.params) jb["params"] = params(*b.params);
    if (b.ellipsoid) jb["ellipsoid"] = ellipsoid(*b.ellipsoid);
    if (b.com_ellipsoid) jb["com_ellipsoid"] = ellipsoid(*b.com_ellipsoid);
    bodies.push_back(jb);
  }
  j["bodies"] = bodies;
  return j;
}

/// Parses and validates; a ModelError lists every violation found.
inline KinematicModel model_from_json(const nlohmann::json& j) {
  using namespace json_io;
  std::vector<std::string> errs;
  KinematicModel m;
  if (!j.is_object()) throw ModelError("model file must be a JSON object");
  if (!j.contains("format") || j["format"] != 1) errs.push_back("\"format\": 1 is required");
  m.name = j.value("name", std::string());
  auto guarded = [&](const std::string& what, auto&& fn) {
    try {
      fn();
    } catch (const nlohmann::json::exception& e) {
      errs.push_back(what + ": " + e.what());
    } catch (const std::exception& e) {
      errs.push_back(e.what());
    }
  };
  if (j.contains("gravity")) guarded("gravity", [&] { m.gravity = read_vec3(j["gravity"], "gravity"); });
  if (!j.contains("bodies") || !j["bodies"].is_array()) {
    errs.push_back("\"bodies\" array is required");
    throw ModelError(errs);
  }
  std::vector<std::pair<int, int>> rotor_joints;
  std::vector<std::pair<bool, bool>> friction;
  int idx = 0;
  for (const auto& jb : j["bodies"]) {
    ++idx;
    const std::string tag = "body " + std::to_string(idx);
    Body b;
    guarded(tag, [&] {
      b.name = jb.value("name", std::string());
      const std::string kind = jb.value("kind", std::string("link"));
      if (kind == "link") b.kind = BodyKind::link;
      else if (kind == "rotor") b.kind = BodyKind::rotor;
      else errs.push_back(tag + ": unknown kind \"" + kind + "\"");
      b.parent = jb.value("parent", 0) - 1;
      const Vec3 xyz = jb.contains("xyz") ? read_vec3(jb["xyz"], tag + ".xyz") : Vec3::Zero();
      if (jb.contains("rpy") && jb.contains("rotation")) errs.push_back(tag + ": give rpy or rotation, not both");
      if (jb.contains("rotation")) {
        b.mount.rotation = read_mat3(jb["rotation"], tag + ".rotation");
        b.mount.translation = xyz;
      } else {
        b.rpy = jb.contains("rpy") ? read_vec3(jb["rpy"], tag + ".rpy") : Vec3::Zero();
        b.mount = RigidTransform::from_rpy(*b.rpy, xyz);
        if (!jb.contains("rpy")) b.rpy.reset();
      }
      b.axis = jb.contains("axis") ? read_vec3(jb["axis"], tag + ".axis") : Vec3::UnitZ();
      if (b.kind == BodyKind::rotor) {
        if (!jb.contains("gear_ratio")) errs.push_back(tag + ": rotor needs gear_ratio");
        if (!jb.contains("driven_joint")) errs.push_back(tag + ": rotor needs driven_joint");
        b.gear_ratio = jb.value("gear_ratio", 1.0);
        rotor_joints.emplace_back(idx - 1, jb.value("driven_joint", -1));
      } else {
        b.gear_ratio = jb.value("gear_ratio", 1.0);
        const auto f = jb.value("friction", nlohmann::json::object());
        friction.emplace_back(f.value("viscous", true), f.value("coulomb", true));
      }
      if (jb.contains("params")) b.params = read_params(jb["params"], tag + ".params");
      if (jb.contains("ellipsoid")) b.ellipsoid = read_ellipsoid(jb["ellipsoid"], tag + ".ellipsoid");
      if (jb.contains("com_ellipsoid")) b.com_ellipsoid = read_ellipsoid(jb["com_ellipsoid"], tag + ".com_ellipsoid");
    });
    m.bodies.push_back(std::move(b));
  }
  m.rebuild_joints();
  for (std::size_t k = 0; k < friction.size() && k < m.joints().size(); ++k) {
    m.joints()[k].viscous = friction[k].first;
    m.joints()[k].coulomb = friction[k].second;
  }
  for (const auto& [body, joint] : rotor_joints) m.bodies[static_cast<std::size_t>(body)].joint = joint;
  for (auto& v : m.violations()) errs.push_back(std::move(v));
  if (!errs.empty()) throw ModelError(errs);
  return m;
}

inline std::string model_to_string(const KinematicModel& m) { return model_to_json(m).dump(2) + "\n"; }

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
}

inline KinematicModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(path + ": " + e.what());
  }
  return model_from_json(j);
}

inline void save_model(const KinematicModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << model_to_string(m);
}

}  // namespace inertid

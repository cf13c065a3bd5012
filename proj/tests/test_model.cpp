#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace inertid;
using namespace test_support;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("inertid_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Model, CheetahLeg) {
  const KinematicModel m = load_model(data_path("cheetah_leg.json"));
  EXPECT_EQ(m.num_bodies(), 6);
  EXPECT_EQ(m.num_joints(), 3);
  int rotors = 0;
  for (const auto& b : m.bodies)
    if (b.kind == BodyKind::rotor) {
      ++rotors;
      EXPECT_DOUBLE_EQ(b.gear_ratio, 10.6);
    }
  EXPECT_EQ(rotors, 3);
  for (const auto& b : m.bodies) {
    ASSERT_TRUE(b.params && b.ellipsoid);
    EXPECT_TRUE(check_realizable_on_ellipsoid(*b.params, homogeneous_q(*b.ellipsoid)).realizable) << b.name;
  }
}

TEST(Model, Pendulum) {
  const KinematicModel m = load_model(data_path("pendulum.json"));
  EXPECT_EQ(m.num_bodies(), 1);
  EXPECT_EQ(m.num_joints(), 1);
}

TEST(Model, RejectsEveryViolation) {
  const std::string text = R"({"format": 1, "bodies": [
    {"name": "a", "kind": "link", "parent": 0, "axis": [1, 1, 0]},
    {"name": "b", "kind": "link", "parent": 3, "axis": [0, 0, 1]},
    {"name": "r", "kind": "rotor", "parent": 1, "axis": [0, 0, 1], "gear_ratio": -2, "driven_joint": 7}
  ]})";
  try {
    load_model(temp_file("bad.json", text));
    FAIL() << "expected ModelError";
  } catch (const ModelError& e) {
    const auto& v = e.violations();
    auto has = [&](const std::string& s) {
      for (const auto& x : v)
        if (x.find(s) != std::string::npos) return true;
      return false;
    };
    EXPECT_TRUE(has("axis is not unit norm"));
    EXPECT_TRUE(has("parent must precede"));
    EXPECT_TRUE(has("gear_ratio must be positive"));
    EXPECT_TRUE(has("driven_joint"));
  }
  EXPECT_THROW(load_model(temp_file("garbage.json", "{not json")), ModelError);
  EXPECT_THROW(load_model("/nonexistent/model.json"), ModelError);
  EXPECT_THROW(load_model(temp_file("nofmt.json", R"({"bodies": []})")), ModelError);
}

TEST(Model, RoundTripIsBitIdentical) {
  for (const char* f : {"cheetah_leg.json", "pendulum.json"}) {
    const KinematicModel m = load_model(data_path(f));
    const std::string once = model_to_string(m);
    const std::string path = temp_file(std::string("rt_") + f, once);
    const std::string twice = model_to_string(load_model(path));
    EXPECT_EQ(once, twice);
  }
  std::mt19937 rng(31);
  const KinematicModel m = random_model(rng, 6);
  const std::string once = model_to_string(m);
  EXPECT_EQ(model_to_string(model_from_json(nlohmann::json::parse(once))), once);
  EXPECT_EQ(model_from_json(nlohmann::json::parse(once)).stacked_params(), m.stacked_params());
}

TEST(Model, ForwardKinematicsAtZero) {
  const KinematicModel m = load_model(data_path("cheetah_leg.json"));
  const auto fk = forward_kinematics(m, Eigen::VectorXd::Zero(3));
  for (std::size_t i = 0; i < fk.size(); ++i) {
    EXPECT_LE((fk[i].to_parent.rotation - m.bodies[i].mount.rotation).norm(), 1e-15);
    EXPECT_LE((fk[i].to_parent.translation - m.bodies[i].mount.translation).norm(), 1e-15);
  }
  EXPECT_LE((fk[2].to_world.translation - Vec3(0, 0.07, -0.34)).norm(), 1e-15);
}

TEST(Model, RevoluteQuarterTurn) {
  KinematicModel m;
  Body b;
  b.name = "link";
  m.bodies.push_back(b);
  m.rebuild_joints();
  const auto fk = forward_kinematics(m, Eigen::VectorXd::Constant(1, 1.5707963267948966));
  EXPECT_LE((fk[0].to_world.apply(Vec3::UnitX()) - Vec3::UnitY()).norm(), 1e-15);
}

TEST(Model, RotorRate) {
  const KinematicModel m = load_model(data_path("cheetah_leg.json"));
  Eigen::VectorXd qd = Eigen::VectorXd::Zero(3);
  qd[1] = 1.0;
  const auto v = body_velocities(m, Eigen::VectorXd::Zero(3), qd);
  const int rotor = m.body_index("hip_rotor");
  EXPECT_NEAR(v[static_cast<std::size_t>(rotor)].angular.dot(m.bodies[static_cast<std::size_t>(rotor)].axis), 10.6, 1e-14);
  EXPECT_NEAR(v[static_cast<std::size_t>(m.body_index("hip"))].angular.norm(), 1.0, 1e-14);
}

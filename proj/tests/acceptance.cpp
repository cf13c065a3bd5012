// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "test_support.hpp"

#include "inertid/inertid.hpp"
#include "inertid_cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace inertid;
using namespace test_support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// --- 1 ---------------------------------------------------------------------

Outcome cone_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937 rng(101);
  std::normal_distribution<double> n;
  int disagreements = 0, banded = 0;
  for (int i = 0; i < 100000; ++i) {
    InertialParams p;
    switch (i % 4) {
      case 0: {  // unstructured
        Vec10 v;
        for (int k = 0; k < 10; ++k) v[k] = n(rng);
        p = InertialParams::from_vector(v);
        break;
      }
      case 1: {  // positive mass and diagonal-dominant inertia, often near the triangle boundary
        Vec10 v;
        for (int k = 0; k < 10; ++k) v[k] = n(rng);
        v[0] = std::abs(v[0]) + 0.5;
        v.segment<3>(4) = v.segment<3>(4).cwiseAbs() * 3.0;
        p = InertialParams::from_vector(v);
        break;
      }
      case 2:  // consistent clouds
        p = random_consistent(rng);
        break;
      case 3: {  // principal moments drawn around the triangle equality
        std::uniform_real_distribution<double> u(0.1, 2.0), d(-0.2, 0.2);
        const double a = u(rng), b = u(rng);
        const Vec3 moments(a, b, a + b + d(rng));
        p = params_from_com(u(rng), Vec3(n(rng), n(rng), n(rng)) * 0.3,
                            random_rotation(rng) * Mat3(moments.asDiagonal()) * random_rotation(rng).transpose());
        p.I_bar = Sym3::from_matrix(0.5 * (p.I_bar.matrix() + p.I_bar.matrix().transpose()));
        break;
      }
    }
    const auto a = check_fully_consistent(p);
    if (std::abs(a.min_eig) <= 1e-9 * std::max(1.0, a.max_eig)) {
      ++banded;
      continue;
    }
    if (a.holds != check_consistent_by_triangle(p).holds) ++disagreements;
  }
  const double t = seconds_since(t0);
  return {disagreements == 0 && t < 10.0,
          std::to_string(disagreements) + " disagreements in 100000 draws (" + std::to_string(banded) +
              " inside the boundary band), " + fmt("%.2f s", t)};
}

// --- 2 ---------------------------------------------------------------------

Outcome regressor_oracle() {
  std::mt19937 rng(102);
  std::vector<KinematicModel> models;
  for (int k = 0; k < 60; ++k) models.push_back(random_model(rng, 1 + k % 6, true, true));
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const KinematicModel& m = models[static_cast<std::size_t>(trial % models.size())];
    const int nj = m.num_joints();
    const Eigen::VectorXd q = random_vector(rng, nj), qd = random_vector(rng, nj), qdd = random_vector(rng, nj);
    const Eigen::VectorXd pi = random_vector(rng, m.num_params());
    const Eigen::VectorXd tau = inverse_dynamics(m, q, qd, qdd, pi);
    worst = std::max(worst, (regressor(m, q, qd, qdd) * pi - tau).norm() / (1.0 + tau.norm()));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-10 && t < 5.0, "worst relative error " + fmt("%.2e", worst) + " on 1000 states, " + fmt("%.2f s", t)};
}

// --- 3 ---------------------------------------------------------------------

Outcome kinetic_energy_identity() {
  std::mt19937 rng(103);
  std::normal_distribution<double> n;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Vec10 v;
    for (int k = 0; k < 10; ++k) v[k] = n(rng);
    const InertialParams p = (i % 2) ? InertialParams::from_vector(v) : random_consistent(rng);
    const SpatialVelocity vel{Vec3(n(rng), n(rng), n(rng)), Vec3(n(rng), n(rng), n(rng))};
    const double a = kinetic_energy(p, vel, EnergyForm::spatial);
    const double b = kinetic_energy(p, vel, EnergyForm::trace);
    worst = std::max(worst, std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))));
  }
  return {worst <= 1e-12, "worst relative difference " + fmt("%.2e", worst) + " over 1000 draws"};
}

// --- 4 ---------------------------------------------------------------------

Outcome ellipsoid_realizability() {
  std::mt19937 rng(104);
  std::uniform_real_distribution<double> w(0.05, 2.0);
  int missed = 0;
  for (int i = 0; i < 2000; ++i) {
    const Ellipsoid e = random_ellipsoid(rng);
    PointMassSet s;
    for (int k = 0; k < 4 + i % 6; ++k) s.points.push_back({w(rng), sample_in_ellipsoid(rng, e)});
    if (!check_realizable_on_ellipsoid(params_from_point_masses(s), homogeneous_q(e)).realizable) ++missed;
  }

  // canonical counterexample: masses 1/2 at +-sqrt(6) e_x outside (sqrt5, sqrt2, 1)
  const Ellipsoid box = Ellipsoid::from_semi_axes(Vec3::Zero(), Vec3(std::sqrt(5.0), std::sqrt(2.0), 1.0));
  const auto canon = check_realizable_on_ellipsoid(
      params_from_point_masses({{{0.5, Vec3(std::sqrt(6.0), 0, 0)}, {0.5, Vec3(-std::sqrt(6.0), 0, 0)}}}), homogeneous_q(box));
  const bool canon_ok = !canon.realizable && std::abs(canon.trace_value + 0.2) <= 1e-12;

  // family: half the mass 20 % beyond a principal axis, plus a small interior
  // cloud so J is positive definite and only the trace test can reject
  int accepted_bad = 0;
  for (int i = 0; i < 300; ++i) {
    const Ellipsoid e = random_ellipsoid(rng);
    Eigen::SelfAdjointEigenSolver<Mat3> es(e.shape);
    const int axis = i % 3;
    const Vec3 dir = es.eigenvectors().col(axis) * std::sqrt(es.eigenvalues()[axis]) * 1.2;
    PointMassSet s{{{0.5, e.center + dir}, {0.5, e.center - dir}}};
    for (int k = 0; k < 4; ++k) s.points.push_back({0.01, e.center + 0.1 * (sample_in_ellipsoid(rng, e) - e.center)});
    const auto v = check_realizable_on_ellipsoid(params_from_point_masses(s), homogeneous_q(e));
    if (v.realizable || !v.pseudo_inertia_pd) ++accepted_bad;
  }

  // four-point realizations, free and inside the model ellipsoids
  double worst = 0.0;
  int failed = 0;
  for (int i = 0; i < 300; ++i) {
    const InertialParams p = random_consistent(rng);
    try {
      worst = std::max(worst, detail::relative_moment_error(p, params_from_point_masses(four_point_realization(p))));
    } catch (const RealizationError&) {
      ++failed;
    }
  }
  const KinematicModel leg = load_model(data_path("cheetah_leg.json"));
  for (const auto& b : leg.bodies) {
    try {
      const PointMassSet pts = four_point_realization(*b.params, b.ellipsoid);
      worst = std::max(worst, detail::relative_moment_error(*b.params, params_from_point_masses(pts)));
      for (const auto& pt : pts.points)
        if (b.ellipsoid->normalized_radius_sq(pt.position) > 1.0 + 1e-9) ++failed;
    } catch (const RealizationError&) {
      ++failed;
    }
  }
  const bool pass = missed == 0 && canon_ok && accepted_bad == 0 && failed == 0 && worst <= 1e-9;
  return {pass, std::to_string(missed) + "/2000 interior clouds rejected, counterexample Tr(JQ) = " +
                    fmt("%.3g", canon.trace_value) + (canon.realizable ? " (accepted)" : " (rejected)") + ", " +
                    std::to_string(accepted_bad) + "/300 outside clouds accepted, four-point worst moment error " +
                    fmt("%.2e", worst) + ", " + std::to_string(failed) + " realization failures"};
}

// --- shared leg benchmark ----------------------------------------------------

struct Benchmark {
  KinematicModel model;  ///< nominal parameters act as the prior
  ParamVector truth;
  TrajectoryDataset train, validation;
  double noise_floor = 0.0;  ///< RMS of the true model on the validation block
};

/// Truth is the nominal leg with every body scaled by a seed-dependent factor
/// in [0.8, 1.2]; scaling keeps each body realizable on its ellipsoid.
Benchmark leg_benchmark(double sigma, std::uint64_t seed) {
  Benchmark b;
  b.model = load_model(data_path("cheetah_leg.json"));
  std::mt19937_64 g(1000 + seed);
  std::uniform_real_distribution<double> u(0.8, 1.2);
  b.truth.pi = b.model.stacked_params();
  for (int i = 0; i < b.model.num_bodies(); ++i) b.truth.pi.segment<10>(10 * i) *= u(g);
  b.truth.friction.viscous = Eigen::Vector3d(0.05, 0.08, 0.04);
  b.truth.friction.coulomb = Eigen::Vector3d(0.3, 0.2, 0.15);
  const auto syn = generate_synthetic(b.model, b.truth, ExcitationSpec::leg_sweep(20.0), sigma, seed);
  std::tie(b.train, b.validation) = split_holdout(syn.samples);
  b.noise_floor = evaluate(b.model, b.truth, b.validation).overall_rms;
  return b;
}

struct Fit {
  ConstraintLevel level;
  IdentificationResult result;
  FitReport validation;
};

Fit fit(const Benchmark& b, ConstraintLevel level, int n_train) {
  IdentificationOptions o;
  o.level = level;
  const TrajectoryDataset sub(b.train.begin(), b.train.begin() + n_train);
  Fit f{level, identify(b.model, sub, o), {}};
  if (f.result.solution.x.size()) f.validation = evaluate(b.model, f.result.params, b.validation);
  return f;
}

std::vector<Fit> all_fits;  // every result, for criterion 8

// --- 5 ---------------------------------------------------------------------

Outcome noiseless_end_to_end() {
  const auto t0 = Clock::now();
  const Benchmark b = leg_benchmark(0.0, 1);
  const Fit f = fit(b, ConstraintLevel::full_ellipsoid, 10000);
  const double t = seconds_since(t0);
  all_fits.push_back(f);
  const auto& s = f.result.solution;
  const bool pass = s.optimal() && s.gap <= 1e-8 && f.validation.overall_rms <= 1e-6 && t < 60.0;
  return {pass, std::string(status_name(s.status)) + ", gap " + fmt("%.2e", s.gap) + ", held-out RMS " +
                    fmt("%.2e", f.validation.overall_rms) + " N m on " + std::to_string(b.validation.size()) +
                    " samples, " + fmt("%.2f s", t) + " total (" + fmt("%.3f s", s.wall_time) + " in the solver)"};
}

// --- 6 ---------------------------------------------------------------------

Outcome noisy_recovery() {
  const double sigma = 0.5;
  std::vector<std::vector<double>> per_joint(3);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Benchmark b = leg_benchmark(sigma, seed);
    const Fit f = fit(b, ConstraintLevel::full_ellipsoid, 10000);
    all_fits.push_back(f);
    if (!f.result.solution.optimal()) return {false, "seed " + std::to_string(seed) + " did not solve"};
    for (int j = 0; j < 3; ++j) per_joint[static_cast<std::size_t>(j)].push_back(f.validation.per_joint_rms[j]);
  }
  bool pass = true;
  std::string detail = "median per-joint RMS";
  for (int j = 0; j < 3; ++j) {
    const double med = median(per_joint[static_cast<std::size_t>(j)]);
    pass = pass && med >= 0.9 * sigma && med <= 1.1 * sigma;
    detail += fmt(" %.4f", med);
  }
  return {pass, detail + " N m (bounds " + fmt("%.2f", 0.9 * sigma) + ".." + fmt("%.2f", 1.1 * sigma) + ")"};
}

// --- 7 and 9 -----------------------------------------------------------------

const std::vector<ConstraintLevel> kCurveLevels = {ConstraintLevel::none, ConstraintLevel::semi, ConstraintLevel::full,
                                                   ConstraintLevel::full_ellipsoid};

struct CurveData {
  std::vector<std::vector<double>> small, large;  // [level][seed]
  std::vector<double> floor;
  int monotone_checked = 0;
  int monotone_failures = 0;
  std::vector<std::string> unsolved;
};

CurveData run_curves() {
  CurveData c;
  c.small.resize(kCurveLevels.size());
  c.large.resize(kCurveLevels.size());
  const std::vector<ConstraintLevel> nested = {ConstraintLevel::none, ConstraintLevel::semi, ConstraintLevel::full,
                                               ConstraintLevel::full_com, ConstraintLevel::full_ellipsoid};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Benchmark b = leg_benchmark(0.5, 100 + seed);
    c.floor.push_back(b.noise_floor);
    for (int n : {200, 10000}) {
      double prev = -std::numeric_limits<double>::infinity();
      for (ConstraintLevel level : nested) {
        const Fit f = fit(b, level, n);
        all_fits.push_back(f);
        if (!f.result.solution.optimal()) {
          c.unsolved.push_back("seed " + std::to_string(100 + seed) + " n=" + std::to_string(n) + " " +
                               level_name(level) + " " + status_name(f.result.solution.status));
          continue;
        }
        const double obj = f.result.objective;
        ++c.monotone_checked;
        if (obj < prev - 1e-9 * std::max(1.0, std::abs(prev))) ++c.monotone_failures;
        prev = obj;
        const auto it = std::find(kCurveLevels.begin(), kCurveLevels.end(), level);
        if (it == kCurveLevels.end()) continue;
        auto& dst = (n == 200 ? c.small : c.large)[static_cast<std::size_t>(it - kCurveLevels.begin())];
        dst.push_back(f.validation.overall_rms);
      }
    }
  }
  return c;
}

Outcome learning_curve_trend(const CurveData& c) {
  if (!c.unsolved.empty()) {
    std::string d = std::to_string(c.unsolved.size()) + " fits did not solve:";
    for (const auto& u : c.unsolved) d += " [" + u + "]";
    return {false, d};
  }
  std::vector<double> small, large;
  for (std::size_t k = 0; k < kCurveLevels.size(); ++k) {
    small.push_back(median(c.small[k]));
    large.push_back(median(c.large[k]));
  }
  const double floor = median(c.floor);
  bool ordered = true;
  for (std::size_t k = 1; k < small.size(); ++k) ordered = ordered && small[k] <= small[k - 1];
  bool converged = true;
  for (double v : large) converged = converged && v <= 1.05 * floor;
  std::string d = "median RMS at 200 samples (none, semi, full, full+ellipsoid):";
  for (double v : small) d += fmt(" %.4g", v);
  d += "; at 10000:";
  for (double v : large) d += fmt(" %.4f", v);
  d += fmt(" vs noise floor %.4f", floor);
  return {ordered && converged, d};
}

Outcome monotonicity(const CurveData& c) {
  return {c.monotone_failures == 0 && c.monotone_checked > 0,
          std::to_string(c.monotone_failures) + " violations in " + std::to_string(c.monotone_checked) +
              " nested-level comparisons (none <= semi <= full <= full+com <= full+ellipsoid)"};
}

// --- 8 ---------------------------------------------------------------------

Outcome feasibility_guarantee() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "inertid_acceptance";
  fs::create_directories(dir);
  const std::string model_path = data_path("cheetah_leg.json");
  const KinematicModel model = load_model(model_path);
  int checked = 0, failed = 0;
  for (const Fit& f : all_fits) {
    if (!f.result.solution.optimal()) continue;
    const fs::path params = dir / "params.json";
    const fs::path out = dir / "check.json";
    cli::write_json(params, cli::params_file_json(model, f.result.params, level_name(f.level), f.result.strictness,
                                                  f.result.regularization, kDefaultDeadband,
                                                  solver_stats(f.result.solution)));
    const std::string ps = params.string(), os = out.string();
    const char* argv[] = {"inertid", "check", "--params", ps.c_str(), "--model", model_path.c_str(), "--out", os.c_str()};
    std::ostringstream sout, serr;
    const int code = cli::run(8, argv, sout, serr);
    ++checked;
    const auto j = read_json_file(os);
    if (code != 0 || !j["consistent"].get<bool>() || !j["violations"].empty()) ++failed;
  }
  return {failed == 0 && checked > 0,
          std::to_string(checked - failed) + "/" + std::to_string(checked) + " optimal results pass the check command"};
}

}  // namespace

int main() {
  setenv("INERTID_LOG", "quiet", 1);
  report(1, "cone equivalence", cone_equivalence());
  report(2, "regressor oracle", regressor_oracle());
  report(3, "kinetic energy trace identity", kinetic_energy_identity());
  report(4, "ellipsoid realizability", ellipsoid_realizability());
  report(5, "noiseless end-to-end", noiseless_end_to_end());
  report(6, "noisy recovery", noisy_recovery());
  const CurveData curves = run_curves();
  report(7, "learning-curve trend", learning_curve_trend(curves));
  report(8, "solver feasibility guarantee", feasibility_guarantee());
  report(9, "constraint monotonicity", monotonicity(curves));
  std::printf("%d of 9 criteria failed\n", failures);
  return failures ? 1 : 0;
}

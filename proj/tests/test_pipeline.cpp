#include "test_support.hpp"

#include "inertid/pipeline.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace inertid;
using namespace test_support;

namespace {

constexpr double kTwoPi = 6.283185307179586;

RawLog sine_log(int n, double hz, double noise = 0.0, std::uint64_t seed = 1) {
  RawLog log;
  log.q.resize(n, 1);
  log.tau = Eigen::MatrixXd::Zero(n, 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, noise > 0.0 ? noise : 1.0);
  for (int k = 0; k < n; ++k) {
    const double t = k / hz;
    log.t.push_back(t);
    log.q(k, 0) = std::sin(kTwoPi * t) + (noise > 0.0 ? d(rng) : 0.0);
  }
  return log;
}

}  // namespace

TEST(Csv, RoundTripIsExact) {
  const KinematicModel m = load_model(data_path("cheetah_leg.json"));
  const auto syn = generate_synthetic(m, ParamVector{m.stacked_params(), FrictionParams::zero(3)},
                                      ExcitationSpec::leg_sweep(10.0), 0.3, 2);
  ASSERT_EQ(syn.log.size(), 10001);
  std::stringstream ss;
  save_csv(ss, syn.log);
  const std::string first = ss.str();
  const RawLog back = load_csv(ss);
  EXPECT_EQ(back.t, syn.log.t);
  EXPECT_EQ(back.q, syn.log.q);
  EXPECT_EQ(back.tau, syn.log.tau);
  ASSERT_TRUE(back.qd && back.qdd);
  EXPECT_EQ(*back.qd, *syn.log.qd);
  EXPECT_EQ(*back.qdd, *syn.log.qdd);
  std::stringstream again;
  save_csv(again, back);
  EXPECT_EQ(again.str(), first);
}

TEST(Csv, SchemaErrors) {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      load_csv(in);
    } catch (const DataError& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
  };
  EXPECT_TRUE(fails_with("t,q1,q2,tau1\n0,1,2,3\n", "tau2"));
  EXPECT_TRUE(fails_with("t,q1,tau1,v1\n0,1,2,3\n", "a1"));
  EXPECT_TRUE(fails_with("time,q1,tau1\n0,1,2\n", "missing column t"));
  EXPECT_TRUE(fails_with("t,q1,tau1\n0,1,2\n0.001,nan,2\n0.002,1,2\n0.003,x,1\n", "line 3"));
  EXPECT_TRUE(fails_with("t,q1,tau1\n0,1,2\n0.001,nan,2\n0.002,1,2\n0.003,x,1\n", "line 5"));
  EXPECT_TRUE(fails_with("t,q1,tau1\n0,1,2\n0.001,1\n", "line 3: expected 3 fields"));
  EXPECT_TRUE(fails_with("t,q1,tau1\n0,1,2\n0.002,1,2\n0.001,1,2\n", "not strictly increasing"));
  EXPECT_TRUE(fails_with("t,q1,tau1\n0,1,2\n0.001,1,2\n0.0025,1,2\n", "non-uniform"));
  std::istringstream ok("tau1,t,q1\n2,0,1\n2,0.001,1.5\n");
  const RawLog log = load_csv(ok);
  EXPECT_EQ(log.q(1, 0), 1.5);
  EXPECT_FALSE(log.qd.has_value());
}

TEST(Filter, SineDerivativeAndPhase) {
  const FilteredData f = differentiate_filter(sine_log(3001, 1000.0));
  EXPECT_EQ(f.trim, 40);
  ASSERT_EQ(static_cast<int>(f.samples.size()), 3001 - 80);
  double ev = 0.0, ea = 0.0, eq = 0.0;
  for (const auto& s : f.samples) {
    ev += std::pow(s.qd[0] - kTwoPi * std::cos(kTwoPi * s.t), 2);
    ea += std::pow(s.qdd[0] + kTwoPi * kTwoPi * std::sin(kTwoPi * s.t), 2);
    eq += std::pow(s.q[0] - std::sin(kTwoPi * s.t), 2);
  }
  const double n = static_cast<double>(f.samples.size());
  EXPECT_LE(std::sqrt(ev / n), 1e-3);
  EXPECT_LE(std::sqrt(ea / n), 1e-2);
  // least-squares phase of the filtered signal against sin and cos
  double sc = 0.0, cc = 0.0;
  for (const auto& s : f.samples) {
    sc += s.q[0] * std::sin(kTwoPi * s.t);
    cc += s.q[0] * std::cos(kTwoPi * s.t);
  }
  EXPECT_LE(std::abs(std::atan2(cc, sc)), 1e-3);
}

TEST(Filter, ConstantSignal) {
  RawLog log = sine_log(500, 1000.0);
  log.q.setConstant(0.7);
  for (const auto& s : differentiate_filter(log).samples) {
    EXPECT_NEAR(s.qd[0], 0.0, 1e-9);
    EXPECT_NEAR(s.qdd[0], 0.0, 1e-6);
  }
}

TEST(Filter, BeatsRawDifferencesOnNoise) {
  const RawLog noisy = sine_log(4001, 1000.0, 1e-4, 3);
  const FilteredData f = differentiate_filter(noisy);
  double filt = 0.0, raw = 0.0;
  const double h = 1e-3;
  for (const auto& s : f.samples) {
    const auto k = static_cast<int>(std::lround(s.t / h));
    const double exact = -kTwoPi * kTwoPi * std::sin(kTwoPi * s.t);
    filt += std::pow(s.qdd[0] - exact, 2);
    raw += std::pow((noisy.q(k + 1, 0) - 2 * noisy.q(k, 0) + noisy.q(k - 1, 0)) / (h * h) - exact, 2);
  }
  EXPECT_LT(filt, 1e-3 * raw);
}

TEST(Filter, Errors) {
  EXPECT_THROW(differentiate_filter(sine_log(60, 1000.0)), DataError);
  FilterOptions o;
  o.cutoff_hz = 600.0;
  EXPECT_THROW(differentiate_filter(sine_log(1000, 1000.0), o), DataError);
  o.trust_logged = true;
  EXPECT_THROW(differentiate_filter(sine_log(1000, 1000.0), o), DataError);
}

TEST(Synthetic, LegSweepRatesAndDeterminism) {
  const KinematicModel m = load_model(data_path("cheetah_leg.json"));
  const ParamVector truth{m.stacked_params(), FrictionParams::zero(3)};
  const ExcitationSpec exc = ExcitationSpec::leg_sweep(20.0);
  const auto a = generate_synthetic(m, truth, exc, 0.5, 11);
  const auto b = generate_synthetic(m, truth, exc, 0.5, 11);
  EXPECT_EQ(a.log.tau, b.log.tau);
  EXPECT_EQ(a.log.q, b.log.q);
  EXPECT_NE(generate_synthetic(m, truth, exc, 0.5, 12).log.tau, a.log.tau);
  EXPECT_LE(a.log.qd->cwiseAbs().maxCoeff(), 12.0 + 1e-12);
  EXPECT_NEAR(a.log.qd->col(1).cwiseAbs().maxCoeff(), 12.0, 1e-3);
  // analytic derivatives agree with differences of the analytic positions
  for (int k = 1; k + 1 < a.log.size(); k += 997) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR((a.log.q(k + 1, j) - a.log.q(k - 1, j)) / 2e-3, (*a.log.qd)(k, j), 1e-3);
      EXPECT_NEAR(((*a.log.qd)(k + 1, j) - (*a.log.qd)(k - 1, j)) / 2e-3, (*a.log.qdd)(k, j), 1e-3);
    }
  }
  EXPECT_THROW(generate_synthetic(m, truth, ExcitationSpec::multisine(2), 0.0, 1), DataError);
}

TEST(Evaluate, PerfectParamsAndNoiseFloor) {
  const KinematicModel m = load_model(data_path("cheetah_leg.json"));
  ParamVector truth{m.stacked_params(), {Eigen::Vector3d(0.1, 0.1, 0.1), Eigen::Vector3d(0.2, 0.3, 0.1)}};
  const auto clean = generate_synthetic(m, truth, ExcitationSpec::leg_sweep(5.0), 0.0, 1);
  EXPECT_LE(evaluate(m, truth, clean.samples).overall_rms, 1e-12);
  const auto noisy = generate_synthetic(m, truth, ExcitationSpec::leg_sweep(5.0), 0.5, 1);
  const FitReport r = evaluate(m, truth, noisy.samples);
  for (int j = 0; j < 3; ++j) {
    EXPECT_GE(r.per_joint_rms[j], 0.45);
    EXPECT_LE(r.per_joint_rms[j], 0.55);
  }
  EXPECT_NEAR(r.overall_rms, std::sqrt(r.per_joint_rms.squaredNorm() / 3.0), 1e-14);
  EXPECT_EQ(r.samples, 5001);
}

TEST(Evaluate, SplitIsDisjointInTime) {
  TrajectoryDataset d(11);
  for (int k = 0; k < 11; ++k) d[static_cast<std::size_t>(k)].t = k;
  const auto [train, val] = split_holdout(d);
  EXPECT_EQ(train.size(), 5u);
  EXPECT_EQ(val.size(), 6u);
  EXPECT_LT(train.back().t, val.front().t);
}

TEST(Pipeline, NoiselessRecoveryFromFilteredLog) {
  const KinematicModel m = load_model(data_path("cheetah_leg.json"));
  ParamVector truth{m.stacked_params() * 0.9, {Eigen::Vector3d(0.05, 0.08, 0.04), Eigen::Vector3d(0.3, 0.2, 0.15)}};
  const auto syn = generate_synthetic(m, truth, ExcitationSpec::multisine(3, 6.0), 0.0, 1);
  const auto [train, val] = split_holdout(syn.samples);
  IdentificationOptions o;
  o.level = ConstraintLevel::full;
  const IdentificationResult r = identify(m, train, o);
  ASSERT_TRUE(r.solution.optimal()) << r.solution.diagnostic;
  EXPECT_LE(evaluate(m, r.params, val).overall_rms, 1e-6);

  // positions only through the filter: small but nonzero differentiation error
  RawLog log = syn.log;
  log.qd.reset();
  log.qdd.reset();
  const FilteredData f = differentiate_filter(log);
  const auto [ftrain, fval] = split_holdout(f.samples);
  const IdentificationResult rf = identify(m, ftrain, o);
  ASSERT_TRUE(rf.solution.optimal());
  EXPECT_LE(evaluate(m, rf.params, fval).overall_rms, 0.05);
}

TEST(LearningCurve, SingleRowMatchesEvaluate) {
  const KinematicModel m = load_model(data_path("cheetah_leg.json"));
  const auto syn = generate_synthetic(m, ParamVector{m.stacked_params(), FrictionParams::zero(3)},
                                      ExcitationSpec::leg_sweep(1.0), 0.5, 4);
  const auto [train, val] = split_holdout(syn.samples);
  const auto rows = learning_curve(m, train, val, {ConstraintLevel::full}, {300});
  ASSERT_EQ(rows.size(), 1u);
  IdentificationOptions o;
  o.level = ConstraintLevel::full;
  const auto r = identify(m, TrajectoryDataset(train.begin(), train.begin() + 300), o);
  EXPECT_EQ(rows[0].overall_rms, evaluate(m, r.params, val).overall_rms);
  std::ostringstream csv;
  write_curve_csv(csv, rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "level,train_samples,status,overall_rms,rms1,rms2,rms3");
  EXPECT_THROW(learning_curve(m, train, val, {ConstraintLevel::full}, {100000}), DataError);
}

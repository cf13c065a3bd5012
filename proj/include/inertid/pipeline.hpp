#pragma once

// Data handling around identification: CSV logs, zero-phase filtering and
// differentiation, analytic synthetic trajectories, hold-out evaluation and
// learning curves.

#include "inertid/consistency.hpp"
#include "inertid/dynamics.hpp"
#include "inertid/error.hpp"
#include "inertid/identification.hpp"
#include "inertid/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace inertid {

// ---------------------------------------------------------------------------
// Raw logs and CSV
// ---------------------------------------------------------------------------

/// Rows are samples, columns joints.
struct RawLog {
  std::vector<double> t;
  Eigen::MatrixXd q;
  Eigen::MatrixXd tau;
  std::optional<Eigen::MatrixXd> qd;
  std::optional<Eigen::MatrixXd> qdd;

  int size() const { return static_cast<int>(t.size()); }
  int joints() const { return static_cast<int>(q.cols()); }

  double dt() const {
    if (t.size() < 2) throw DataError("log needs at least two samples");
    return (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  }
  double sample_rate() const { return 1.0 / dt(); }

  /// Strictly increasing time with uniform spacing within 1 %.
  void validate() const {
    const auto n = static_cast<Eigen::Index>(t.size());
    if (q.rows() != n || tau.rows() != n || tau.cols() != q.cols())
      throw DataError("log columns have inconsistent lengths");
    if ((qd && (qd->rows() != n || qd->cols() != q.cols())) || (qdd && (qdd->rows() != n || qdd->cols() != q.cols())))
      throw DataError("logged derivative columns have inconsistent lengths");
    if (t.size() < 2) return;
    for (std::size_t k = 1; k < t.size(); ++k)
      if (!(t[k] > t[k - 1])) throw DataError("time is not strictly increasing at sample " + std::to_string(k));
    const double h = dt();
    for (std::size_t k = 1; k < t.size(); ++k) {
      const double d = t[k] - t[k - 1];
      if (std::abs(d - h) > 0.01 * h) throw DataError("non-uniform sampling at sample " + std::to_string(k));
    }
  }

  TrajectoryDataset samples() const {
    if (!qd || !qdd) throw DataError("log has no velocity/acceleration columns");
    TrajectoryDataset out;
    out.reserve(t.size());
    for (int k = 0; k < size(); ++k)
      out.push_back({t[static_cast<std::size_t>(k)], q.row(k).transpose(), qd->row(k).transpose(),
                     qdd->row(k).transpose(), tau.row(k).transpose()});
    return out;
  }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// Header names t, q1..qn, tau1..taun and optionally v1..vn, a1..an, in any
/// column order. `joints` < 0 infers n from the header.
inline RawLog load_csv(std::istream& in, int joints = -1) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("CSV is empty");
  const auto header = detail::split_csv_line(line);
  std::map<std::string, int> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (col.count(header[i])) throw DataError("duplicate CSV column " + header[i]);
    col[header[i]] = static_cast<int>(i);
  }
  int n = joints;
  if (n < 0) {
    n = 0;
    while (col.count("q" + std::to_string(n + 1))) ++n;
    if (n == 0) throw DataError("CSV header is missing column q1");
  }
  std::vector<std::string> missing;
  auto need = [&](const std::string& name) {
    if (!col.count(name)) missing.push_back(name);
  };
  need("t");
  for (int j = 1; j <= n; ++j) {
    need("q" + std::to_string(j));
    need("tau" + std::to_string(j));
  }
  const bool has_v = col.count("v1") > 0, has_a = col.count("a1") > 0;
  if (has_v || has_a)
    for (int j = 1; j <= n; ++j) {
      need("v" + std::to_string(j));
      need("a" + std::to_string(j));
    }
  if (!missing.empty()) {
    std::string s = "CSV header is missing column";
    s += missing.size() > 1 ? "s " : " ";
    for (std::size_t i = 0; i < missing.size(); ++i) s += (i ? ", " : "") + missing[i];
    throw DataError(s);
  }

  std::vector<std::vector<double>> rows;
  std::vector<std::string> bad;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size()) {
      bad.push_back("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) + " fields, got " +
                    std::to_string(cells.size()));
      continue;
    }
    std::vector<double> r(cells.size());
    bool ok = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      char* end = nullptr;
      r[i] = std::strtod(cells[i].c_str(), &end);
      if (cells[i].empty() || end != cells[i].c_str() + cells[i].size() || !std::isfinite(r[i])) ok = false;
    }
    if (!ok) {
      bad.push_back("line " + std::to_string(lineno) + ": non-numeric or NaN value");
      continue;
    }
    rows.push_back(std::move(r));
  }
  if (!bad.empty()) {
    std::string s = "CSV has invalid rows:";
    for (std::size_t i = 0; i < bad.size() && i < 20; ++i) s += "\n  " + bad[i];
    if (bad.size() > 20) s += "\n  ... " + std::to_string(bad.size() - 20) + " more";
    throw DataError(s);
  }

  RawLog log;
  const auto m = static_cast<Eigen::Index>(rows.size());
  log.q.resize(m, n);
  log.tau.resize(m, n);
  if (has_v) {
    log.qd = Eigen::MatrixXd(m, n);
    log.qdd = Eigen::MatrixXd(m, n);
  }
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& r = rows[static_cast<std::size_t>(k)];
    log.t.push_back(r[static_cast<std::size_t>(col["t"])]);
    for (int j = 0; j < n; ++j) {
      const std::string s = std::to_string(j + 1);
      log.q(k, j) = r[static_cast<std::size_t>(col["q" + s])];
      log.tau(k, j) = r[static_cast<std::size_t>(col["tau" + s])];
      if (has_v) {
        (*log.qd)(k, j) = r[static_cast<std::size_t>(col["v" + s])];
        (*log.qdd)(k, j) = r[static_cast<std::size_t>(col["a" + s])];
      }
    }
  }
  log.validate();
  return log;
}

inline RawLog load_csv(const std::string& path, int joints = -1) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return load_csv(in, joints);
}

inline void save_csv(std::ostream& os, const RawLog& log) {
  const int n = log.joints();
  const bool deriv = log.qd && log.qdd;
  os << "t";
  for (int j = 1; j <= n; ++j) os << ",q" << j;
  for (int j = 1; j <= n; ++j) os << ",tau" << j;
  if (deriv) {
    for (int j = 1; j <= n; ++j) os << ",v" << j;
    for (int j = 1; j <= n; ++j) os << ",a" << j;
  }
  os << "\n";
  for (int k = 0; k < log.size(); ++k) {
    os << detail::fmt17(log.t[static_cast<std::size_t>(k)]);
    for (int j = 0; j < n; ++j) os << ',' << detail::fmt17(log.q(k, j));
    for (int j = 0; j < n; ++j) os << ',' << detail::fmt17(log.tau(k, j));
    if (deriv) {
      for (int j = 0; j < n; ++j) os << ',' << detail::fmt17((*log.qd)(k, j));
      for (int j = 0; j < n; ++j) os << ',' << detail::fmt17((*log.qdd)(k, j));
    }
    os << "\n";
  }
}

inline void save_csv(const std::string& path, const RawLog& log) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  save_csv(out, log);
}

// ---------------------------------------------------------------------------
// Filtering and differentiation
// ---------------------------------------------------------------------------

/// Second-order Butterworth low-pass, bilinear transform with prewarping.
struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;

  static Biquad butterworth_lowpass(double cutoff_hz, double sample_hz) {
    if (!(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 * sample_hz))
      throw DataError("cutoff must lie in (0, sample_rate / 2)");
    const double K = std::tan(3.14159265358979323846 * cutoff_hz / sample_hz);
    const double norm = 1.0 / (1.0 + std::sqrt(2.0) * K + K * K);
    Biquad f;
    f.b0 = K * K * norm;
    f.b1 = 2.0 * f.b0;
    f.b2 = f.b0;
    f.a1 = 2.0 * (K * K - 1.0) * norm;
    f.a2 = (1.0 - std::sqrt(2.0) * K + K * K) * norm;
    return f;
  }

  /// Direct form II transposed, started in steady state at x[0].
  std::vector<double> run(const std::vector<double>& x) const {
    std::vector<double> y(x.size());
    if (x.empty()) return y;
    double z1 = (1.0 - b0) * x[0];
    double z2 = (b2 - a2) * x[0];
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double out = b0 * x[k] + z1;
      z1 = b1 * x[k] - a1 * out + z2;
      z2 = b2 * x[k] - a2 * out;
      y[k] = out;
    }
    return y;
  }
};

/// Forward-backward filtering with odd reflection padding of `pad` samples.
inline std::vector<double> zero_phase(const Biquad& f, const std::vector<double>& x, int pad) {
  const int n = static_cast<int>(x.size());
  pad = std::min(pad, n - 1);
  std::vector<double> ext;
  ext.reserve(static_cast<std::size_t>(n + 2 * pad));
  for (int k = pad; k >= 1; --k) ext.push_back(2.0 * x[0] - x[static_cast<std::size_t>(k)]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (int k = 1; k <= pad; ++k) ext.push_back(2.0 * x[static_cast<std::size_t>(n - 1)] - x[static_cast<std::size_t>(n - 1 - k)]);
  std::vector<double> y = f.run(ext);
  std::reverse(y.begin(), y.end());
  y = f.run(y);
  std::reverse(y.begin(), y.end());
  return std::vector<double>(y.begin() + pad, y.begin() + pad + n);
}

struct FilterOptions {
  double cutoff_hz = 50.0;
  /// Use logged velocity/acceleration instead of differentiating q.
  bool trust_logged = false;
  /// Samples dropped at each end; < 0 picks 2 * sample_rate / cutoff.
  int trim = -1;
};

struct FilteredData {
  TrajectoryDataset samples;
  int trim = 0;  ///< samples removed at each end
  double cutoff_hz = 0.0;
};

inline FilteredData differentiate_filter(const RawLog& log, const FilterOptions& opts = {}) {
  log.validate();
  FilteredData out;
  if (opts.trust_logged) {
    out.samples = log.samples();
    return out;
  }
  const double fs = log.sample_rate();
  const double h = log.dt();
  const Biquad f = Biquad::butterworth_lowpass(opts.cutoff_hz, fs);
  const int trim = std::max(1, opts.trim >= 0 ? opts.trim : static_cast<int>(std::lround(2.0 * fs / opts.cutoff_hz)));
  const int n = log.size();
  if (n < 2 * trim + 3) throw DataError("log too short: " + std::to_string(n) + " samples, need at least " +
                                        std::to_string(2 * trim + 3));
  const int nj = log.joints();
  const int pad = static_cast<int>(std::lround(3.0 * fs / opts.cutoff_hz));
  Eigen::MatrixXd qf(n, nj);
  for (int j = 0; j < nj; ++j) {
    std::vector<double> col(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) col[static_cast<std::size_t>(k)] = log.q(k, j);
    const auto y = zero_phase(f, col, pad);
    for (int k = 0; k < n; ++k) qf(k, j) = y[static_cast<std::size_t>(k)];
  }
  out.trim = trim;
  out.cutoff_hz = opts.cutoff_hz;
  for (int k = trim; k < n - trim; ++k) {
    TrajectorySample s;
    s.t = log.t[static_cast<std::size_t>(k)];
    s.q = qf.row(k).transpose();
    s.qd = (qf.row(k + 1) - qf.row(k - 1)).transpose() / (2.0 * h);
    s.qdd = (qf.row(k + 1) - 2.0 * qf.row(k) + qf.row(k - 1)).transpose() / (h * h);
    s.tau = log.tau.row(k).transpose();
    out.samples.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

/// One rate component A sin(w t + phi); w in rad/s.
struct SineTerm {
  double amplitude = 0.0;
  double frequency = 1.0;
  double phase = 0.0;
};

/// Joint rates are sums of sines; positions and accelerations follow in
/// closed form.
struct ExcitationSpec {
  std::vector<std::vector<SineTerm>> channels;
  Eigen::VectorXd q0;
  double duration = 20.0;
  double sample_hz = 1000.0;

  void validate(int joints) const {
    if (static_cast<int>(channels.size()) != joints)
      throw DataError("excitation has " + std::to_string(channels.size()) + " channels, model has " +
                      std::to_string(joints) + " joints");
    if (q0.size() != joints) throw DataError("excitation q0 has the wrong size");
    if (!(duration > 0.0) || !(sample_hz > 0.0)) throw DataError("duration and sample rate must be positive");
    for (const auto& ch : channels)
      for (const auto& s : ch)
        if (!(s.frequency > 0.0)) throw DataError("excitation frequencies must be positive");
  }

  double rate(int j, double t) const {
    double v = 0.0;
    for (const auto& s : channels[static_cast<std::size_t>(j)]) v += s.amplitude * std::sin(s.frequency * t + s.phase);
    return v;
  }
  double position(int j, double t) const {
    double q = q0[j];
    for (const auto& s : channels[static_cast<std::size_t>(j)])
      q += s.amplitude / s.frequency * (std::cos(s.phase) - std::cos(s.frequency * t + s.phase));
    return q;
  }
  double acceleration(int j, double t) const {
    double a = 0.0;
    for (const auto& s : channels[static_cast<std::size_t>(j)])
      a += s.amplitude * s.frequency * std::cos(s.frequency * t + s.phase);
    return a;
  }

  /// Two slow sweeps, phi' = 12 sin(1.63 t) and theta' = 3.4 sin(0.265 t).
  /// Ab/ad follows theta, hip follows phi, the knee their average.
  static ExcitationSpec leg_sweep(double duration = 20.0, double sample_hz = 1000.0) {
    const SineTerm phi{12.0, 1.63, 0.0}, theta{3.4, 0.265, 0.0};
    ExcitationSpec e;
    e.channels = {{theta}, {phi}, {SineTerm{0.5 * phi.amplitude, phi.frequency, 0.0}, SineTerm{0.5 * theta.amplitude, theta.frequency, 0.0}}};
    e.q0 = Eigen::Vector3d(0.0, -0.8, 1.6);
    e.duration = duration;
    e.sample_hz = sample_hz;
    return e;
  }

  /// Five incommensurate sines per joint.
  static ExcitationSpec multisine(int joints, double duration = 20.0, double sample_hz = 1000.0) {
    static const double base[5] = {0.9, 2.1, 3.7, 5.3, 7.9};
    ExcitationSpec e;
    e.channels.resize(static_cast<std::size_t>(joints));
    e.q0 = Eigen::VectorXd::Zero(joints);
    for (int j = 0; j < joints; ++j) {
      for (int k = 0; k < 5; ++k) {
        SineTerm s;
        s.frequency = base[k] * (1.0 + 0.137 * j);
        s.amplitude = 2.4 / (1.0 + 0.6 * k);
        s.phase = 0.7 * (k + 1) * (j + 1);
        e.channels[static_cast<std::size_t>(j)].push_back(s);
      }
    }
    e.duration = duration;
    e.sample_hz = sample_hz;
    return e;
  }
};

struct SyntheticData {
  RawLog log;  ///< with exact v, a columns and noisy tau
  TrajectoryDataset samples;  ///< same samples as a dataset
  Eigen::MatrixXd clean_tau;
};

inline SyntheticData generate_synthetic(const KinematicModel& model, const ParamVector& truth,
                                        const ExcitationSpec& exc, double noise_sigma, std::uint64_t seed,
                                        double deadband = kDefaultDeadband) {
  const int nj = model.num_joints();
  exc.validate(nj);
  if (truth.pi.size() != model.num_params()) throw DataError("true parameters have the wrong size");
  if (!(noise_sigma >= 0.0)) throw DataError("noise sigma must be nonnegative");
  const int n = static_cast<int>(std::floor(exc.duration * exc.sample_hz + 1e-9)) + 1;
  SyntheticData out;
  RawLog& log = out.log;
  log.q.resize(n, nj);
  log.tau.resize(n, nj);
  log.qd = Eigen::MatrixXd(n, nj);
  log.qdd = Eigen::MatrixXd(n, nj);
  out.clean_tau.resize(n, nj);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int k = 0; k < n; ++k) {
    TrajectorySample s;
    s.t = k / exc.sample_hz;
    s.q.resize(nj);
    s.qd.resize(nj);
    s.qdd.resize(nj);
    for (int j = 0; j < nj; ++j) {
      s.q[j] = exc.position(j, s.t);
      s.qd[j] = exc.rate(j, s.t);
      s.qdd[j] = exc.acceleration(j, s.t);
    }
    const Eigen::VectorXd clean = model_torque(model, truth, s, deadband);
    s.tau = clean;
    if (noise_sigma > 0.0)
      for (int j = 0; j < nj; ++j) s.tau[j] += noise_sigma * noise(rng);
    log.t.push_back(s.t);
    log.q.row(k) = s.q.transpose();
    log.qd->row(k) = s.qd.transpose();
    log.qdd->row(k) = s.qdd.transpose();
    log.tau.row(k) = s.tau.transpose();
    out.clean_tau.row(k) = clean.transpose();
    out.samples.push_back(std::move(s));
  }
  return out;
}

/// First half for training, second half for validation.
inline std::pair<TrajectoryDataset, TrajectoryDataset> split_holdout(const TrajectoryDataset& data) {
  const auto half = static_cast<std::ptrdiff_t>(data.size() / 2);
  return {TrajectoryDataset(data.begin(), data.begin() + half), TrajectoryDataset(data.begin() + half, data.end())};
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct SolverStats {
  std::string status;
  int iterations = 0;
  double objective = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double wall_time = 0.0;
};

struct FitReport {
  Eigen::VectorXd per_joint_rms;
  double overall_rms = 0.0;
  int samples = 0;
  int training_samples = 0;
  std::string level;
  std::optional<SolverStats> solver;
  FrictionParams friction;
  std::vector<std::pair<std::string, ConsistencyReport>> bodies;
  double strictness = 0.0;
  double deadband = kDefaultDeadband;
  Eigen::MatrixXd residuals;  ///< tau - model torque, one row per sample
};

inline FitReport evaluate(const KinematicModel& model, const ParamVector& params, const TrajectoryDataset& data,
                          double deadband = kDefaultDeadband) {
  FitReport r;
  const int nj = model.num_joints();
  r.samples = static_cast<int>(data.size());
  r.per_joint_rms = Eigen::VectorXd::Zero(nj);
  r.residuals.resize(r.samples, nj);
  r.friction = params.friction;
  r.deadband = deadband;
  for (int k = 0; k < r.samples; ++k) {
    const auto& s = data[static_cast<std::size_t>(k)];
    const Eigen::VectorXd e = s.tau - model_torque(model, params, s, deadband);
    r.residuals.row(k) = e.transpose();
    r.per_joint_rms += e.cwiseAbs2();
  }
  if (r.samples > 0) {
    r.overall_rms = std::sqrt(r.per_joint_rms.sum() / (static_cast<double>(r.samples) * nj));
    r.per_joint_rms = (r.per_joint_rms / r.samples).cwiseSqrt();
  }
  return r;
}

inline SolverStats solver_stats(const Solution& s) {
  return {status_name(s.status), s.iterations, s.primal_objective, s.gap, s.primal_residual, s.dual_residual, s.wall_time};
}

/// Consistency summary of every body against its model ellipsoids.
inline std::vector<std::pair<std::string, ConsistencyReport>> body_reports(const KinematicModel& model,
                                                                            const ParamVector& params) {
  std::vector<std::pair<std::string, ConsistencyReport>> out;
  for (int i = 0; i < model.num_bodies(); ++i) {
    const Body& b = model.bodies[static_cast<std::size_t>(i)];
    std::vector<std::pair<std::string, Ellipsoid>> es;
    if (b.ellipsoid) es.emplace_back("ellipsoid", *b.ellipsoid);
    if (b.com_ellipsoid) es.emplace_back("com_ellipsoid", *b.com_ellipsoid);
    out.emplace_back(b.name, make_consistency_report(params.body(i), es));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Learning curves
// ---------------------------------------------------------------------------

struct CurveRow {
  ConstraintLevel level = ConstraintLevel::none;
  int train_samples = 0;
  Eigen::VectorXd per_joint_rms;
  double overall_rms = 0.0;
  std::string status;
};

/// Fits on the first n samples of `train` for each size and level and
/// evaluates on `validation`.
inline std::vector<CurveRow> learning_curve(const KinematicModel& model, const TrajectoryDataset& train,
                                            const TrajectoryDataset& validation,
                                            const std::vector<ConstraintLevel>& levels, const std::vector<int>& sizes,
                                            const IdentificationOptions& base = {}) {
  std::vector<CurveRow> rows;
  for (int n : sizes) {
    if (n < 1 || n > static_cast<int>(train.size()))
      throw DataError("training size " + std::to_string(n) + " exceeds the " + std::to_string(train.size()) +
                      " available samples");
    const TrajectoryDataset sub(train.begin(), train.begin() + n);
    for (ConstraintLevel level : levels) {
      IdentificationOptions opts = base;
      opts.level = level;
      const IdentificationResult res = identify(model, sub, opts);
      CurveRow row;
      row.level = level;
      row.train_samples = n;
      row.status = status_name(res.solution.status);
      if (res.solution.x.size()) {
        const FitReport rep = evaluate(model, res.params, validation, opts.deadband);
        row.per_joint_rms = rep.per_joint_rms;
        row.overall_rms = rep.overall_rms;
      } else {
        row.per_joint_rms = Eigen::VectorXd::Constant(model.num_joints(), std::numeric_limits<double>::quiet_NaN());
        row.overall_rms = std::numeric_limits<double>::quiet_NaN();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows, const std::string& extra_header = "",
                            const std::vector<std::string>& extra = {}) {
  const int nj = rows.empty() ? 0 : static_cast<int>(rows.front().per_joint_rms.size());
  os << (extra_header.empty() ? "" : extra_header + ",") << "level,train_samples,status,overall_rms";
  for (int j = 1; j <= nj; ++j) os << ",rms" << j;
  os << "\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (!extra_header.empty()) os << extra[r] << ",";
    os << level_name(row.level) << "," << row.train_samples << "," << row.status << "," << detail::fmt17(row.overall_rms);
    for (int j = 0; j < nj; ++j) os << "," << detail::fmt17(row.per_joint_rms[j]);
    os << "\n";
  }
}

}  // namespace inertid

#pragma once

// Constrained least-squares identification of inertial parameters and
// friction:
//
//   min (1/n) sum_m |Y_m pi + B qd_m + B_c sign(qd_m) - tau_m|^2 + w |pi - pi_hat|^2
//
// subject to per-body consistency constraints chosen by ConstraintLevel.
// The quadratic objective is carried by one second-order cone on the
// residual norm, either compressed through the Gram matrix or stacked over
// all samples.

#include "inertid/conic.hpp"
#include "inertid/consistency.hpp"
#include "inertid/dynamics.hpp"
#include "inertid/error.hpp"
#include "inertid/interior_point.hpp"
#include "inertid/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace inertid {

enum class ConstraintLevel { none, semi, full, full_com, full_ellipsoid };

inline const char* level_name(ConstraintLevel l) {
  switch (l) {
    case ConstraintLevel::none: return "none";
    case ConstraintLevel::semi: return "semi";
    case ConstraintLevel::full: return "full";
    case ConstraintLevel::full_com: return "full+com";
    case ConstraintLevel::full_ellipsoid: return "full+ellipsoid";
  }
  return "?";
}

inline ConstraintLevel parse_level(const std::string& s) {
  for (auto l : {ConstraintLevel::none, ConstraintLevel::semi, ConstraintLevel::full, ConstraintLevel::full_com,
                 ConstraintLevel::full_ellipsoid})
    if (s == level_name(l)) return l;
  throw std::invalid_argument("unknown constraint level \"" + s + "\" (none, semi, full, full+com, full+ellipsoid)");
}

enum class LsEncoding { compressed, stacked };

struct IdentificationOptions {
  double regularization = 1e-6;
  /// pi_hat; defaults to the model's params, or zero when the model has none.
  std::optional<Eigen::VectorXd> prior;
  ConstraintLevel level = ConstraintLevel::full;
  /// Per-body overrides; empty means take both from the model.
  std::vector<std::optional<Ellipsoid>> ellipsoids;
  std::vector<std::optional<Ellipsoid>> com_ellipsoids;
  bool friction_nonnegative = true;
  bool identify_friction = true;
  double deadband = kDefaultDeadband;
  LsEncoding encoding = LsEncoding::compressed;
  /// Margin for strict inequalities; default 1e-10 max(1, prior total mass).
  std::optional<double> strictness;
  SolverOptions solver;
};

/// Which decision entries hold which physical quantity.
struct DecisionLayout {
  int pi_offset = 0;
  int num_bodies = 0;
  std::vector<int> viscous_var;  ///< per joint, -1 if not identified
  std::vector<int> coulomb_var;
  int epigraph = -1;
  int num_regressors = 0;  ///< columns of the per-sample data matrix

  ParamVector decode(const Eigen::VectorXd& x) const {
    ParamVector p;
    p.pi = x.segment(pi_offset, 10 * num_bodies);
    const auto nj = static_cast<Eigen::Index>(viscous_var.size());
    p.friction = FrictionParams::zero(static_cast<int>(nj));
    for (Eigen::Index j = 0; j < nj; ++j) {
      if (viscous_var[static_cast<std::size_t>(j)] >= 0) p.friction.viscous[j] = x[viscous_var[static_cast<std::size_t>(j)]];
      if (coulomb_var[static_cast<std::size_t>(j)] >= 0) p.friction.coulomb[j] = x[coulomb_var[static_cast<std::size_t>(j)]];
    }
    return p;
  }
};

/// Per-sample data matrix Phi with Phi x_data = Y pi + B qd + B_c s, where
/// x_data is the decision vector without the epigraph variable.
inline Eigen::MatrixXd data_matrix(const KinematicModel& model, const DecisionLayout& lay, const TrajectorySample& s,
                                   double deadband) {
  Eigen::MatrixXd Phi = Eigen::MatrixXd::Zero(model.num_joints(), lay.num_regressors);
  Phi.leftCols(model.num_params()) = regressor(model, s.q, s.qd, s.qdd);
  for (int j = 0; j < model.num_joints(); ++j) {
    const auto js = static_cast<std::size_t>(j);
    if (lay.viscous_var[js] >= 0) Phi(j, lay.viscous_var[js] - lay.pi_offset) = s.qd[j];
    if (lay.coulomb_var[js] >= 0) Phi(j, lay.coulomb_var[js] - lay.pi_offset) = sign_deadband(s.qd[j], deadband);
  }
  return Phi;
}

/// Averaged normal equations: (1/n) sum Phi^T Phi, (1/n) sum Phi^T tau, (1/n) sum |tau|^2.
struct NormalEquations {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double c = 0.0;
  int samples = 0;
};

inline void validate_dataset(const KinematicModel& model, const TrajectoryDataset& data) {
  if (data.empty()) throw DataError("identification needs at least one sample");
  const auto nj = model.num_joints();
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& s = data[k];
    if (s.q.size() != nj || s.qd.size() != nj || s.qdd.size() != nj || s.tau.size() != nj)
      throw DataError("sample " + std::to_string(k) + " does not match the model's " + std::to_string(nj) + " joints");
    if (!s.q.allFinite() || !s.qd.allFinite() || !s.qdd.allFinite() || !s.tau.allFinite())
      throw DataError("sample " + std::to_string(k) + " has non-finite entries");
  }
}

inline NormalEquations normal_equations(const KinematicModel& model, const DecisionLayout& lay,
                                        const TrajectoryDataset& data, double deadband) {
  NormalEquations ne;
  ne.A = Eigen::MatrixXd::Zero(lay.num_regressors, lay.num_regressors);
  ne.b = Eigen::VectorXd::Zero(lay.num_regressors);
  for (const auto& s : data) {
    const Eigen::MatrixXd Phi = data_matrix(model, lay, s, deadband);
    ne.A.selfadjointView<Eigen::Lower>().rankUpdate(Phi.transpose());
    ne.b.noalias() += Phi.transpose() * s.tau;
    ne.c += s.tau.squaredNorm();
  }
  const double inv = 1.0 / static_cast<double>(data.size());
  ne.A = ne.A.selfadjointView<Eigen::Lower>();
  ne.A *= inv;
  ne.b *= inv;
  ne.c *= inv;
  ne.samples = static_cast<int>(data.size());
  return ne;
}

struct IdentificationProblem {
  ConicProgram program;
  DecisionLayout layout;
  LsEncoding encoding = LsEncoding::compressed;
  double strictness = 0.0;
  /// objective = t^2 + objective_constant at the solution.
  double objective_constant = 0.0;
  int samples = 0;
  Eigen::VectorXd prior;
};

namespace detail {

inline Eigen::VectorXd resolve_prior(const KinematicModel& model, const IdentificationOptions& opts) {
  if (opts.prior) {
    if (opts.prior->size() != model.num_params()) throw DataError("prior must have 10 entries per body");
    return *opts.prior;
  }
  return model.has_all_params() ? model.stacked_params() : Eigen::VectorXd::Zero(model.num_params());
}

inline std::optional<Ellipsoid> pick(const std::vector<std::optional<Ellipsoid>>& override_list,
                                     const std::optional<Ellipsoid>& from_model, int i) {
  if (!override_list.empty()) return override_list.at(static_cast<std::size_t>(i));
  return from_model;
}

inline Eigen::VectorXd svec_identity(int order) { return svec(Eigen::MatrixXd::Identity(order, order)); }

}  // namespace detail

/// Attaches the per-body constraints of `level` to pi_i at columns
/// [off, off + 10) of a program with n variables.
inline void add_body_constraints(ConicProgram& prog, int off, const std::string& name, ConstraintLevel level,
                                 double delta, const std::optional<Ellipsoid>& ellipsoid,
                                 const std::optional<Ellipsoid>& com_ellipsoid) {
  const int n = prog.num_variables();
  auto lift = [&](const Eigen::MatrixXd& M) {
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(M.rows(), n);
    F.middleCols(off, 10) = M;
    return F;
  };
  if (level == ConstraintLevel::none) return;
  if (level == ConstraintLevel::semi) {
    prog.add_psd(6, lift(spatial_inertia_map()), -delta * detail::svec_identity(6), "spatial_inertia[" + name + "]");
    return;
  }
  prog.add_psd(4, lift(pseudo_inertia_map()), -delta * detail::svec_identity(4), "pseudo_inertia[" + name + "]");
  if (level == ConstraintLevel::full_com) {
    const auto& e = com_ellipsoid ? com_ellipsoid : ellipsoid;
    if (!e) throw DataError("body " + name + " needs an ellipsoid for level full+com");
    prog.add_psd(4, lift(com_lmi_map(*e)), Eigen::VectorXd::Zero(10), "com_ellipsoid[" + name + "]");
  }
  if (level == ConstraintLevel::full_ellipsoid) {
    if (!ellipsoid) throw DataError("body " + name + " needs an ellipsoid for level full+ellipsoid");
    Eigen::MatrixXd q = trace_functional(homogeneous_q(*ellipsoid)).transpose();
    prog.add_nonnegative(lift(q), Eigen::VectorXd::Zero(1), "ellipsoid_trace[" + name + "]");
    if (com_ellipsoid)
      prog.add_psd(4, lift(com_lmi_map(*com_ellipsoid)), Eigen::VectorXd::Zero(10), "com_ellipsoid[" + name + "]");
  }
}

inline IdentificationProblem build_identification(const KinematicModel& model, const TrajectoryDataset& data,
                                                  const IdentificationOptions& opts = {}) {
  validate_dataset(model, data);
  if (!(opts.regularization >= 0.0)) throw std::invalid_argument("regularization weight must be nonnegative");
  if (!opts.ellipsoids.empty() && static_cast<int>(opts.ellipsoids.size()) != model.num_bodies())
    throw DataError("ellipsoid overrides must list every body");
  if (!opts.com_ellipsoids.empty() && static_cast<int>(opts.com_ellipsoids.size()) != model.num_bodies())
    throw DataError("com ellipsoid overrides must list every body");

  IdentificationProblem out;
  out.encoding = opts.encoding;
  out.samples = static_cast<int>(data.size());
  out.prior = detail::resolve_prior(model, opts);

  double total_mass = 0.0;
  for (int i = 0; i < model.num_bodies(); ++i) total_mass += std::abs(out.prior[10 * i]);
  out.strictness = opts.strictness.value_or(1e-10 * std::max(1.0, total_mass));

  ConicProgram& prog = out.program;
  DecisionLayout& lay = out.layout;
  lay.epigraph = prog.add_block("t", 1);
  lay.num_bodies = model.num_bodies();
  lay.pi_offset = prog.num_variables();
  for (const auto& b : model.bodies) prog.add_block("pi[" + b.name + "]", 10);
  const int nj = model.num_joints();
  lay.viscous_var.assign(static_cast<std::size_t>(nj), -1);
  lay.coulomb_var.assign(static_cast<std::size_t>(nj), -1);
  std::vector<int> friction_vars;
  if (opts.identify_friction) {
    for (int j = 0; j < nj; ++j)
      if (model.joints()[static_cast<std::size_t>(j)].viscous) {
        lay.viscous_var[static_cast<std::size_t>(j)] = prog.add_block("viscous[" + model.joints()[static_cast<std::size_t>(j)].name + "]", 1);
        friction_vars.push_back(lay.viscous_var[static_cast<std::size_t>(j)]);
      }
    for (int j = 0; j < nj; ++j)
      if (model.joints()[static_cast<std::size_t>(j)].coulomb) {
        lay.coulomb_var[static_cast<std::size_t>(j)] = prog.add_block("coulomb[" + model.joints()[static_cast<std::size_t>(j)].name + "]", 1);
        friction_vars.push_back(lay.coulomb_var[static_cast<std::size_t>(j)]);
      }
  }
  const int n = prog.num_variables();
  lay.num_regressors = n - lay.pi_offset;
  prog.objective()[lay.epigraph] = 1.0;

  const int np = model.num_params();
  const double w = opts.regularization;
  const int nr = lay.num_regressors;
  if (opts.encoding == LsEncoding::compressed) {
    NormalEquations ne = normal_equations(model, lay, data, opts.deadband);
    ne.A.topLeftCorner(np, np).diagonal().array() += w;
    ne.b.head(np) += w * out.prior;
    ne.c += w * out.prior.squaredNorm();
    // A = U L U^T, M = L^{1/2} U^T, y = L^{-1/2} U^T b:
    // x^T A x - 2 b^T x + c = |M x - y|^2 + c - |y|^2.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ne.A);
    const Eigen::VectorXd lam = es.eigenvalues();
    const double cut = 1e-15 * std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
    std::vector<int> keep;
    for (int k = 0; k < nr; ++k)
      if (lam[k] > cut) keep.push_back(k);
    const int r = static_cast<int>(keep.size());
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(1 + r, n);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(1 + r);
    F(0, lay.epigraph) = 1.0;
    double ysq = 0.0;
    for (int k = 0; k < r; ++k) {
      const int e = keep[static_cast<std::size_t>(k)];
      const double s = std::sqrt(lam[e]);
      F.block(1 + k, lay.pi_offset, 1, nr) = s * es.eigenvectors().col(e).transpose();
      const double y = es.eigenvectors().col(e).dot(ne.b) / s;
      f[1 + k] = -y;
      ysq += y * y;
    }
    prog.add_second_order(std::move(F), std::move(f), "least_squares");
    out.objective_constant = ne.c - ysq;
  } else {
    const int rows = static_cast<int>(data.size()) * nj + (w > 0.0 ? np : 0);
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(1 + rows, n);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(1 + rows);
    F(0, lay.epigraph) = 1.0;
    const double sc = 1.0 / std::sqrt(static_cast<double>(data.size()));
    int row = 1;
    for (const auto& s : data) {
      F.block(row, lay.pi_offset, nj, nr) = sc * data_matrix(model, lay, s, opts.deadband);
      f.segment(row, nj) = -sc * s.tau;
      row += nj;
    }
    if (w > 0.0) {
      const double sw = std::sqrt(w);
      for (int k = 0; k < np; ++k) F(row + k, lay.pi_offset + k) = sw;
      f.segment(row, np) = -sw * out.prior;
    }
    prog.add_second_order(std::move(F), std::move(f), "least_squares");
    out.objective_constant = 0.0;
  }

  for (int i = 0; i < model.num_bodies(); ++i) {
    const Body& b = model.bodies[static_cast<std::size_t>(i)];
    add_body_constraints(prog, lay.pi_offset + 10 * i, b.name, opts.level, out.strictness,
                         detail::pick(opts.ellipsoids, b.ellipsoid, i), detail::pick(opts.com_ellipsoids, b.com_ellipsoid, i));
  }
  if (opts.friction_nonnegative && !friction_vars.empty()) {
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(friction_vars.size()), n);
    for (std::size_t k = 0; k < friction_vars.size(); ++k) F(static_cast<Eigen::Index>(k), friction_vars[k]) = 1.0;
    prog.add_nonnegative(std::move(F), Eigen::VectorXd::Zero(F.rows()), "friction_nonnegative");
  }
  prog.validate();
  return out;
}

/// True when p meets the constraints of `level` with strict margin delta,
/// exactly as encoded in the optimization problem.
inline bool satisfies_level(const InertialParams& p, ConstraintLevel level, double delta,
                            const std::optional<Ellipsoid>& ellipsoid, const std::optional<Ellipsoid>& com_ellipsoid) {
  switch (level) {
    case ConstraintLevel::none: return true;
    case ConstraintLevel::semi: return eigen_range(spatial_inertia(p).matrix).min > delta;
    default: break;
  }
  if (!(eigen_range(pseudo_inertia(p).matrix).min > delta)) return false;
  if (level == ConstraintLevel::full_com) {
    const auto& e = com_ellipsoid ? com_ellipsoid : ellipsoid;
    if (!e || eigen_range(com_lmi_matrix(p, *e)).min < 0.0) return false;
  }
  if (level == ConstraintLevel::full_ellipsoid) {
    if (!ellipsoid || (pseudo_inertia(p).matrix * homogeneous_q(*ellipsoid).Q).trace() < 0.0) return false;
    if (com_ellipsoid && eigen_range(com_lmi_matrix(p, *com_ellipsoid)).min < 0.0) return false;
  }
  return true;
}

namespace detail {

inline InertialParams solid_ellipsoid(const Ellipsoid& e) {
  const Mat3 S = e.shape / 5.0;
  return params_from_com(1.0, e.center, Mat3(S.trace() * Mat3::Identity() - S));
}

}  // namespace detail

/// Moves p a short way toward a strictly feasible direction when round-off
/// in the solver leaves a constraint of `level` marginally violated. Returns
/// the norm of the shift, 0 when p already satisfies the level and -1 when no
/// shift below 1e-6 max(1, |p|) restores it (p is then left unchanged).
inline double restore_feasibility(InertialParams& p, ConstraintLevel level, double delta,
                                  const std::optional<Ellipsoid>& ellipsoid,
                                  const std::optional<Ellipsoid>& com_ellipsoid) {
  if (satisfies_level(p, level, delta, ellipsoid, com_ellipsoid)) return 0.0;
  std::vector<Vec10> dirs;
  if (ellipsoid) dirs.push_back(detail::solid_ellipsoid(*ellipsoid).to_vector());
  if (com_ellipsoid) dirs.push_back(detail::solid_ellipsoid(*com_ellipsoid).to_vector());
  dirs.push_back(params_from_com(1.0, Vec3::Zero(), Mat3(2.0 * Mat3::Identity())).to_vector());
  const Vec10 x = p.to_vector();
  const double cap = 1e-6 * std::max(1.0, x.norm());
  for (const Vec10& d : dirs) {
    const Vec10 u = d / d.norm();
    for (double eps = std::max(delta, 1e-300); eps <= cap; eps *= 2.0) {
      const InertialParams q = InertialParams::from_vector(x + eps * u);
      if (satisfies_level(q, level, delta, ellipsoid, com_ellipsoid)) {
        p = q;
        return eps;
      }
    }
  }
  return -1.0;
}

struct IdentificationResult {
  ParamVector params;
  Solution solution;
  ConstraintLevel level = ConstraintLevel::full;
  double objective = 0.0;  ///< least-squares objective including regularization
  double residual_norm = 0.0;  ///< epigraph value t
  double strictness = 0.0;
  double regularization = 0.0;
  int samples = 0;
  /// w = 0 can leave unidentifiable directions free.
  bool possibly_non_unique = false;
  /// Largest per-body shift applied by restore_feasibility; -1 if one failed.
  double restoration = 0.0;
};

inline IdentificationResult identify(const KinematicModel& model, const TrajectoryDataset& data,
                                     const IdentificationOptions& opts = {}) {
  const IdentificationProblem prob = build_identification(model, data, opts);
  IdentificationResult res;
  res.solution = solve(prob.program, opts.solver);
  res.level = opts.level;
  res.strictness = prob.strictness;
  res.regularization = opts.regularization;
  res.samples = prob.samples;
  res.possibly_non_unique = opts.regularization == 0.0;
  if (res.solution.x.size() == prob.program.num_variables()) {
    res.params = prob.layout.decode(res.solution.x);
    res.residual_norm = res.solution.x[prob.layout.epigraph];
    res.objective = res.residual_norm * res.residual_norm + prob.objective_constant;
  }
  if (res.solution.optimal()) {
    for (int i = 0; i < model.num_bodies(); ++i) {
      const Body& b = model.bodies[static_cast<std::size_t>(i)];
      InertialParams p = res.params.body(i);
      const double shift = restore_feasibility(p, opts.level, prob.strictness, detail::pick(opts.ellipsoids, b.ellipsoid, i),
                                               detail::pick(opts.com_ellipsoids, b.com_ellipsoid, i));
      if (shift < 0.0) {
        res.restoration = -1.0;
      } else if (shift > 0.0) {
        res.params.pi.segment<10>(10 * i) = p.to_vector();
        if (res.restoration >= 0.0) res.restoration = std::max(res.restoration, shift);
      }
    }
    if (opts.friction_nonnegative) {
      res.params.friction.viscous = res.params.friction.viscous.cwiseMax(0.0);
      res.params.friction.coulomb = res.params.friction.coulomb.cwiseMax(0.0);
    }
  }
  return res;
}

/// Violations of the conditions of `level` for each body; empty when all
/// hold. Strict conditions are tested as lambda_min > tol; without an
/// explicit tol the scale-aware default policy applies.
inline std::vector<std::string> level_violations(const KinematicModel& model, const ParamVector& params,
                                                 ConstraintLevel level, std::optional<double> tol = std::nullopt,
                                                 bool friction_nonnegative = true) {
  std::vector<std::string> v;
  for (int i = 0; i < model.num_bodies(); ++i) {
    const Body& b = model.bodies[static_cast<std::size_t>(i)];
    const InertialParams p = params.body(i);
    if (level == ConstraintLevel::none) break;
    if (level == ConstraintLevel::semi) {
      const auto c = check_semi_consistent(p, tol);
      if (!c.holds) v.push_back(b.name + ": spatial inertia not positive definite (min eig " + std::to_string(c.min_eig) + ")");
      continue;
    }
    const auto c = check_fully_consistent(p, tol);
    if (!c.holds) v.push_back(b.name + ": pseudo-inertia not positive definite (min eig " + std::to_string(c.min_eig) + ")");
    if (level == ConstraintLevel::full_com || (level == ConstraintLevel::full_ellipsoid && b.com_ellipsoid)) {
      const auto& e = b.com_ellipsoid ? b.com_ellipsoid : b.ellipsoid;
      if (!e) {
        v.push_back(b.name + ": no ellipsoid to check the center of mass against");
      } else if (!com_ellipsoid_lmi(p, *e).feasible) {
        v.push_back(b.name + ": center of mass outside its ellipsoid");
      }
    }
    if (level == ConstraintLevel::full_ellipsoid) {
      if (!b.ellipsoid) {
        v.push_back(b.name + ": no bounding ellipsoid");
      } else {
        const auto r = check_realizable_on_ellipsoid(p, homogeneous_q(*b.ellipsoid), tol);
        if (!(r.trace_value >= -default_threshold(pseudo_inertia(p).matrix.cwiseAbs().maxCoeff())))
          v.push_back(b.name + ": not density realizable on its ellipsoid (Tr(JQ) = " + std::to_string(r.trace_value) + ")");
      }
    }
  }
  if (friction_nonnegative) {
    for (int j = 0; j < params.friction.viscous.size(); ++j)
      if (params.friction.viscous[j] < 0.0) v.push_back("joint " + std::to_string(j) + ": negative viscous friction");
    for (int j = 0; j < params.friction.coulomb.size(); ++j)
      if (params.friction.coulomb[j] < 0.0) v.push_back("joint " + std::to_string(j) + ": negative Coulomb friction");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Projection
// ---------------------------------------------------------------------------

struct ProjectionResult {
  InertialParams params;
  double distance = 0.0;
  Solution solution;
};

/// Nearest parameters (Euclidean in R^10) satisfying `level`.
inline ProjectionResult project_to_consistent(const InertialParams& p0, ConstraintLevel level,
                                              const std::optional<Ellipsoid>& ellipsoid = std::nullopt,
                                              const std::optional<Ellipsoid>& com_ellipsoid = std::nullopt,
                                              std::optional<double> strictness = std::nullopt,
                                              const SolverOptions& solver = {}) {
  const Vec10 x0 = p0.to_vector();
  ProjectionResult out;
  if (level == ConstraintLevel::none) {
    out.params = p0;
    out.solution.status = SolveStatus::optimal;
    return out;
  }
  const double delta = strictness.value_or(1e-10 * std::max(1.0, std::abs(p0.mass)));
  if (satisfies_level(p0, level, delta, ellipsoid, com_ellipsoid)) {
    out.params = p0;
    out.solution.status = SolveStatus::optimal;
    out.solution.x = Eigen::VectorXd::Zero(11);
    out.solution.x.tail<10>() = x0;
    out.solution.primal_objective = out.solution.dual_objective = out.solution.gap = 0.0;
    out.solution.diagnostic = "input already satisfies the constraints";
    return out;
  }
  ConicProgram prog;
  const int t = prog.add_block("t", 1);
  const int off = prog.add_block("pi", 10);
  prog.objective()[t] = 1.0;
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(11, 11);
  F(0, t) = 1.0;
  F.block(1, off, 10, 10).setIdentity();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(11);
  f.tail(10) = -x0;
  prog.add_second_order(std::move(F), std::move(f), "distance");
  add_body_constraints(prog, off, "body", level, delta, ellipsoid, com_ellipsoid);
  out.solution = solve(prog, solver);
  if (out.solution.x.size() == 11) {
    out.params = InertialParams::from_vector(out.solution.x.segment<10>(off));
    if (out.solution.optimal()) restore_feasibility(out.params, level, delta, ellipsoid, com_ellipsoid);
    out.distance = (out.params.to_vector() - x0).norm();
  }
  return out;
}

}  // namespace inertid

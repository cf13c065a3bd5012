#pragma once

// Command-line front end. Every subcommand writes machine-readable JSON/CSV
// and sends human summaries to the error stream.
//
// Exit codes: 0 success, 1 usage, 2 data or model content, 3 solver.

#include "inertid/inertid.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace inertid::cli {

using nlohmann::json;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kSolver = 3 };

class UsageError : public Error {
  using Error::Error;
};

class SolveFailed : public Error {
 public:
  SolveFailed(const std::string& what, const Solution& s) : Error(what), solution(s) {}
  Solution solution;
};

enum class LogLevel { quiet, info, debug };

/// INERTID_LOG = quiet | info | debug; default info.
inline LogLevel log_level_from_env() {
  const char* v = std::getenv("INERTID_LOG");
  if (!v) return LogLevel::info;
  const std::string s(v);
  if (s == "quiet" || s == "0") return LogLevel::quiet;
  if (s == "debug" || s == "2") return LogLevel::debug;
  return LogLevel::info;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  LogLevel log = LogLevel::info;

  std::ostream& info() {
    static std::ostringstream sink;
    sink.str("");
    return log >= LogLevel::info ? err : sink;
  }
  std::ostream& debug() {
    static std::ostringstream sink;
    sink.str("");
    return log >= LogLevel::debug ? err : sink;
  }
};

// ---------------------------------------------------------------------------
// Shared settings
// ---------------------------------------------------------------------------

struct FitSettings {
  std::string level = "full";
  double regularization = 1e-6;
  std::string encoding = "compressed";
  double deadband = kDefaultDeadband;
  double cutoff_hz = 50.0;
  bool trust_logged = false;
  bool identify_friction = true;
  bool friction_nonnegative = true;
  bool holdout = true;
  std::optional<double> strictness;
  SolverOptions solver;
};

/// Fields present in the options file replace the flag values.
inline void apply_options_file(const std::string& path, FitSettings& s) {
  const json j = read_json_file(path);
  if (!j.is_object()) throw DataError(path + ": options must be a JSON object");
  static const std::vector<std::string> known = {"level",        "regularization",   "encoding",
                                                 "deadband",     "cutoff_hz",        "trust_logged",
                                                 "identify_friction", "friction_nonnegative", "holdout",
                                                 "strictness",   "solver"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw DataError(path + ": unknown option \"" + it.key() + "\"");
  try {
    if (j.contains("level")) s.level = j["level"].get<std::string>();
    if (j.contains("regularization")) s.regularization = j["regularization"].get<double>();
    if (j.contains("encoding")) s.encoding = j["encoding"].get<std::string>();
    if (j.contains("deadband")) s.deadband = j["deadband"].get<double>();
    if (j.contains("cutoff_hz")) s.cutoff_hz = j["cutoff_hz"].get<double>();
    if (j.contains("trust_logged")) s.trust_logged = j["trust_logged"].get<bool>();
    if (j.contains("identify_friction")) s.identify_friction = j["identify_friction"].get<bool>();
    if (j.contains("friction_nonnegative")) s.friction_nonnegative = j["friction_nonnegative"].get<bool>();
    if (j.contains("holdout")) s.holdout = j["holdout"].get<bool>();
    if (j.contains("strictness")) s.strictness = j["strictness"].get<double>();
    if (j.contains("solver")) {
      const json& so = j["solver"];
      if (so.contains("abstol")) s.solver.abstol = so["abstol"].get<double>();
      if (so.contains("reltol")) s.solver.reltol = so["reltol"].get<double>();
      if (so.contains("feastol")) s.solver.feastol = so["feastol"].get<double>();
      if (so.contains("max_iter")) s.solver.max_iter = so["max_iter"].get<int>();
      if (so.contains("step")) s.solver.step = so["step"].get<double>();
      if (so.contains("equilibrate")) s.solver.equilibrate = so["equilibrate"].get<bool>();
    }
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

inline void add_fit_flags(CLI::App* app, FitSettings& s, std::string& options_path) {
  app->add_option("--level", s.level, "none, semi, full, full+com or full+ellipsoid")->capture_default_str();
  app->add_option("--regularization", s.regularization, "weight of |pi - pi_prior|^2")->capture_default_str();
  app->add_option("--encoding", s.encoding, "least-squares encoding: compressed or stacked")->capture_default_str();
  app->add_option("--deadband", s.deadband, "Coulomb sign deadband on joint rates (rad/s)")->capture_default_str();
  app->add_option("--cutoff", s.cutoff_hz, "low-pass cutoff for differentiation (Hz)")->capture_default_str();
  app->add_flag("--trust-logged", s.trust_logged, "use logged v*, a* columns instead of differentiating q");
  app->add_flag("!--no-friction", s.identify_friction, "do not identify friction");
  app->add_flag("!--allow-negative-friction", s.friction_nonnegative, "drop the friction sign constraint");
  app->add_flag("!--no-holdout", s.holdout, "fit and evaluate on all samples");
  app->add_option("--options", options_path, "JSON file overriding these settings")->check(CLI::ExistingFile);
}

inline IdentificationOptions to_options(const FitSettings& s) {
  IdentificationOptions o;
  try {
    o.level = parse_level(s.level);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (s.encoding == "compressed") o.encoding = LsEncoding::compressed;
  else if (s.encoding == "stacked") o.encoding = LsEncoding::stacked;
  else throw UsageError("unknown encoding \"" + s.encoding + "\" (compressed, stacked)");
  if (!(s.regularization >= 0.0)) throw UsageError("regularization must be nonnegative");
  if (!(s.deadband >= 0.0)) throw UsageError("deadband must be nonnegative");
  o.regularization = s.regularization;
  o.deadband = s.deadband;
  o.identify_friction = s.identify_friction;
  o.friction_nonnegative = s.friction_nonnegative;
  o.strictness = s.strictness;
  o.solver = s.solver;
  return o;
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

inline json solver_json(const SolverStats& s) {
  // wall time is left out so outputs are reproducible
  return {{"status", s.status},
          {"iterations", s.iterations},
          {"objective", s.objective},
          {"gap", s.gap},
          {"primal_residual", s.primal_residual},
          {"dual_residual", s.dual_residual}};
}

inline json friction_json(const FrictionParams& f) {
  return {{"viscous", json_io::vec(f.viscous)}, {"coulomb", json_io::vec(f.coulomb)}};
}

inline json params_file_json(const KinematicModel& model, const ParamVector& p, const std::string& level,
                             std::optional<double> strictness, std::optional<double> regularization, double deadband,
                             const std::optional<SolverStats>& solver) {
  json j;
  j["format"] = 1;
  j["model"] = model.name;
  j["level"] = level;
  j["strictness"] = strictness ? json(*strictness) : json(nullptr);
  j["regularization"] = regularization ? json(*regularization) : json(nullptr);
  j["deadband"] = deadband;
  json bodies = json::array();
  for (int i = 0; i < model.num_bodies(); ++i)
    bodies.push_back({{"name", model.bodies[static_cast<std::size_t>(i)].name}, {"params", json_io::params(p.body(i))}});
  j["bodies"] = bodies;
  j["friction"] = friction_json(p.friction);
  if (solver) j["solver"] = solver_json(*solver);
  return j;
}

struct ParamsFile {
  ParamVector params;
  std::optional<ConstraintLevel> level;
  std::optional<double> strictness;
  double deadband = kDefaultDeadband;
};

/// Reads identified_params.json against `model`; bodies are matched by name.
inline ParamsFile read_params_file(const std::string& path, const KinematicModel& model) {
  const json j = read_json_file(path);
  ParamsFile out;
  try {
    if (!j.is_object() || !j.contains("bodies") || !j["bodies"].is_array())
      throw DataError(path + ": expected an object with a \"bodies\" array");
    out.params.pi = Eigen::VectorXd::Zero(model.num_params());
    std::vector<bool> seen(static_cast<std::size_t>(model.num_bodies()), false);
    for (const auto& b : j["bodies"]) {
      const std::string name = b.at("name").get<std::string>();
      const int i = model.body_index(name);
      if (i < 0) throw DataError(path + ": body \"" + name + "\" is not in the model");
      out.params.pi.segment<10>(10 * i) = json_io::read_params(b.at("params"), path + ": " + name).to_vector();
      seen[static_cast<std::size_t>(i)] = true;
    }
    for (int i = 0; i < model.num_bodies(); ++i)
      if (!seen[static_cast<std::size_t>(i)])
        throw DataError(path + ": missing body \"" + model.bodies[static_cast<std::size_t>(i)].name + "\"");
    const int nj = model.num_joints();
    out.params.friction = FrictionParams::zero(nj);
    if (j.contains("friction")) {
      out.params.friction.viscous = json_io::read_vec(j["friction"].at("viscous"), nj, path + ": friction.viscous");
      out.params.friction.coulomb = json_io::read_vec(j["friction"].at("coulomb"), nj, path + ": friction.coulomb");
    }
    if (j.contains("level") && j["level"].is_string()) {
      try {
        out.level = parse_level(j["level"].get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw DataError(path + ": " + e.what());
      }
    }
    if (j.contains("strictness") && j["strictness"].is_number()) out.strictness = j["strictness"].get<double>();
    if (j.contains("deadband") && j["deadband"].is_number()) out.deadband = j["deadband"].get<double>();
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return out;
}

/// {"body name": ellipsoid, ...}; `com` entries go to com_ellipsoid.
inline void apply_ellipsoid_file(const std::string& path, KinematicModel& model) {
  const json j = read_json_file(path);
  if (!j.is_object()) throw DataError(path + ": expected an object keyed by body name");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const int i = model.body_index(it.key());
    if (i < 0) throw DataError(path + ": body \"" + it.key() + "\" is not in the model");
    Body& b = model.bodies[static_cast<std::size_t>(i)];
    const json& v = it.value();
    if (v.contains("ellipsoid") || v.contains("com_ellipsoid")) {
      if (v.contains("ellipsoid")) b.ellipsoid = json_io::read_ellipsoid(v["ellipsoid"], path + ": " + it.key());
      if (v.contains("com_ellipsoid"))
        b.com_ellipsoid = json_io::read_ellipsoid(v["com_ellipsoid"], path + ": " + it.key());
    } else {
      b.ellipsoid = json_io::read_ellipsoid(v, path + ": " + it.key());
    }
  }
  model.validate();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path.string());
  f << text;
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline void write_residuals(const std::filesystem::path& path, const TrajectoryDataset& data, const Eigen::MatrixXd& e) {
  std::ostringstream os;
  os << "t";
  for (Eigen::Index j = 1; j <= e.cols(); ++j) os << ",e" << j;
  os << "\n";
  for (Eigen::Index k = 0; k < e.rows(); ++k) {
    os << detail::fmt17(data[static_cast<std::size_t>(k)].t);
    for (Eigen::Index j = 0; j < e.cols(); ++j) os << ',' << detail::fmt17(e(k, j));
    os << "\n";
  }
  write_text(path, os.str());
}

inline json fit_json(const FitReport& r) {
  return {{"per_joint_rms", json_io::vec(r.per_joint_rms)}, {"overall_rms", r.overall_rms}, {"samples", r.samples}};
}

inline KinematicModel require_model(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw UsageError("model file not found: " + path);
  return load_model(path);
}

inline void require_file(const std::string& path, const std::string& what) {
  if (!std::filesystem::is_regular_file(path)) throw UsageError(what + " not found: " + path);
}

inline std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw UsageError(what + ": cannot parse \"" + item + "\"");
    out.push_back(v);
  }
  return out;
}

inline TrajectoryDataset load_samples(Context& ctx, const std::string& path, const KinematicModel& model,
                                      const FitSettings& s, int* trim = nullptr) {
  require_file(path, "data file");
  const RawLog log = load_csv(path, model.num_joints());
  FilterOptions fo;
  fo.cutoff_hz = s.cutoff_hz;
  fo.trust_logged = s.trust_logged;
  FilteredData f = differentiate_filter(log, fo);
  if (!s.trust_logged)
    ctx.info() << "filtered " << log.size() << " samples at " << s.cutoff_hz << " Hz, trimmed " << f.trim
               << " from each end\n";
  if (trim) *trim = f.trim;
  return std::move(f.samples);
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct IdentifyArgs {
  std::string model, data, validation, out_dir = ".", options;
  FitSettings fit;
};

inline int cmd_identify(Context& ctx, IdentifyArgs a) {
  const KinematicModel model = require_model(a.model);
  if (!a.options.empty()) apply_options_file(a.options, a.fit);
  const IdentificationOptions opts = to_options(a.fit);
  int trim = 0;
  TrajectoryDataset all = load_samples(ctx, a.data, model, a.fit, &trim);
  TrajectoryDataset train, val;
  if (!a.validation.empty()) {
    train = std::move(all);
    val = load_samples(ctx, a.validation, model, a.fit);
  } else if (a.fit.holdout) {
    std::tie(train, val) = split_holdout(all);
  } else {
    train = all;
    val = all;
  }
  ctx.info() << "identifying " << model.num_params() << " inertial parameters from " << train.size()
             << " samples at level " << level_name(opts.level) << "\n";
  const IdentificationResult res = identify(model, train, opts);
  ctx.info() << "solver: " << status_name(res.solution.status) << " after " << res.solution.iterations
             << " iterations in " << res.solution.wall_time << " s\n";
  if (!res.solution.optimal())
    throw SolveFailed("identification did not reach an optimal solution (" +
                          std::string(status_name(res.solution.status)) + "): " + res.solution.diagnostic,
                      res.solution);

  FitReport rep = evaluate(model, res.params, val, opts.deadband);
  const FitReport train_rep = evaluate(model, res.params, train, opts.deadband);
  rep.training_samples = static_cast<int>(train.size());
  rep.level = level_name(opts.level);
  rep.solver = solver_stats(res.solution);
  rep.bodies = body_reports(model, res.params);
  rep.strictness = res.strictness;

  const std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);
  write_json(dir / "identified_params.json",
             params_file_json(model, res.params, rep.level, res.strictness, opts.regularization, opts.deadband, rep.solver));
  json r;
  r["format"] = 1;
  r["model"] = model.name;
  r["level"] = rep.level;
  r["validation"] = fit_json(rep);
  r["training"] = fit_json(train_rep);
  r["training_samples"] = rep.training_samples;
  r["filter"] = a.fit.trust_logged ? json(nullptr) : json({{"cutoff_hz", a.fit.cutoff_hz}, {"trim", trim}});
  r["solver"] = solver_json(*rep.solver);
  r["strictness"] = res.strictness;
  r["regularization"] = opts.regularization;
  r["possibly_non_unique"] = res.possibly_non_unique;
  r["restoration_shift"] = res.restoration;
  r["friction"] = friction_json(res.params.friction);
  json bodies = json::object();
  for (const auto& [name, cr] : rep.bodies) bodies[name] = json_io::report(cr);
  r["bodies"] = bodies;
  json viol = json::array();
  for (const auto& v : level_violations(model, res.params, opts.level, 0.5 * res.strictness, opts.friction_nonnegative))
    viol.push_back(v);
  r["violations"] = viol;
  write_json(dir / "report.json", r);
  write_residuals(dir / "residuals.csv", val, rep.residuals);
  ctx.info() << "validation RMS " << rep.overall_rms << " N m over " << rep.samples << " samples (per joint";
  for (Eigen::Index j = 0; j < rep.per_joint_rms.size(); ++j) ctx.info() << " " << rep.per_joint_rms[j];
  ctx.info() << ")\n";
  return kOk;
}

struct CheckArgs {
  std::string params, model, ellipsoids, level, repair, out;
};

/// Always exits 0 when the check itself ran; the verdict is in "consistent".
inline int cmd_check(Context& ctx, const CheckArgs& a) {
  KinematicModel model = require_model(a.model);
  require_file(a.params, "parameter file");
  if (!a.ellipsoids.empty()) {
    require_file(a.ellipsoids, "ellipsoid file");
    apply_ellipsoid_file(a.ellipsoids, model);
  }
  const ParamsFile pf = read_params_file(a.params, model);
  ConstraintLevel level = pf.level.value_or(ConstraintLevel::full);
  if (!a.level.empty()) {
    try {
      level = parse_level(a.level);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  // strict conditions are tested with half the margin the solver enforced
  const std::optional<double> tol = pf.strictness ? std::optional<double>(0.5 * *pf.strictness) : std::nullopt;
  const auto violations = level_violations(model, pf.params, level, tol);
  json j;
  j["format"] = 1;
  j["level"] = level_name(level);
  j["tolerance"] = tol ? json(*tol) : json(nullptr);
  j["consistent"] = violations.empty();
  j["violations"] = violations;
  json bodies = json::object();
  for (const auto& [name, cr] : body_reports(model, pf.params)) bodies[name] = json_io::report(cr);
  j["bodies"] = bodies;

  if (!a.repair.empty()) {
    ParamVector fixed = pf.params;
    json moved = json::object();
    for (int i = 0; i < model.num_bodies(); ++i) {
      const Body& b = model.bodies[static_cast<std::size_t>(i)];
      const ProjectionResult pr = project_to_consistent(pf.params.body(i), level, b.ellipsoid, b.com_ellipsoid, pf.strictness);
      if (!pr.solution.optimal())
        throw SolveFailed("repair of body " + b.name + " failed (" + status_name(pr.solution.status) +
                              "): " + pr.solution.diagnostic,
                          pr.solution);
      fixed.pi.segment<10>(10 * i) = pr.params.to_vector();
      moved[b.name] = pr.distance;
    }
    for (Eigen::Index k = 0; k < fixed.friction.viscous.size(); ++k) {
      fixed.friction.viscous[k] = std::max(0.0, fixed.friction.viscous[k]);
      fixed.friction.coulomb[k] = std::max(0.0, fixed.friction.coulomb[k]);
    }
    const double delta = pf.strictness.value_or(1e-10 * std::max(1.0, std::abs(pf.params.pi[0])));
    write_json(a.repair, params_file_json(model, fixed, level_name(level), delta, std::nullopt, pf.deadband, std::nullopt));
    j["repair"] = {{"file", a.repair}, {"distance", moved}};
    ctx.info() << "repaired parameters written to " << a.repair << "\n";
  }

  const std::string text = j.dump(2) + "\n";
  if (a.out.empty()) ctx.out << text;
  else write_text(a.out, text);
  ctx.info() << (violations.empty() ? "consistent" : "NOT consistent") << " at level " << level_name(level) << "\n";
  for (const auto& v : violations) ctx.info() << "  " << v << "\n";
  return kOk;
}

struct RealizeArgs {
  std::string model, params, body, out;
  bool in_ellipsoid = false;
};

inline int cmd_realize(Context& ctx, const RealizeArgs& a) {
  const KinematicModel model = require_model(a.model);
  ParamVector p;
  if (!a.params.empty()) {
    require_file(a.params, "parameter file");
    p = read_params_file(a.params, model).params;
  } else {
    if (!model.has_all_params()) throw DataError("model has no parameters for every body; pass --params");
    p.pi = model.stacked_params();
  }
  json bodies = json::array();
  for (int i = 0; i < model.num_bodies(); ++i) {
    const Body& b = model.bodies[static_cast<std::size_t>(i)];
    if (!a.body.empty() && b.name != a.body) continue;
    std::optional<Ellipsoid> e;
    if (a.in_ellipsoid) {
      if (!b.ellipsoid) throw DataError("body " + b.name + " has no ellipsoid");
      e = b.ellipsoid;
    }
    PointMassSet pts;
    try {
      pts = four_point_realization(p.body(i), e);
    } catch (const RealizationError& err) {
      throw DataError(b.name + ": " + err.what());
    } catch (const std::domain_error& err) {
      throw DataError(b.name + ": " + err.what());
    }
    const double rel = detail::relative_moment_error(p.body(i), params_from_point_masses(pts));
    bodies.push_back({{"name", b.name}, {"points", json_io::point_masses(pts)}, {"moment_error", rel}});
  }
  if (!a.body.empty() && bodies.empty()) throw UsageError("no body named " + a.body);
  const std::string text = json({{"format", 1}, {"bodies", bodies}}).dump(2) + "\n";
  if (a.out.empty()) ctx.out << text;
  else write_text(a.out, text);
  return kOk;
}

struct SimulateArgs {
  std::string model, truth, preset = "leg-sweep", out, truth_out;
  double duration = 20.0, rate = 1000.0, noise = 0.0, scale = 1.0;
  std::uint64_t seed = 1;
  std::string viscous, coulomb;
  bool positions_only = false;
};

inline ExcitationSpec make_preset(const std::string& name, int joints, double duration, double rate) {
  if (name == "leg-sweep") {
    if (joints != 3) throw UsageError("preset leg-sweep needs a 3-joint model");
    return ExcitationSpec::leg_sweep(duration, rate);
  }
  if (name == "multisine") return ExcitationSpec::multisine(joints, duration, rate);
  throw UsageError("unknown preset \"" + name + "\" (leg-sweep, multisine)");
}

inline int cmd_simulate(Context& ctx, const SimulateArgs& a) {
  const KinematicModel model = require_model(a.model);
  const int nj = model.num_joints();
  ParamVector truth;
  if (!a.truth.empty()) {
    require_file(a.truth, "truth file");
    truth = read_params_file(a.truth, model).params;
  } else {
    if (!model.has_all_params()) throw DataError("model has no parameters for every body; pass --truth");
    truth.pi = a.scale * model.stacked_params();
    truth.friction = FrictionParams::zero(nj);
  }
  auto read_friction = [&](const std::string& s, Eigen::VectorXd& dst, const char* what) {
    if (s.empty()) return;
    const auto v = parse_list(s, what);
    if (static_cast<int>(v.size()) != nj) throw UsageError(std::string(what) + " needs one value per joint");
    dst = Eigen::Map<const Eigen::VectorXd>(v.data(), nj);
  };
  read_friction(a.viscous, truth.friction.viscous, "--viscous");
  read_friction(a.coulomb, truth.friction.coulomb, "--coulomb");
  const ExcitationSpec exc = make_preset(a.preset, nj, a.duration, a.rate);
  SyntheticData syn = generate_synthetic(model, truth, exc, a.noise, a.seed);
  if (a.positions_only) {
    syn.log.qd.reset();
    syn.log.qdd.reset();
  }
  if (a.out.empty()) save_csv(ctx.out, syn.log);
  else save_csv(a.out, syn.log);
  if (!a.truth_out.empty())
    write_json(a.truth_out, params_file_json(model, truth, "none", std::nullopt, std::nullopt, kDefaultDeadband, std::nullopt));
  ctx.info() << "simulated " << syn.log.size() << " samples (" << a.preset << ", noise " << a.noise << ", seed " << a.seed
             << ")\n";
  return kOk;
}

struct CurveArgs {
  std::string model, data, levels = "none,semi,full,full+ellipsoid", sizes, out, options;
  FitSettings fit;
};

inline int cmd_curve(Context& ctx, CurveArgs a) {
  const KinematicModel model = require_model(a.model);
  if (!a.options.empty()) apply_options_file(a.options, a.fit);
  const IdentificationOptions base = to_options(a.fit);
  std::vector<ConstraintLevel> levels;
  {
    std::stringstream ss(a.levels);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        levels.push_back(parse_level(item));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
  }
  const TrajectoryDataset all = load_samples(ctx, a.data, model, a.fit);
  const auto [train, val] = split_holdout(all);
  std::vector<int> sizes;
  if (a.sizes.empty()) {
    for (int n = 100; n < static_cast<int>(train.size()); n *= 2) sizes.push_back(n);
    sizes.push_back(static_cast<int>(train.size()));
  } else {
    for (double v : parse_list(a.sizes, "--sizes")) sizes.push_back(static_cast<int>(v));
  }
  const auto rows = learning_curve(model, train, val, levels, sizes, base);
  std::ostringstream os;
  write_curve_csv(os, rows);
  if (a.out.empty()) ctx.out << os.str();
  else write_text(a.out, os.str());
  ctx.info() << rows.size() << " curve points over " << val.size() << " validation samples\n";
  return kOk;
}

struct ExportArgs {
  std::string model, data, out, solution, write_solution, options;
  FitSettings fit;
};

inline int cmd_export_sdp(Context& ctx, ExportArgs a) {
  const KinematicModel model = require_model(a.model);
  if (!a.options.empty()) apply_options_file(a.options, a.fit);
  const IdentificationOptions opts = to_options(a.fit);
  TrajectoryDataset all = load_samples(ctx, a.data, model, a.fit);
  TrajectoryDataset train = a.fit.holdout ? split_holdout(all).first : all;
  const IdentificationProblem prob = build_identification(model, train, opts);
  std::ostringstream os;
  write_conic_program(os, prob.program);
  if (a.out.empty()) ctx.out << os.str();
  else write_text(a.out, os.str());
  ctx.info() << "exported " << prob.program.num_variables() << " variables, " << prob.program.cones().size()
             << " cones\n";
  if (a.solution.empty() && a.write_solution.empty()) return kOk;

  const Solution own = solve(prob.program, opts.solver);
  if (!a.write_solution.empty()) {
    std::ostringstream ss;
    write_solution(ss, own);
    write_text(a.write_solution, ss.str());
  }
  if (!a.solution.empty()) {
    require_file(a.solution, "solution file");
    std::ifstream in(a.solution);
    const Solution ext = read_solution(in);
    if (ext.x.size() != prob.program.num_variables())
      throw DataError("solution has " + std::to_string(ext.x.size()) + " variables, program has " +
                      std::to_string(prob.program.num_variables()));
    const double ext_obj = prob.program.objective().dot(ext.x) + prob.program.objective_offset;
    json cmp;
    cmp["own_status"] = status_name(own.status);
    cmp["external_status"] = status_name(ext.status);
    cmp["own_objective"] = own.primal_objective;
    cmp["external_objective"] = ext_obj;
    cmp["objective_difference"] = ext_obj - own.primal_objective;
    cmp["max_abs_x_difference"] = own.x.size() ? json((own.x - ext.x).cwiseAbs().maxCoeff()) : json(nullptr);
    std::vector<std::string> viol =
        level_violations(model, prob.layout.decode(ext.x), opts.level, 0.5 * prob.strictness, opts.friction_nonnegative);
    cmp["external_violations"] = viol;
    ctx.err << cmp.dump(2) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Context ctx{out, err, log_level_from_env()};
  CLI::App app{"Physically consistent inertial parameter identification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "inertid 1.0.0");

  IdentifyArgs ia;
  CLI::App* identify_cmd = app.add_subcommand("identify", "fit parameters from a CSV log");
  identify_cmd->add_option("--model", ia.model, "model JSON")->required();
  identify_cmd->add_option("--data", ia.data, "CSV log")->required();
  identify_cmd->add_option("--validate", ia.validation, "separate CSV log for validation");
  identify_cmd->add_option("--out", ia.out_dir, "output directory")->capture_default_str();
  add_fit_flags(identify_cmd, ia.fit, ia.options);

  CheckArgs ca;
  CLI::App* check_cmd = app.add_subcommand("check", "test parameters for physical consistency");
  check_cmd->add_option("--params", ca.params, "identified_params.json")->required();
  check_cmd->add_option("--model", ca.model, "model JSON")->required();
  check_cmd->add_option("--ellipsoids", ca.ellipsoids, "JSON of per-body ellipsoids overriding the model");
  check_cmd->add_option("--level", ca.level, "level to check (default: the file's level, else full)");
  check_cmd->add_option("--repair", ca.repair, "write the nearest consistent parameters here");
  check_cmd->add_option("--out", ca.out, "report file (default stdout)");

  RealizeArgs ra;
  CLI::App* realize_cmd = app.add_subcommand("realize", "four point masses reproducing each body's moments");
  realize_cmd->add_option("--model", ra.model, "model JSON")->required();
  realize_cmd->add_option("--params", ra.params, "parameter file (default: the model's parameters)");
  realize_cmd->add_option("--body", ra.body, "only this body");
  realize_cmd->add_flag("--in-ellipsoid", ra.in_ellipsoid, "keep the points inside the body's ellipsoid");
  realize_cmd->add_option("--out", ra.out, "output file (default stdout)");

  SimulateArgs sa;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "synthetic dataset from an analytic excitation");
  sim_cmd->add_option("--model", sa.model, "model JSON")->required();
  sim_cmd->add_option("--truth", sa.truth, "true parameters (default: the model's parameters)");
  sim_cmd->add_option("--scale", sa.scale, "scale applied to the model's parameters")->capture_default_str();
  sim_cmd->add_option("--preset", sa.preset, "leg-sweep or multisine")->capture_default_str();
  sim_cmd->add_option("--duration", sa.duration, "seconds")->capture_default_str();
  sim_cmd->add_option("--rate", sa.rate, "sample rate (Hz)")->capture_default_str();
  sim_cmd->add_option("--noise", sa.noise, "torque noise standard deviation (N m)")->capture_default_str();
  sim_cmd->add_option("--seed", sa.seed, "noise seed")->capture_default_str();
  sim_cmd->add_option("--viscous", sa.viscous, "comma-separated viscous coefficients");
  sim_cmd->add_option("--coulomb", sa.coulomb, "comma-separated Coulomb coefficients");
  sim_cmd->add_flag("--positions-only", sa.positions_only, "omit the exact v*, a* columns");
  sim_cmd->add_option("--out", sa.out, "CSV file (default stdout)");
  sim_cmd->add_option("--truth-out", sa.truth_out, "write the true parameters here");

  CurveArgs cua;
  CLI::App* curve_cmd = app.add_subcommand("curve", "validation error against training size");
  curve_cmd->add_option("--model", cua.model, "model JSON")->required();
  curve_cmd->add_option("--data", cua.data, "CSV log; first half trains, second half validates")->required();
  curve_cmd->add_option("--levels", cua.levels, "comma-separated levels")->capture_default_str();
  curve_cmd->add_option("--sizes", cua.sizes, "comma-separated training sizes (default: doubling from 100)");
  curve_cmd->add_option("--out", cua.out, "CSV file (default stdout)");
  add_fit_flags(curve_cmd, cua.fit, cua.options);

  ExportArgs ea;
  CLI::App* export_cmd = app.add_subcommand("export-sdp", "write the identification program in text form");
  export_cmd->add_option("--model", ea.model, "model JSON")->required();
  export_cmd->add_option("--data", ea.data, "CSV log")->required();
  export_cmd->add_option("--out", ea.out, "program file (default stdout)");
  export_cmd->add_option("--solution", ea.solution, "external solution to compare against");
  export_cmd->add_option("--write-solution", ea.write_solution, "write the in-repo solution here");
  add_fit_flags(export_cmd, ea.fit, ea.options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*identify_cmd) return cmd_identify(ctx, ia);
    if (*check_cmd) return cmd_check(ctx, ca);
    if (*realize_cmd) return cmd_realize(ctx, ra);
    if (*sim_cmd) return cmd_simulate(ctx, sa);
    if (*curve_cmd) return cmd_curve(ctx, cua);
    if (*export_cmd) return cmd_export_sdp(ctx, ea);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SolveFailed& e) {
    err << "error: " << e.what() << "\n";
    return kSolver;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << "\n";
    return kSolver;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}

}  // namespace inertid::cli

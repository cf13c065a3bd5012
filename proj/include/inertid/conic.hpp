#pragma once

// Conic program container: linear objective, affine equalities and a product
// of cones (nonnegative orthant, second-order cones, PSD cones). Every cone
// constraint is written as  s = F x + f  in K.
//
// PSD blocks use the scaled lower-triangular vectorization (svec): columns
// of the lower triangle in order, off-diagonal entries multiplied by sqrt(2),
// so that <svec(A), svec(B)> = Tr(A B).

#include <Eigen/Dense>

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace inertid {

inline int svec_size(int order) { return order * (order + 1) / 2; }

template <typename Derived>
Eigen::VectorXd svec(const Eigen::MatrixBase<Derived>& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::VectorXd v(svec_size(n));
  const double r2 = std::sqrt(2.0);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) v[k++] = (i == j) ? m(i, j) : r2 * 0.5 * (m(i, j) + m(j, i));
  return v;
}

template <typename Derived>
Eigen::MatrixXd smat(const Eigen::MatrixBase<Derived>& v, int n) {
  Eigen::MatrixXd m(n, n);
  const double ir2 = 1.0 / std::sqrt(2.0);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) {
      const double x = (i == j) ? v[k] : v[k] * ir2;
      m(i, j) = x;
      m(j, i) = x;
      ++k;
    }
  return m;
}

enum class ConeKind { nonnegative, second_order, psd };

inline const char* cone_kind_name(ConeKind k) {
  switch (k) {
    case ConeKind::nonnegative: return "nonneg";
    case ConeKind::second_order: return "soc";
    case ConeKind::psd: return "psd";
  }
  return "?";
}

struct ConeConstraint {
  ConeKind kind = ConeKind::nonnegative;
  /// Vector dimension for nonneg / soc, matrix order for psd.
  int order = 0;
  /// Constraint family, e.g. "pseudo_inertia[2]"; used in diagnostics.
  std::string label;
  Eigen::MatrixXd F;
  Eigen::VectorXd f;

  int dim() const { return kind == ConeKind::psd ? svec_size(order) : order; }
  /// Barrier degree contribution.
  int degree() const { return kind == ConeKind::second_order ? 1 : order; }
};

struct VariableBlock {
  std::string name;
  int offset = 0;
  int size = 0;
};

class ConicProgram {
 public:
  /// Appends a named block of decision variables; returns its offset.
  int add_block(const std::string& name, int size) {
    for (const auto& b : blocks_)
      if (b.name == name) throw std::invalid_argument("duplicate variable block '" + name + "'");
    if (size <= 0) throw std::invalid_argument("variable block '" + name + "' must be non-empty");
    if (!cones_.empty() || equality_A_.rows() > 0)
      throw std::logic_error("variable blocks must be declared before constraints");
    blocks_.push_back({name, num_vars_, size});
    num_vars_ += size;
    objective_.conservativeResize(num_vars_);
    objective_.tail(size).setZero();
    return blocks_.back().offset;
  }

  const VariableBlock& block(const std::string& name) const {
    for (const auto& b : blocks_)
      if (b.name == name) return b;
    throw std::out_of_range("no variable block '" + name + "'");
  }
  bool has_block(const std::string& name) const {
    for (const auto& b : blocks_)
      if (b.name == name) return true;
    return false;
  }
  const std::vector<VariableBlock>& blocks() const { return blocks_; }

  int num_variables() const { return num_vars_; }

  Eigen::VectorXd& objective() { return objective_; }
  const Eigen::VectorXd& objective() const { return objective_; }

  /// Constant added to c^T x when reporting objective values.
  double objective_offset = 0.0;

  /// F x + f >= 0 elementwise.
  void add_nonnegative(Eigen::MatrixXd F, Eigen::VectorXd f, std::string label) {
    const int dim = static_cast<int>(F.rows());
    add_cone(ConeKind::nonnegative, dim, std::move(F), std::move(f), std::move(label));
  }

  /// || (F x + f)[1:] || <= (F x + f)[0].
  void add_second_order(Eigen::MatrixXd F, Eigen::VectorXd f, std::string label) {
    const int dim = static_cast<int>(F.rows());
    add_cone(ConeKind::second_order, dim, std::move(F), std::move(f), std::move(label));
  }

  /// smat(F x + f) PSD, rows of F / f in svec order.
  void add_psd(int order, Eigen::MatrixXd F, Eigen::VectorXd f, std::string label) {
    add_cone(ConeKind::psd, order, std::move(F), std::move(f), std::move(label));
  }

  /// M0 + sum_k x_k M_k PSD, given each coefficient matrix.
  void add_lmi(const Eigen::MatrixXd& M0, const std::vector<Eigen::MatrixXd>& coeffs,
               std::string label) {
    if (static_cast<int>(coeffs.size()) != num_vars_)
      throw std::invalid_argument("LMI coefficient count must equal the number of variables");
    const int n = static_cast<int>(M0.rows());
    Eigen::MatrixXd F(svec_size(n), num_vars_);
    for (int k = 0; k < num_vars_; ++k) F.col(k) = svec(coeffs[static_cast<std::size_t>(k)]);
    add_psd(n, std::move(F), svec(M0), std::move(label));
  }

  void add_equalities(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.cols() != num_vars_ || A.rows() != b.size())
      throw std::invalid_argument("equality dimensions do not match the program");
    const auto r0 = equality_A_.rows();
    equality_A_.conservativeResize(r0 + A.rows(), num_vars_);
    equality_b_.conservativeResize(r0 + b.size());
    equality_A_.bottomRows(A.rows()) = A;
    equality_b_.tail(b.size()) = b;
  }

  const Eigen::MatrixXd& equality_matrix() const { return equality_A_; }
  const Eigen::VectorXd& equality_rhs() const { return equality_b_; }
  const std::vector<ConeConstraint>& cones() const { return cones_; }

  int cone_rows() const {
    int m = 0;
    for (const auto& c : cones_) m += c.dim();
    return m;
  }

  /// Throws std::invalid_argument describing the first inconsistency.
  void validate() const {
    if (num_vars_ == 0) throw std::invalid_argument("program has no variables");
    if (objective_.size() != num_vars_) throw std::invalid_argument("objective size mismatch");
    if (equality_A_.rows() > 0 && equality_A_.cols() != num_vars_)
      throw std::invalid_argument("equality matrix width mismatch");
    for (const auto& c : cones_) {
      if (c.F.rows() != c.dim() || c.F.cols() != num_vars_ || c.f.size() != c.dim())
        throw std::invalid_argument("cone '" + c.label + "' has inconsistent dimensions");
      if (c.kind == ConeKind::second_order && c.order < 1)
        throw std::invalid_argument("second-order cone '" + c.label + "' is empty");
    }
    if (!objective_.allFinite()) throw std::invalid_argument("objective has non-finite entries");
  }

 private:
  void add_cone(ConeKind kind, int order, Eigen::MatrixXd F, Eigen::VectorXd f, std::string label) {
    ConeConstraint c;
    c.kind = kind;
    c.order = order;
    c.label = std::move(label);
    c.F = std::move(F);
    c.f = std::move(f);
    if (c.F.cols() != num_vars_ || c.F.rows() != c.dim() || c.f.size() != c.dim())
      throw std::invalid_argument("cone '" + c.label + "' has inconsistent dimensions");
    if (!c.F.allFinite() || !c.f.allFinite())
      throw std::invalid_argument("cone '" + c.label + "' has non-finite data");
    cones_.push_back(std::move(c));
  }

  std::vector<VariableBlock> blocks_;
  int num_vars_ = 0;
  Eigen::VectorXd objective_;
  Eigen::MatrixXd equality_A_;
  Eigen::VectorXd equality_b_;
  std::vector<ConeConstraint> cones_;
};

enum class SolveStatus { optimal, infeasible, unbounded, max_iter, numerical };

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::numerical: return "numerical";
  }
  return "?";
}

inline SolveStatus parse_status(const std::string& s) {
  if (s == "optimal") return SolveStatus::optimal;
  if (s == "infeasible") return SolveStatus::infeasible;
  if (s == "unbounded") return SolveStatus::unbounded;
  if (s == "max_iter") return SolveStatus::max_iter;
  if (s == "numerical") return SolveStatus::numerical;
  throw std::invalid_argument("unknown solve status '" + s + "'");
}

struct Solution {
  SolveStatus status = SolveStatus::numerical;
  Eigen::VectorXd x;  ///< primal decisions
  Eigen::VectorXd y;  ///< equality multipliers
  Eigen::VectorXd z;  ///< cone multipliers (or infeasibility certificate)
  double primal_objective = std::numeric_limits<double>::quiet_NaN();
  double dual_objective = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  double primal_residual = std::numeric_limits<double>::quiet_NaN();
  double dual_residual = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double wall_time = 0.0;  ///< seconds
  std::string diagnostic;

  bool optimal() const { return status == SolveStatus::optimal; }
};

// ---------------------------------------------------------------------------
// Plain-text exchange format
//
//   conic-program 1
//   variables <n>
//   block <name> <offset> <size>          (one line per block)
//   objective <c_0> ... <c_{n-1}>
//   offset <constant>
//   equalities <p>
//   eq <a_0> ... <a_{n-1}> <b>            (p lines)
//   cones <k>
//   cone <nonneg|soc|psd> <order> <label>
//   row <F_i0> ... <F_i,n-1> <f_i>        (dim lines per cone)
//   end
//
// Numbers are written with 17 significant digits so that a round trip is
// exact. Labels may not contain whitespace.
// ---------------------------------------------------------------------------

namespace detail {
inline void write_row(std::ostream& os, const char* tag, const Eigen::RowVectorXd& a, double last,
                      bool with_last) {
  os << tag;
  for (Eigen::Index j = 0; j < a.size(); ++j) os << ' ' << a[j];
  if (with_last) os << ' ' << last;
  os << '\n';
}

inline std::istringstream expect_line(std::istream& is, const std::string& tag) {
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string t;
    ls >> t;
    if (t != tag) throw std::runtime_error("conic format: expected '" + tag + "', found '" + t + "'");
    return ls;
  }
  throw std::runtime_error("conic format: unexpected end of input, expected '" + tag + "'");
}

inline double read_number(std::istringstream& ls) {
  std::string tok;
  if (!(ls >> tok)) throw std::runtime_error("conic format: missing number");
  std::size_t used = 0;
  const double v = std::stod(tok, &used);
  if (used != tok.size()) throw std::runtime_error("conic format: bad number '" + tok + "'");
  return v;
}
}  // namespace detail

inline void write_conic_program(std::ostream& os, const ConicProgram& prog) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  const int n = prog.num_variables();
  os << "conic-program 1\n";
  os << "variables " << n << '\n';
  for (const auto& b : prog.blocks()) os << "block " << b.name << ' ' << b.offset << ' ' << b.size << '\n';
  detail::write_row(os, "objective", prog.objective().transpose(), 0.0, false);
  os << "offset " << prog.objective_offset << '\n';
  const auto& A = prog.equality_matrix();
  os << "equalities " << A.rows() << '\n';
  for (Eigen::Index i = 0; i < A.rows(); ++i) detail::write_row(os, "eq", A.row(i), prog.equality_rhs()[i], true);
  os << "cones " << prog.cones().size() << '\n';
  for (const auto& c : prog.cones()) {
    os << "cone " << cone_kind_name(c.kind) << ' ' << c.order << ' ' << (c.label.empty() ? "-" : c.label) << '\n';
    for (Eigen::Index i = 0; i < c.F.rows(); ++i) detail::write_row(os, "row", c.F.row(i), c.f[i], true);
  }
  os << "end\n";
  os.flags(flags);
  os.precision(prec);
}

inline ConicProgram read_conic_program(std::istream& is) {
  using detail::expect_line;
  using detail::read_number;
  {
    auto ls = expect_line(is, "conic-program");
    int version = 0;
    ls >> version;
    if (version != 1) throw std::runtime_error("conic format: unsupported version");
  }
  int n = 0;
  expect_line(is, "variables") >> n;
  ConicProgram prog;
  // blocks until "objective"
  std::string line;
  Eigen::VectorXd objective;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "block") {
      std::string name;
      int offset = 0, size = 0;
      ls >> name >> offset >> size;
      if (offset != prog.num_variables()) throw std::runtime_error("conic format: blocks out of order");
      prog.add_block(name, size);
    } else if (tag == "objective") {
      if (prog.num_variables() == 0 && n > 0) prog.add_block("x", n);
      if (prog.num_variables() != n) throw std::runtime_error("conic format: block sizes do not sum to n");
      objective.resize(n);
      for (int j = 0; j < n; ++j) objective[j] = read_number(ls);
      break;
    } else {
      throw std::runtime_error("conic format: unexpected '" + tag + "'");
    }
  }
  if (objective.size() != n) throw std::runtime_error("conic format: missing objective");
  prog.objective() = objective;
  {
    auto ls = expect_line(is, "offset");
    prog.objective_offset = read_number(ls);
  }
  int p = 0;
  expect_line(is, "equalities") >> p;
  if (p > 0) {
    Eigen::MatrixXd A(p, n);
    Eigen::VectorXd b(p);
    for (int i = 0; i < p; ++i) {
      auto ls = expect_line(is, "eq");
      for (int j = 0; j < n; ++j) A(i, j) = read_number(ls);
      b[i] = read_number(ls);
    }
    prog.add_equalities(A, b);
  }
  int k = 0;
  expect_line(is, "cones") >> k;
  for (int c = 0; c < k; ++c) {
    auto ls = expect_line(is, "cone");
    std::string kind, label;
    int order = 0;
    ls >> kind >> order >> label;
    ConeKind ck;
    if (kind == "nonneg") ck = ConeKind::nonnegative;
    else if (kind == "soc") ck = ConeKind::second_order;
    else if (kind == "psd") ck = ConeKind::psd;
    else throw std::runtime_error("conic format: unknown cone kind '" + kind + "'");
    const int dim = ck == ConeKind::psd ? svec_size(order) : order;
    Eigen::MatrixXd F(dim, n);
    Eigen::VectorXd f(dim);
    for (int i = 0; i < dim; ++i) {
      auto rs = expect_line(is, "row");
      for (int j = 0; j < n; ++j) F(i, j) = read_number(rs);
      f[i] = read_number(rs);
    }
    if (label == "-") label.clear();
    switch (ck) {
      case ConeKind::nonnegative: prog.add_nonnegative(F, f, label); break;
      case ConeKind::second_order: prog.add_second_order(F, f, label); break;
      case ConeKind::psd: prog.add_psd(order, F, f, label); break;
    }
  }
  expect_line(is, "end");
  return prog;
}

//   conic-solution 1
//   status <name>
//   objective <value>
//   x <x_0> ... <x_{n-1}>
//   end
inline void write_solution(std::ostream& os, const Solution& sol) {
  const auto prec = os.precision();
  os << std::setprecision(17);
  os << "conic-solution 1\n";
  os << "status " << status_name(sol.status) << '\n';
  os << "objective " << sol.primal_objective << '\n';
  detail::write_row(os, "x", sol.x.transpose(), 0.0, false);
  os << "end\n";
  os.precision(prec);
}

inline Solution read_solution(std::istream& is) {
  using detail::expect_line;
  Solution sol;
  {
    auto ls = expect_line(is, "conic-solution");
    int version = 0;
    ls >> version;
    if (version != 1) throw std::runtime_error("solution format: unsupported version");
  }
  {
    std::string s;
    expect_line(is, "status") >> s;
    sol.status = parse_status(s);
  }
  {
    auto ls = expect_line(is, "objective");
    std::string tok;
    ls >> tok;
    sol.primal_objective = (tok == "nan") ? std::numeric_limits<double>::quiet_NaN() : std::stod(tok);
  }
  {
    auto ls = expect_line(is, "x");
    std::vector<double> xs;
    std::string tok;
    while (ls >> tok) xs.push_back(std::stod(tok));
    sol.x = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  }
  expect_line(is, "end");
  return sol;
}

}  // namespace inertid

#pragma once

// Dense two-phase tableau simplex for small linear programs.

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace bess::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  int var;
  double coef;
};

struct Row {
  std::vector<Term> terms;
  Sense sense;
  double rhs;
};

struct Variable {
  double lower = 0.0;
  double upper = kInf;
  double objective = 0.0;
};

/// maximize  objective_offset + sum_j c_j x_j
/// s.t.      rows, lower_j <= x_j <= upper_j
class LinearProgram {
 public:
  int add_variable(double lower, double upper, double objective);
  void add_row(std::vector<Term> terms, Sense sense, double rhs);

  void set_bounds(int var, double lower, double upper);
  void set_objective_offset(double offset) { offset_ = offset; }

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const Variable& variable(int j) const { return vars_[static_cast<std::size_t>(j)]; }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  double objective_offset() const { return offset_; }

  double evaluate(std::span<const double> x) const;

  /// Largest violation of any row or bound at x, each row scaled by
  /// max(1, |rhs|, max |coef|).
  double max_violation(std::span<const double> x) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  double offset_ = 0.0;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Options {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-9;
  /// Degenerate-cycling guard: after this many pivots in one phase the
  /// entering rule switches from steepest reduced cost to Bland's rule.
  int bland_after = 5000;
};

struct Result {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

Result solve(const LinearProgram& program, const Options& options = {});

}  // namespace bess::lp

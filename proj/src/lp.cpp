#include "bess/lp.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "bess/error.hpp"

namespace bess::lp {

int LinearProgram::add_variable(double lower, double upper, double objective) {
  vars_.push_back({lower, upper, objective});
  return static_cast<int>(vars_.size()) - 1;
}

void LinearProgram::add_row(std::vector<Term> terms, Sense sense, double rhs) {
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= num_variables()) {
      throw Error(ErrorCode::InvalidArgument, "row references unknown variable");
    }
  }
  rows_.push_back({std::move(terms), sense, rhs});
}

void LinearProgram::set_bounds(int var, double lower, double upper) {
  auto& v = vars_.at(static_cast<std::size_t>(var));
  v.lower = lower;
  v.upper = upper;
}

double LinearProgram::evaluate(std::span<const double> x) const {
  double total = offset_;
  for (std::size_t j = 0; j < vars_.size(); ++j) total += vars_[j].objective * x[j];
  return total;
}

double LinearProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const double scale = std::max(1.0, std::abs(x[j]));
    worst = std::max(worst, (vars_[j].lower - x[j]) / scale);
    worst = std::max(worst, (x[j] - vars_[j].upper) / scale);
  }
  for (const auto& row : rows_) {
    double lhs = 0.0;
    double scale = std::max(1.0, std::abs(row.rhs));
    for (const auto& t : row.terms) {
      lhs += t.coef * x[static_cast<std::size_t>(t.var)];
      scale = std::max(scale, std::abs(t.coef));
    }
    double v = 0.0;
    switch (row.sense) {
      case Sense::LessEqual: v = lhs - row.rhs; break;
      case Sense::GreaterEqual: v = row.rhs - lhs; break;
      case Sense::Equal: v = std::abs(lhs - row.rhs); break;
    }
    worst = std::max(worst, v / scale);
  }
  return worst;
}

namespace {

// max c^T y  s.t.  A y <= b,  y >= 0, on a dense tableau. Column n holds the
// phase-one artificial variable; row m the objective, row m + 1 the phase-one
// objective.
class Tableau {
 public:
  Tableau(int m, int n) : m_(m), n_(n), width_(n + 2), data_((m + 2) * (n + 2), 0.0),
                          basis_(m), nonbasis_(n + 1) {
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      at(i, n_) = -1.0;
    }
    for (int j = 0; j < n_; ++j) nonbasis_[j] = j;
    nonbasis_[n_] = -1;
    at(m_ + 1, n_) = 1.0;
  }

  double& at(int i, int j) { return data_[static_cast<std::size_t>(i * width_ + j)]; }
  double at(int i, int j) const { return data_[static_cast<std::size_t>(i * width_ + j)]; }
  double& rhs(int i) { return at(i, n_ + 1); }
  double& cost(int j) { return at(m_, j); }

  Status run(const Options& opt, std::vector<double>& y, double& value, int& iterations) {
    tol_ = opt.pivot_tol;
    bland_after_ = opt.bland_after;
    iterations_ = 0;

    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
    }
    if (m_ > 0 && at(r, n_ + 1) < -opt.feas_tol) {
      pivot(r, n_);
      if (!optimise(m_ + 1, /*exclude=*/-2) || at(m_ + 1, n_ + 1) < -opt.feas_tol) {
        iterations = iterations_;
        return Status::Infeasible;
      }
      // Drive the artificial out of the basis if it is still there at zero.
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] != -1) continue;
        int s = -1;
        for (int j = 0; j <= n_; ++j) {
          if (nonbasis_[j] == -1) continue;
          if (s == -1 || std::abs(at(i, j)) > std::abs(at(i, s))) s = j;
        }
        if (s != -1 && std::abs(at(i, s)) > tol_) pivot(i, s);
      }
    }
    const bool bounded = optimise(m_, /*exclude=*/-1);
    iterations = iterations_;
    if (!bounded) return Status::Unbounded;

    y.assign(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= 0 && basis_[i] < n_) y[basis_[i]] = std::max(0.0, at(i, n_ + 1));
    }
    value = at(m_, n_ + 1);
    return Status::Optimal;
  }

 private:
  void pivot(int r, int s) {
    ++iterations_;
    const double inv = 1.0 / at(r, s);
    double* prow = &at(r, 0);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* row = &at(i, 0);
      const double factor = row[s] * inv;
      if (std::abs(row[s]) > 1e-14) {
        for (int j = 0; j < width_; ++j) row[j] -= prow[j] * factor;
      }
      row[s] = -factor;
    }
    for (int j = 0; j < width_; ++j) {
      if (j != s) prow[j] *= inv;
    }
    prow[s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  // Returns false when the objective in `obj_row` is unbounded.
  bool optimise(int obj_row, int exclude) {
    const int start = iterations_;
    for (;;) {
      const bool bland = iterations_ - start > bland_after_;
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasis_[j] == exclude) continue;
        const double d = at(obj_row, j);
        if (d >= -tol_) continue;
        if (s == -1) {
          s = j;
        } else if (bland) {
          if (nonbasis_[j] < nonbasis_[s]) s = j;
        } else {
          const double ds = at(obj_row, s);
          if (d < ds || (d == ds && nonbasis_[j] < nonbasis_[s])) s = j;
        }
      }
      if (s == -1) return true;

      int r = -1;
      double best = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = at(i, s);
        if (a <= tol_) continue;
        const double ratio = at(i, n_ + 1) / a;
        if (r == -1 || ratio < best || (ratio == best && basis_[i] < basis_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_;
  int n_;
  int width_;
  std::vector<double> data_;
  std::vector<int> basis_;
  std::vector<int> nonbasis_;
  double tol_ = 1e-9;
  int bland_after_ = 5000;
  int iterations_ = 0;
};

struct Bounds {
  double lower;
  double upper;
  bool fixed() const { return lower == upper; }
};

// Folds rows with at most one non-fixed variable into bounds. Returns false
// when the program is detected infeasible.
bool presolve(const LinearProgram& lp, std::vector<Bounds>& bounds, std::vector<char>& active,
              double tol) {
  const auto& rows = lp.rows();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!active[r]) continue;
      const Row& row = rows[r];
      double constant = 0.0;
      int free_count = 0;
      Term single{-1, 0.0};
      for (const auto& t : row.terms) {
        if (t.coef == 0.0) continue;
        const auto& b = bounds[static_cast<std::size_t>(t.var)];
        if (b.fixed()) {
          constant += t.coef * b.lower;
        } else {
          ++free_count;
          single = t;
        }
      }
      const double rest = row.rhs - constant;
      const double scale = std::max(1.0, std::abs(row.rhs));
      if (free_count == 0) {
        const bool ok = (row.sense == Sense::LessEqual && rest >= -tol * scale) ||
                        (row.sense == Sense::GreaterEqual && rest <= tol * scale) ||
                        (row.sense == Sense::Equal && std::abs(rest) <= tol * scale);
        if (!ok) return false;
        active[r] = 0;
        changed = true;
        continue;
      }
      if (free_count != 1) continue;

      auto& b = bounds[static_cast<std::size_t>(single.var)];
      const double value = rest / single.coef;
      const bool positive = single.coef > 0.0;
      const bool upper = (row.sense == Sense::LessEqual) == positive;
      if (row.sense == Sense::Equal) {
        b.lower = std::max(b.lower, value);
        b.upper = std::min(b.upper, value);
      } else if (upper) {
        b.upper = std::min(b.upper, value);
      } else {
        b.lower = std::max(b.lower, value);
      }
      const double bscale = std::max(1.0, std::abs(value));
      if (b.lower > b.upper + tol * bscale) return false;
      if (b.upper - b.lower <= tol * 1e-3 * bscale) b.upper = b.lower;
      active[r] = 0;
      changed = true;
    }
  }
  return true;
}

}  // namespace

Result solve(const LinearProgram& program, const Options& options) {
  Result result;
  const int nv = program.num_variables();
  std::vector<Bounds> bounds(static_cast<std::size_t>(nv));
  for (int j = 0; j < nv; ++j) {
    const auto& v = program.variable(j);
    if (v.lower > v.upper) return result;
    bounds[static_cast<std::size_t>(j)] = {v.lower, v.upper};
  }
  std::vector<char> active(program.rows().size(), 1);
  if (!presolve(program, bounds, active, options.feas_tol)) return result;

  // Column mapping: x_j = base_j + sum(sign * y_col).
  struct Column {
    int var;
    double sign;
  };
  std::vector<Column> columns;
  std::vector<double> base(static_cast<std::size_t>(nv), 0.0);
  std::vector<std::pair<int, double>> upper_rows;  // (column, y upper bound)
  std::vector<std::vector<std::pair<int, double>>> var_columns(static_cast<std::size_t>(nv));
  for (int j = 0; j < nv; ++j) {
    const auto& b = bounds[static_cast<std::size_t>(j)];
    auto& cols = var_columns[static_cast<std::size_t>(j)];
    if (b.fixed()) {
      base[j] = b.lower;
    } else if (std::isfinite(b.lower)) {
      base[j] = b.lower;
      cols.push_back({static_cast<int>(columns.size()), 1.0});
      columns.push_back({j, 1.0});
      if (std::isfinite(b.upper)) upper_rows.push_back({cols.back().first, b.upper - b.lower});
    } else if (std::isfinite(b.upper)) {
      base[j] = b.upper;
      cols.push_back({static_cast<int>(columns.size()), -1.0});
      columns.push_back({j, -1.0});
    } else {
      cols.push_back({static_cast<int>(columns.size()), 1.0});
      columns.push_back({j, 1.0});
      cols.push_back({static_cast<int>(columns.size()), -1.0});
      columns.push_back({j, -1.0});
    }
  }

  struct DenseRow {
    std::vector<std::pair<int, double>> entries;
    double rhs;
  };
  std::vector<DenseRow> dense;
  for (std::size_t r = 0; r < program.rows().size(); ++r) {
    if (!active[r]) continue;
    const Row& row = program.rows()[r];
    DenseRow d{{}, row.rhs};
    for (const auto& t : row.terms) {
      d.rhs -= t.coef * base[static_cast<std::size_t>(t.var)];
      for (const auto& [col, sign] : var_columns[static_cast<std::size_t>(t.var)]) {
        d.entries.push_back({col, t.coef * sign});
      }
    }
    if (row.sense != Sense::GreaterEqual) dense.push_back(d);
    if (row.sense != Sense::LessEqual) {
      for (auto& e : d.entries) e.second = -e.second;
      d.rhs = -d.rhs;
      dense.push_back(std::move(d));
    }
  }
  for (const auto& [col, ub] : upper_rows) dense.push_back({{{col, 1.0}}, ub});

  const int m = static_cast<int>(dense.size());
  const int n = static_cast<int>(columns.size());
  Tableau tab(m, n);
  for (int i = 0; i < m; ++i) {
    for (const auto& [col, coef] : dense[static_cast<std::size_t>(i)].entries) tab.at(i, col) += coef;
    tab.rhs(i) = dense[static_cast<std::size_t>(i)].rhs;
  }
  for (int c = 0; c < n; ++c) {
    const auto& col = columns[static_cast<std::size_t>(c)];
    tab.cost(c) = -program.variable(col.var).objective * col.sign;
  }

  std::vector<double> y;
  double value = 0.0;
  result.status = tab.run(options, y, value, result.iterations);
  if (result.status != Status::Optimal) return result;

  result.x = base;
  for (int c = 0; c < n; ++c) {
    const auto& col = columns[static_cast<std::size_t>(c)];
    result.x[static_cast<std::size_t>(col.var)] += col.sign * y[static_cast<std::size_t>(c)];
  }
  result.objective = program.evaluate(result.x);
  return result;
}

}  // namespace bess::lp

#include "nadsthermo/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nadsthermo {

LinearProgram::LinearProgram(std::size_t r, std::size_t n) : rows(r), cols(n), a(r * n, 0.0), b(r, 0.0), c(n, 0.0) {}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

// Tableau with one objective row appended after the constraint rows. Column
// `width - 1` holds the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), width_(cols + 1), cells_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return cells_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return cells_[r * width_ + c]; }
  double& rhs(std::size_t r) { return at(r, width_ - 1); }
  std::size_t objective_row() const { return rows_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    double* prow = &cells_[pr * width_];
    for (std::size_t c = 0; c < width_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      double* row = &cells_[r * width_];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t width_;
  std::vector<double> cells_;
};

// Runs simplex iterations on columns [0, active_cols). Returns false when the
// objective is unbounded below.
LpStatus iterate(Tableau& t, std::vector<std::size_t>& basis, std::size_t rows, std::size_t active_cols, double tol,
                 std::size_t max_pivots, std::size_t& pivots) {
  const std::size_t obj = t.objective_row();
  for (;;) {
    std::size_t enter = active_cols;
    for (std::size_t c = 0; c < active_cols; ++c) {
      if (t.at(obj, c) < -tol) {
        enter = c;
        break;
      }
    }
    if (enter == active_cols) return LpStatus::optimal;
    std::size_t leave = rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      const double coef = t.at(r, enter);
      if (coef <= tol) continue;
      const double ratio = t.rhs(r) / coef;
      if (ratio < best - tol || (std::abs(ratio - best) <= tol && leave < rows && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave == rows) return LpStatus::unbounded;
    if (++pivots > max_pivots) return LpStatus::iteration_limit;
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, double tol, std::size_t max_pivots) {
  if (lp.a.size() != lp.rows * lp.cols || lp.b.size() != lp.rows || lp.c.size() != lp.cols) {
    throw std::invalid_argument("linear program dimensions are inconsistent");
  }
  const std::size_t m = lp.rows;
  const std::size_t n = lp.cols;
  // Columns: original [0, n), artificials [n, n + m).
  Tableau t(m, n + m);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double sign = lp.b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = sign * lp.a[r * n + c];
    t.at(r, n + r) = 1.0;
    t.rhs(r) = sign * lp.b[r];
    basis[r] = n + r;
  }
  const std::size_t obj = t.objective_row();
  // Phase one: minimize the sum of artificials, priced out against the basis.
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) t.at(obj, c) -= t.at(r, c);
    t.rhs(obj) -= t.rhs(r);
  }

  LpResult result;
  LpStatus status = iterate(t, basis, m, n + m, tol, max_pivots, result.pivots);
  if (status == LpStatus::iteration_limit) {
    result.status = status;
    return result;
  }
  const double infeasibility = -t.rhs(obj);
  if (infeasibility > 1e-9 * (1.0 + std::abs(infeasibility))) {
    result.status = LpStatus::infeasible;
    return result;
  }
  // Drive artificials out of the basis where possible.
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) continue;
    for (std::size_t c = 0; c < n; ++c) {
      if (std::abs(t.at(r, c)) > 1e-9) {
        t.pivot(r, c);
        basis[r] = c;
        break;
      }
    }
  }
  // Phase two objective. Redundant rows keep a zero artificial in the basis;
  // artificial columns are excluded from entering.
  for (std::size_t c = 0; c <= n + m; ++c) t.at(obj, c) = 0.0;
  for (std::size_t c = 0; c < n; ++c) t.at(obj, c) = lp.c[c];
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t bc = basis[r];
    if (bc >= n) continue;
    const double cost = lp.c[bc];
    if (cost == 0.0) continue;
    for (std::size_t c = 0; c <= n + m; ++c) t.at(obj, c) -= cost * t.at(r, c);
  }
  status = iterate(t, basis, m, n, tol, max_pivots, result.pivots);
  result.status = status;
  if (status != LpStatus::optimal) return result;
  result.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) result.x[basis[r]] = std::max(0.0, t.rhs(r));
  result.objective = 0.0;
  for (std::size_t c = 0; c < n; ++c) result.objective += lp.c[c] * result.x[c];
  return result;
}

}  // namespace nadsthermo

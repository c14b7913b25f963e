#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nadsthermo {

/// minimize c^T x subject to A x = b, x >= 0. A is row-major rows x cols.
struct LinearProgram {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  LinearProgram(std::size_t rows, std::size_t cols);
  double& at(std::size_t r, std::size_t col) { return a[r * cols + col]; }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

/// Dense two-phase tableau simplex with Bland's rule.
LpResult solve_lp(const LinearProgram& lp, double tol = 1e-11, std::size_t max_pivots = 200000);

}  // namespace nadsthermo

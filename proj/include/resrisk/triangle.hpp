#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace resrisk {

// Error in triangle input or shape; row/column are 1-based where applicable
// (0 when the error is not tied to a position).
struct TriangleError : std::runtime_error {
  TriangleError(const std::string& msg, int row = 0, int column = 0)
      : std::runtime_error(msg), row(row), column(column) {}
  int row;
  int column;
};

// Cumulative claims development trapezoid: C_{i,k} for 0 <= i, k <= n with
// i + k <= n. Immutable after construction; safe to share across threads.
class Triangle {
 public:
  static Triangle from_rows(const std::vector<std::vector<double>>& rows);

  int horizon() const { return n_; }  // n
  int years() const { return n_ + 1; }
  int row_length(int i) const { return n_ - i + 1; }

  double cell(int i, int k) const { return cells_[offset_[i] + k]; }

  std::vector<std::vector<double>> rows() const;

 private:
  int n_ = 0;
  std::vector<double> cells_;  // row-major, row i holds n - i + 1 values
  std::vector<int> offset_;
};

// Plain-text comma-separated rows, one accident year per line, '#' comments
// and blank lines ignored. Errors carry the 1-based line and cell position.
Triangle parse_triangle(std::istream& in);
Triangle parse_triangle(const std::string& text);
Triangle load_triangle(const std::string& path);
std::string serialize_triangle(const Triangle& tri);

// Development ratios F_{i,k} = C_{i,k} / C_{i,k-1}; result[k-1][i] for
// k = 1..n, i = 0..n-k.
std::vector<std::vector<double>> dev_ratios(const Triangle& tri);

// Payments of the next calendar year: z[i-1] = Z_{i,n-i+1} for i = 1..n
// (accident year 0 is fully developed).
struct NextDiagonal {
  std::vector<double> z;
};

struct ExtendedTriangle {
  Triangle base;
  NextDiagonal diagonal;
  std::vector<double> new_cumulative;  // C_{i,n-i+1} = C_{i,n-i} + Z, i = 1..n
};

ExtendedTriangle extend(const Triangle& tri, const NextDiagonal& diag);

}  // namespace resrisk

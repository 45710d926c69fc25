#include "resrisk/triangle.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace resrisk {

Triangle Triangle::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 3)
    throw TriangleError("triangle needs at least 3 accident years (n >= 2)");
  const int years = static_cast<int>(rows.size());
  const int n = years - 1;

  Triangle tri;
  tri.n_ = n;
  tri.offset_.resize(years);
  int total = 0;
  for (int i = 0; i < years; ++i) {
    tri.offset_[i] = total;
    total += n - i + 1;
  }
  tri.cells_.resize(total);

  for (int i = 0; i < years; ++i) {
    const auto& row = rows[i];
    const int expect = n - i + 1;
    if (static_cast<int>(row.size()) != expect) {
      std::ostringstream msg;
      msg << "row " << (i + 1) << " has " << row.size() << " values, expected "
          << expect;
      throw TriangleError(msg.str(), i + 1);
    }
    for (int k = 0; k < expect; ++k) {
      const double v = row[k];
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "row " << (i + 1) << ", value " << (k + 1) << " is not finite";
        throw TriangleError(msg.str(), i + 1, k + 1);
      }
      if (k == 0 && v <= 0.0) {
        std::ostringstream msg;
        msg << "row " << (i + 1) << ": first column must be positive, got "
            << v;
        throw TriangleError(msg.str(), i + 1, 1);
      }
      tri.cells_[tri.offset_[i] + k] = v;
    }
  }
  return tri;
}

std::vector<std::vector<double>> Triangle::rows() const {
  std::vector<std::vector<double>> out(years());
  for (int i = 0; i <= n_; ++i) {
    out[i].assign(cells_.begin() + offset_[i],
                  cells_.begin() + offset_[i] + row_length(i));
  }
  return out;
}

Triangle parse_triangle(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = true;
    for (char ch : line)
      if (!std::isspace(static_cast<unsigned char>(ch))) {
        blank = false;
        break;
      }
    if (blank) continue;

    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    int cellno = 0;
    while (std::getline(ss, field, ',')) {
      ++cellno;
      try {
        size_t pos = 0;
        const double v = std::stod(field, &pos);
        while (pos < field.size() &&
               std::isspace(static_cast<unsigned char>(field[pos])))
          ++pos;
        if (pos != field.size()) throw std::invalid_argument(field);
        row.push_back(v);
      } catch (const std::exception&) {
        std::ostringstream msg;
        msg << "line " << lineno << ", value " << cellno << ": cannot parse '"
            << field << "' as a number";
        throw TriangleError(msg.str(), lineno, cellno);
      }
    }
    rows.push_back(std::move(row));
  }
  return Triangle::from_rows(rows);
}

Triangle parse_triangle(const std::string& text) {
  std::istringstream in(text);
  return parse_triangle(in);
}

Triangle load_triangle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TriangleError("cannot open triangle file: " + path);
  return parse_triangle(in);
}

std::string serialize_triangle(const Triangle& tri) {
  std::ostringstream out;
  out.precision(17);
  for (int i = 0; i <= tri.horizon(); ++i) {
    for (int k = 0; k < tri.row_length(i); ++k) {
      if (k) out << ',';
      out << tri.cell(i, k);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::vector<double>> dev_ratios(const Triangle& tri) {
  const int n = tri.horizon();
  std::vector<std::vector<double>> out(n);
  for (int k = 1; k <= n; ++k) {
    out[k - 1].resize(n - k + 1);
    for (int i = 0; i <= n - k; ++i) {
      const double prev = tri.cell(i, k - 1);
      if (prev == 0.0) {
        std::ostringstream msg;
        msg << "development ratio undefined: C(" << i << "," << (k - 1)
            << ") is zero";
        throw TriangleError(msg.str(), i + 1, k);
      }
      out[k - 1][i] = tri.cell(i, k) / prev;
    }
  }
  return out;
}

ExtendedTriangle extend(const Triangle& tri, const NextDiagonal& diag) {
  const int n = tri.horizon();
  if (static_cast<int>(diag.z.size()) != n)
    throw TriangleError("next diagonal must have n entries");
  ExtendedTriangle ext{tri, diag, std::vector<double>(n)};
  for (int i = 1; i <= n; ++i)
    ext.new_cumulative[i - 1] = tri.cell(i, n - i) + diag.z[i - 1];
  return ext;
}

}  // namespace resrisk

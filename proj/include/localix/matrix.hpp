#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <vector>

namespace localix {

using Int = std::int64_t;
using Vector = std::vector<Int>;

/// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols, Int fill = 0);
  explicit IntMatrix(const std::vector<std::vector<Int>>& rows);
  IntMatrix(std::initializer_list<std::initializer_list<Int>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Int operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector row(std::size_t r) const;
  Vector column(std::size_t c) const;
  void set_column(std::size_t c, const Vector& v);

  IntMatrix transpose() const;
  Vector operator*(const Vector& v) const;
  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

  /// Concatenate columns of `a` and `b` (same row count).
  static IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

/// Non-negative remainder.
inline Int mod(Int a, Int n) {
  Int r = a % n;
  return r < 0 ? r + n : r;
}

struct ExtendedGcd {
  Int g;
  Int s;
  Int t;
};

/// g = gcd(a, b) >= 0 with s*a + t*b = g.
ExtendedGcd extended_gcd(Int a, Int b);

/// Unit u modulo n with u*a = gcd(a, n) (mod n). Requires a != 0 mod n.
Int normalizing_unit(Int a, Int n);

/// Smith normal form over the integers: left * input * right = diagonal,
/// diagonal entries non-negative with s_1 | s_2 | ... (zeros last).
struct SmithForm {
  IntMatrix left;
  IntMatrix diagonal;
  IntMatrix right;
};

SmithForm smith_normal_form(const IntMatrix& m);

/// Smith normal form over Z/modulus. Transforms are invertible mod the
/// modulus; `factors[i]` is the i-th diagonal entry normalized to a divisor
/// of the modulus, with the modulus itself standing for a zero entry. One
/// factor per row: rows beyond the column count get the modulus.
struct ModularSmithForm {
  Int modulus = 1;
  IntMatrix left;
  IntMatrix left_inverse;
  IntMatrix right;
  std::vector<Int> factors;
};

ModularSmithForm smith_normal_form_mod(const IntMatrix& m, Int modulus);

/// Generators (as columns) of { x in (Z/n)^cols : m x = 0 mod n }.
IntMatrix kernel_mod(const IntMatrix& m, Int modulus);

/// Some x with m x = b mod n, if one exists.
bool solve_mod(const IntMatrix& m, const Vector& b, Int modulus, Vector& x);

/// Howell form: the canonical row-echelon generating set of the row span of
/// `rows` inside (Z/n)^width. Equal spans give identical output.
std::vector<Vector> howell_form(std::vector<Vector> rows, Int modulus, std::size_t width);

}  // namespace localix

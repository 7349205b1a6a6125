#include "localix/matrix.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace localix {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, Int fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

IntMatrix::IntMatrix(const std::vector<std::vector<Int>>& rows) {
  rows_ = rows.size();
  cols_ = rows.empty() ? 0 : rows.front().size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("IntMatrix: ragged rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<Int>> rows)
    : IntMatrix(std::vector<std::vector<Int>>(rows.begin(), rows.end())) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Vector IntMatrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector IntMatrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void IntMatrix::set_column(std::size_t c, const Vector& v) {
  assert(v.size() == rows_);
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Vector IntMatrix::operator*(const Vector& v) const {
  assert(v.size() == cols_);
  Vector out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    Int acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  assert(a.cols_ == b.rows_);
  IntMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Int aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

IntMatrix IntMatrix::hconcat(const IntMatrix& a, const IntMatrix& b) {
  assert(a.rows_ == b.rows_);
  IntMatrix out(a.rows_, a.cols_ + b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    for (std::size_t c = 0; c < a.cols_; ++c) out(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols_; ++c) out(r, a.cols_ + c) = b(r, c);
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) os << "; ";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << m(r, c);
    }
  }
  return os << ']';
}

ExtendedGcd extended_gcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

Int normalizing_unit(Int a, Int n) {
  a = mod(a, n);
  if (n == 1) return 0;
  if (a == 0) throw std::invalid_argument("normalizing_unit: zero has no normalizing unit");
  const Int g = std::gcd(a, n);
  const Int reduced_n = n / g;
  Int base = 0;
  if (reduced_n > 1) base = mod(extended_gcd(a / g, reduced_n).s, reduced_n);
  for (Int k = 0; k <= g; ++k) {
    const Int u = mod(base + k * reduced_n, n);
    if (std::gcd(u, n) == 1) return u;
  }
  throw std::logic_error("normalizing_unit: no unit found");
}

// ---------------------------------------------------------------------------
// Integer Smith normal form

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols; ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t c = 0; c < rows; ++c) std::swap(u(i, c), u(j, c));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows; ++r) std::swap(a(r, i), a(r, j));
    for (std::size_t r = 0; r < cols; ++r) std::swap(v(r, i), v(r, j));
  };
  // row_dst += k * row_src
  auto add_row = [&](std::size_t dst, std::size_t src, Int k) {
    for (std::size_t c = 0; c < cols; ++c) a(dst, c) += k * a(src, c);
    for (std::size_t c = 0; c < rows; ++c) u(dst, c) += k * u(src, c);
  };
  auto add_col = [&](std::size_t dst, std::size_t src, Int k) {
    for (std::size_t r = 0; r < rows; ++r) a(r, dst) += k * a(r, src);
    for (std::size_t r = 0; r < cols; ++r) v(r, dst) += k * v(r, src);
  };

  const std::size_t diag = std::min(rows, cols);
  for (std::size_t t = 0; t < diag; ++t) {
    for (;;) {
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a(i, j) != 0 && (pi == rows || std::llabs(a(i, j)) < std::llabs(a(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == rows) break;
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool clear = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        add_row(i, t, -(a(i, t) / a(t, t)));
        if (a(i, t) != 0) clear = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        add_col(j, t, -(a(t, j) / a(t, t)));
        if (a(t, j) != 0) clear = false;
      }
      if (!clear) continue;

      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a(i, j) % a(t, t) != 0) {
            add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a(t, t) < 0) {
      for (std::size_t c = 0; c < cols; ++c) a(t, c) = -a(t, c);
      for (std::size_t c = 0; c < rows; ++c) u(t, c) = -u(t, c);
    }
  }
  return {std::move(u), std::move(a), std::move(v)};
}

// ---------------------------------------------------------------------------
// Smith normal form over Z/n

namespace {

class ModularReducer {
 public:
  ModularReducer(const IntMatrix& m, Int n)
      : n_(n),
        rows_(m.rows()),
        cols_(m.cols()),
        a_(m),
        u_(IntMatrix::identity(rows_)),
        ui_(IntMatrix::identity(rows_)),
        v_(IntMatrix::identity(cols_)) {
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) a_(r, c) = mod(a_(r, c), n_);
  }

  void run() {
    for (;;) {
      diagonalize();
      if (!fix_divisibility()) break;
    }
  }

  ModularSmithForm result() && {
    ModularSmithForm out;
    out.modulus = n_;
    out.factors.assign(rows_, n_);
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) out.factors[i] = factor(i);
    out.left = std::move(u_);
    out.left_inverse = std::move(ui_);
    out.right = std::move(v_);
    return out;
  }

 private:
  Int factor(std::size_t i) const { return a_(i, i) == 0 ? n_ : std::gcd(a_(i, i), n_); }

  Int m(Int x) const { return mod(x, n_); }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap(a_(i, c), a_(j, c));
    for (std::size_t c = 0; c < rows_; ++c) std::swap(u_(i, c), u_(j, c));
    for (std::size_t r = 0; r < rows_; ++r) std::swap(ui_(r, i), ui_(r, j));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap(a_(r, i), a_(r, j));
    for (std::size_t r = 0; r < cols_; ++r) std::swap(v_(r, i), v_(r, j));
  }
  // rows (t, i) <- [[s, q], [x, y]] * (t, i); determinant must be a unit.
  void combine_rows(std::size_t t, std::size_t i, Int s, Int q, Int x, Int y) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const Int at = a_(t, c), ai = a_(i, c);
      a_(t, c) = m(s * at + q * ai);
      a_(i, c) = m(x * at + y * ai);
    }
    for (std::size_t c = 0; c < rows_; ++c) {
      const Int at = u_(t, c), ai = u_(i, c);
      u_(t, c) = m(s * at + q * ai);
      u_(i, c) = m(x * at + y * ai);
    }
    // inverse of [[s, q], [x, y]] is e * [[y, -q], [-x, s]] with e = det^-1
    const Int det = m(s * y - q * x);
    const Int e = mod(extended_gcd(det, n_).s, n_);
    for (std::size_t r = 0; r < rows_; ++r) {
      const Int ct = ui_(r, t), ci = ui_(r, i);
      ui_(r, t) = m(e * (ct * y - ci * x));
      ui_(r, i) = m(e * (-ct * q + ci * s));
    }
  }
  // cols (t, j) <- (s*col_t + q*col_j, x*col_t + y*col_j)
  void combine_cols(std::size_t t, std::size_t j, Int s, Int q, Int x, Int y) {
    for (std::size_t r = 0; r < rows_; ++r) {
      const Int at = a_(r, t), aj = a_(r, j);
      a_(r, t) = m(s * at + q * aj);
      a_(r, j) = m(x * at + y * aj);
    }
    for (std::size_t r = 0; r < cols_; ++r) {
      const Int vt = v_(r, t), vj = v_(r, j);
      v_(r, t) = m(s * vt + q * vj);
      v_(r, j) = m(x * vt + y * vj);
    }
  }
  void normalize_pivot(std::size_t t) {
    if (a_(t, t) == 0) return;
    const Int unit = normalizing_unit(a_(t, t), n_);
    if (unit == 1) return;
    for (std::size_t c = 0; c < cols_; ++c) a_(t, c) = m(a_(t, c) * unit);
    for (std::size_t c = 0; c < rows_; ++c) u_(t, c) = m(u_(t, c) * unit);
    const Int inverse = mod(extended_gcd(unit, n_).s, n_);
    for (std::size_t r = 0; r < rows_; ++r) ui_(r, t) = m(ui_(r, t) * inverse);
  }

  // Returns false when the pivot ideal changed and another sweep is needed.
  bool clear_column(std::size_t t) {
    bool stable = true;
    for (std::size_t i = t + 1; i < rows_; ++i) {
      const Int b = a_(i, t);
      if (b == 0) continue;
      const Int p = a_(t, t);
      if (b % p == 0) {
        combine_rows(t, i, 1, 0, m(-(b / p)), 1);
      } else {
        const auto [g, s, q] = extended_gcd(p, b);
        combine_rows(t, i, m(s), m(q), b / g, m(-(p / g)));
        normalize_pivot(t);
        stable = false;
      }
    }
    return stable;
  }
  bool clear_row(std::size_t t) {
    bool stable = true;
    for (std::size_t j = t + 1; j < cols_; ++j) {
      const Int b = a_(t, j);
      if (b == 0) continue;
      const Int p = a_(t, t);
      if (b % p == 0) {
        combine_cols(t, j, 1, 0, m(-(b / p)), 1);
      } else {
        const auto [g, s, q] = extended_gcd(p, b);
        combine_cols(t, j, m(s), m(q), b / g, m(-(p / g)));
        normalize_pivot(t);
        stable = false;
      }
    }
    return stable;
  }

  void diagonalize() {
    const std::size_t diag = std::min(rows_, cols_);
    for (std::size_t t = 0; t < diag; ++t) {
      std::size_t pi = rows_, pj = cols_;
      Int best = n_;
      for (std::size_t i = t; i < rows_; ++i)
        for (std::size_t j = t; j < cols_; ++j)
          if (a_(i, j) != 0) {
            const Int g = std::gcd(a_(i, j), n_);
            if (g < best) {
              best = g;
              pi = i;
              pj = j;
            }
          }
      if (pi == rows_) return;
      swap_rows(t, pi);
      swap_cols(t, pj);
      normalize_pivot(t);
      for (;;) {
        const bool col_ok = clear_column(t);
        const bool row_ok = clear_row(t);
        if (col_ok && row_ok) {
          bool zero = true;
          for (std::size_t i = t + 1; i < rows_ && zero; ++i) zero = a_(i, t) == 0;
          for (std::size_t j = t + 1; j < cols_ && zero; ++j) zero = a_(t, j) == 0;
          if (zero) break;
        }
      }
    }
  }

  bool fix_divisibility() {
    const std::size_t diag = std::min(rows_, cols_);
    for (std::size_t i = 0; i < diag; ++i)
      for (std::size_t j = i + 1; j < diag; ++j)
        if (factor(j) % factor(i) != 0) {
          combine_cols(i, j, 1, 1, 0, 1);
          return true;
        }
    return false;
  }

  Int n_;
  std::size_t rows_, cols_;
  IntMatrix a_, u_, ui_, v_;
};

}  // namespace

ModularSmithForm smith_normal_form_mod(const IntMatrix& m, Int modulus) {
  if (modulus < 1) throw std::invalid_argument("smith_normal_form_mod: modulus must be positive");
  ModularReducer reducer(m, modulus);
  reducer.run();
  return std::move(reducer).result();
}

IntMatrix kernel_mod(const IntMatrix& m, Int modulus) {
  const ModularSmithForm snf = smith_normal_form_mod(m, modulus);
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::size_t diag = std::min(rows, cols);
  std::vector<Vector> gens;
  for (std::size_t i = 0; i < cols; ++i) {
    Int scale = 1;
    if (i < diag) {
      scale = modulus / snf.factors[i];
      if (scale == modulus) continue;
    }
    Vector g(cols);
    for (std::size_t r = 0; r < cols; ++r) g[r] = mod(snf.right(r, i) * scale, modulus);
    gens.push_back(std::move(g));
  }
  IntMatrix out(cols, gens.size());
  for (std::size_t c = 0; c < gens.size(); ++c) out.set_column(c, gens[c]);
  return out;
}

bool solve_mod(const IntMatrix& m, const Vector& b, Int modulus, Vector& x) {
  const ModularSmithForm snf = smith_normal_form_mod(m, modulus);
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::size_t diag = std::min(rows, cols);
  Vector c = snf.left * b;
  for (auto& ci : c) ci = mod(ci, modulus);
  Vector y(cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (i < diag) {
      const Int f = snf.factors[i];
      if (c[i] % f != 0) return false;
      y[i] = f == modulus ? 0 : c[i] / f;
    } else if (c[i] != 0) {
      return false;
    }
  }
  x = snf.right * y;
  for (auto& xi : x) xi = mod(xi, modulus);
  return true;
}

// ---------------------------------------------------------------------------
// Howell form

std::vector<Vector> howell_form(std::vector<Vector> rows, Int n, std::size_t width) {
  auto reduce = [&](Vector& v) {
    for (auto& e : v) e = mod(e, n);
  };
  auto is_zero = [](const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](Int e) { return e == 0; });
  };
  std::vector<Vector> work;
  for (auto& r : rows) {
    assert(r.size() == width);
    reduce(r);
    if (!is_zero(r)) work.push_back(std::move(r));
  }

  std::vector<Vector> result;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t c = 0; c < width; ++c) {
    std::optional<Vector> pivot;
    std::vector<Vector> rest;
    for (auto& r : work) {
      if (r[c] == 0) {
        rest.push_back(std::move(r));
        continue;
      }
      if (!pivot) {
        pivot = std::move(r);
        continue;
      }
      Vector& p = *pivot;
      const Int a = p[c], b = r[c];
      if (b % a == 0) {
        const Int k = b / a;
        for (std::size_t j = 0; j < width; ++j) r[j] = mod(r[j] - k * p[j], n);
      } else {
        const auto [g, s, t] = extended_gcd(a, b);
        Vector np(width), nr(width);
        for (std::size_t j = 0; j < width; ++j) {
          np[j] = mod(s * p[j] + t * r[j], n);
          nr[j] = mod((b / g) * p[j] - (a / g) * r[j], n);
        }
        p = std::move(np);
        r = std::move(nr);
      }
      if (!is_zero(r)) rest.push_back(std::move(r));
    }
    work = std::move(rest);
    if (!pivot) continue;
    Vector& p = *pivot;
    const Int unit = normalizing_unit(p[c], n);
    for (auto& e : p) e = mod(e * unit, n);
    const Int g = p[c];
    Vector extra(width);
    for (std::size_t j = 0; j < width; ++j) extra[j] = mod((n / g) * p[j], n);
    if (!is_zero(extra)) work.push_back(std::move(extra));
    result.push_back(std::move(p));
    pivot_cols.push_back(c);
  }

  for (std::size_t j = 0; j < result.size(); ++j)
    for (std::size_t i = j + 1; i < result.size(); ++i) {
      const std::size_t c = pivot_cols[i];
      const Int q = result[j][c] / result[i][c];
      if (q == 0) continue;
      for (std::size_t k = 0; k < width; ++k) result[j][k] = mod(result[j][k] - q * result[i][k], n);
    }
  return result;
}

}  // namespace localix

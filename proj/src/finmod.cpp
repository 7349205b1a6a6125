#include "localix/finmod.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "localix/errors.hpp"

namespace localix {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

IntMatrix diagonal_matrix(const std::vector<Int>& d) {
  IntMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

IntMatrix columns_matrix(std::size_t rows, const std::vector<Vector>& cols) {
  IntMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) m.set_column(c, cols[c]);
  return m;
}

std::size_t leading_column(const Vector& row) {
  return static_cast<std::size_t>(
      std::find_if(row.begin(), row.end(), [](Int e) { return e != 0; }) - row.begin());
}

void require_same_ambient(const Submodule& a, const Submodule& b, const char* op) {
  if (!(a.ambient() == b.ambient()))
    throw PreconditionError(std::string(op) + ": submodules live in different ambient modules");
}

}  // namespace

// ---------------------------------------------------------------------------
// FinModule

FinModule::FinModule(Int modulus, std::vector<Int> invariant_factors)
    : modulus_(modulus), factors_(std::move(invariant_factors)) {
  if (modulus_ < 2) throw ValidationError("", "FinModule: modulus must be at least 2");
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const Int d = factors_[i];
    if (d <= 1) throw ValidationError("", "FinModule: invariant factors must exceed 1");
    if (modulus_ % d != 0)
      throw ValidationError("", "FinModule: invariant factor " + std::to_string(d) +
                                    " does not divide modulus " + std::to_string(modulus_));
    if (i > 0 && d % factors_[i - 1] != 0)
      throw ValidationError("", "FinModule: invariant factors must form a divisibility chain");
  }
}

FinModule FinModule::cyclic(Int modulus, Int order) {
  if (order == 1) return FinModule(modulus);
  return FinModule(modulus, {order});
}

FinModule FinModule::free(Int modulus, std::size_t rank) {
  return FinModule(modulus, std::vector<Int>(rank, modulus));
}

std::uint64_t FinModule::cardinality() const noexcept {
  std::uint64_t n = 1;
  for (Int d : factors_) n = saturating_mul(n, static_cast<std::uint64_t>(d));
  return n;
}

Element FinModule::generator(std::size_t i) const {
  Element e = zero();
  e.at(i) = 1;
  return e;
}

Element FinModule::reduce(Element x) const {
  assert(x.size() == rank());
  for (std::size_t i = 0; i < rank(); ++i) x[i] = mod(x[i], factors_[i]);
  return x;
}

Element FinModule::add(const Element& a, const Element& b) const {
  Element r(rank());
  for (std::size_t i = 0; i < rank(); ++i) r[i] = mod(a[i] + b[i], factors_[i]);
  return r;
}

Element FinModule::subtract(const Element& a, const Element& b) const {
  Element r(rank());
  for (std::size_t i = 0; i < rank(); ++i) r[i] = mod(a[i] - b[i], factors_[i]);
  return r;
}

Element FinModule::scale(Int k, const Element& x) const {
  Element r(rank());
  for (std::size_t i = 0; i < rank(); ++i) r[i] = mod(mod(k, factors_[i]) * x[i], factors_[i]);
  return r;
}

std::uint64_t FinModule::index_of(const Element& x) const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < rank(); ++i)
    idx = idx * static_cast<std::uint64_t>(factors_[i]) +
          static_cast<std::uint64_t>(mod(x[i], factors_[i]));
  return idx;
}

Element FinModule::element_at(std::uint64_t index) const {
  Element x(rank());
  for (std::size_t i = rank(); i-- > 0;) {
    const auto d = static_cast<std::uint64_t>(factors_[i]);
    x[i] = static_cast<Int>(index % d);
    index /= d;
  }
  return x;
}

std::vector<Element> FinModule::elements(std::uint64_t bound) const {
  const std::uint64_t n = cardinality();
  if (n > bound) throw SizeLimitError("bound-elements", bound, n);
  std::vector<Element> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(element_at(i));
  return out;
}

Vector FinModule::embed(const Element& x) const {
  Vector y(rank());
  for (std::size_t i = 0; i < rank(); ++i) y[i] = mod(x[i] * (modulus_ / factors_[i]), modulus_);
  return y;
}

Element FinModule::unembed(const Vector& y) const {
  Element x(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    const Int step = modulus_ / factors_[i];
    assert(mod(y[i], modulus_) % step == 0);
    x[i] = mod(y[i], modulus_) / step;
  }
  return x;
}

std::string to_string(const FinModule& m) {
  if (m.is_zero()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rank(); ++i) {
    if (i) os << " + ";
    os << "Z/" << m.invariant_factors()[i];
  }
  return os.str();
}

std::string to_string(const Element& x) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ',';
    os << x[i];
  }
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// ModuleMap

ModuleMap::ModuleMap(FinModule domain, FinModule codomain, IntMatrix matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != codomain_.rank() || matrix_.cols() != domain_.rank())
    throw ValidationError("", "ModuleMap: matrix shape does not match domain/codomain ranks");
  if (domain_.modulus() != codomain_.modulus())
    throw ValidationError("", "ModuleMap: domain and codomain have different moduli");
  const auto& d = domain_.invariant_factors();
  const auto& e = codomain_.invariant_factors();
  for (std::size_t r = 0; r < e.size(); ++r)
    for (std::size_t c = 0; c < d.size(); ++c) {
      matrix_(r, c) = mod(matrix_(r, c), e[r]);
      if (mod(d[c] * matrix_(r, c), e[r]) != 0)
        throw ValidationError("", "ModuleMap: generator " + std::to_string(c) + " of order " +
                                      std::to_string(d[c]) + " has an image of larger order");
    }
}

ModuleMap ModuleMap::identity(const FinModule& m) {
  return ModuleMap(m, m, IntMatrix::identity(m.rank()));
}

ModuleMap ModuleMap::zero(const FinModule& domain, const FinModule& codomain) {
  return ModuleMap(domain, codomain, IntMatrix(codomain.rank(), domain.rank()));
}

ModuleMap ModuleMap::from_images(const FinModule& domain, const FinModule& codomain,
                                 const std::vector<Element>& images) {
  assert(images.size() == domain.rank());
  return ModuleMap(domain, codomain, columns_matrix(codomain.rank(), images));
}

ModuleMap ModuleMap::tabulate(const FinModule& domain, const FinModule& codomain,
                              const std::function<Element(const Element&)>& fn) {
  std::vector<Element> images;
  images.reserve(domain.rank());
  for (std::size_t i = 0; i < domain.rank(); ++i) images.push_back(fn(domain.generator(i)));
  return from_images(domain, codomain, images);
}

Element ModuleMap::operator()(const Element& x) const {
  assert(x.size() == domain_.rank());
  return codomain_.reduce(matrix_ * x);
}

ModuleMap ModuleMap::operator+(const ModuleMap& other) const {
  assert(domain_ == other.domain_ && codomain_ == other.codomain_);
  IntMatrix m = matrix_;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) += other.matrix_(r, c);
  return ModuleMap(domain_, codomain_, std::move(m));
}

ModuleMap ModuleMap::operator-(const ModuleMap& other) const {
  assert(domain_ == other.domain_ && codomain_ == other.codomain_);
  IntMatrix m = matrix_;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) -= other.matrix_(r, c);
  return ModuleMap(domain_, codomain_, std::move(m));
}

ModuleMap ModuleMap::operator*(const ModuleMap& f) const {
  if (!(f.codomain_ == domain_)) throw PreconditionError("ModuleMap: composing non-composable maps");
  return ModuleMap(f.domain_, codomain_, matrix_ * f.matrix_);
}

// ---------------------------------------------------------------------------
// Submodule

Submodule::Submodule(FinModule ambient) : ambient_(std::move(ambient)) {}

Submodule Submodule::span(const FinModule& ambient, const std::vector<Element>& generators) {
  Submodule s(ambient);
  std::vector<Vector> rows;
  rows.reserve(generators.size());
  for (const auto& g : generators) {
    if (g.size() != ambient.rank()) throw PreconditionError("Submodule::span: generator has wrong rank");
    rows.push_back(ambient.embed(g));
  }
  s.rows_ = howell_form(std::move(rows), ambient.modulus(), ambient.rank());
  return s;
}

Submodule Submodule::whole(const FinModule& ambient) {
  std::vector<Element> gens;
  for (std::size_t i = 0; i < ambient.rank(); ++i) gens.push_back(ambient.generator(i));
  return span(ambient, gens);
}

std::vector<Element> Submodule::generators() const {
  std::vector<Element> gens;
  gens.reserve(rows_.size());
  for (const auto& r : rows_) gens.push_back(ambient_.unembed(r));
  return gens;
}

bool Submodule::contains(const Element& x) const {
  if (x.size() != ambient_.rank()) return false;
  const Int n = ambient_.modulus();
  Vector v = ambient_.embed(x);
  std::size_t next = 0;
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (v[c] == 0) continue;
    // Howell rows have strictly increasing leading columns.
    while (next < rows_.size() && leading_column(rows_[next]) < c) ++next;
    if (next == rows_.size() || leading_column(rows_[next]) != c) return false;
    const auto& row = rows_[next];
    if (v[c] % row[c] != 0) return false;
    const Int q = v[c] / row[c];
    for (std::size_t j = c; j < v.size(); ++j) v[j] = mod(v[j] - q * row[j], n);
  }
  return true;
}

std::uint64_t Submodule::cardinality() const noexcept {
  std::uint64_t n = 1;
  const Int m = ambient_.modulus();
  for (const auto& r : rows_) {
    const auto lead = std::find_if(r.begin(), r.end(), [](Int e) { return e != 0; });
    n = saturating_mul(n, static_cast<std::uint64_t>(m / *lead));
  }
  return n;
}

bool Submodule::is_subset_of(const Submodule& other) const {
  require_same_ambient(*this, other, "is_subset_of");
  for (const auto& g : generators())
    if (!other.contains(g)) return false;
  return true;
}

std::vector<Element> Submodule::elements(std::uint64_t bound) const {
  const std::uint64_t n = cardinality();
  if (n > bound) throw SizeLimitError("bound-elements", bound, n);
  // Howell rows give unique coefficients c_i in [0, m / p_i).
  const Int m = ambient_.modulus();
  std::vector<Int> orders;
  for (const auto& r : rows_)
    orders.push_back(m / *std::find_if(r.begin(), r.end(), [](Int e) { return e != 0; }));
  std::vector<Element> out;
  out.reserve(n);
  std::vector<Int> coeff(rows_.size(), 0);
  for (std::uint64_t k = 0; k < n; ++k) {
    Vector v(ambient_.rank(), 0);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = mod(v[j] + coeff[i] * rows_[i][j], m);
    out.push_back(ambient_.unembed(v));
    for (std::size_t i = rows_.size(); i-- > 0;) {
      if (++coeff[i] < orders[i]) break;
      coeff[i] = 0;
    }
  }
  std::sort(out.begin(), out.end(), [&](const Element& a, const Element& b) {
    return ambient_.index_of(a) < ambient_.index_of(b);
  });
  return out;
}

std::strong_ordering operator<=>(const Submodule& a, const Submodule& b) {
  if (auto c = a.cardinality() <=> b.cardinality(); c != 0) return c;
  if (auto c = a.ambient_.invariant_factors() <=> b.ambient_.invariant_factors(); c != 0) return c;
  return a.rows_ <=> b.rows_;
}

std::string to_string(const Submodule& s) {
  std::ostringstream os;
  os << '<';
  const auto gens = s.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) os << ", ";
    os << to_string(gens[i]);
  }
  os << '>';
  return os.str();
}

Submodule sum(const Submodule& a, const Submodule& b) {
  require_same_ambient(a, b, "sum");
  auto gens = a.generators();
  for (auto& g : b.generators()) gens.push_back(std::move(g));
  return Submodule::span(a.ambient(), gens);
}

Submodule intersect(const Submodule& a, const Submodule& b) {
  require_same_ambient(a, b, "intersect");
  const Embedding e = embed(a);
  return image(e.inclusion, preimage(e.inclusion, b));
}

Submodule preimage(const ModuleMap& f, const Submodule& s) {
  if (!(s.ambient() == f.codomain())) throw PreconditionError("preimage: submodule not in codomain");
  const FinModule& dom = f.domain();
  const FinModule& cod = f.codomain();
  const Int n = dom.modulus();
  // [H | S | diag(e)] (x, y, z) = 0 over Z/n
  const auto gens = s.generators();
  IntMatrix system = IntMatrix::hconcat(
      IntMatrix::hconcat(f.matrix(), columns_matrix(cod.rank(), gens)),
      diagonal_matrix(cod.invariant_factors()));
  const IntMatrix k = kernel_mod(system, n);
  std::vector<Element> out;
  for (std::size_t c = 0; c < k.cols(); ++c) {
    Element x(dom.rank());
    for (std::size_t i = 0; i < dom.rank(); ++i) x[i] = k(i, c);
    out.push_back(dom.reduce(std::move(x)));
  }
  return Submodule::span(dom, out);
}

Submodule kernel(const ModuleMap& f) { return preimage(f, Submodule(f.codomain())); }

Submodule image(const ModuleMap& f) {
  std::vector<Element> cols;
  for (std::size_t c = 0; c < f.domain().rank(); ++c) cols.push_back(f.matrix().column(c));
  return Submodule::span(f.codomain(), cols);
}

Submodule image(const ModuleMap& f, const Submodule& s) {
  if (!(s.ambient() == f.domain())) throw PreconditionError("image: submodule not in domain");
  std::vector<Element> out;
  for (const auto& g : s.generators()) out.push_back(f(g));
  return Submodule::span(f.codomain(), out);
}

std::optional<Element> solve(const ModuleMap& f, const Element& b) {
  const FinModule& dom = f.domain();
  const FinModule& cod = f.codomain();
  if (cod.is_zero()) return dom.zero();
  IntMatrix system = IntMatrix::hconcat(f.matrix(), diagonal_matrix(cod.invariant_factors()));
  Vector w;
  if (!solve_mod(system, cod.reduce(b), dom.modulus(), w)) return std::nullopt;
  Element x(dom.rank());
  for (std::size_t i = 0; i < dom.rank(); ++i) x[i] = w[i];
  x = dom.reduce(std::move(x));
  if (f(x) != cod.reduce(b)) throw InternalDefect("solve: modular solution does not check");
  return x;
}

// ---------------------------------------------------------------------------
// Presentations

Cokernel cokernel(const IntMatrix& relations, Int modulus) {
  const std::size_t t = relations.rows();
  const ModularSmithForm snf = smith_normal_form_mod(relations, modulus);
  std::vector<std::size_t> kept;
  std::vector<Int> factors;
  for (std::size_t i = 0; i < t; ++i)
    if (snf.factors[i] != 1) {
      kept.push_back(i);
      factors.push_back(snf.factors[i]);
    }
  Cokernel out{FinModule(modulus, factors), IntMatrix(kept.size(), t), IntMatrix(t, kept.size())};
  for (std::size_t k = 0; k < kept.size(); ++k) {
    for (std::size_t c = 0; c < t; ++c) out.to_module(k, c) = mod(snf.left(kept[k], c), factors[k]);
    for (std::size_t r = 0; r < t; ++r) out.lifts(r, k) = mod(snf.left_inverse(r, kept[k]), modulus);
  }
  return out;
}

Element Embedding::coordinates(const Element& x) const {
  auto y = solve(inclusion, x);
  if (!y) throw PreconditionError("Embedding::coordinates: element " + to_string(x) + " is outside the submodule");
  return *y;
}

Embedding embed(const Submodule& s) {
  const FinModule& amb = s.ambient();
  const Int n = amb.modulus();
  const auto gens = s.generators();
  const std::size_t t = gens.size();
  const IntMatrix g = columns_matrix(amb.rank(), gens);
  // relations among the generators: first t coordinates of ker [G | diag(d)]
  const IntMatrix k = kernel_mod(IntMatrix::hconcat(g, diagonal_matrix(amb.invariant_factors())), n);
  IntMatrix rel(t, k.cols());
  for (std::size_t r = 0; r < t; ++r)
    for (std::size_t c = 0; c < k.cols(); ++c) rel(r, c) = k(r, c);
  const Cokernel ck = cokernel(rel, n);
  std::vector<Element> images;
  for (std::size_t j = 0; j < ck.module.rank(); ++j) images.push_back(amb.reduce(g * ck.lifts.column(j)));
  ModuleMap inclusion = ModuleMap::from_images(ck.module, amb, images);
  return Embedding{ck.module, std::move(inclusion)};
}

Element QuotientMap::lift(const Element& y) const {
  const FinModule& amb = projection.domain();
  Element x = amb.zero();
  for (std::size_t i = 0; i < y.size(); ++i) x = amb.add(x, amb.scale(y[i], lifts[i]));
  return x;
}

QuotientMap quotient(const FinModule& m, const Submodule& s) {
  if (!(s.ambient() == m)) throw PreconditionError("quotient: submodule not in module");
  const Int n = m.modulus();
  const IntMatrix rel =
      IntMatrix::hconcat(diagonal_matrix(m.invariant_factors()), columns_matrix(m.rank(), s.generators()));
  const Cokernel ck = cokernel(rel, n);
  ModuleMap projection(m, ck.module, ck.to_module);
  std::vector<Element> lifts;
  for (std::size_t j = 0; j < ck.module.rank(); ++j) lifts.push_back(m.reduce(ck.lifts.column(j)));
  return QuotientMap{ck.module, std::move(projection), std::move(lifts)};
}

DirectSum direct_sum(Int modulus, const std::vector<FinModule>& summands) {
  std::vector<Int> all;
  std::vector<std::size_t> offset;
  for (const auto& s : summands) {
    if (s.modulus() != modulus) throw PreconditionError("direct_sum: summand has a different modulus");
    offset.push_back(all.size());
    all.insert(all.end(), s.invariant_factors().begin(), s.invariant_factors().end());
  }
  const Cokernel ck = cokernel(diagonal_matrix(all), modulus);
  DirectSum out{ck.module, {}, {}};
  for (std::size_t k = 0; k < summands.size(); ++k) {
    const FinModule& s = summands[k];
    std::vector<Element> in_images, out_images;
    for (std::size_t i = 0; i < s.rank(); ++i) in_images.push_back(ck.module.reduce(ck.to_module.column(offset[k] + i)));
    for (std::size_t j = 0; j < ck.module.rank(); ++j) {
      Element e(s.rank());
      for (std::size_t i = 0; i < s.rank(); ++i) e[i] = ck.lifts(offset[k] + i, j);
      out_images.push_back(s.reduce(std::move(e)));
    }
    out.injections.push_back(ModuleMap::from_images(s, ck.module, in_images));
    out.projections.push_back(ModuleMap::from_images(ck.module, s, out_images));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hom groups

HomGroup::HomGroup(const FinModule& source, const FinModule& target)
    : source_(source), target_(target), group_(source.modulus()) {
  if (source.modulus() != target.modulus()) throw PreconditionError("hom_group: moduli differ");
  const auto& d = source.invariant_factors();
  const auto& e = target.invariant_factors();
  std::vector<Int> orders;
  for (std::size_t r = 0; r < e.size(); ++r)
    for (std::size_t c = 0; c < d.size(); ++c) {
      const Int g = std::gcd(d[c], e[r]);
      if (g > 1) {
        slots_.push_back({r, c, g});
        orders.push_back(g);
      }
    }
  const Cokernel ck = cokernel(diagonal_matrix(orders), source.modulus());
  group_ = ck.module;
  to_group_ = ck.to_module;
  from_group_ = ck.lifts;
}

ModuleMap HomGroup::map_of(const Element& y) const {
  IntMatrix h(target_.rank(), source_.rank());
  const Vector x = from_group_ * group_.reduce(y);
  for (std::size_t p = 0; p < slots_.size(); ++p) {
    const auto& s = slots_[p];
    const Int e = target_.invariant_factors()[s.row];
    h(s.row, s.col) = mod(x[p], s.order) * (e / s.order);
  }
  return ModuleMap(source_, target_, std::move(h));
}

Element HomGroup::element_of(const ModuleMap& f) const {
  if (!(f.domain() == source_ && f.codomain() == target_)) throw PreconditionError("HomGroup::element_of: map has wrong type");
  Vector x(slots_.size());
  for (std::size_t p = 0; p < slots_.size(); ++p) {
    const auto& s = slots_[p];
    const Int step = target_.invariant_factors()[s.row] / s.order;
    x[p] = f.matrix()(s.row, s.col) / step;
  }
  return group_.reduce(to_group_ * x);
}

HomGroup hom_group(const FinModule& source, const FinModule& target) { return HomGroup(source, target); }

// ---------------------------------------------------------------------------
// Enumeration

std::vector<Element> enumerate_elements(const FinModule& m, const Bounds& bounds) {
  return m.elements(bounds.elements);
}

std::vector<Submodule> enumerate_subgroups(const FinModule& m, const Bounds& bounds) {
  const std::uint64_t n = m.cardinality();
  if (n > bounds.subgroups) throw SizeLimitError("bound-ideals", bounds.subgroups, n);
  const auto elems = m.elements(bounds.subgroups);
  std::set<Submodule> seen{Submodule(m)};
  std::vector<Submodule> frontier{Submodule(m)};
  while (!frontier.empty()) {
    std::vector<Submodule> next;
    for (const auto& s : frontier)
      for (const auto& x : elems) {
        if (s.contains(x)) continue;
        auto gens = s.generators();
        gens.push_back(x);
        Submodule t = Submodule::span(m, gens);
        if (seen.insert(t).second) next.push_back(std::move(t));
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

}  // namespace localix

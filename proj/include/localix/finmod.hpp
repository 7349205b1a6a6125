#pragma once

// Finite Z/m-modules in invariant-factor form, their homomorphisms and
// submodule lattices. All linear algebra runs over Z/m with m the single
// modulus of a scenario; every invariant factor divides m.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "localix/matrix.hpp"

namespace localix {

using Element = Vector;

/// Enumeration limits. Exceeding one raises SizeLimitError.
struct Bounds {
  std::uint64_t elements = 4096;  // max cardinality for element enumeration
  std::uint64_t subgroups = 256;  // max cardinality for subgroup/submodule lattices
  std::uint64_t lattice = 20;     // max ideal-lattice size for filter enumeration
};

class FinModule {
 public:
  /// Validates d_1 | d_2 | ... | d_k | modulus with every d_i > 1.
  explicit FinModule(Int modulus, std::vector<Int> invariant_factors = {});

  static FinModule cyclic(Int modulus, Int order);
  static FinModule free(Int modulus, std::size_t rank);

  Int modulus() const noexcept { return modulus_; }
  const std::vector<Int>& invariant_factors() const noexcept { return factors_; }
  std::size_t rank() const noexcept { return factors_.size(); }
  bool is_zero() const noexcept { return factors_.empty(); }

  /// Saturates at UINT64_MAX.
  std::uint64_t cardinality() const noexcept;

  Element zero() const { return Element(rank(), 0); }
  Element generator(std::size_t i) const;
  Element reduce(Element x) const;
  Element add(const Element& a, const Element& b) const;
  Element subtract(const Element& a, const Element& b) const;
  Element scale(Int k, const Element& x) const;

  std::uint64_t index_of(const Element& x) const;
  Element element_at(std::uint64_t index) const;
  /// Every element in index order; throws SizeLimitError above `bound`.
  std::vector<Element> elements(std::uint64_t bound) const;

  /// Injective embedding x_i -> (m / d_i) x_i into (Z/m)^rank.
  Vector embed(const Element& x) const;
  Element unembed(const Vector& y) const;

  friend bool operator==(const FinModule&, const FinModule&) = default;

 private:
  Int modulus_;
  std::vector<Int> factors_;
};

std::string to_string(const FinModule& m);
std::string to_string(const Element& x);

/// Additive map; column i of the matrix is the image of generator i.
class ModuleMap {
 public:
  ModuleMap(FinModule domain, FinModule codomain, IntMatrix matrix);

  static ModuleMap identity(const FinModule& m);
  static ModuleMap zero(const FinModule& domain, const FinModule& codomain);
  static ModuleMap from_images(const FinModule& domain, const FinModule& codomain,
                               const std::vector<Element>& images);
  /// Tabulates an additive function on the domain's generators.
  static ModuleMap tabulate(const FinModule& domain, const FinModule& codomain,
                            const std::function<Element(const Element&)>& fn);

  const FinModule& domain() const noexcept { return domain_; }
  const FinModule& codomain() const noexcept { return codomain_; }
  const IntMatrix& matrix() const noexcept { return matrix_; }

  Element operator()(const Element& x) const;

  ModuleMap operator+(const ModuleMap& other) const;
  ModuleMap operator-(const ModuleMap& other) const;
  /// Composition: (g * f)(x) = g(f(x)).
  ModuleMap operator*(const ModuleMap& f) const;

  friend bool operator==(const ModuleMap&, const ModuleMap&) = default;

 private:
  FinModule domain_;
  FinModule codomain_;
  IntMatrix matrix_;
};

/// A subgroup of a FinModule, stored as the Howell form of its embedded
/// generators; equal subgroups have identical canonical forms.
class Submodule {
 public:
  explicit Submodule(FinModule ambient);

  static Submodule span(const FinModule& ambient, const std::vector<Element>& generators);
  static Submodule whole(const FinModule& ambient);

  const FinModule& ambient() const noexcept { return ambient_; }
  const std::vector<Vector>& canonical_form() const noexcept { return rows_; }
  std::vector<Element> generators() const;

  bool contains(const Element& x) const;
  std::uint64_t cardinality() const noexcept;
  bool is_zero() const noexcept { return rows_.empty(); }
  bool is_whole() const noexcept { return cardinality() == ambient_.cardinality(); }
  bool is_subset_of(const Submodule& other) const;
  std::vector<Element> elements(std::uint64_t bound) const;

  friend bool operator==(const Submodule& a, const Submodule& b) {
    return a.ambient_ == b.ambient_ && a.rows_ == b.rows_;
  }
  /// Canonical order: by cardinality, then by canonical form.
  friend std::strong_ordering operator<=>(const Submodule& a, const Submodule& b);

 private:
  FinModule ambient_;
  std::vector<Vector> rows_;
};

std::string to_string(const Submodule& s);

Submodule sum(const Submodule& a, const Submodule& b);
Submodule intersect(const Submodule& a, const Submodule& b);
Submodule kernel(const ModuleMap& f);
Submodule image(const ModuleMap& f);
/// f(S) for S inside f's domain.
Submodule image(const ModuleMap& f, const Submodule& s);
Submodule preimage(const ModuleMap& f, const Submodule& s);

/// Some x with f(x) = b, if any.
std::optional<Element> solve(const ModuleMap& f, const Element& b);

/// A submodule presented as a FinModule of its own.
struct Embedding {
  FinModule module;
  ModuleMap inclusion;
  /// Coordinates of an ambient element lying in the submodule.
  Element coordinates(const Element& x) const;
};

Embedding embed(const Submodule& s);

struct QuotientMap {
  FinModule module;
  ModuleMap projection;
  /// lifts[i] is a preimage of the i-th generator of the quotient.
  std::vector<Element> lifts;
  Element lift(const Element& y) const;
};

QuotientMap quotient(const FinModule& m, const Submodule& s);

struct DirectSum {
  FinModule module;
  std::vector<ModuleMap> injections;
  std::vector<ModuleMap> projections;
};

DirectSum direct_sum(Int modulus, const std::vector<FinModule>& summands);

/// Hom(M, N) as a FinModule together with its identification with maps.
class HomGroup {
 public:
  HomGroup(const FinModule& source, const FinModule& target);

  const FinModule& group() const noexcept { return group_; }
  const FinModule& source() const noexcept { return source_; }
  const FinModule& target() const noexcept { return target_; }

  ModuleMap map_of(const Element& y) const;
  Element element_of(const ModuleMap& f) const;

 private:
  FinModule source_;
  FinModule target_;
  FinModule group_;
  struct Slot {
    std::size_t row;
    std::size_t col;
    Int order;
  };
  std::vector<Slot> slots_;
  IntMatrix to_group_;    // rows kept from the Smith transform
  IntMatrix from_group_;  // columns kept from its inverse
};

HomGroup hom_group(const FinModule& source, const FinModule& target);

std::vector<Element> enumerate_elements(const FinModule& m, const Bounds& bounds = {});
/// Every subgroup, canonically sorted.
std::vector<Submodule> enumerate_subgroups(const FinModule& m, const Bounds& bounds = {});

/// Transforms of a cokernel presentation (Z/m)^t / columns(relations).
struct Cokernel {
  FinModule module;
  IntMatrix to_module;  // module.rank() x t, coordinates of the image of x
  IntMatrix lifts;      // t x module.rank(), preimages of the generators
};

Cokernel cokernel(const IntMatrix& relations, Int modulus);

}  // namespace localix

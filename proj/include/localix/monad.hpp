#pragma once

// The monad U = A (x) - on finite Z/m-modules for a finite free algebra A,
// its Eilenberg-Moore modules, derivations on U, and derivations on modules.
//
// UM is realized concretely as M^r for the chosen basis e_0..e_{r-1} of A.
// A derivation on U is stored as one matrix d on A; its component at M is
// d (x) id applied across the A-coordinate.

#include <string>
#include <vector>

#include "localix/finmod.hpp"
#include "localix/verdict.hpp"

namespace localix {

/// Outcome of a law check. A failed report names the law, the indices
/// where it broke and both evaluated sides.
struct LawReport {
  bool passed = true;
  std::string law;
  std::string anchor;
  std::vector<std::size_t> indices;
  Element lhs;
  Element rhs;

  explicit operator bool() const noexcept { return passed; }
  std::string describe() const;

  static LawReport pass(std::string law, std::string anchor);
  static LawReport fail(std::string law, std::string anchor, std::vector<std::size_t> indices, Element lhs,
                        Element rhs);
};

class Algebra {
 public:
  /// `products[i][j]` holds the coordinates of e_i e_j. Shapes are
  /// validated here; the algebra laws are checked by check_monad_laws.
  Algebra(Int modulus, Element unit, std::vector<std::vector<Element>> products);

  Int modulus() const noexcept { return modulus_; }
  std::size_t rank() const noexcept { return unit_.size(); }
  const Element& unit() const noexcept { return unit_; }
  const Element& product(std::size_t i, std::size_t j) const { return products_.at(i).at(j); }
  const FinModule& carrier() const noexcept { return carrier_; }
  Element basis(std::size_t i) const { return carrier_.generator(i); }

  Element multiply(const Element& a, const Element& b) const;
  ModuleMap left_multiplication(const Element& a) const;
  ModuleMap right_multiplication(const Element& a) const;

  friend bool operator==(const Algebra&, const Algebra&) = default;

 private:
  Int modulus_;
  Element unit_;
  std::vector<std::vector<Element>> products_;
  FinModule carrier_;
};

/// d: A -> A; column j of the matrix is d(e_j).
struct AlgebraDerivation {
  ModuleMap map;

  AlgebraDerivation(const Algebra& algebra, const IntMatrix& matrix);
  explicit AlgebraDerivation(ModuleMap m) : map(std::move(m)) {}
  static AlgebraDerivation zero(const Algebra& algebra);

  Element operator()(const Element& a) const { return map(a); }
  friend bool operator==(const AlgebraDerivation&, const AlgebraDerivation&) = default;
};

/// A module over the monad: a carrier with one action endomorphism per basis element.
class EMModule {
 public:
  EMModule(FinModule carrier, std::vector<ModuleMap> actions);

  const FinModule& carrier() const noexcept { return carrier_; }
  const std::vector<ModuleMap>& actions() const noexcept { return actions_; }
  const ModuleMap& action(std::size_t i) const { return actions_.at(i); }

  /// The action of a = sum a_i e_i.
  ModuleMap action_of(const Element& a) const;
  Element act(const Element& a, const Element& x) const;

  friend bool operator==(const EMModule&, const EMModule&) = default;

 private:
  FinModule carrier_;
  std::vector<ModuleMap> actions_;
};

struct NamedModule {
  std::string name;
  EMModule module;
};

/// Additive endomorphism D of a module's carrier, relative to some d.
struct ModuleDerivation {
  ModuleMap map;
  friend bool operator==(const ModuleDerivation&, const ModuleDerivation&) = default;
};

LawReport check_monad_laws(const Algebra& algebra);

EMModule regular_module(const Algebra& algebra);

struct FreeModule {
  EMModule module;
  ModuleMap unit;  // eta: M0 -> UM0
  DirectSum sum;   // UM0 = M0^r
};

FreeModule free_module(const Algebra& algebra, const FinModule& base);
/// U on morphisms: f applied in every coordinate of M^r.
ModuleMap free_map(const Algebra& algebra, const ModuleMap& f);

/// U carries 0 -> X -> Y -> Z -> 0 to an exact sequence.
Verdict check_free_exact(const Algebra& algebra, const ModuleMap& f, const ModuleMap& g);

LawReport check_em_module(const Algebra& algebra, const EMModule& m);
LawReport check_em_morphism(const Algebra& algebra, const EMModule& source, const EMModule& target,
                            const ModuleMap& g);

/// EM_U(M, N): the A-linear maps, as a subgroup of Hom(M, N).
class EMHomSpace {
 public:
  EMHomSpace(const Algebra& algebra, const EMModule& source, const EMModule& target);

  const FinModule& module() const noexcept { return embedding_.module; }
  ModuleMap map_of(const Element& z) const { return hom_.map_of(embedding_.inclusion(z)); }
  Element element_of(const ModuleMap& f) const { return embedding_.coordinates(hom_.element_of(f)); }
  std::vector<ModuleMap> enumerate(const Bounds& bounds) const;

 private:
  HomGroup hom_;
  Embedding embedding_;
};

struct AdjunctionTable {
  std::size_t em_side = 0;    // |EM_U(U M0, N)|
  std::size_t base_side = 0;  // |C(M0, N)|
  std::vector<std::pair<ModuleMap, ModuleMap>> pairs;  // (h, h o eta)
  bool round_trip = false;
  std::string failure;
};

AdjunctionTable adjunction_bijection(const Algebra& algebra, const FinModule& base, const EMModule& target,
                                     const Bounds& bounds = {});

/// The bijection EM_U(U M0, N) = C(M0, N). Uses the full table when both sides
/// fit the element bound, else the round trip on generators of both groups,
/// which suffices because both transposes are additive.
Verdict check_adjunction(const Algebra& algebra, const FinModule& base, const EMModule& target,
                         const Bounds& bounds = {});

/// Leibniz rule on basis pairs.
LawReport check_leibniz(const Algebra& algebra, const AlgebraDerivation& d);
/// theta o (1*delta + delta*1) = delta o theta on U U M for a probe module M.
LawReport check_derivation_square(const Algebra& algebra, const AlgebraDerivation& d, const FinModule& probe);
/// Both routes (probe = k); throws InternalDefect if they disagree.
LawReport check_derivation(const Algebra& algebra, const AlgebraDerivation& d);

/// D(a x) = a D(x) + d(a) x for basis a and carrier generators x.
LawReport check_module_derivation(const Algebra& algebra, const EMModule& m, const AlgebraDerivation& d,
                                  const ModuleMap& candidate);

/// Hom(M, M) size up to which module derivations are also found by filtering
/// every additive endomorphism.
inline constexpr std::uint64_t kBruteForceDerivationLimit = 1024;

/// All d-derivations of M, solved as a linear congruence system and sorted
/// by matrix entries; cross-checked by exhaustive filtering on small carriers.
std::vector<ModuleDerivation> enumerate_module_derivations(const Algebra& algebra, const EMModule& m,
                                                           const AlgebraDerivation& d,
                                                           const Bounds& bounds = {});

/// All derivations of A, sorted by matrix entries.
std::vector<AlgebraDerivation> enumerate_algebra_derivations(const Algebra& algebra, const Bounds& bounds = {});

/// A morphism from the free module on k into M whose image escapes the
/// proper EM-submodule `n`.
ModuleMap check_generator_instance(const Algebra& algebra, const EMModule& m, const Submodule& n);

// ---- EM-submodules, quotients and sums -----------------------------------

bool is_em_submodule(const EMModule& m, const Submodule& s);
/// Smallest EM-submodule containing the given elements.
Submodule em_span(const EMModule& m, const std::vector<Element>& generators);
/// Every EM-submodule, canonically sorted.
std::vector<Submodule> enumerate_em_submodules(const EMModule& m, const Bounds& bounds = {});

struct EMRestriction {
  EMModule module;
  Embedding embedding;
};
EMRestriction restrict_module(const EMModule& m, const Submodule& s);

struct EMQuotient {
  EMModule module;
  QuotientMap map;
};
EMQuotient quotient_module(const EMModule& m, const Submodule& s);

struct EMDirectSum {
  EMModule module;
  DirectSum sum;
};
EMDirectSum em_direct_sum(const std::vector<EMModule>& summands);

/// Canonical key for sorting maps independent of any Hom presentation.
std::vector<Int> flatten(const ModuleMap& f);

}  // namespace localix

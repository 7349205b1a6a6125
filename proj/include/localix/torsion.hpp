#pragma once

// Left ideals, Gabriel filters on the single generator A, torsion radicals
// and the delta-invariance construction.

#include <functional>
#include <optional>
#include <vector>

#include "localix/monad.hpp"
#include "localix/verdict.hpp"

namespace localix {

/// Left ideals of A, canonically sorted.
std::vector<Submodule> enumerate_left_ideals(const Algebra& algebra, const Bounds& bounds = {});

/// (I : y) = { a in A : a y in I }, the preimage of I under right multiplication by y.
Submodule colon_ideal(const Algebra& algebra, const Submodule& ideal, const Element& y);

struct FilterVerdict {
  bool passed = true;
  int axiom = 0;  // first failing axiom, 1..4; 0 when passed
  std::string witness;
  explicit operator bool() const noexcept { return passed; }
};

/// Checks the four filter axioms on an arbitrary collection of subgroups of A.
FilterVerdict is_gabriel_filter(const Algebra& algebra, const std::vector<Submodule>& collection,
                                const Bounds& bounds = {});

class GabrielFilter {
 public:
  /// Sorts and deduplicates; throws ValidationError if an axiom fails.
  GabrielFilter(const Algebra& algebra, std::vector<Submodule> ideals, const Bounds& bounds = {});

  const std::vector<Submodule>& ideals() const noexcept { return ideals_; }
  std::size_t size() const noexcept { return ideals_.size(); }
  bool contains(const Submodule& ideal) const;
  /// Intersection of all members; itself a member.
  const Submodule& min_ideal() const noexcept { return ideals_.front(); }

  friend bool operator==(const GabrielFilter&, const GabrielFilter&) = default;

 private:
  std::vector<Submodule> ideals_;
};

std::string to_string(const GabrielFilter& filter);

/// Every Gabriel filter on A, in canonical order (size, then members).
std::vector<GabrielFilter> enumerate_gabriel_filters(const Algebra& algebra, const Bounds& bounds = {});

/// Every up-closed collection of left ideals containing A; the candidate
/// space of filter enumeration.
std::vector<std::vector<Submodule>> upward_closed_collections(const std::vector<Submodule>& ideals);

/// Ann(x) = kernel of a |-> a.x.
Submodule annihilator(const Algebra& algebra, const EMModule& m, const Element& x);

struct TorsionVerdict {
  bool torsion = true;
  std::optional<Element> witness;  // an element whose annihilator is not in the filter
};

/// Kernel test over all morphisms A -> M, by annihilators and by direct
/// enumeration of the morphisms; throws InternalDefect if they disagree.
TorsionVerdict is_torsion(const Algebra& algebra, const EMModule& m, const GabrielFilter& filter,
                          const Bounds& bounds = {});

/// { x : Ann(x) in L }, checked to be closed under addition.
Submodule torsion_radical_fast(const Algebra& algebra, const EMModule& m, const GabrielFilter& filter,
                               const Bounds& bounds = {});
/// Sum of all torsion EM-submodules.
Submodule torsion_radical_literal(const Algebra& algebra, const EMModule& m, const GabrielFilter& filter,
                                  const Bounds& bounds = {});
/// Fast path, cross-checked against the literal sum whenever the submodule
/// lattice is within the bound.
Submodule torsion_radical(const Algebra& algebra, const EMModule& m, const GabrielFilter& filter,
                          const Bounds& bounds = {});

enum class TorsionClass { Torsion, TorsionFree, Mixed };
std::string to_string(TorsionClass c);

struct ClassifiedModule {
  NamedModule module;
  Submodule radical;
  TorsionClass kind;
};

struct TorsionTheory {
  Algebra algebra;
  GabrielFilter filter;
  std::vector<ClassifiedModule> corpus;

  Submodule radical(const EMModule& m, const Bounds& bounds = {}) const {
    return torsion_radical(algebra, m, filter, bounds);
  }
};

/// Idempotence, torsion-free quotient, hereditarity over every EM-submodule
/// and the class consistency of one module.
Verdict check_radical_invariants(const Algebra& algebra, const GabrielFilter& filter, const EMModule& m,
                                 const Bounds& bounds = {});

/// Classifies the corpus; throws InternalDefect if an invariant fails.
TorsionTheory torsion_theory(const Algebra& algebra, const GabrielFilter& filter,
                             const std::vector<NamedModule>& corpus, const Bounds& bounds = {});

using Radical = std::function<Submodule(const EMModule&)>;

/// { I : A/I is torsion for the radical }.
GabrielFilter gabriel_filter_of_radical(const Algebra& algebra, const Radical& radical, const Bounds& bounds = {});

/// Sum of left ideals P inside I with d(P) inside I.
Submodule delta_invariant_J_literal(const Algebra& algebra, const Submodule& ideal, const AlgebraDerivation& d,
                                    const Bounds& bounds = {});
/// Largest left ideal inside I ∩ d^{-1}(I).
Submodule delta_invariant_J_fast(const Algebra& algebra, const Submodule& ideal, const AlgebraDerivation& d);
/// Both routes; requires I in the filter.
Submodule delta_invariant_J(const Algebra& algebra, const Submodule& ideal, const AlgebraDerivation& d,
                            const GabrielFilter& filter, const Bounds& bounds = {});

/// For every I in L: J in L and d(J) inside I.
Verdict check_delta_invariance(const Algebra& algebra, const AlgebraDerivation& d, const GabrielFilter& filter,
                               const Bounds& bounds = {});

/// D(M_tau) inside M_tau. Throws ValidationError if D is not a derivation.
Verdict check_differential(const Algebra& algebra, const GabrielFilter& filter, const EMModule& m,
                           const AlgebraDerivation& d, const ModuleDerivation& derivation, const Bounds& bounds = {});
/// Same check against a radical computed beforehand.
Verdict check_differential(const Algebra& algebra, const Submodule& radical, const EMModule& m,
                           const AlgebraDerivation& d, const ModuleDerivation& derivation);

}  // namespace localix

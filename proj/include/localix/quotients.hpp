#pragma once

// The module of quotients H_tau(M) = Hom_A(I_min, M/M_tau), the canonical map
// Phi_M, the raw directed-colimit oracle, and the extension of derivations.

#include <map>
#include <optional>
#include <vector>

#include "localix/torsion.hpp"

namespace localix {

/// The minimum member of the filter.
Submodule min_ideal(const GabrielFilter& filter);

/// One ideal of the filter as a module, with its A-linear maps into N.
struct ColimitTerm {
  Submodule ideal;
  EMRestriction module;
  std::vector<ModuleMap> maps;  // all A-linear maps ideal -> N
};

/// Disjoint union of Hom_A(I, N) over I in L, glued by agreement on a common
/// smaller member of L.
struct ColimitHom {
  using Graph = std::map<Element, Element>;  // ambient element of the ideal -> value
  struct Node {
    std::size_t term;
    std::size_t map;
    Graph graph;
  };
  std::vector<ColimitTerm> terms;
  std::vector<Node> nodes;
  std::vector<std::size_t> class_of;   // node -> class index
  std::size_t class_count = 0;
  std::vector<std::size_t> representative;  // class -> first node

  /// Node holding exactly this map on this ideal, if any.
  std::optional<std::size_t> find(const Submodule& ideal, const Graph& graph) const;
};

ColimitHom colimit_hom(const Algebra& algebra, const GabrielFilter& filter, const EMModule& n,
                       const Bounds& bounds = {});

struct QuotientModule {
  Algebra algebra;
  EMModule source;
  GabrielFilter filter;
  Submodule radical;        // M_tau
  EMQuotient torsion_free;  // N = M / M_tau with p
  Submodule ideal;          // I_min
  EMRestriction ideal_module;
  EMHomSpace hom;           // Hom_A(I_min, N)
  EMModule carrier;         // with (a.f)(x) = f(x a)
  ModuleMap phi;            // M -> carrier, m |-> (x |-> p(x m))

  /// The map I_min -> N represented by a carrier element.
  ModuleMap map_of(const Element& z) const { return hom.map_of(z); }
  Element element_of(const ModuleMap& f) const { return hom.element_of(f); }
};

/// Builds H_tau(M) and checks the invariants; throws InternalDefect on failure.
QuotientModule module_of_quotients(const Algebra& algebra, const EMModule& m, const GabrielFilter& filter,
                                   const Bounds& bounds = {});

/// Carrier passes the module laws, Phi is A-linear, Ker and Coker of Phi are
/// torsion, and a torsion source has zero localization.
Verdict check_quotient_invariants(const QuotientModule& q, const Bounds& bounds = {});

/// The carrier and the raw colimit are isomorphic as modules: restriction to
/// I_min is a bijection on classes and respects the action.
Verdict check_colimit_isomorphism(const QuotientModule& q, const ColimitHom& colimit, const Bounds& bounds = {});

/// D' on N = M/M_tau with D'(p(x)) = p(D(x)); throws PreconditionError unless D(M_tau) lies in M_tau.
ModuleMap induced_derivation(const QuotientModule& q, const ModuleDerivation& derivation);

/// The extension on the carrier from a derivation D' of N, using J' for the
/// domain K = I_min ∩ J'. J' must lie in the filter with d(J') inside I_min.
ModuleDerivation extend_with(const QuotientModule& q, const AlgebraDerivation& d, const ModuleMap& induced,
                             const Submodule& j);

/// Requires M_tau = 0.
ModuleDerivation extend_derivation(const QuotientModule& q, const AlgebraDerivation& d,
                                   const ModuleDerivation& derivation);

/// Passes through M/M_tau; requires D(M_tau) inside M_tau.
ModuleDerivation extend_derivation_general(const QuotientModule& q, const AlgebraDerivation& d,
                                           const ModuleDerivation& derivation);

/// Dbar o Phi = Phi o D on every element of M.
Verdict check_lift(const QuotientModule& q, const ModuleDerivation& derivation, const ModuleDerivation& extension,
                   const Bounds& bounds = {});

struct LiftCount {
  std::size_t count = 0;
  bool matches_extension = false;
};

/// Counts the derivations of the carrier satisfying the lift condition.
LiftCount verify_unique_lift(const QuotientModule& q, const AlgebraDerivation& d, const ModuleDerivation& derivation,
                             const ModuleDerivation& extension, const Bounds& bounds = {});
/// Same count over a precomputed list of every derivation of the carrier.
LiftCount verify_unique_lift(const QuotientModule& q, const std::vector<ModuleDerivation>& carrier_derivations,
                             const ModuleDerivation& derivation, const ModuleDerivation& extension);

/// The class of Dbar f is the same for every representative (I, f) of a
/// colimit class and every J' in L with d(J') inside I.
Verdict check_extension_choice(const QuotientModule& q, const ColimitHom& colimit, const AlgebraDerivation& d,
                               const ModuleMap& induced, const ModuleDerivation& extension,
                               const Bounds& bounds = {});

struct ShortExactSequence {
  std::string name;
  EMModule left;
  EMModule middle;
  EMModule right;
  ModuleMap f;  // left -> middle
  ModuleMap g;  // middle -> right
};

Verdict check_exact(const Algebra& algebra, const ShortExactSequence& ses);

/// H_tau(f) o Phi = Phi o f, with H_tau(f)(phi) = fbar o phi.
ModuleMap induced_quotient_map(const QuotientModule& source, const QuotientModule& target, const ModuleMap& f);

/// 0 -> H(left) -> H(middle) -> H(right) is exact.
Verdict check_H_left_exact(const Algebra& algebra, const ShortExactSequence& ses, const GabrielFilter& filter,
                           const Bounds& bounds = {});

}  // namespace localix

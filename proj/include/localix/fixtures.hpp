#pragma once

// Built-in algebras, derivations and module corpora used by the workbench
// and the test suites.

#include <string>
#include <vector>

#include "localix/quotients.hpp"

namespace localix {

struct FixtureAlgebra {
  std::string name;
  std::string description;
  Algebra algebra;
  IntMatrix derivation;  // column j = d(e_j)
};

/// F2[x]/(x^2), basis {1, x}, with d/dx.
FixtureAlgebra dual_numbers();
/// Upper-triangular 2x2 matrices over F2, basis {e11, e12, e22}, with ad(e11).
FixtureAlgebra upper_triangular();
/// Z/4 with the zero derivation.
FixtureAlgebra z4();
/// F2 x F2, basis {e1, e2}, with the zero derivation.
FixtureAlgebra f2_times_f2();

std::vector<FixtureAlgebra> builtin_algebras();

/// Rank 3 over F2 with x*x = y, x*y = 0, y*x = x: (xx)x != x(xx).
Algebra broken_associativity();
/// Dual numbers with x*1 altered to 0.
Algebra broken_unit();
/// d(1) = 1 on the dual numbers.
IntMatrix broken_leibniz_matrix();

/// Regular module, A/I for every nonzero left ideal I, S+S and A+S where
/// S is the smallest nonzero cyclic quotient.
std::vector<NamedModule> standard_corpus(const Algebra& algebra, const Bounds& bounds = {});

/// 0 -> I -> A -> A/I -> 0 for every proper nonzero left ideal I, and the
/// split sequences S -> S+S -> S and A -> A+S -> S.
std::vector<ShortExactSequence> standard_sequences(const Algebra& algebra, const Bounds& bounds = {});

}  // namespace localix

#include "localix/fixtures.hpp"

namespace localix {

FixtureAlgebra dual_numbers() {
  Algebra a(2, {1, 0}, {{{1, 0}, {0, 1}}, {{0, 1}, {0, 0}}});
  return {"dual-numbers", "F2[x]/(x^2) with d/dx", a, IntMatrix({{0, 1}, {0, 0}})};
}

FixtureAlgebra upper_triangular() {
  // e11 e11 = e11, e11 e12 = e12, e12 e22 = e12, e22 e22 = e22
  const Element z{0, 0, 0}, e11{1, 0, 0}, e12{0, 1, 0}, e22{0, 0, 1};
  Algebra a(2, {1, 0, 1}, {{e11, e12, z}, {z, z, e12}, {z, z, e22}});
  return {"upper-triangular", "upper-triangular 2x2 over F2 with ad(e11)", a,
          IntMatrix({{0, 0, 0}, {0, 1, 0}, {0, 0, 0}})};
}

FixtureAlgebra z4() {
  Algebra a(4, {1}, {{{1}}});
  return {"z4", "Z/4 with the zero derivation", a, IntMatrix(1, 1)};
}

FixtureAlgebra f2_times_f2() {
  Algebra a(2, {1, 1}, {{{1, 0}, {0, 0}}, {{0, 0}, {0, 1}}});
  return {"f2xf2", "F2 x F2 with the zero derivation", a, IntMatrix(2, 2)};
}

std::vector<FixtureAlgebra> builtin_algebras() { return {dual_numbers(), upper_triangular(), z4(), f2_times_f2()}; }

Algebra broken_associativity() {
  const Element one{1, 0, 0}, x{0, 1, 0}, y{0, 0, 1}, z{0, 0, 0};
  return Algebra(2, one, {{one, x, y}, {x, y, z}, {y, x, z}});
}

Algebra broken_unit() { return Algebra(2, {1, 0}, {{{1, 0}, {0, 1}}, {{0, 0}, {0, 0}}}); }

IntMatrix broken_leibniz_matrix() { return IntMatrix({{1, 0}, {0, 0}}); }

namespace {

const EMModule* smallest_quotient(const std::vector<EMModule>& quotients) {
  const EMModule* smallest = nullptr;
  for (const auto& q : quotients)
    if (!q.carrier().is_zero() && (!smallest || q.carrier().cardinality() < smallest->carrier().cardinality()))
      smallest = &q;
  return smallest;
}

ShortExactSequence split_sequence(std::string name, const EMModule& a, const EMModule& b) {
  const EMDirectSum s = em_direct_sum({a, b});
  return {std::move(name), a, s.module, b, s.sum.injections[0], s.sum.projections[1]};
}

}  // namespace

std::vector<NamedModule> standard_corpus(const Algebra& algebra, const Bounds& bounds) {
  const EMModule regular = regular_module(algebra);
  std::vector<NamedModule> out{{"A", regular}};
  std::vector<EMModule> quotients;
  for (const auto& ideal : enumerate_em_submodules(regular, bounds)) {
    if (ideal.is_zero()) continue;
    quotients.push_back(quotient_module(regular, ideal).module);
    out.push_back({"A/" + to_string(ideal), quotients.back()});
  }
  if (const EMModule* s = smallest_quotient(quotients)) {
    out.push_back({"S+S", em_direct_sum({*s, *s}).module});
    out.push_back({"A+S", em_direct_sum({regular, *s}).module});
  }
  return out;
}

std::vector<ShortExactSequence> standard_sequences(const Algebra& algebra, const Bounds& bounds) {
  const EMModule regular = regular_module(algebra);
  std::vector<ShortExactSequence> out;
  std::vector<EMModule> quotients;
  for (const auto& ideal : enumerate_em_submodules(regular, bounds)) {
    if (ideal.is_zero() || ideal.is_whole()) continue;
    const EMRestriction sub = restrict_module(regular, ideal);
    const EMQuotient q = quotient_module(regular, ideal);
    quotients.push_back(q.module);
    out.push_back({"I -> A -> A/I, I = " + to_string(ideal), sub.module, regular, q.module,
                   sub.embedding.inclusion, q.map.projection});
  }
  if (const EMModule* s = smallest_quotient(quotients)) {
    out.push_back(split_sequence("S -> S+S -> S", *s, *s));
    out.push_back(split_sequence("A -> A+S -> S", regular, *s));
  }
  return out;
}

}  // namespace localix

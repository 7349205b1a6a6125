#include "localix/monad.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "localix/errors.hpp"

namespace localix {

namespace {

Element axpy(const FinModule& m, Int k, const Element& x, const Element& y) { return m.add(m.scale(k, x), y); }

/// Builds the map dom -> T1 + ... + Tn whose components are given by `fn`.
/// Used to turn a family of linear constraints into one ModuleMap.
struct StackedMap {
  DirectSum sum;
  ModuleMap map;
};

StackedMap stacked_map(const FinModule& domain, const std::vector<FinModule>& targets,
                       const std::function<std::vector<Element>(const Element&)>& fn) {
  DirectSum ds = direct_sum(domain.modulus(), targets);
  ModuleMap map = ModuleMap::tabulate(domain, ds.module, [&](const Element& y) {
    const auto parts = fn(y);
    Element out = ds.module.zero();
    for (std::size_t i = 0; i < parts.size(); ++i) out = ds.module.add(out, ds.injections[i](parts[i]));
    return out;
  });
  return {std::move(ds), std::move(map)};
}

void require_modulus(Int a, Int b) {
  if (a != b) throw PreconditionError("modulus mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

void require_actions(const Algebra& algebra, const EMModule& m) {
  require_modulus(algebra.modulus(), m.carrier().modulus());
  if (m.actions().size() != algebra.rank())
    throw PreconditionError("module has " + std::to_string(m.actions().size()) + " actions, algebra rank is " +
                            std::to_string(algebra.rank()));
}

}  // namespace

// ---- LawReport -------------------------------------------------------------

LawReport LawReport::pass(std::string law, std::string anchor) {
  LawReport r;
  r.law = std::move(law);
  r.anchor = std::move(anchor);
  return r;
}

LawReport LawReport::fail(std::string law, std::string anchor, std::vector<std::size_t> indices, Element lhs,
                          Element rhs) {
  LawReport r;
  r.passed = false;
  r.law = std::move(law);
  r.anchor = std::move(anchor);
  r.indices = std::move(indices);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  return r;
}

std::string LawReport::describe() const {
  std::ostringstream os;
  os << law << (passed ? " holds" : " fails");
  if (!passed) {
    os << " at (";
    for (std::size_t i = 0; i < indices.size(); ++i) os << (i ? "," : "") << indices[i];
    os << "): lhs=" << to_string(lhs) << " rhs=" << to_string(rhs);
  }
  return os.str();
}

// ---- Algebra ---------------------------------------------------------------

Algebra::Algebra(Int modulus, Element unit, std::vector<std::vector<Element>> products)
    : modulus_(modulus), unit_(std::move(unit)), products_(std::move(products)),
      carrier_(FinModule::free(modulus, unit_.size())) {
  const std::size_t r = unit_.size();
  if (r == 0) throw ValidationError("Eq. 2.1", "algebra rank must be at least 1");
  unit_ = carrier_.reduce(unit_);
  if (products_.size() != r) throw ValidationError("Eq. 2.1", "structure constants must have rank rows");
  for (auto& row : products_) {
    if (row.size() != r) throw ValidationError("Eq. 2.1", "structure constants must have rank columns");
    for (auto& c : row) {
      if (c.size() != r) throw ValidationError("Eq. 2.1", "each product must be a vector of length rank");
      c = carrier_.reduce(c);
    }
  }
}

Element Algebra::multiply(const Element& a, const Element& b) const {
  Element out = carrier_.zero();
  for (std::size_t i = 0; i < rank(); ++i) {
    if (mod(a[i], modulus_) == 0) continue;
    for (std::size_t j = 0; j < rank(); ++j) {
      const Int k = mod(a[i] * b[j], modulus_);
      if (k != 0) out = axpy(carrier_, k, products_[i][j], out);
    }
  }
  return out;
}

ModuleMap Algebra::left_multiplication(const Element& a) const {
  return ModuleMap::tabulate(carrier_, carrier_, [&](const Element& x) { return multiply(a, x); });
}

ModuleMap Algebra::right_multiplication(const Element& a) const {
  return ModuleMap::tabulate(carrier_, carrier_, [&](const Element& x) { return multiply(x, a); });
}

AlgebraDerivation::AlgebraDerivation(const Algebra& algebra, const IntMatrix& matrix)
    : map(algebra.carrier(), algebra.carrier(), matrix) {
  if (matrix.rows() != algebra.rank() || matrix.cols() != algebra.rank())
    throw ValidationError("Eq. 3.1", "derivation matrix must be rank x rank");
}

AlgebraDerivation AlgebraDerivation::zero(const Algebra& algebra) {
  return AlgebraDerivation(ModuleMap::zero(algebra.carrier(), algebra.carrier()));
}

// ---- EMModule --------------------------------------------------------------

EMModule::EMModule(FinModule carrier, std::vector<ModuleMap> actions)
    : carrier_(std::move(carrier)), actions_(std::move(actions)) {
  for (const auto& a : actions_)
    if (!(a.domain() == carrier_) || !(a.codomain() == carrier_))
      throw ValidationError("Eq. 2.2", "action matrices must be endomorphisms of the carrier");
}

ModuleMap EMModule::action_of(const Element& a) const {
  return ModuleMap::tabulate(carrier_, carrier_, [&](const Element& x) { return act(a, x); });
}

Element EMModule::act(const Element& a, const Element& x) const {
  Element out = carrier_.zero();
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    const Int k = mod(a[i], carrier_.modulus());
    if (k != 0) out = axpy(carrier_, k, actions_[i](x), out);
  }
  return out;
}

// ---- laws ------------------------------------------------------------------

LawReport check_monad_laws(const Algebra& algebra) {
  const std::size_t r = algebra.rank();
  const Element& u = algebra.unit();
  for (std::size_t i = 0; i < r; ++i) {
    const Element e = algebra.basis(i);
    const Element left = algebra.multiply(u, e);
    if (left != e) return LawReport::fail("left unit", "Eq. 2.1", {i}, left, e);
    const Element right = algebra.multiply(e, u);
    if (right != e) return LawReport::fail("right unit", "Eq. 2.1", {i}, right, e);
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t l = 0; l < r; ++l) {
        const Element lhs = algebra.multiply(algebra.product(i, j), algebra.basis(l));
        const Element rhs = algebra.multiply(algebra.basis(i), algebra.product(j, l));
        if (lhs != rhs) return LawReport::fail("associativity", "Eq. 2.1", {i, j, l}, lhs, rhs);
      }
  return LawReport::pass("monad laws", "Eq. 2.1");
}

EMModule regular_module(const Algebra& algebra) {
  std::vector<ModuleMap> actions;
  for (std::size_t i = 0; i < algebra.rank(); ++i) actions.push_back(algebra.left_multiplication(algebra.basis(i)));
  return EMModule(algebra.carrier(), std::move(actions));
}

FreeModule free_module(const Algebra& algebra, const FinModule& base) {
  require_modulus(algebra.modulus(), base.modulus());
  const std::size_t r = algebra.rank();
  DirectSum ds = direct_sum(base.modulus(), std::vector<FinModule>(r, base));
  const FinModule& um = ds.module;
  // e_i acts on sum_j e_j (x) x_j as sum_{j,k} c[i][j]_k e_k (x) x_j.
  std::vector<ModuleMap> actions;
  for (std::size_t i = 0; i < r; ++i) {
    actions.push_back(ModuleMap::tabulate(um, um, [&](const Element& x) {
      Element out = um.zero();
      for (std::size_t j = 0; j < r; ++j) {
        const Element xj = ds.projections[j](x);
        for (std::size_t k = 0; k < r; ++k) {
          const Int c = algebra.product(i, j)[k];
          if (c != 0) out = axpy(um, c, ds.injections[k](xj), out);
        }
      }
      return out;
    }));
  }
  ModuleMap unit = ModuleMap::tabulate(base, um, [&](const Element& x) {
    Element out = um.zero();
    for (std::size_t k = 0; k < r; ++k)
      if (algebra.unit()[k] != 0) out = axpy(um, algebra.unit()[k], ds.injections[k](x), out);
    return out;
  });
  EMModule module(um, std::move(actions));
  return {std::move(module), std::move(unit), std::move(ds)};
}

LawReport check_em_module(const Algebra& algebra, const EMModule& m) {
  require_actions(algebra, m);
  const FinModule& c = m.carrier();
  for (std::size_t g = 0; g < c.rank(); ++g) {
    const Element x = c.generator(g);
    const Element ux = m.act(algebra.unit(), x);
    if (ux != x) return LawReport::fail("unit action", "Eq. 2.2", {g}, ux, x);
  }
  for (std::size_t i = 0; i < algebra.rank(); ++i)
    for (std::size_t j = 0; j < algebra.rank(); ++j)
      for (std::size_t g = 0; g < c.rank(); ++g) {
        const Element x = c.generator(g);
        const Element lhs = m.act(algebra.product(i, j), x);
        const Element rhs = m.action(i)(m.action(j)(x));
        if (lhs != rhs) return LawReport::fail("action associativity", "Eq. 2.2", {i, j, g}, lhs, rhs);
      }
  return LawReport::pass("module laws", "Eq. 2.2");
}

LawReport check_em_morphism(const Algebra& algebra, const EMModule& source, const EMModule& target,
                            const ModuleMap& g) {
  require_actions(algebra, source);
  require_actions(algebra, target);
  if (!(g.domain() == source.carrier()) || !(g.codomain() == target.carrier()))
    throw PreconditionError("morphism does not connect the given carriers");
  for (std::size_t i = 0; i < algebra.rank(); ++i)
    for (std::size_t k = 0; k < source.carrier().rank(); ++k) {
      const Element x = source.carrier().generator(k);
      const Element lhs = target.action(i)(g(x));
      const Element rhs = g(source.action(i)(x));
      if (lhs != rhs) return LawReport::fail("A-linearity", "§2.1", {i, k}, lhs, rhs);
    }
  return LawReport::pass("A-linearity", "§2.1");
}

// ---- Hom in the module category ------------------------------------------------

namespace {

Submodule linear_maps(const Algebra& algebra, const EMModule& source, const EMModule& target, const HomGroup& hom) {
  std::vector<FinModule> targets;
  for (std::size_t i = 0; i < algebra.rank(); ++i)
    for (std::size_t k = 0; k < source.carrier().rank(); ++k) targets.push_back(target.carrier());
  const auto constraint = stacked_map(hom.group(), targets, [&](const Element& y) {
    const ModuleMap f = hom.map_of(y);
    std::vector<Element> parts;
    for (std::size_t i = 0; i < algebra.rank(); ++i)
      for (std::size_t k = 0; k < source.carrier().rank(); ++k) {
        const Element x = source.carrier().generator(k);
        parts.push_back(target.carrier().subtract(f(source.action(i)(x)), target.action(i)(f(x))));
      }
    return parts;
  });
  return kernel(constraint.map);
}

}  // namespace

EMHomSpace::EMHomSpace(const Algebra& algebra, const EMModule& source, const EMModule& target)
    : hom_(source.carrier(), target.carrier()),
      embedding_(embed(linear_maps(algebra, source, target, hom_))) {
  require_actions(algebra, source);
  require_actions(algebra, target);
}

std::vector<ModuleMap> EMHomSpace::enumerate(const Bounds& bounds) const {
  std::vector<ModuleMap> out;
  for (const auto& z : module().elements(bounds.elements)) out.push_back(map_of(z));
  return out;
}

ModuleMap free_map(const Algebra& algebra, const ModuleMap& f) {
  const FreeModule source = free_module(algebra, f.domain());
  const FreeModule target = free_module(algebra, f.codomain());
  ModuleMap out = ModuleMap::zero(source.module.carrier(), target.module.carrier());
  for (std::size_t j = 0; j < algebra.rank(); ++j)
    out = out + target.sum.injections[j] * f * source.sum.projections[j];
  return out;
}

Verdict check_free_exact(const Algebra& algebra, const ModuleMap& f, const ModuleMap& g) {
  const std::string check = "U preserves exactness";
  if (!(f.codomain() == g.domain())) throw PreconditionError("maps are not composable");
  const ModuleMap uf = free_map(algebra, f), ug = free_map(algebra, g);
  if (!kernel(uf).is_zero()) return Verdict::fail(check, "Prop 3.1", "Ker(Uf) = " + to_string(kernel(uf)));
  if (!(image(uf) == kernel(ug)))
    return Verdict::fail(check, "Prop 3.1", "Im(Uf) = " + to_string(image(uf)) + ", Ker(Ug) = " + to_string(kernel(ug)));
  if (!image(ug).is_whole()) return Verdict::fail(check, "Prop 3.1", "Im(Ug) = " + to_string(image(ug)));
  return Verdict::pass(check, "Prop 3.1");
}

namespace {

// phi |-> f_N o U(phi): sum_j e_j (x) x_j |-> sum_j e_j . phi(x_j)
ModuleMap transpose(const Algebra& algebra, const FreeModule& free, const EMModule& target, const ModuleMap& phi) {
  ModuleMap out = ModuleMap::zero(free.module.carrier(), target.carrier());
  for (std::size_t j = 0; j < algebra.rank(); ++j) out = out + target.action(j) * phi * free.sum.projections[j];
  return out;
}

}  // namespace

AdjunctionTable adjunction_bijection(const Algebra& algebra, const FinModule& base, const EMModule& target,
                                     const Bounds& bounds) {
  require_actions(algebra, target);
  const FreeModule free = free_module(algebra, base);
  const EMHomSpace em(algebra, free.module, target);
  const HomGroup plain(base, target.carrier());

  AdjunctionTable table;
  const auto em_maps = em.enumerate(bounds);
  const auto plain_elems = plain.group().elements(bounds.elements);
  table.em_side = em_maps.size();
  table.base_side = plain_elems.size();

  auto backward = [&](const ModuleMap& phi) { return transpose(algebra, free, target, phi); };

  std::set<Element> hit;
  for (const auto& h : em_maps) {
    const ModuleMap phi = h * free.unit;
    if (!(backward(phi) == h)) {
      table.failure = "h does not equal f_N o U(h o eta)";
      return table;
    }
    hit.insert(plain.element_of(phi));
    table.pairs.emplace_back(h, phi);
  }
  for (const auto& y : plain_elems) {
    const ModuleMap phi = plain.map_of(y);
    const ModuleMap h = backward(phi);
    if (!check_em_morphism(algebra, free.module, target, h)) {
      table.failure = "f_N o U(phi) is not A-linear";
      return table;
    }
    if (!(h * free.unit == phi)) {
      table.failure = "(f_N o U(phi)) o eta does not equal phi";
      return table;
    }
  }
  if (hit.size() != plain_elems.size() || table.em_side != table.base_side) {
    table.failure = "cardinalities differ";
    return table;
  }
  table.round_trip = true;
  return table;
}

Verdict check_adjunction(const Algebra& algebra, const FinModule& base, const EMModule& target,
                         const Bounds& bounds) {
  require_actions(algebra, target);
  const FreeModule free = free_module(algebra, base);
  const EMHomSpace em(algebra, free.module, target);
  const HomGroup plain(base, target.carrier());
  const std::string check = "adjunction bijection";
  const std::string sides =
      std::to_string(em.module().cardinality()) + " vs " + std::to_string(plain.group().cardinality());
  if (em.module().cardinality() <= bounds.elements && plain.group().cardinality() <= bounds.elements) {
    const AdjunctionTable t = adjunction_bijection(algebra, base, target, bounds);
    if (!t.round_trip) return Verdict::fail(check, "Eq. 2.4", t.failure + " (" + sides + ")");
    return Verdict::pass(check, "Eq. 2.4");
  }
  if (em.module().cardinality() != plain.group().cardinality())
    return Verdict::fail(check, "Eq. 2.4", "cardinalities differ (" + sides + ")");
  for (std::size_t i = 0; i < em.module().rank(); ++i) {
    const ModuleMap h = em.map_of(em.module().generator(i));
    if (!(transpose(algebra, free, target, h * free.unit) == h))
      return Verdict::fail(check, "Eq. 2.4", "generator " + std::to_string(i) + " of EM_U(UM0, N) does not round trip");
  }
  for (std::size_t i = 0; i < plain.group().rank(); ++i) {
    const ModuleMap phi = plain.map_of(plain.group().generator(i));
    const ModuleMap h = transpose(algebra, free, target, phi);
    if (!check_em_morphism(algebra, free.module, target, h))
      return Verdict::fail(check, "Eq. 2.4", "transpose of generator " + std::to_string(i) + " is not A-linear");
    if (!(h * free.unit == phi))
      return Verdict::fail(check, "Eq. 2.4", "generator " + std::to_string(i) + " of C(M0, N) does not round trip");
  }
  return Verdict::pass(check, "Eq. 2.4");
}

// ---- derivations -------------------------------------------------------------

LawReport check_leibniz(const Algebra& algebra, const AlgebraDerivation& d) {
  const FinModule& a = algebra.carrier();
  for (std::size_t i = 0; i < algebra.rank(); ++i)
    for (std::size_t j = 0; j < algebra.rank(); ++j) {
      const Element ei = algebra.basis(i), ej = algebra.basis(j);
      const Element lhs = d(algebra.product(i, j));
      const Element rhs = a.add(algebra.multiply(ei, d(ej)), algebra.multiply(d(ei), ej));
      if (lhs != rhs) return LawReport::fail("Leibniz rule", "Eq. 3.1", {i, j}, lhs, rhs);
    }
  return LawReport::pass("Leibniz rule", "Eq. 3.1");
}

LawReport check_derivation_square(const Algebra& algebra, const AlgebraDerivation& d, const FinModule& probe) {
  require_modulus(algebra.modulus(), probe.modulus());
  const std::size_t r = algebra.rank();
  const DirectSum um = direct_sum(probe.modulus(), std::vector<FinModule>(r, probe));
  const DirectSum uum = direct_sum(probe.modulus(), std::vector<FinModule>(r * r, probe));
  const FinModule& one = um.module;
  const FinModule& two = uum.module;
  const IntMatrix& dm = d.map.matrix();

  // theta: e_i (x) e_j (x) x |-> (e_i e_j) (x) x
  const ModuleMap theta = ModuleMap::tabulate(two, one, [&](const Element& x) {
    Element out = one.zero();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        const Element part = uum.projections[i * r + j](x);
        for (std::size_t k = 0; k < r; ++k)
          if (algebra.product(i, j)[k] != 0) out = axpy(one, algebra.product(i, j)[k], um.injections[k](part), out);
      }
    return out;
  });
  // delta_M = d (x) id on UM
  const ModuleMap delta = ModuleMap::tabulate(one, one, [&](const Element& x) {
    Element out = one.zero();
    for (std::size_t j = 0; j < r; ++j) {
      const Element part = um.projections[j](x);
      for (std::size_t k = 0; k < r; ++k)
        if (dm(k, j) != 0) out = axpy(one, dm(k, j), um.injections[k](part), out);
    }
    return out;
  });
  // (1*delta + delta*1) on UUM: d on the inner and on the outer A-coordinate
  const ModuleMap both = ModuleMap::tabulate(two, two, [&](const Element& x) {
    Element out = two.zero();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        const Element part = uum.projections[i * r + j](x);
        for (std::size_t k = 0; k < r; ++k) {
          if (dm(k, j) != 0) out = axpy(two, dm(k, j), uum.injections[i * r + k](part), out);
          if (dm(k, i) != 0) out = axpy(two, dm(k, i), uum.injections[k * r + j](part), out);
        }
      }
    return out;
  });

  const ModuleMap lhs = delta * theta;
  const ModuleMap rhs = theta * both;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t g = 0; g < probe.rank(); ++g) {
        const Element x = uum.injections[i * r + j](probe.generator(g));
        const Element l = lhs(x), rr = rhs(x);
        if (l != rr) return LawReport::fail("derivation square", "Eq. 3.1", {i, j}, l, rr);
      }
  return LawReport::pass("derivation square", "Eq. 3.1");
}

LawReport check_derivation(const Algebra& algebra, const AlgebraDerivation& d) {
  const LawReport leibniz = check_leibniz(algebra, d);
  const LawReport square = check_derivation_square(algebra, d, FinModule::free(algebra.modulus(), 1));
  if (leibniz.passed != square.passed)
    throw InternalDefect("Leibniz check and derivation square disagree: " + leibniz.describe() + " / " +
                         square.describe());
  if (!leibniz.passed && (leibniz.indices != square.indices || leibniz.lhs != square.lhs ||
                          leibniz.rhs != square.rhs))
    throw InternalDefect("Leibniz check and derivation square report different witnesses");
  return leibniz.passed ? square : leibniz;
}

LawReport check_module_derivation(const Algebra& algebra, const EMModule& m, const AlgebraDerivation& d,
                                  const ModuleMap& candidate) {
  require_actions(algebra, m);
  const FinModule& c = m.carrier();
  if (!(candidate.domain() == c) || !(candidate.codomain() == c))
    throw PreconditionError("derivation candidate is not an endomorphism of the carrier");
  for (std::size_t i = 0; i < algebra.rank(); ++i)
    for (std::size_t g = 0; g < c.rank(); ++g) {
      const Element x = c.generator(g);
      const Element lhs = candidate(m.action(i)(x));
      const Element rhs = c.add(m.action(i)(candidate(x)), m.act(d(algebra.basis(i)), x));
      if (lhs != rhs) return LawReport::fail("module derivation rule", "Eq. 3.5", {i, g}, lhs, rhs);
    }
  return LawReport::pass("module derivation rule", "Eq. 3.5");
}

std::vector<Int> flatten(const ModuleMap& f) {
  std::vector<Int> key;
  const IntMatrix& h = f.matrix();
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = 0; c < h.cols(); ++c) key.push_back(h(r, c));
  return key;
}

namespace {

/// Solutions of L(y) = b in Hom(M, M), sorted by matrix entries.
std::vector<ModuleMap> solve_endomorphisms(const HomGroup& hom, const StackedMap& system, const Element& rhs,
                                           const Bounds& bounds) {
  const auto particular = solve(system.map, rhs);
  if (!particular) return {};
  const Submodule homogeneous = kernel(system.map);
  if (homogeneous.cardinality() > bounds.elements)
    throw SizeLimitError("bound-elements", bounds.elements, homogeneous.cardinality());
  std::vector<ModuleMap> out;
  for (const auto& k : homogeneous.elements(bounds.elements))
    out.push_back(hom.map_of(hom.group().add(*particular, k)));
  std::sort(out.begin(), out.end(),
            [](const ModuleMap& a, const ModuleMap& b) { return flatten(a) < flatten(b); });
  return out;
}

}  // namespace

std::vector<ModuleDerivation> enumerate_module_derivations(const Algebra& algebra, const EMModule& m,
                                                           const AlgebraDerivation& d, const Bounds& bounds) {
  require_actions(algebra, m);
  const FinModule& c = m.carrier();
  const HomGroup hom(c, c);
  // D(e_i x) - e_i D(x) = d(e_i) x for every basis e_i and carrier generator x.
  std::vector<FinModule> targets(algebra.rank() * c.rank(), c);
  const auto system = stacked_map(hom.group(), targets, [&](const Element& y) {
    const ModuleMap f = hom.map_of(y);
    std::vector<Element> parts;
    for (std::size_t i = 0; i < algebra.rank(); ++i)
      for (std::size_t g = 0; g < c.rank(); ++g) {
        const Element x = c.generator(g);
        parts.push_back(c.subtract(f(m.action(i)(x)), m.action(i)(f(x))));
      }
    return parts;
  });
  Element rhs = system.sum.module.zero();
  std::size_t slot = 0;
  for (std::size_t i = 0; i < algebra.rank(); ++i)
    for (std::size_t g = 0; g < c.rank(); ++g, ++slot)
      rhs = system.sum.module.add(rhs, system.sum.injections[slot](m.act(d(algebra.basis(i)), c.generator(g))));

  std::vector<ModuleDerivation> out;
  for (auto& f : solve_endomorphisms(hom, system, rhs, bounds)) out.push_back({std::move(f)});

  if (hom.group().cardinality() <= kBruteForceDerivationLimit) {
    std::size_t brute = 0;
    for (const auto& y : hom.group().elements(kBruteForceDerivationLimit)) {
      const ModuleMap f = hom.map_of(y);
      if (!check_module_derivation(algebra, m, d, f)) continue;
      ++brute;
      if (!std::binary_search(out.begin(), out.end(), ModuleDerivation{f},
                              [](const auto& a, const auto& b) { return flatten(a.map) < flatten(b.map); }))
        throw InternalDefect("module derivation missed by the linear solver");
    }
    if (brute != out.size()) throw InternalDefect("linear solver returned a non-derivation");
  }
  return out;
}

std::vector<AlgebraDerivation> enumerate_algebra_derivations(const Algebra& algebra, const Bounds& bounds) {
  const FinModule& a = algebra.carrier();
  const HomGroup hom(a, a);
  const std::size_t r = algebra.rank();
  std::vector<FinModule> targets(r * r, a);
  const auto system = stacked_map(hom.group(), targets, [&](const Element& y) {
    const ModuleMap d = hom.map_of(y);
    std::vector<Element> parts;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        const Element ei = algebra.basis(i), ej = algebra.basis(j);
        Element v = a.subtract(d(algebra.product(i, j)), algebra.multiply(ei, d(ej)));
        parts.push_back(a.subtract(v, algebra.multiply(d(ei), ej)));
      }
    return parts;
  });
  std::vector<AlgebraDerivation> out;
  for (auto& f : solve_endomorphisms(hom, system, system.sum.module.zero(), bounds))
    out.emplace_back(std::move(f));
  return out;
}

ModuleMap check_generator_instance(const Algebra& algebra, const EMModule& m, const Submodule& n) {
  require_actions(algebra, m);
  if (!(n.ambient() == m.carrier())) throw PreconditionError("submodule does not live in the module");
  if (n.is_whole()) throw PreconditionError("not a proper submodule");
  const FinModule& c = m.carrier();
  for (std::size_t g = 0; g < c.rank(); ++g) {
    const Element x = c.generator(g);
    if (n.contains(x))
      continue;
    // a |-> a.x, the morphism A -> M corresponding to x under the adjunction
    return ModuleMap::tabulate(algebra.carrier(), c, [&](const Element& a) { return m.act(a, x); });
  }
  throw InternalDefect("proper submodule contains every generator");
}

// ---- submodules, quotients, sums ------------------------------------------------

bool is_em_submodule(const EMModule& m, const Submodule& s) {
  if (!(s.ambient() == m.carrier())) return false;
  for (const auto& g : s.generators())
    for (const auto& a : m.actions())
      if (!s.contains(a(g))) return false;
  return true;
}

Submodule em_span(const EMModule& m, const std::vector<Element>& generators) {
  Submodule s = Submodule::span(m.carrier(), generators);
  for (;;) {
    std::vector<Element> gens = s.generators();
    const std::size_t base = gens.size();
    for (std::size_t k = 0; k < base; ++k)
      for (const auto& a : m.actions()) gens.push_back(a(gens[k]));
    Submodule next = Submodule::span(m.carrier(), gens);
    if (next == s) return s;
    s = std::move(next);
  }
}

std::vector<Submodule> enumerate_em_submodules(const EMModule& m, const Bounds& bounds) {
  const FinModule& c = m.carrier();
  if (c.cardinality() > bounds.subgroups) throw SizeLimitError("bound-ideals", bounds.subgroups, c.cardinality());
  const auto elements = c.elements(bounds.elements);
  std::set<Submodule> seen{Submodule(c)};
  std::vector<Submodule> frontier{Submodule(c)};
  while (!frontier.empty()) {
    std::vector<Submodule> next;
    for (const auto& s : frontier)
      for (const auto& x : elements) {
        if (s.contains(x)) continue;
        auto gens = s.generators();
        gens.push_back(x);
        Submodule t = em_span(m, gens);
        if (seen.insert(t).second) next.push_back(std::move(t));
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

EMRestriction restrict_module(const EMModule& m, const Submodule& s) {
  if (!is_em_submodule(m, s)) throw PreconditionError("not closed under the algebra action");
  Embedding e = embed(s);
  std::vector<ModuleMap> actions;
  for (const auto& a : m.actions())
    actions.push_back(ModuleMap::tabulate(e.module, e.module,
                                          [&](const Element& z) { return e.coordinates(a(e.inclusion(z))); }));
  EMModule module(e.module, std::move(actions));
  return {std::move(module), std::move(e)};
}

EMQuotient quotient_module(const EMModule& m, const Submodule& s) {
  if (!is_em_submodule(m, s)) throw PreconditionError("not closed under the algebra action");
  QuotientMap q = quotient(m.carrier(), s);
  std::vector<ModuleMap> actions;
  for (const auto& a : m.actions())
    actions.push_back(
        ModuleMap::tabulate(q.module, q.module, [&](const Element& y) { return q.projection(a(q.lift(y))); }));
  EMModule module(q.module, std::move(actions));
  return {std::move(module), std::move(q)};
}

EMDirectSum em_direct_sum(const std::vector<EMModule>& summands) {
  if (summands.empty()) throw PreconditionError("direct sum needs at least one summand");
  const Int modulus = summands.front().carrier().modulus();
  const std::size_t r = summands.front().actions().size();
  std::vector<FinModule> carriers;
  for (const auto& s : summands) {
    require_modulus(modulus, s.carrier().modulus());
    if (s.actions().size() != r) throw PreconditionError("summands act through different algebras");
    carriers.push_back(s.carrier());
  }
  DirectSum ds = direct_sum(modulus, carriers);
  std::vector<ModuleMap> actions;
  for (std::size_t i = 0; i < r; ++i) {
    ModuleMap act = ModuleMap::zero(ds.module, ds.module);
    for (std::size_t k = 0; k < summands.size(); ++k)
      act = act + ds.injections[k] * summands[k].action(i) * ds.projections[k];
    actions.push_back(std::move(act));
  }
  EMModule module(ds.module, std::move(actions));
  return {std::move(module), std::move(ds)};
}

}  // namespace localix

#include "localix/torsion.hpp"

#include <algorithm>
#include <set>

#include "localix/errors.hpp"

namespace localix {

std::vector<Submodule> enumerate_left_ideals(const Algebra& algebra, const Bounds& bounds) {
  return enumerate_em_submodules(regular_module(algebra), bounds);
}

Submodule colon_ideal(const Algebra& algebra, const Submodule& ideal, const Element& y) {
  return preimage(algebra.right_multiplication(y), ideal);
}

namespace {

bool member(const std::vector<Submodule>& sorted, const Submodule& s) {
  return std::binary_search(sorted.begin(), sorted.end(), s);
}

}  // namespace

FilterVerdict is_gabriel_filter(const Algebra& algebra, const std::vector<Submodule>& collection,
                                const Bounds& bounds) {
  std::vector<Submodule> l = collection;
  std::sort(l.begin(), l.end());
  l.erase(std::unique(l.begin(), l.end()), l.end());
  const EMModule regular = regular_module(algebra);
  for (const auto& i : l)
    if (!(i.ambient() == algebra.carrier()) || !is_em_submodule(regular, i))
      throw PreconditionError("collection member " + to_string(i) + " is not a left ideal of A");

  const auto ideals = enumerate_left_ideals(algebra, bounds);
  const auto elements = algebra.carrier().elements(bounds.elements);

  if (!member(l, Submodule::whole(algebra.carrier()))) return {false, 1, "A is not in the collection"};
  for (const auto& i : l)
    for (const auto& j : ideals)
      if (i.is_subset_of(j) && !member(l, j))
        return {false, 2, "I = " + to_string(i) + " is in the collection but J = " + to_string(j) + " is not"};
  for (const auto& i : l)
    for (const auto& y : elements) {
      const Submodule pre = colon_ideal(algebra, i, y);
      if (!member(l, pre))
        return {false, 3,
                "I = " + to_string(i) + ", f = right multiplication by " + to_string(y) + ", f^-1(I) = " +
                    to_string(pre) + " is not in the collection"};
    }
  for (const auto& j : l)
    for (const auto& i : ideals) {
      if (!i.is_subset_of(j) || member(l, i)) continue;
      bool all = true;
      for (const auto& y : j.elements(bounds.elements))
        if (!member(l, colon_ideal(algebra, i, y))) {
          all = false;
          break;
        }
      if (all)
        return {false, 4,
                "I = " + to_string(i) + ", J = " + to_string(j) +
                    ": every f: A -> J has f^-1(I) in the collection, yet I is not"};
    }
  return {};
}

GabrielFilter::GabrielFilter(const Algebra& algebra, std::vector<Submodule> ideals, const Bounds& bounds)
    : ideals_(std::move(ideals)) {
  std::sort(ideals_.begin(), ideals_.end());
  ideals_.erase(std::unique(ideals_.begin(), ideals_.end()), ideals_.end());
  const FilterVerdict v = is_gabriel_filter(algebra, ideals_, bounds);
  if (!v) throw ValidationError("Prop 2.2", "filter axiom (" + std::to_string(v.axiom) + ") fails: " + v.witness);
  for (const auto& i : ideals_)
    if (!ideals_.front().is_subset_of(i)) throw InternalDefect("filter has no minimum ideal");
}

bool GabrielFilter::contains(const Submodule& ideal) const { return member(ideals_, ideal); }

std::string to_string(const GabrielFilter& filter) {
  std::string out = "{";
  for (std::size_t i = 0; i < filter.size(); ++i) out += (i ? ", " : "") + to_string(filter.ideals()[i]);
  return out + "}";
}

std::vector<std::vector<Submodule>> upward_closed_collections(const std::vector<Submodule>& ideals) {
  // Decide membership from the largest ideal down: an ideal may join only
  // when every strictly larger ideal containing it has joined.
  std::vector<Submodule> sorted = ideals;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<std::vector<std::size_t>> supersets(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && sorted[a].is_subset_of(sorted[b])) supersets[a].push_back(b);

  std::vector<std::vector<Submodule>> out;
  std::vector<bool> chosen(n, false);
  std::function<void(std::size_t)> recurse = [&](std::size_t remaining) {
    if (remaining == 0) {
      std::vector<Submodule> c;
      for (std::size_t k = 0; k < n; ++k)
        if (chosen[k]) c.push_back(sorted[k]);
      out.push_back(std::move(c));
      return;
    }
    const std::size_t k = remaining - 1;
    const bool whole = k + 1 == n;
    const bool allowed = std::all_of(supersets[k].begin(), supersets[k].end(), [&](std::size_t s) { return chosen[s]; });
    if (allowed) {
      chosen[k] = true;
      recurse(k);
      chosen[k] = false;
    }
    if (!whole) recurse(k);
  };
  if (n > 0) recurse(n);
  return out;
}

std::vector<GabrielFilter> enumerate_gabriel_filters(const Algebra& algebra, const Bounds& bounds) {
  const auto ideals = enumerate_left_ideals(algebra, bounds);
  if (ideals.size() > bounds.lattice) throw SizeLimitError("bound-lattice", bounds.lattice, ideals.size());
  std::vector<std::vector<Submodule>> accepted;
  for (auto& c : upward_closed_collections(ideals))
    if (is_gabriel_filter(algebra, c, bounds)) accepted.push_back(std::move(c));
  std::sort(accepted.begin(), accepted.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  std::vector<GabrielFilter> out;
  for (auto& c : accepted) out.emplace_back(algebra, std::move(c), bounds);
  return out;
}

Submodule annihilator(const Algebra& algebra, const EMModule& m, const Element& x) {
  return kernel(ModuleMap::tabulate(algebra.carrier(), m.carrier(), [&](const Element& a) { return m.act(a, x); }));
}

TorsionVerdict is_torsion(const Algebra& algebra, const EMModule& m, const GabrielFilter& filter,
                          const Bounds& bounds) {
  TorsionVerdict by_annihilator;
  for (const auto& x : m.carrier().elements(bounds.elements))
    if (!filter.contains(annihilator(algebra, m, x))) {
      by_annihilator = {false, x};
      break;
    }
  bool by_morphisms = true;
  for (const auto& f : EMHomSpace(algebra, regular_module(algebra), m).enumerate(bounds))
    if (!filter.contains(kernel(f))) {
      by_morphisms = false;
      break;
    }
  if (by_morphisms != by_annihilator.torsion)
    throw InternalDefect("torsion test by annihilators and by morphism kernels disagree");
  return by_annihilator;
}

Submodule torsion_radical_fast(const Algebra& algebra, const EMModule& m, const GabrielFilter& filter,
                               const Bounds& bounds) {
  std::vector<Element> members;
  for (const auto& x : m.carrier().elements(bounds.elements))
    if (filter.contains(annihilator(algebra, m, x))) members.push_back(x);
  Submodule s = Submodule::span(m.carrier(), members);
  if (s.cardinality() != members.size())
    throw InternalDefect("elements with annihilator in the filter do not form a subgroup");
  if (!is_em_submodule(m, s)) throw InternalDefect("torsion elements are not closed under the action");
  return s;
}

Submodule torsion_radical_literal(const Algebra& algebra, const EMModule& m, const GabrielFilter& filter,
                                  const Bounds& bounds) {
  // N is torsion iff every f: A -> M with image inside N has kernel in L.
  std::vector<Submodule> bad_images;
  for (const auto& f : EMHomSpace(algebra, regular_module(algebra), m).enumerate(bounds))
    if (!filter.contains(kernel(f))) bad_images.push_back(image(f));
  Submodule total(m.carrier());
  for (const auto& n : enumerate_em_submodules(m, bounds)) {
    const bool torsion =
        std::none_of(bad_images.begin(), bad_images.end(), [&](const Submodule& b) { return b.is_subset_of(n); });
    if (torsion) total = sum(total, n);
  }
  return total;
}

Submodule torsion_radical(const Algebra& algebra, const EMModule& m, const GabrielFilter& filter,
                          const Bounds& bounds) {
  Submodule fast = torsion_radical_fast(algebra, m, filter, bounds);
  if (m.carrier().cardinality() <= bounds.subgroups &&
      !(torsion_radical_literal(algebra, m, filter, bounds) == fast))
    throw InternalDefect("annihilator radical differs from the sum of torsion submodules");
  return fast;
}

std::string to_string(TorsionClass c) {
  switch (c) {
    case TorsionClass::Torsion:
      return "torsion";
    case TorsionClass::TorsionFree:
      return "torsion-free";
    case TorsionClass::Mixed:
      return "mixed";
  }
  return "mixed";
}

Verdict check_radical_invariants(const Algebra& algebra, const GabrielFilter& filter, const EMModule& m,
                                 const Bounds& bounds) {
  const Submodule s = torsion_radical(algebra, m, filter, bounds);
  const EMRestriction sub = restrict_module(m, s);
  if (!torsion_radical(algebra, sub.module, filter, bounds).is_whole())
    return Verdict::fail("radical idempotence", "Eq. 2.5", "sigma(sigma(M)) is smaller than sigma(M) = " + to_string(s));
  const EMQuotient q = quotient_module(m, s);
  const Submodule sq = torsion_radical(algebra, q.module, filter, bounds);
  if (!sq.is_zero())
    return Verdict::fail("torsion-free quotient", "Eq. 2.6", "sigma(M/sigma(M)) = " + to_string(sq));
  const bool torsion = is_torsion(algebra, m, filter, bounds).torsion;
  if (torsion != s.is_whole())
    return Verdict::fail("class consistency", "Eq. 2.6", "torsion test and sigma(M) = M disagree");
  if (m.carrier().cardinality() <= bounds.subgroups)
    for (const auto& n : enumerate_em_submodules(m, bounds)) {
      const EMRestriction rn = restrict_module(m, n);
      const Submodule lhs = image(rn.embedding.inclusion, torsion_radical(algebra, rn.module, filter, bounds));
      const Submodule rhs = intersect(n, s);
      if (!(lhs == rhs))
        return Verdict::fail("hereditarity", "Eq. 2.5",
                             "N = " + to_string(n) + ": sigma(N) = " + to_string(lhs) + ", N ∩ sigma(M) = " +
                                 to_string(rhs));
    }
  return Verdict::pass("radical invariants", "Eq. 2.5");
}

TorsionTheory torsion_theory(const Algebra& algebra, const GabrielFilter& filter,
                             const std::vector<NamedModule>& corpus, const Bounds& bounds) {
  TorsionTheory t{algebra, filter, {}};
  for (const auto& nm : corpus) {
    const Verdict v = check_radical_invariants(algebra, filter, nm.module, bounds);
    if (!v) throw InternalDefect(nm.name + ": " + v.check + " fails: " + v.witness);
    Submodule s = torsion_radical(algebra, nm.module, filter, bounds);
    const TorsionClass kind = s.is_whole()  ? TorsionClass::Torsion
                              : s.is_zero() ? TorsionClass::TorsionFree
                                            : TorsionClass::Mixed;
    t.corpus.push_back({nm, std::move(s), kind});
  }
  return t;
}

GabrielFilter gabriel_filter_of_radical(const Algebra& algebra, const Radical& radical, const Bounds& bounds) {
  const EMModule regular = regular_module(algebra);
  std::vector<Submodule> members;
  for (const auto& i : enumerate_left_ideals(algebra, bounds))
    if (radical(quotient_module(regular, i).module).is_whole()) members.push_back(i);
  return GabrielFilter(algebra, std::move(members), bounds);
}

Submodule delta_invariant_J_literal(const Algebra& algebra, const Submodule& ideal, const AlgebraDerivation& d,
                                    const Bounds& bounds) {
  Submodule total(algebra.carrier());
  for (const auto& p : enumerate_left_ideals(algebra, bounds))
    if (p.is_subset_of(ideal) && image(d.map, p).is_subset_of(ideal)) total = sum(total, p);
  return total;
}

Submodule delta_invariant_J_fast(const Algebra& algebra, const Submodule& ideal, const AlgebraDerivation& d) {
  const Submodule s = intersect(ideal, preimage(d.map, ideal));
  Submodule j = Submodule::whole(algebra.carrier());
  for (std::size_t i = 0; i < algebra.rank(); ++i)
    j = intersect(j, preimage(algebra.left_multiplication(algebra.basis(i)), s));
  return j;
}

Submodule delta_invariant_J(const Algebra& algebra, const Submodule& ideal, const AlgebraDerivation& d,
                            const GabrielFilter& filter, const Bounds& bounds) {
  if (!filter.contains(ideal)) throw PreconditionError("ideal " + to_string(ideal) + " is not in the filter");
  Submodule fast = delta_invariant_J_fast(algebra, ideal, d);
  if (!(delta_invariant_J_literal(algebra, ideal, d, bounds) == fast))
    throw InternalDefect("largest-ideal and literal-sum forms of J disagree for I = " + to_string(ideal));
  return fast;
}

Verdict check_delta_invariance(const Algebra& algebra, const AlgebraDerivation& d, const GabrielFilter& filter,
                               const Bounds& bounds) {
  for (const auto& i : filter.ideals()) {
    const Submodule j = delta_invariant_J(algebra, i, d, filter, bounds);
    if (!filter.contains(j))
      return Verdict::fail("delta-invariance", "Thm 3.4", "I = " + to_string(i) + ": J = " + to_string(j) + " not in L");
    if (!image(d.map, j).is_subset_of(i))
      return Verdict::fail("delta-invariance", "Thm 3.4", "I = " + to_string(i) + ": d(J) not inside I");
  }
  return Verdict::pass("delta-invariance", "Thm 3.4");
}

Verdict check_differential(const Algebra& algebra, const GabrielFilter& filter, const EMModule& m,
                           const AlgebraDerivation& d, const ModuleDerivation& derivation, const Bounds& bounds) {
  return check_differential(algebra, torsion_radical(algebra, m, filter, bounds), m, d, derivation);
}

Verdict check_differential(const Algebra& algebra, const Submodule& s, const EMModule& m, const AlgebraDerivation& d,
                           const ModuleDerivation& derivation) {
  const LawReport law = check_module_derivation(algebra, m, d, derivation.map);
  if (!law) throw ValidationError("Eq. 3.5", "invalid derivation: " + law.describe());
  if (!(s.ambient() == m.carrier())) throw PreconditionError("radical does not live in the module");
  const Submodule ds = image(derivation.map, s);
  if (!ds.is_subset_of(s))
    return Verdict::fail("differential", "Thm 3.7", "D(M_tau) = " + to_string(ds) + " not inside M_tau = " + to_string(s));
  return Verdict::pass("differential", "Thm 3.7");
}

}  // namespace localix

#include "localix/quotients.hpp"

#include <numeric>
#include <set>

#include "localix/errors.hpp"

namespace localix {

Submodule min_ideal(const GabrielFilter& filter) {
  Submodule meet = filter.ideals().back();
  for (const auto& i : filter.ideals()) meet = intersect(meet, i);
  if (!(meet == filter.min_ideal()) || !filter.contains(meet))
    throw InternalDefect("intersection of the filter is not its minimum member");
  return meet;
}

// ---- raw colimit -----------------------------------------------------------

namespace {

ColimitHom::Graph graph_of(const EMRestriction& domain, const ModuleMap& f, const Bounds& bounds) {
  ColimitHom::Graph g;
  for (const auto& y : domain.module.carrier().elements(bounds.elements)) g.emplace(domain.embedding.inclusion(y), f(y));
  return g;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t root(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void join(std::size_t a, std::size_t b) {
    a = root(a), b = root(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

bool agree_on(const ColimitHom::Graph& f, const ColimitHom::Graph& g, const std::vector<Element>& k) {
  for (const auto& x : k)
    if (f.at(x) != g.at(x)) return false;
  return true;
}

}  // namespace

std::optional<std::size_t> ColimitHom::find(const Submodule& ideal, const Graph& graph) const {
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (terms[nodes[k].term].ideal == ideal && nodes[k].graph == graph) return k;
  return std::nullopt;
}

ColimitHom colimit_hom(const Algebra& algebra, const GabrielFilter& filter, const EMModule& n, const Bounds& bounds) {
  const EMModule regular = regular_module(algebra);
  ColimitHom c;
  for (const auto& ideal : filter.ideals()) {
    EMRestriction r = restrict_module(regular, ideal);
    auto maps = EMHomSpace(algebra, r.module, n).enumerate(bounds);
    c.terms.push_back({ideal, std::move(r), std::move(maps)});
  }
  for (std::size_t t = 0; t < c.terms.size(); ++t)
    for (std::size_t k = 0; k < c.terms[t].maps.size(); ++k)
      c.nodes.push_back({t, k, graph_of(c.terms[t].module, c.terms[t].maps[k], bounds)});

  std::vector<std::vector<Element>> members;
  for (const auto& ideal : filter.ideals()) members.push_back(ideal.elements(bounds.elements));

  UnionFind uf(c.nodes.size());
  for (std::size_t a = 0; a < c.nodes.size(); ++a)
    for (std::size_t b = a + 1; b < c.nodes.size(); ++b) {
      const Submodule& ia = c.terms[c.nodes[a].term].ideal;
      const Submodule& ib = c.terms[c.nodes[b].term].ideal;
      for (std::size_t k = 0; k < filter.size(); ++k) {
        const Submodule& kk = filter.ideals()[k];
        if (kk.is_subset_of(ia) && kk.is_subset_of(ib) && agree_on(c.nodes[a].graph, c.nodes[b].graph, members[k])) {
          uf.join(a, b);
          break;
        }
      }
    }
  std::vector<std::size_t> index(c.nodes.size(), SIZE_MAX);
  for (std::size_t a = 0; a < c.nodes.size(); ++a) {
    const std::size_t r = uf.root(a);
    if (index[r] == SIZE_MAX) {
      index[r] = c.class_count++;
      c.representative.push_back(a);
    }
    c.class_of.push_back(index[r]);
  }
  return c;
}

// ---- module of quotients ------------------------------------------------------

QuotientModule module_of_quotients(const Algebra& algebra, const EMModule& m, const GabrielFilter& filter,
                                   const Bounds& bounds) {
  Submodule radical = torsion_radical(algebra, m, filter, bounds);
  EMQuotient tf = quotient_module(m, radical);
  Submodule ideal = min_ideal(filter);
  EMRestriction ideal_module = restrict_module(regular_module(algebra), ideal);
  EMHomSpace hom(algebra, ideal_module.module, tf.module);
  const FinModule& im = ideal_module.module.carrier();

  // (e_i . f)(x) = f(x e_i); I_min is closed under right multiplication
  std::vector<ModuleMap> actions;
  for (std::size_t i = 0; i < algebra.rank(); ++i) {
    const ModuleMap right = ModuleMap::tabulate(im, im, [&](const Element& y) {
      const Element xa = algebra.multiply(ideal_module.embedding.inclusion(y), algebra.basis(i));
      if (!ideal.contains(xa)) throw InternalDefect("minimum filter ideal is not closed under right multiplication");
      return ideal_module.embedding.coordinates(xa);
    });
    actions.push_back(
        ModuleMap::tabulate(hom.module(), hom.module(), [&](const Element& z) { return hom.element_of(hom.map_of(z) * right); }));
  }
  EMModule carrier(hom.module(), std::move(actions));

  ModuleMap phi = ModuleMap::tabulate(m.carrier(), hom.module(), [&](const Element& x) {
    const ModuleMap f = ModuleMap::tabulate(im, tf.module.carrier(), [&](const Element& y) {
      return tf.map.projection(m.act(ideal_module.embedding.inclusion(y), x));
    });
    return hom.element_of(f);
  });

  QuotientModule q{algebra,
                   m,
                   filter,
                   std::move(radical),
                   std::move(tf),
                   std::move(ideal),
                   std::move(ideal_module),
                   std::move(hom),
                   std::move(carrier),
                   std::move(phi)};
  const Verdict v = check_quotient_invariants(q, bounds);
  if (!v) throw InternalDefect(v.check + " fails: " + v.witness);
  return q;
}

Verdict check_quotient_invariants(const QuotientModule& q, const Bounds& bounds) {
  const LawReport laws = check_em_module(q.algebra, q.carrier);
  if (!laws) return Verdict::fail("carrier module laws", "Eq. 4.1", laws.describe());
  const LawReport lin = check_em_morphism(q.algebra, q.source, q.carrier, q.phi);
  if (!lin) return Verdict::fail("Phi is A-linear", "Eq. 4.2", lin.describe());
  const Submodule ker = kernel(q.phi);
  if (!is_torsion(q.algebra, restrict_module(q.source, ker).module, q.filter, bounds).torsion)
    return Verdict::fail("Ker(Phi) is torsion", "§4", "Ker(Phi) = " + to_string(ker));
  const Submodule img = image(q.phi);
  if (!is_torsion(q.algebra, quotient_module(q.carrier, img).module, q.filter, bounds).torsion)
    return Verdict::fail("Coker(Phi) is torsion", "§4", "Im(Phi) = " + to_string(img));
  if (q.radical.is_whole() && !q.carrier.carrier().is_zero())
    return Verdict::fail("H of a torsion module is zero", "§4", "carrier " + to_string(q.carrier.carrier()));
  if (q.radical.is_zero() && !ker.is_zero())
    return Verdict::fail("Phi injective on torsion-free modules", "§4", "Ker(Phi) = " + to_string(ker));
  return Verdict::pass("module of quotients", "Eq. 4.1");
}

Verdict check_colimit_isomorphism(const QuotientModule& q, const ColimitHom& colimit, const Bounds& bounds) {
  const Verdict fail_base = Verdict::fail("colimit isomorphism", "Eq. 4.1", "");
  auto fail = [&](std::string why) {
    Verdict v = fail_base;
    v.witness = std::move(why);
    return v;
  };
  const FinModule& n = q.torsion_free.module.carrier();
  const FinModule& im = q.ideal_module.module.carrier();
  auto restrict_to_min = [&](const ColimitHom::Graph& g) {
    return ModuleMap::tabulate(im, n, [&](const Element& y) { return g.at(q.ideal_module.embedding.inclusion(y)); });
  };

  // class -> carrier element by restriction to I_min
  std::vector<Element> iso;
  std::set<Element> seen;
  for (std::size_t c = 0; c < colimit.class_count; ++c) {
    const ModuleMap f = restrict_to_min(colimit.nodes[colimit.representative[c]].graph);
    if (!check_em_morphism(q.algebra, q.ideal_module.module, q.torsion_free.module, f))
      return fail("restriction of class " + std::to_string(c) + " is not A-linear");
    iso.push_back(q.element_of(f));
    if (!seen.insert(iso.back()).second) return fail("two classes restrict to the same map on I_min");
  }
  if (seen.size() != q.carrier.carrier().cardinality())
    return fail(std::to_string(seen.size()) + " classes but carrier has " +
                std::to_string(q.carrier.carrier().cardinality()) + " elements");
  for (std::size_t a = 0; a < colimit.nodes.size(); ++a)
    if (q.element_of(restrict_to_min(colimit.nodes[a].graph)) != iso[colimit.class_of[a]])
      return fail("a class contains maps that differ on I_min");

  // the colimit action: (a.[f]) = [x |-> f(x a)] on (I : a)
  for (std::size_t a = 0; a < colimit.nodes.size(); ++a) {
    const auto& node = colimit.nodes[a];
    const Submodule& ideal = colimit.terms[node.term].ideal;
    for (std::size_t i = 0; i < q.algebra.rank(); ++i) {
      const Submodule domain = colon_ideal(q.algebra, ideal, q.algebra.basis(i));
      if (!q.filter.contains(domain)) return fail("(I : e_i) left the filter for I = " + to_string(ideal));
      ColimitHom::Graph g;
      for (const auto& x : domain.elements(bounds.elements))
        g.emplace(x, node.graph.at(q.algebra.multiply(x, q.algebra.basis(i))));
      const auto target = colimit.find(domain, g);
      if (!target) return fail("e_i . f is not an A-linear map on (I : e_i)");
      if (iso[colimit.class_of[*target]] != q.carrier.action(i)(iso[colimit.class_of[a]]))
        return fail("restriction to I_min does not respect the action of e_" + std::to_string(i));
    }
  }
  return Verdict::pass("colimit isomorphism", "Eq. 4.1");
}

// ---- extension of derivations ---------------------------------------------------

ModuleMap induced_derivation(const QuotientModule& q, const ModuleDerivation& derivation) {
  if (!image(derivation.map, q.radical).is_subset_of(q.radical))
    throw PreconditionError("derivation does not preserve the torsion radical");
  const EMQuotient& tf = q.torsion_free;
  return ModuleMap::tabulate(tf.module.carrier(), tf.module.carrier(),
                             [&](const Element& y) { return tf.map.projection(derivation.map(tf.map.lift(y))); });
}

ModuleDerivation extend_with(const QuotientModule& q, const AlgebraDerivation& d, const ModuleMap& induced,
                             const Submodule& j) {
  if (!q.filter.contains(j)) throw PreconditionError("J is not in the filter");
  if (!image(d.map, j).is_subset_of(q.ideal)) throw PreconditionError("d(J) is not inside I_min");
  const Submodule k = intersect(q.ideal, j);
  if (!q.filter.contains(k) || !q.ideal.is_subset_of(k)) throw InternalDefect("I_min ∩ J is not I_min");

  const FinModule& im = q.ideal_module.module.carrier();
  const FinModule& n = q.torsion_free.module.carrier();
  const FinModule& c = q.carrier.carrier();
  std::vector<Element> images;
  for (std::size_t g = 0; g < c.rank(); ++g) {
    const ModuleMap f = q.map_of(c.generator(g));
    // (Dbar f)(x) = D(f(x)) - f(d(x)) on K, read on I_min inside K
    const ModuleMap df = ModuleMap::tabulate(im, n, [&](const Element& y) {
      const Element x = q.ideal_module.embedding.inclusion(y);
      return n.subtract(induced(f(y)), f(q.ideal_module.embedding.coordinates(d(x))));
    });
    if (!check_em_morphism(q.algebra, q.ideal_module.module, q.torsion_free.module, df))
      throw InternalDefect("Dbar f is not A-linear");
    images.push_back(q.element_of(df));
  }
  return {ModuleMap::from_images(c, c, images)};
}

ModuleDerivation extend_derivation(const QuotientModule& q, const AlgebraDerivation& d,
                                   const ModuleDerivation& derivation) {
  if (!q.radical.is_zero())
    throw PreconditionError("source is not torsion-free; use extend_derivation_general");
  const LawReport law = check_module_derivation(q.algebra, q.source, d, derivation.map);
  if (!law) throw ValidationError("Eq. 3.5", "invalid derivation: " + law.describe());
  const Submodule j = delta_invariant_J_fast(q.algebra, q.ideal, d);
  ModuleDerivation ext = extend_with(q, d, induced_derivation(q, derivation), j);
  const LawReport out = check_module_derivation(q.algebra, q.carrier, d, ext.map);
  if (!out) throw InternalDefect("extension is not a derivation: " + out.describe());
  return ext;
}

ModuleDerivation extend_derivation_general(const QuotientModule& q, const AlgebraDerivation& d,
                                           const ModuleDerivation& derivation) {
  const LawReport law = check_module_derivation(q.algebra, q.source, d, derivation.map);
  if (!law) throw ValidationError("Eq. 3.5", "invalid derivation: " + law.describe());
  const Verdict diff = check_differential(q.algebra, q.radical, q.source, d, derivation);
  if (!diff) throw InternalDefect("torsion theory is not differential: " + diff.witness);
  const ModuleMap induced = induced_derivation(q, derivation);
  const LawReport on_quotient = check_module_derivation(q.algebra, q.torsion_free.module, d, induced);
  if (!on_quotient) throw InternalDefect("induced map on M/M_tau is not a derivation: " + on_quotient.describe());
  const Submodule j = delta_invariant_J_fast(q.algebra, q.ideal, d);
  ModuleDerivation ext = extend_with(q, d, induced, j);
  const LawReport out = check_module_derivation(q.algebra, q.carrier, d, ext.map);
  if (!out) throw InternalDefect("extension is not a derivation: " + out.describe());
  return ext;
}

Verdict check_lift(const QuotientModule& q, const ModuleDerivation& derivation, const ModuleDerivation& extension,
                   const Bounds& bounds) {
  for (const auto& x : q.source.carrier().elements(bounds.elements)) {
    const Element lhs = extension.map(q.phi(x));
    const Element rhs = q.phi(derivation.map(x));
    if (lhs != rhs)
      return Verdict::fail("lift square", "Eq. 4.9",
                           "m = " + to_string(x) + ": Dbar(Phi m) = " + to_string(lhs) + ", Phi(D m) = " + to_string(rhs));
  }
  return Verdict::pass("lift square", "Eq. 4.9");
}

LiftCount verify_unique_lift(const QuotientModule& q, const AlgebraDerivation& d, const ModuleDerivation& derivation,
                             const ModuleDerivation& extension, const Bounds& bounds) {
  return verify_unique_lift(q, enumerate_module_derivations(q.algebra, q.carrier, d, bounds), derivation, extension);
}

LiftCount verify_unique_lift(const QuotientModule& q, const std::vector<ModuleDerivation>& carrier_derivations,
                             const ModuleDerivation& derivation, const ModuleDerivation& extension) {
  LiftCount out;
  const ModuleMap target = q.phi * derivation.map;
  for (const auto& c : carrier_derivations)
    if (c.map * q.phi == target) {
      ++out.count;
      out.matches_extension = c == extension;
    }
  out.matches_extension = out.matches_extension && out.count == 1;
  return out;
}

Verdict check_extension_choice(const QuotientModule& q, const ColimitHom& colimit, const AlgebraDerivation& d,
                               const ModuleMap& induced, const ModuleDerivation& extension, const Bounds& bounds) {
  const FinModule& n = q.torsion_free.module.carrier();
  const FinModule& im = q.ideal_module.module.carrier();
  for (std::size_t a = 0; a < colimit.nodes.size(); ++a) {
    const auto& node = colimit.nodes[a];
    const Submodule& ideal = colimit.terms[node.term].ideal;
    // class of Dbar applied to [f], located through its representative on I_min
    const ModuleMap on_min = ModuleMap::tabulate(
        im, n, [&](const Element& y) { return node.graph.at(q.ideal_module.embedding.inclusion(y)); });
    const ModuleMap expected_map = q.map_of(extension.map(q.element_of(on_min)));
    ColimitHom::Graph expected_graph;
    for (const auto& y : im.elements(bounds.elements))
      expected_graph.emplace(q.ideal_module.embedding.inclusion(y), expected_map(y));
    const auto expected = colimit.find(q.ideal, expected_graph);
    if (!expected) return Verdict::fail("extension independent of J", "Lemma 4.1", "Dbar f has no colimit class");

    for (const auto& j : q.filter.ideals()) {
      if (!image(d.map, j).is_subset_of(ideal)) continue;
      const Submodule k = intersect(ideal, j);
      if (!q.filter.contains(k)) return Verdict::fail("extension independent of J", "Lemma 4.1", "I ∩ J not in L");
      ColimitHom::Graph g;
      for (const auto& x : k.elements(bounds.elements))
        g.emplace(x, n.subtract(induced(node.graph.at(x)), node.graph.at(d(x))));
      const auto found = colimit.find(k, g);
      if (!found)
        return Verdict::fail("extension independent of J", "Lemma 4.1",
                             "I = " + to_string(ideal) + ", J = " + to_string(j) + ": Dbar f is not A-linear on K");
      if (colimit.class_of[*found] != colimit.class_of[*expected])
        return Verdict::fail("extension independent of J", "Lemma 4.1",
                             "I = " + to_string(ideal) + ", J = " + to_string(j) + ": class differs");
    }
  }
  return Verdict::pass("extension independent of J", "Lemma 4.1");
}

// ---- left exactness ------------------------------------------------------------

Verdict check_exact(const Algebra& algebra, const ShortExactSequence& ses) {
  if (!check_em_morphism(algebra, ses.left, ses.middle, ses.f) || !check_em_morphism(algebra, ses.middle, ses.right, ses.g))
    return Verdict::fail("exact sequence", "§4", "maps are not A-linear");
  if (!kernel(ses.f).is_zero()) return Verdict::fail("exact sequence", "§4", "first map not injective");
  if (!(image(ses.f) == kernel(ses.g))) return Verdict::fail("exact sequence", "§4", "image differs from kernel");
  if (!image(ses.g).is_whole()) return Verdict::fail("exact sequence", "§4", "second map not surjective");
  return Verdict::pass("exact sequence", "§4");
}

ModuleMap induced_quotient_map(const QuotientModule& source, const QuotientModule& target, const ModuleMap& f) {
  if (!(source.ideal == target.ideal)) throw PreconditionError("quotient modules use different filters");
  if (!image(f, source.radical).is_subset_of(target.radical))
    throw InternalDefect("module map does not preserve torsion radicals");
  const EMQuotient& ns = source.torsion_free;
  const EMQuotient& nt = target.torsion_free;
  const ModuleMap fbar = ModuleMap::tabulate(ns.module.carrier(), nt.module.carrier(),
                                             [&](const Element& y) { return nt.map.projection(f(ns.map.lift(y))); });
  ModuleMap h = ModuleMap::tabulate(source.carrier.carrier(), target.carrier.carrier(),
                                    [&](const Element& z) { return target.element_of(fbar * source.map_of(z)); });
  if (!(h * source.phi == target.phi * f)) throw InternalDefect("H(f) o Phi differs from Phi o f");
  return h;
}

Verdict check_H_left_exact(const Algebra& algebra, const ShortExactSequence& ses, const GabrielFilter& filter,
                           const Bounds& bounds) {
  const Verdict exact = check_exact(algebra, ses);
  if (!exact) throw PreconditionError("sequence " + ses.name + " is not exact: " + exact.witness);
  const QuotientModule q1 = module_of_quotients(algebra, ses.left, filter, bounds);
  const QuotientModule q2 = module_of_quotients(algebra, ses.middle, filter, bounds);
  const QuotientModule q3 = module_of_quotients(algebra, ses.right, filter, bounds);
  const ModuleMap h1 = induced_quotient_map(q1, q2, ses.f);
  const ModuleMap h2 = induced_quotient_map(q2, q3, ses.g);
  if (!kernel(h1).is_zero()) return Verdict::fail("left exactness", "§4", ses.name + ": H(f) not injective");
  if (!(image(h1) == kernel(h2)))
    return Verdict::fail("left exactness", "§4",
                         ses.name + ": Im H(f) = " + to_string(image(h1)) + ", Ker H(g) = " + to_string(kernel(h2)));
  return Verdict::pass("left exactness", "§4");
}

}  // namespace localix

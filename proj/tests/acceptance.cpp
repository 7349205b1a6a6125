// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

#include "localix/errors.hpp"
#include "localix/workbench.hpp"
#include "oracles.hpp"

using namespace localix;
using namespace localix::oracle;

namespace {

// Collects the first few failures of one criterion.
struct Failures {
  std::vector<std::string> items;
  void expect(bool ok, const std::string& what) {
    if (!ok && items.size() < 5) items.push_back(what);
  }
};

int criterion(int n, const std::string& title, const std::function<void(Failures&, std::ostream&)>& body) {
  Failures f;
  std::ostringstream notes;
  try {
    body(f, notes);
  } catch (const std::exception& e) {
    f.items.push_back(std::string("exception: ") + e.what());
  }
  std::cout << (f.items.empty() ? "PASS" : "FAIL") << " criterion " << n << ": " << title;
  if (!notes.str().empty()) std::cout << " (" << notes.str() << ")";
  std::cout << "\n";
  for (const auto& i : f.items) std::cout << "    " << i << "\n";
  return f.items.empty() ? 0 : 1;
}

std::set<Element> as_element_set(const Submodule& s) { return as_set(s); }

std::set<Element> annihilator_elementwise(const Algebra& a, const EMModule& m, const Element& x) {
  std::set<Element> out;
  for (const auto& s : a.carrier().elements(1u << 16))
    if (m.act(s, x) == m.carrier().zero()) out.insert(s);
  return out;
}

// { x : Ann(x) in L }, by element sets only
std::set<Element> radical_elementwise(const Algebra& a, const EMModule& m, const std::set<ElementSet>& l) {
  std::set<Element> out;
  for (const auto& x : m.carrier().elements(1u << 16))
    if (l.count(annihilator_elementwise(a, m, x))) out.insert(x);
  return out;
}

std::size_t candidate_count(const FinModule& m, const FinModule& n) {
  std::size_t c = 1;
  for (std::size_t i = 0; i < m.rank(); ++i) {
    c *= n.cardinality();
    if (c > 4096) return c;
  }
  return c;
}

const std::vector<FixtureAlgebra>& fixtures() {
  static const std::vector<FixtureAlgebra> f = builtin_algebras();
  return f;
}

void law_suite(Failures& f, std::ostream& notes) {
  for (const auto& fx : fixtures()) {
    const Algebra& a = fx.algebra;
    f.expect(check_monad_laws(a).passed, fx.name + ": monad laws");
    f.expect(check_em_module(a, regular_module(a)).passed, fx.name + ": regular module");
    for (const auto& m : standard_corpus(a)) f.expect(check_em_module(a, m.module).passed, fx.name + ": " + m.name);
    f.expect(check_derivation(a, AlgebraDerivation(a, fx.derivation)).passed, fx.name + ": fixture derivation");
    for (const auto& d : enumerate_algebra_derivations(a)) f.expect(check_derivation(a, d).passed, fx.name + ": Der(A)");
  }

  // associativity: recompute both sides of the witness by hand
  const Algebra assoc = broken_associativity();
  const LawReport ra = check_monad_laws(assoc);
  f.expect(!ra.passed && ra.anchor == "Eq. 2.1" && ra.law == "associativity", "broken associativity not caught");
  if (!ra.passed && ra.indices.size() == 3) {
    const Element x = assoc.basis(ra.indices[0]), y = assoc.basis(ra.indices[1]), z = assoc.basis(ra.indices[2]);
    const Element left = assoc.multiply(assoc.multiply(x, y), z), right = assoc.multiply(x, assoc.multiply(y, z));
    f.expect(left != right && ((ra.lhs == left && ra.rhs == right) || (ra.lhs == right && ra.rhs == left)),
             "associativity witness does not reproduce");
  }

  // unit: the algebra law, and a module whose unit acts as zero
  const LawReport ru = check_monad_laws(broken_unit());
  f.expect(!ru.passed && ru.anchor == "Eq. 2.1" && ru.law == "right unit", "broken unit not caught");
  if (!ru.passed && ru.indices.size() == 1) {
    const Algebra b = broken_unit();
    f.expect(b.multiply(b.basis(ru.indices[0]), b.unit()) != b.basis(ru.indices[0]), "unit witness does not reproduce");
  }
  const Algebra dual = dual_numbers().algebra;
  const FinModule k(2, {2});
  const EMModule bad(k, {ModuleMap::zero(k, k), ModuleMap::zero(k, k)});
  const LawReport rm = check_em_module(dual, bad);
  f.expect(!rm.passed && rm.anchor == "Eq. 2.2" && rm.law == "unit action", "broken unit action not caught");

  // Leibniz: d(1) = 1 gives d(1*1) = 1 but 1 d(1) + d(1) 1 = 0
  const AlgebraDerivation broken(dual, broken_leibniz_matrix());
  const LawReport rl = check_derivation(dual, broken);
  f.expect(!rl.passed && rl.anchor == "Eq. 3.1", "broken Leibniz not caught");
  if (!rl.passed && rl.indices.size() == 2) {
    const Element x = dual.basis(rl.indices[0]), y = dual.basis(rl.indices[1]);
    f.expect(rl.lhs == broken(dual.multiply(x, y)) &&
                 rl.rhs == dual.carrier().add(dual.multiply(broken(x), y), dual.multiply(x, broken(y))),
             "Leibniz witness does not reproduce");
  }

  // the same three mutations rejected as scenario files
  const std::string dir = LOCALIX_SCENARIO_DIR;
  for (const auto& [file, anchor] : std::vector<std::pair<std::string, std::string>>{
           {"broken-associativity", "Eq. 2.1"}, {"broken-unit", "Eq. 2.1"},
           {"broken-unit-action", "Eq. 2.2"},   {"broken-leibniz", "Eq. 3.1"}}) {
    try {
      load_scenario(dir + "/mutations/" + file + ".json");
      f.expect(false, file + " accepted");
    } catch (const ValidationError& e) {
      f.expect(e.anchor() == anchor, file + " rejected under " + e.anchor());
    }
  }
  notes << fixtures().size() << " fixtures, 4 mutation files";
}

void adjunction(Failures& f, std::ostream& notes) {
  std::size_t pairs = 0, brute = 0;
  for (const auto& fx : fixtures()) {
    const Algebra& a = fx.algebra;
    const auto corpus = standard_corpus(a);
    for (const auto& base : corpus)
      for (const auto& target : corpus) {
        const FinModule& m0 = base.module.carrier();
        const EMModule& n = target.module;
        if (m0.cardinality() > 64 || n.carrier().cardinality() > 64) continue;
        ++pairs;
        const std::string where = fx.name + ": M0 = " + base.name + ", N = " + target.name;
        const Verdict v = check_adjunction(a, m0, n);
        f.expect(v.passed, where + ": " + v.witness);

        // oracle: A-linear maps UM0 -> N found by exhaustive search, transposed along eta
        const FreeModule free = free_module(a, m0);
        if (candidate_count(free.module.carrier(), n.carrier()) > 4096 || candidate_count(m0, n.carrier()) > 4096)
          continue;
        ++brute;
        std::set<std::vector<Int>> transposed;
        std::size_t linear = 0;
        for (const auto& h : all_additive_maps(free.module.carrier(), n.carrier()))
          if (is_linear_elementwise(a, free.module, n, h)) {
            ++linear;
            transposed.insert(flatten(h * free.unit));
          }
        const auto plain = all_additive_maps(m0, n.carrier());
        f.expect(linear == plain.size(), where + ": cardinalities differ");
        f.expect(transposed.size() == linear, where + ": transpose not injective");
        for (const auto& phi : plain) f.expect(transposed.count(flatten(phi)) == 1, where + ": transpose not onto");
      }
  }
  notes << pairs << " pairs, " << brute << " also by exhaustive search";
}

void filters(Failures& f, std::ostream& notes) {
  const std::map<std::string, std::size_t> expected{{"dual-numbers", 2}, {"z4", 2}, {"f2xf2", 4}};
  for (const auto& fx : fixtures()) {
    const auto found = enumerate_gabriel_filters(fx.algebra);
    std::set<std::set<ElementSet>> got;
    for (const auto& l : found) got.insert(as_sets(l));
    f.expect(got == AxiomOracle(fx.algebra).all_filters(), fx.name + ": enumeration differs from the axiom oracle");
    if (expected.count(fx.name))
      f.expect(found.size() == expected.at(fx.name), fx.name + ": " + std::to_string(found.size()) + " filters");
    else
      notes << fx.name << " has " << found.size() << " filters";
  }
}

void delta_invariance(Failures& f, std::ostream& notes) {
  std::size_t instances = 0;
  for (const auto& fx : fixtures()) {
    const Algebra& a = fx.algebra;
    const AxiomOracle oracle(a);
    for (const auto& l : enumerate_gabriel_filters(a))
      for (const auto& d : enumerate_algebra_derivations(a))
        for (const auto& i : l.ideals()) {
          ++instances;
          const std::string where = fx.name + ": I = " + to_string(i);
          const Submodule literal = delta_invariant_J_literal(a, i, d);
          const Submodule fast = delta_invariant_J_fast(a, i, d);
          f.expect(literal == fast, where + ": routes disagree");
          const Submodule j = delta_invariant_J(a, i, d, l);
          f.expect(l.contains(j), where + ": J not in L");
          f.expect(image(d.map, j).is_subset_of(i), where + ": d(J) not inside I");
          // oracle: largest ideal P inside I with d(P) inside I, on element sets
          const ElementSet iset = as_set(i);
          ElementSet best;
          for (const auto& p : oracle.ideals) {
            bool ok = AxiomOracle::subset(p, iset);
            for (const auto& x : p) ok = ok && iset.count(d(x));
            if (ok && p.size() > best.size()) best = p;
          }
          f.expect(as_set(j) == best, where + ": J differs from the element-set oracle");
        }
  }
  notes << instances << " instances";
}

void differential(Failures& f, std::ostream& notes) {
  std::size_t triples = 0;
  for (const auto& fx : fixtures()) {
    const Algebra& a = fx.algebra;
    const auto corpus = standard_corpus(a);
    const auto derivations = enumerate_algebra_derivations(a);
    for (const auto& l : enumerate_gabriel_filters(a)) {
      const auto lsets = as_sets(l);
      for (const auto& m : corpus) {
        const Submodule rad = torsion_radical(a, m.module, l);
        const std::set<Element> rad_oracle = radical_elementwise(a, m.module, lsets);
        f.expect(as_element_set(rad) == rad_oracle, fx.name + ": " + m.name + ": radical differs from oracle");
        for (const auto& d : derivations) {
          const auto ds = enumerate_module_derivations(a, m.module, d);
          if (candidate_count(m.module.carrier(), m.module.carrier()) <= 4096) {
            std::size_t brute = 0;
            for (const auto& g : all_additive_maps(m.module.carrier(), m.module.carrier()))
              brute += is_derivation_elementwise(a, m.module, d, g);
            f.expect(brute == ds.size(), fx.name + ": " + m.name + ": derivation count differs from oracle");
          }
          for (const auto& dm : ds) {
            ++triples;
            f.expect(check_differential(a, l, m.module, d, dm).passed, fx.name + ": " + m.name + ": D(M_tau)");
            for (const auto& x : rad_oracle)
              f.expect(rad_oracle.count(dm.map(x)) == 1, fx.name + ": " + m.name + ": D(M_tau) by elements");
          }
        }
      }
    }
  }
  notes << triples << " (filter, module, D) triples";
}

void localization(Failures& f, std::ostream& notes) {
  std::size_t pairs = 0;
  for (const auto& fx : fixtures()) {
    const Algebra& a = fx.algebra;
    const auto corpus = standard_corpus(a);
    for (const auto& l : enumerate_gabriel_filters(a)) {
      const auto lsets = as_sets(l);
      const GabrielFilter back =
          gabriel_filter_of_radical(a, [&](const EMModule& m) { return torsion_radical(a, m, l); });
      f.expect(back == l, fx.name + ": filter/radical round trip fails for " + to_string(l));
      for (const auto& m : corpus) {
        ++pairs;
        const std::string where = fx.name + ": " + to_string(l) + ": " + m.name;
        const QuotientModule q = module_of_quotients(a, m.module, l);
        const ColimitHom colimit = colimit_hom(a, l, q.torsion_free.module);
        f.expect(check_colimit_isomorphism(q, colimit).passed, where + ": carrier and colimit differ");
        f.expect(colimit.class_count == q.carrier.carrier().cardinality(), where + ": class count");
        f.expect(check_quotient_invariants(q).passed, where + ": quotient invariants");

        // Ker and Coker of Phi torsion, on elements
        for (const auto& x : m.module.carrier().elements(1u << 16))
          if (q.phi(x) == q.carrier.carrier().zero())
            f.expect(lsets.count(annihilator_elementwise(a, m.module, x)) == 1, where + ": Ker(Phi) not torsion");
        const ElementSet im = as_set(image(q.phi));
        for (const auto& z : q.carrier.carrier().elements(1u << 16)) {
          ElementSet into;
          for (const auto& s : a.carrier().elements(1u << 16))
            if (im.count(q.carrier.act(s, z))) into.insert(s);
          f.expect(lsets.count(into) == 1, where + ": Coker(Phi) not torsion");
        }

        // H of the torsion part vanishes, sigma is idempotent and hereditary
        const EMRestriction t = restrict_module(m.module, q.radical);
        f.expect(module_of_quotients(a, t.module, l).carrier.carrier().is_zero(), where + ": H(M_tau) nonzero");
        f.expect(torsion_radical(a, t.module, l).is_whole(), where + ": sigma not idempotent");
        for (const auto& n : enumerate_em_submodules(m.module)) {
          const EMRestriction r = restrict_module(m.module, n);
          const Submodule inside = image(r.embedding.inclusion, torsion_radical(a, r.module, l));
          f.expect(inside == intersect(n, q.radical), where + ": not hereditary at " + to_string(n));
        }
      }
    }
  }
  notes << pairs << " (module, filter) pairs";
}

void extension(Failures& f, std::ostream& notes) {
  std::size_t instances = 0, choice = 0;
  for (const auto& fx : fixtures()) {
    const Algebra& a = fx.algebra;
    const auto corpus = standard_corpus(a);
    const auto derivations = enumerate_algebra_derivations(a);
    const bool check_choice = enumerate_left_ideals(a).size() <= 8;
    for (const auto& l : enumerate_gabriel_filters(a))
      for (const auto& m : corpus) {
        const QuotientModule q = module_of_quotients(a, m.module, l);
        const ColimitHom colimit = colimit_hom(a, l, q.torsion_free.module);
        for (const auto& d : derivations) {
          const auto carrier_ds = enumerate_module_derivations(a, q.carrier, d);
          std::vector<ModuleMap> brute_lifts;
          const bool brute = candidate_count(q.carrier.carrier(), q.carrier.carrier()) <= 4096;
          if (brute)
            for (const auto& g : all_additive_maps(q.carrier.carrier(), q.carrier.carrier()))
              if (is_derivation_elementwise(a, q.carrier, d, g)) brute_lifts.push_back(g);
          for (const auto& dm : enumerate_module_derivations(a, m.module, d)) {
            ++instances;
            const std::string where = fx.name + ": " + to_string(l) + ": " + m.name;
            const ModuleDerivation ext = extend_derivation_general(q, d, dm);
            f.expect(check_module_derivation(a, q.carrier, d, ext.map).passed, where + ": not a derivation");
            f.expect(is_derivation_elementwise(a, q.carrier, d, ext.map), where + ": not a derivation on elements");
            f.expect(check_lift(q, dm, ext).passed, where + ": lift square");
            const LiftCount lc = verify_unique_lift(q, carrier_ds, dm, ext);
            f.expect(lc.count == 1 && lc.matches_extension, where + ": " + std::to_string(lc.count) + " lifts");
            if (brute) {
              std::size_t lifts = 0;
              for (const auto& g : brute_lifts)
                if (g * q.phi == q.phi * dm.map) {
                  ++lifts;
                  f.expect(g == ext.map, where + ": exhaustive lift differs from the extension");
                }
              f.expect(lifts == 1, where + ": " + std::to_string(lifts) + " lifts by exhaustive search");
            }
            if (check_choice) {
              ++choice;
              f.expect(check_extension_choice(q, colimit, d, induced_derivation(q, dm), ext).passed,
                       where + ": extension depends on J");
            }
          }
        }
      }
  }
  notes << instances << " instances, " << choice << " with every J";
}

void left_exactness(Failures& f, std::ostream& notes) {
  std::size_t checks = 0;
  for (const auto& fx : fixtures()) {
    const auto seqs = standard_sequences(fx.algebra);
    f.expect(seqs.size() >= 3, fx.name + ": fewer than 3 sequences");
    for (const auto& s : seqs) f.expect(check_exact(fx.algebra, s).passed, fx.name + ": " + s.name + " not exact");
    for (const auto& l : enumerate_gabriel_filters(fx.algebra))
      for (const auto& s : seqs) {
        ++checks;
        const Verdict v = check_H_left_exact(fx.algebra, s, l);
        f.expect(v.passed, fx.name + ": " + to_string(l) + ": " + v.witness);
      }
  }
  notes << checks << " (sequence, filter) pairs";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism(Failures& f, std::ostream& notes) {
  std::size_t bytes = 0;
  for (const auto& fx : fixtures()) {
    const std::string first = "acceptance-" + fx.name + "-1.json", second = "acceptance-" + fx.name + "-2.json";
    for (const auto& out : {first, second}) {
      const std::string cmd = std::string(LOCALIX_CLI) + " verify-all --scenario builtin:" + fx.name + " --out " + out +
                              " 2>/dev/null";
      const int status = std::system(cmd.c_str());
      f.expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, fx.name + ": verify-all exit status " +
                                                                  std::to_string(WEXITSTATUS(status)));
    }
    const std::string a = slurp(first), b = slurp(second);
    f.expect(!a.empty() && a == b, fx.name + ": reports differ");
    bytes += a.size();
  }
  const Scenario s = load_scenario("builtin:f2xf2");
  f.expect(render_json(run("verify-all", s)) == render_json(run("verify-all", s)), "in-process reports differ");
  notes << bytes << " report bytes compared";
}

}  // namespace

int main() {
  int failed = 0;
  failed += criterion(1, "law suite and mutation witnesses", law_suite);
  failed += criterion(2, "free/forgetful adjunction bijection", adjunction);
  failed += criterion(3, "Gabriel filter enumeration", filters);
  failed += criterion(4, "delta-invariance of every filter", delta_invariance);
  failed += criterion(5, "every torsion theory is differential", differential);
  failed += criterion(6, "localization correctness", localization);
  failed += criterion(7, "unique extension of derivations", extension);
  failed += criterion(8, "left exactness of H", left_exactness);
  failed += criterion(9, "determinism of verify-all", determinism);
  std::cout << (failed ? "FAIL" : "PASS") << ": " << 9 - failed << "/9 criteria\n";
  return failed ? 1 : 0;
}

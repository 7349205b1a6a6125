#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "localix/errors.hpp"
#include "localix/finmod.hpp"

using namespace localix;

namespace {

const Int kM = 4;

FinModule z(Int order, Int m = kM) { return FinModule::cyclic(m, order); }

std::set<Element> element_set(const Submodule& s) {
  const auto e = s.elements(1u << 16);
  return {e.begin(), e.end()};
}

// Brute-force oracle: all set maps M -> N, keeping the additive ones.
std::size_t count_additive_set_maps(const FinModule& m, const FinModule& n) {
  const auto xs = m.elements(64);
  const auto ys = n.elements(64);
  std::map<Element, std::size_t> index;
  for (std::size_t i = 0; i < xs.size(); ++i) index[xs[i]] = i;
  std::vector<std::size_t> table(xs.size(), 0);
  std::size_t count = 0;
  for (;;) {
    bool additive = true;
    for (std::size_t a = 0; a < xs.size() && additive; ++a)
      for (std::size_t b = 0; b < xs.size() && additive; ++b) {
        const std::size_t s = index.at(m.add(xs[a], xs[b]));
        additive = ys[table[s]] == n.add(ys[table[a]], ys[table[b]]);
      }
    count += additive;
    std::size_t i = 0;
    while (i < table.size() && ++table[i] == ys.size()) table[i++] = 0;
    if (i == table.size()) break;
  }
  return count;
}

// Brute-force oracle: subsets closed under addition (subgroups of a finite group).
std::size_t count_closed_subsets(const FinModule& m) {
  const auto xs = m.elements(16);
  std::size_t count = 0;
  for (std::uint32_t mask = 0; mask < (1u << xs.size()); ++mask) {
    if (!(mask & 1u)) continue;  // must contain zero (index 0)
    bool closed = true;
    for (std::size_t a = 0; a < xs.size() && closed; ++a)
      for (std::size_t b = 0; b < xs.size() && closed; ++b)
        if ((mask >> a & 1u) && (mask >> b & 1u))
          closed = mask >> m.index_of(m.add(xs[a], xs[b])) & 1u;
    count += closed;
  }
  return count;
}

std::vector<FinModule> small_modules(Int m) {
  std::vector<FinModule> out;
  std::vector<Int> divisors;
  for (Int d = 2; d <= m; ++d)
    if (m % d == 0) divisors.push_back(d);
  out.emplace_back(m);
  for (Int a : divisors) {
    out.emplace_back(m, std::vector<Int>{a});
    for (Int b : divisors)
      if (b % a == 0 && a * b <= 16) out.emplace_back(m, std::vector<Int>{a, b});
  }
  return out;
}

ModuleMap random_map(std::mt19937& rng, const FinModule& dom, const FinModule& cod) {
  const HomGroup h(dom, cod);
  std::uniform_int_distribution<std::uint64_t> pick(0, h.group().cardinality() - 1);
  return h.map_of(h.group().element_at(pick(rng)));
}

}  // namespace

TEST_CASE("FinModule validates its invariant factors") {
  CHECK_NOTHROW(FinModule(12, {2, 6}));
  CHECK_THROWS_AS(FinModule(12, {4, 6}), ValidationError);
  CHECK_THROWS_AS(FinModule(12, {8}), ValidationError);
  CHECK_THROWS_AS(FinModule(4, {1}), ValidationError);
  CHECK(FinModule(4).cardinality() == 1);
  CHECK(FinModule(12, {2, 6}).cardinality() == 12);
  const FinModule m(12, {2, 6});
  for (std::uint64_t i = 0; i < m.cardinality(); ++i) CHECK(m.index_of(m.element_at(i)) == i);
  CHECK_THROWS_AS(m.elements(11), SizeLimitError);
}

TEST_CASE("hom_group examples") {
  SUBCASE("Hom(Z/2, Z/4) = Z/2 with nonzero element 1 -> 2") {
    const HomGroup h(z(2), z(4));
    CHECK(h.group() == z(2));
    const ModuleMap f = h.map_of({1});
    CHECK(f({1}) == Element{2});
  }
  SUBCASE("Hom(Z/4, Z/4) = Z/4") { CHECK(HomGroup(z(4), z(4)).group() == z(4)); }
  SUBCASE("Hom(Z/2 + Z/2, Z/2) has 4 maps, matching set-map filtering") {
    const FinModule v(2, {2, 2});
    const HomGroup h(v, FinModule::cyclic(2, 2));
    CHECK(h.group() == FinModule(2, {2, 2}));
    CHECK(count_additive_set_maps(v, FinModule::cyclic(2, 2)) == 4);
  }
}

TEST_CASE("hom_group cardinality and round trip") {
  for (Int a : {2, 3, 4, 6, 12})
    for (Int b : {2, 3, 4, 6, 12})
      CHECK(HomGroup(z(a, 12), z(b, 12)).group().cardinality() == static_cast<std::uint64_t>(std::gcd(a, b)));

  for (Int m : {4, 6}) {
    const auto mods = small_modules(m);
    for (const auto& src : mods)
      for (const auto& dst : mods) {
        const HomGroup h(src, dst);
        if (src.cardinality() <= 8 && dst.cardinality() <= 6 &&
            std::pow(double(dst.cardinality()), double(src.cardinality())) <= 3e5)
          CHECK(h.group().cardinality() == count_additive_set_maps(src, dst));
        std::set<std::vector<Int>> maps;
        for (const auto& y : h.group().elements(4096)) {
          const ModuleMap f = h.map_of(y);
          CHECK(h.element_of(f) == y);
          std::vector<Int> flat;
          for (std::size_t r = 0; r < f.matrix().rows(); ++r)
            for (auto e : f.matrix().row(r)) flat.push_back(e);
          maps.insert(flat);
        }
        CHECK(maps.size() == h.group().cardinality());
      }
  }
}

TEST_CASE("kernel, image and preimage examples") {
  const FinModule m = z(4);
  const ModuleMap times2(m, m, IntMatrix({{2}}));
  const Submodule two = Submodule::span(m, {{2}});
  CHECK(kernel(times2) == two);
  CHECK(image(times2) == two);
  CHECK(element_set(kernel(times2)) == std::set<Element>{{0}, {2}});

  const ModuleMap id = ModuleMap::identity(m);
  CHECK(kernel(id).is_zero());
  CHECK(preimage(id, two) == two);

  const ModuleMap zero = ModuleMap::zero(m, m);
  CHECK(kernel(zero).is_whole());
  CHECK(image(zero).is_zero());

  CHECK_THROWS_AS(preimage(times2, Submodule(z(2))), PreconditionError);
}

TEST_CASE("quotient examples") {
  const FinModule m = z(4);
  const QuotientMap q = quotient(m, Submodule::span(m, {{2}}));
  CHECK(q.module == z(2));
  CHECK(kernel(q.projection) == Submodule::span(m, {{2}}));
  CHECK(image(q.projection).is_whole());

  const FinModule v(kM, {2, 4});
  const QuotientMap by_zero = quotient(v, Submodule(v));
  CHECK(by_zero.module == v);
  CHECK(kernel(by_zero.projection).is_zero());
  const QuotientMap by_all = quotient(v, Submodule::whole(v));
  CHECK(by_all.module.is_zero());
}

TEST_CASE("sum and intersect examples") {
  const FinModule v(2, {2, 2});
  const Submodule a = Submodule::span(v, {{1, 0}});
  const Submodule b = Submodule::span(v, {{0, 1}});
  CHECK(sum(a, b).is_whole());
  CHECK(intersect(a, a) == a);
  CHECK(intersect(a, b).is_zero());

  const FinModule m = z(4);
  const Submodule two = Submodule::span(m, {{2}});
  CHECK(sum(two, two) == two);
  CHECK(intersect(two, Submodule(m)).is_zero());
  CHECK_THROWS_AS(sum(two, a), PreconditionError);
}

TEST_CASE("subgroup enumeration examples") {
  CHECK(enumerate_subgroups(z(4)).size() == 3);
  const FinModule v(2, {2, 2});
  CHECK(enumerate_subgroups(v).size() == 5);
  CHECK(count_closed_subsets(v) == 5);
  CHECK(enumerate_subgroups(FinModule(4)).size() == 1);

  Bounds tight;
  tight.subgroups = 3;
  CHECK_THROWS_AS(enumerate_subgroups(v, tight), SizeLimitError);
}

TEST_CASE("subgroup enumeration matches closed-subset oracle") {
  for (Int m : {4, 6, 8}) {
    for (const auto& mod : small_modules(m)) {
      if (mod.cardinality() > 16) continue;
      const auto subs = enumerate_subgroups(mod);
      CHECK(subs.size() == count_closed_subsets(mod));
      CHECK(std::is_sorted(subs.begin(), subs.end()));
      // canonical form is a total equality test
      std::set<std::set<Element>> sets;
      for (const auto& s : subs) sets.insert(element_set(s));
      CHECK(sets.size() == subs.size());
    }
  }
}

TEST_CASE("submodule invariants on random data") {
  std::mt19937 rng(5);
  for (Int m : {4, 6, 8, 12}) {
    for (const auto& mod : small_modules(m)) {
      if (mod.cardinality() > 64) continue;
      const auto subs = enumerate_subgroups(mod);
      for (const auto& s : subs) {
        // canonical form idempotent; spanning by own generators reproduces it
        CHECK(Submodule::span(mod, s.generators()) == s);
        // |M/S| |S| = |M|
        const QuotientMap q = quotient(mod, s);
        CHECK(q.module.cardinality() * s.cardinality() == mod.cardinality());
        CHECK(kernel(q.projection) == s);
        for (std::size_t i = 0; i < q.lifts.size(); ++i) CHECK(q.projection(q.lifts[i]) == q.module.generator(i));
        // embedding presents S faithfully
        const Embedding e = embed(s);
        CHECK(e.module.cardinality() == s.cardinality());
        CHECK(image(e.inclusion) == s);
        CHECK(kernel(e.inclusion).is_zero());
        for (const auto& x : s.elements(64)) CHECK(e.inclusion(e.coordinates(x)) == x);
        // element sets agree with membership
        const auto members = element_set(s);
        for (const auto& x : mod.elements(64)) CHECK(s.contains(x) == (members.count(x) == 1));
      }
      for (std::size_t i = 0; i < subs.size(); ++i) {
        const auto& a = subs[i];
        const auto& b = subs[(i * 7 + 3) % subs.size()];
        const auto ea = element_set(a), eb = element_set(b);
        std::set<Element> meet;
        for (const auto& x : ea)
          if (eb.count(x)) meet.insert(x);
        CHECK(element_set(intersect(a, b)) == meet);
        const auto join = element_set(sum(a, b));
        for (const auto& x : ea)
          for (const auto& y : eb) CHECK(join.count(mod.add(x, y)) == 1);
        CHECK(join.size() * meet.size() == ea.size() * eb.size());
      }
      for (int t = 0; t < 10; ++t) {
        const auto others = small_modules(m);
        const FinModule& other = others[static_cast<std::size_t>(t) % others.size()];
        const ModuleMap f = random_map(rng, mod, other);
        const ModuleMap g = random_map(rng, other, mod);
        const ModuleMap gf = g * f;
        CHECK(kernel(f).is_subset_of(kernel(gf)));
        CHECK(image(gf).is_subset_of(image(g)));
        CHECK(kernel(f).is_subset_of(preimage(f, image(f))));
        CHECK(image(f).cardinality() * kernel(f).cardinality() == mod.cardinality());
        for (const auto& y : other.elements(64)) {
          const auto x = solve(f, y);
          CHECK(x.has_value() == image(f).contains(y));
          if (x) CHECK(f(*x) == y);
        }
      }
    }
  }
}

TEST_CASE("direct sums split") {
  const FinModule a(12, {2, 6}), b(12, {4});
  const DirectSum s = direct_sum(12, {a, b});
  CHECK(s.module.cardinality() == 48);
  CHECK(s.projections[0] * s.injections[0] == ModuleMap::identity(a));
  CHECK(s.projections[1] * s.injections[1] == ModuleMap::identity(b));
  CHECK(s.projections[1] * s.injections[0] == ModuleMap::zero(a, b));
  CHECK(s.injections[0] * s.projections[0] + s.injections[1] * s.projections[1] == ModuleMap::identity(s.module));
}

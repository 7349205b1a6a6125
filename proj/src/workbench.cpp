#include "localix/workbench.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "localix/errors.hpp"

namespace localix {

using json = nlohmann::ordered_json;

// ---- Report ------------------------------------------------------------------

void Report::add(const std::string& subject, const Verdict& v) {
  add(v.check, v.anchor, subject, v.passed, v.witness);
}

void Report::add(const std::string& subject, const LawReport& r) {
  add(r.law, r.anchor, subject, r.passed, r.passed ? std::string{} : r.describe());
}

void Report::add(std::string check, std::string anchor, std::string subject, bool passed, std::string witness) {
  if (!passed && witness.empty()) throw InternalDefect("failed check '" + check + "' without a witness");
  records.push_back({std::move(check), std::move(anchor), std::move(subject), passed, std::move(witness)});
}

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const Record& r) { return !r.passed; }));
}

const std::vector<std::string>& known_anchors() {
  static const std::vector<std::string> anchors{
      "§2.1",    "§3",      "§4",      "Eq. 2.1", "Eq. 2.2",  "Eq. 2.4",  "Eq. 2.5",  "Eq. 2.6",  "Eq. 2.7",
      "Eq. 3.1", "Eq. 3.2", "Eq. 3.5", "Eq. 4.1", "Eq. 4.2",  "Eq. 4.9",  "Eq. 4.12", "Prop 2.2", "Prop 3.1",
      "Thm 3.4", "Thm 3.7", "Thm 4.3", "Thm 4.4", "Thm 4.5",  "Lemma 4.1"};
  return anchors;
}

namespace {

// One record summarising many instances: passes until the first failure.
class Tally {
 public:
  Tally(std::string check, std::string anchor) : check_(std::move(check)), anchor_(std::move(anchor)) {}

  void note(bool passed, const std::function<std::string()>& witness) {
    ++instances_;
    if (!passed && passed_) {
      passed_ = false;
      witness_ = witness();
    }
  }
  void note(const Verdict& v, const std::string& where) {
    note(v.passed, [&] { return where + ": " + v.witness; });
  }
  void note(const LawReport& r, const std::string& where) {
    note(r.passed, [&] { return where + ": " + r.describe(); });
  }

  void emit(Report& report, const std::string& subject) const {
    report.add(check_, anchor_, subject + " [" + std::to_string(instances_) + " checked]", passed_, witness_);
  }

 private:
  std::string check_;
  std::string anchor_;
  std::size_t instances_ = 0;
  bool passed_ = true;
  std::string witness_;
};

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  return rows;
}

std::string derivation_label(std::size_t k) { return "d" + std::to_string(k); }
std::string filter_label(std::size_t k) { return "L" + std::to_string(k); }

class Runner {
 public:
  Runner(const Scenario& s, Report& report) : s_(s), a_(s.algebra), b_(s.bounds), report_(report) {}

  void validate() {
    report_.add("algebra", check_monad_laws(a_));
    const FreeModule free = free_module(a_, FinModule(a_.modulus(), {a_.modulus()}));
    report_.add("free module on k", check_em_module(a_, free.module));
    json ds = json::array();
    for (std::size_t k = 0; k < s_.derivations.size(); ++k) {
      const AlgebraDerivation& d = s_.derivations[k];
      report_.add(derivation_label(k), check_derivation(a_, d));
      report_.add(derivation_label(k) + " on A", check_module_derivation(a_, regular_module(a_), d, d.map));
      ds.push_back({{"label", derivation_label(k)}, {"matrix", matrix_json(d.map.matrix())}});
    }
    json ms = json::array();
    for (const auto& m : s_.modules) {
      report_.add(m.name, check_em_module(a_, m.module));
      ms.push_back({{"name", m.name},
                    {"invariant_factors", m.module.carrier().invariant_factors()},
                    {"cardinality", m.module.carrier().cardinality()}});
    }
    report_.results["algebra"] = {{"modulus", a_.modulus()}, {"rank", a_.rank()}, {"cardinality", a_.carrier().cardinality()}};
    report_.results["derivations"] = ds;
    report_.results["modules"] = ms;
  }

  void ideals() {
    const auto& is = left_ideals();
    const EMModule r = regular_module(a_);
    json out = json::array();
    Tally tally("left ideals are EM-submodules of A", "§3");
    for (const auto& i : is) {
      tally.note(is_em_submodule(r, i), [&] { return to_string(i); });
      out.push_back({{"ideal", to_string(i)}, {"cardinality", i.cardinality()}});
    }
    tally.emit(report_, "A");
    report_.results["ideals"] = out;
  }

  void filters() {
    const auto& fs = all_filters();
    json out = json::array();
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const FilterVerdict v = is_gabriel_filter(a_, fs[k].ideals(), b_);
      report_.add("Gabriel filter axioms", "Prop 2.2", filter_label(k), v.passed,
                  v.passed ? std::string{} : "axiom " + std::to_string(v.axiom) + ": " + v.witness);
      out.push_back({{"label", filter_label(k)}, {"ideals", to_string(fs[k])}, {"size", fs[k].size()}});
    }
    report_.results["filters"] = out;
    if (!s_.filter) {
      // oracle: every upward-closed collection of ideals, tested axiom by axiom
      std::vector<GabrielFilter> oracle;
      for (const auto& c : upward_closed_collections(left_ideals()))
        if (is_gabriel_filter(a_, c, b_)) oracle.emplace_back(a_, c, b_);
      std::sort(oracle.begin(), oracle.end(), [](const GabrielFilter& x, const GabrielFilter& y) {
        return x.ideals() < y.ideals();
      });
      std::vector<GabrielFilter> found = fs;
      std::sort(found.begin(), found.end(), [](const GabrielFilter& x, const GabrielFilter& y) {
        return x.ideals() < y.ideals();
      });
      report_.add("filter enumeration matches the axiom oracle", "Prop 2.2", "A", oracle == found,
                  oracle == found ? std::string{}
                                  : std::to_string(found.size()) + " enumerated, " + std::to_string(oracle.size()) +
                                        " by oracle");
    }
    report_.results["filter_count"] = fs.size();
  }

  void torsion() {
    const auto& fs = all_filters();
    json out = json::array();
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const GabrielFilter& f = fs[k];
      const std::string fl = filter_label(k);
      json classes = json::array();
      for (std::size_t mk = 0; mk < s_.modules.size(); ++mk) {
        const NamedModule& m = s_.modules[mk];
        report_.add(fl + " | " + m.name, check_radical_invariants(a_, f, m.module, b_));
        const Submodule& rad = radical(k, mk);
        const TorsionClass kind =
            rad.is_whole() ? TorsionClass::Torsion : rad.is_zero() ? TorsionClass::TorsionFree : TorsionClass::Mixed;
        classes.push_back({{"module", m.name}, {"radical", to_string(rad)}, {"class", to_string(kind)}});
      }
      const GabrielFilter back = gabriel_filter_of_radical(
          a_, [&](const EMModule& m) { return torsion_radical(a_, m, f, b_); }, b_);
      report_.add("filter to radical to filter", "Eq. 2.7", fl, back == f,
                  back == f ? std::string{} : "recovered " + to_string(back));
      out.push_back({{"filter", fl}, {"modules", classes}});

      for (std::size_t dk = 0; dk < s_.derivations.size(); ++dk) {
        const AlgebraDerivation& d = s_.derivations[dk];
        const std::string cell = fl + " | " + derivation_label(dk);
        report_.add(cell, check_delta_invariance(a_, d, f, b_));
        Tally routes("literal and largest-ideal J agree", "Eq. 3.2");
        for (const auto& i : f.ideals()) {
          const Submodule lit = delta_invariant_J_literal(a_, i, d, b_);
          const Submodule fast = delta_invariant_J_fast(a_, i, d);
          routes.note(lit == fast, [&] { return "I = " + to_string(i) + ": " + to_string(lit) + " vs " + to_string(fast); });
        }
        routes.emit(report_, cell);
        for (std::size_t mk = 0; mk < s_.modules.size(); ++mk) {
          const NamedModule& m = s_.modules[mk];
          Tally diff("differential", "Thm 3.7");
          const auto& ds = derivations(m.module, dk);
          const Submodule& rad = radical(k, mk);
          for (std::size_t n = 0; n < ds.size(); ++n)
            diff.note(check_differential(a_, rad, m.module, d, ds[n]), "D#" + std::to_string(n));
          diff.emit(report_, cell + " | " + m.name);
        }
      }
    }
    report_.results["torsion"] = out;
  }

  void localize() {
    const auto& fs = all_filters();
    json out = json::array();
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const std::string fl = filter_label(k);
      for (const auto& m : s_.modules) {
        const QuotientModule& q = quotient(k, m);
        const std::string cell = fl + " | " + m.name;
        report_.add(cell, check_quotient_invariants(q, b_));
        const ColimitHom colimit = colimit_hom(a_, q.filter, q.torsion_free.module, b_);
        report_.add(cell, check_colimit_isomorphism(q, colimit, b_));
        out.push_back({{"filter", fl},
                       {"module", m.name},
                       {"radical", to_string(q.radical)},
                       {"I_min", to_string(q.ideal)},
                       {"carrier", to_string(q.carrier.carrier())},
                       {"colimit_classes", colimit.class_count},
                       {"phi_kernel", to_string(kernel(q.phi))},
                       {"phi_image", to_string(image(q.phi))}});
      }
      for (const auto& seq : sequences()) {
        const std::string cell = fl + " | " + seq.name;
        const Verdict exact = check_exact(a_, seq);
        report_.add(cell, exact);
        if (exact) report_.add(cell, check_H_left_exact(a_, seq, fs[k], b_));
      }
    }
    report_.results["localizations"] = out;
  }

  void extend() {
    const auto& fs = all_filters();
    const bool choice = left_ideals().size() <= 8;
    json out = json::array();
    for (std::size_t k = 0; k < fs.size(); ++k)
      for (const auto& m : s_.modules) {
        const QuotientModule& q = quotient(k, m);
        const bool torsion_free = q.radical.is_zero();
        std::optional<ColimitHom> colimit;
        if (choice) colimit.emplace(colimit_hom(a_, q.filter, q.torsion_free.module, b_));
        for (std::size_t dk = 0; dk < s_.derivations.size(); ++dk) {
          const AlgebraDerivation& d = s_.derivations[dk];
          const std::string cell = filter_label(k) + " | " + m.name + " | " + derivation_label(dk);
          Tally law("extension is a derivation", "Thm 4.3");
          Tally lift("lift square", torsion_free ? "Eq. 4.9" : "Eq. 4.12");
          Tally unique("unique lift equals the extension", torsion_free ? "Thm 4.4" : "Thm 4.5");
          Tally agree("direct and quotient routes agree", "Thm 4.4");
          Tally j_choice("extension independent of J", "Lemma 4.1");
          const auto& ds = derivations(m.module, dk);
          const auto& carrier_ds = derivations(q.carrier, dk);
          for (std::size_t n = 0; n < ds.size(); ++n) {
            const std::string where = "D#" + std::to_string(n);
            const ModuleDerivation ext = extend_derivation_general(q, d, ds[n]);
            law.note(check_module_derivation(a_, q.carrier, d, ext.map), where);
            lift.note(check_lift(q, ds[n], ext, b_), where);
            const LiftCount lc = verify_unique_lift(q, carrier_ds, ds[n], ext);
            unique.note(lc.count == 1 && lc.matches_extension, [&] {
              return where + ": " + std::to_string(lc.count) + " lifts" +
                     (lc.matches_extension ? "" : ", none equal to the extension");
            });
            if (torsion_free) {
              const bool same = extend_derivation(q, d, ds[n]) == ext;
              agree.note(same, [&] { return where; });
            }
            if (colimit)
              j_choice.note(check_extension_choice(q, *colimit, d, induced_derivation(q, ds[n]), ext, b_), where);
          }
          law.emit(report_, cell);
          lift.emit(report_, cell);
          unique.emit(report_, cell);
          if (torsion_free) agree.emit(report_, cell);
          if (choice) j_choice.emit(report_, cell);
          out.push_back({{"cell", cell}, {"derivations", ds.size()}, {"carrier", to_string(q.carrier.carrier())}});
        }
      }
    report_.results["extensions"] = out;
    report_.results["J_choice_checked"] = choice;
  }

  void adjunction() {
    std::size_t pairs = 0;
    for (const auto& base : s_.modules) {
      if (base.module.carrier().cardinality() > 64) continue;
      Tally t("adjunction bijection", "Eq. 2.4");
      for (const auto& target : s_.modules) {
        if (target.module.carrier().cardinality() > 64) continue;
        ++pairs;
        t.note(check_adjunction(a_, base.module.carrier(), target.module, b_), "N = " + target.name);
      }
      t.emit(report_, "M0 = " + base.name);
    }
    report_.results["adjunction_pairs"] = pairs;
  }

  void generators() {
    const EMModule r = regular_module(a_);
    for (const auto& m : s_.modules) {
      Tally t("morphism from UG escapes each proper submodule", "Prop 3.1");
      for (const auto& n : enumerate_em_submodules(m.module, b_)) {
        if (n.is_whole()) continue;
        const ModuleMap g = check_generator_instance(a_, m.module, n);
        const LawReport linear = check_em_morphism(a_, r, m.module, g);
        t.note(linear.passed && !image(g).is_subset_of(n), [&] {
          return "N = " + to_string(n) + (linear.passed ? ": image inside N" : ": " + linear.describe());
        });
      }
      t.emit(report_, m.name);
    }
  }

  void free_exactness() {
    for (const auto& seq : sequences()) report_.add(seq.name, check_free_exact(a_, seq.f, seq.g));
  }

 private:
  // keyed by the module's carrier and actions, so equal modules share one solve
  const std::vector<ModuleDerivation>& derivations(const EMModule& m, std::size_t dk) {
    auto key = std::make_pair(dk, std::vector<Int>{});
    key.second.push_back(static_cast<Int>(m.carrier().rank()));
    for (Int f : m.carrier().invariant_factors()) key.second.push_back(f);
    for (const auto& act : m.actions())
      for (Int x : flatten(act)) key.second.push_back(x);
    auto it = derivations_.find(key);
    if (it == derivations_.end())
      it = derivations_.emplace(key, enumerate_module_derivations(a_, m, s_.derivations[dk], b_)).first;
    return it->second;
  }

  const Submodule& radical(std::size_t filter, std::size_t module) {
    const auto key = std::make_pair(filter, module);
    auto it = radicals_.find(key);
    if (it == radicals_.end())
      it = radicals_.emplace(key, torsion_radical(a_, s_.modules[module].module, all_filters()[filter], b_)).first;
    return it->second;
  }

  const std::vector<Submodule>& left_ideals() {
    if (!ideals_) ideals_ = enumerate_left_ideals(a_, b_);
    return *ideals_;
  }

  const std::vector<GabrielFilter>& all_filters() {
    if (!filters_) filters_ = s_.filter ? std::vector<GabrielFilter>{*s_.filter} : enumerate_gabriel_filters(a_, b_);
    return *filters_;
  }

  const std::vector<ShortExactSequence>& sequences() {
    if (!sequences_) sequences_ = standard_sequences(a_, b_);
    return *sequences_;
  }

  const QuotientModule& quotient(std::size_t filter, const NamedModule& m) {
    const auto key = std::make_pair(filter, m.name);
    auto it = quotients_.find(key);
    if (it == quotients_.end())
      it = quotients_.emplace(key, module_of_quotients(a_, m.module, all_filters()[filter], b_)).first;
    return it->second;
  }

  const Scenario& s_;
  const Algebra& a_;
  const Bounds& b_;
  Report& report_;
  std::optional<std::vector<Submodule>> ideals_;
  std::optional<std::vector<GabrielFilter>> filters_;
  std::optional<std::vector<ShortExactSequence>> sequences_;
  std::map<std::pair<std::size_t, std::string>, QuotientModule> quotients_;
  std::map<std::pair<std::size_t, std::vector<Int>>, std::vector<ModuleDerivation>> derivations_;
  std::map<std::pair<std::size_t, std::size_t>, Submodule> radicals_;
};

}  // namespace

Report run(const std::string& command, const Scenario& scenario) {
  if (std::find(commands().begin(), commands().end(), command) == commands().end())
    throw PreconditionError("unknown command '" + command + "'");
  Report report{scenario.name, command, {}, json::object()};
  Runner r(scenario, report);
  if (command == "validate" || command == "verify-all") r.validate();
  if (command == "ideals" || command == "verify-all") r.ideals();
  if (command == "filters" || command == "verify-all") r.filters();
  if (command == "torsion" || command == "verify-all") r.torsion();
  if (command == "localize" || command == "verify-all") r.localize();
  if (command == "extend" || command == "verify-all") r.extend();
  if (command == "verify-all") {
    r.adjunction();
    r.generators();
    r.free_exactness();
  }
  for (const auto& rec : report.records)
    if (std::find(known_anchors().begin(), known_anchors().end(), rec.anchor) == known_anchors().end())
      throw InternalDefect("record '" + rec.check + "' carries unknown anchor '" + rec.anchor + "'");
  return report;
}

std::string render_json(const Report& report) {
  json records = json::array();
  for (const auto& r : report.records) {
    json j{{"check", r.check}, {"anchor", r.anchor}, {"subject", r.subject}, {"status", r.passed ? "pass" : "fail"}};
    if (!r.passed) j["witness"] = r.witness;
    records.push_back(j);
  }
  json out{{"schema", kReportSchema},
           {"scenario", report.scenario},
           {"command", report.command},
           {"summary",
            {{"checks", report.records.size()},
             {"passed", report.records.size() - report.failures()},
             {"failed", report.failures()}}},
           {"results", report.results},
           {"records", records}};
  return out.dump(2) + "\n";
}

std::string render_text(const Report& report) {
  std::ostringstream os;
  os << "scenario " << report.scenario << ", command " << report.command << "\n";
  for (const auto& r : report.records) {
    os << (r.passed ? "PASS" : "FAIL") << "  " << r.anchor << "  " << r.check << "  " << r.subject;
    if (!r.passed) os << "\n      witness: " << r.witness;
    os << "\n";
  }
  os << report.records.size() << " checks, " << report.records.size() - report.failures() << " passed, "
     << report.failures() << " failed\n";
  return os.str();
}

}  // namespace localix

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "localix/errors.hpp"
#include "localix/workbench.hpp"

namespace {

enum Exit { kPass = 0, kViolation = 1, kInput = 2, kBound = 3 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torsion theories, modules of quotients and derivations over finite algebras"};
  app.require_subcommand(1, 1);

  std::string scenario_path;
  std::optional<std::uint64_t> bound_elements;
  std::optional<std::uint64_t> bound_ideals;
  std::string format = "json";
  std::string out_path;

  for (const auto& name : localix::commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--scenario", scenario_path, "scenario file, or builtin:<name>")->required();
    sub->add_option("--bound-elements", bound_elements, "max cardinality for element enumeration");
    sub->add_option("--bound-ideals", bound_ideals, "max cardinality for submodule lattices");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", out_path, "write the report here instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInput;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    localix::Scenario scenario = localix::load_scenario(scenario_path);
    if (bound_elements) scenario.bounds.elements = *bound_elements;
    if (bound_ideals) scenario.bounds.subgroups = *bound_ideals;
    const localix::Report report = localix::run(command, scenario);
    const std::string text = format == "json" ? localix::render_json(report) : localix::render_text(report);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!(out << text)) {
        std::cerr << "localix: cannot write " << out_path << "\n";
        return kInput;
      }
      std::cerr << report.records.size() << " checks, " << report.failures() << " failed\n";
    }
    return report.failures() == 0 ? kPass : kViolation;
  } catch (const localix::SizeLimitError& e) {
    std::cerr << "localix: " << e.what() << "\n";
    return kBound;
  } catch (const localix::ValidationError& e) {
    std::cerr << "localix: validation error [" << e.anchor() << "]: " << e.what() << "\n";
    return kInput;
  } catch (const localix::ParseError& e) {
    std::cerr << "localix: parse error: " << e.what() << "\n";
    return kInput;
  } catch (const localix::PreconditionError& e) {
    std::cerr << "localix: " << e.what() << "\n";
    return kInput;
  } catch (const localix::InternalDefect& e) {
    std::cerr << "localix: internal defect: " << e.what() << "\n";
    return kViolation;
  }
}

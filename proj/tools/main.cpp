#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "haantjes/commands.hpp"

namespace {

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    p.push_back(v);
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace haantjes;
  CLI::App app{"Certify Haantjes structures and simulate their hydrodynamic flows"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  CheckCommand check;
  int points = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  auto* c = app.add_subcommand("check", "Certify a manifest or packaged scenario");
  c->add_option("manifest", check.manifest, "Manifest path or scenario name")->required();
  auto* o_points = c->add_option("--points", points, "Sample points (default 50)")->check(CLI::PositiveNumber);
  auto* o_seed = c->add_option("--seed", seed, "Sampling seed (default 42)");
  auto* o_tol = c->add_option("--tol", tol, "Relative tolerance (default 1e-8)")->check(CLI::PositiveNumber);
  c->add_option("--only", check.options.only, "Check-id prefixes to run")->delimiter(',');
  c->add_option("--report", check.report_path, "Write the JSON report here ('-' prints it instead of the table)");
  c->add_flag("--timing", check.timing, "Include timings in the JSON report");

  TorsionCommand torsion;
  std::string at;
  auto* t = app.add_subcommand("torsion", "Print Nijenhuis, Haantjes or Yano-Ako components at a point");
  t->add_option("manifest", torsion.manifest, "Manifest path or scenario name")->required();
  t->add_option("--field", torsion.field, "Field name")->required();
  t->add_option("--kind", torsion.kind, "nijenhuis | haantjes | yano-ako")
      ->check(CLI::IsMember({"nijenhuis", "haantjes", "yano-ako"}));
  t->add_option("--at", at, "Comma-separated point (default: chart base point)");
  t->add_flag("--enforce-pre", torsion.enforce_pre, "Reject C that is not symmetric and associative");
  auto* t_tol = t->add_option("--tol", tol, "Precondition tolerance (default 1e-8)");

  SimulateCommand sim;
  std::vector<int> pair;
  auto* s = app.add_subcommand("simulate", "Integrate u_t = K_j(u) u_x on a periodic grid");
  s->add_option("manifest", sim.manifest, "Manifest path or scenario name")->required();
  s->add_option("--flow", sim.flow, "Operator index j (1-based)");
  s->add_option("--grid", sim.grid, "Grid points");
  s->add_option("--dt", sim.dt, "Time step");
  s->add_option("--steps", sim.steps, "Number of steps");
  s->add_option("--every", sim.every, "Output interval in steps (default steps/10)");
  s->add_option("--out", sim.out_path, "CSV output path (default stdout)");
  s->add_option("--pair", pair, "Commuting-flow study for two operator indices")->expected(2);
  s->add_option("--spatial", sim.spatial, "cd4 | fourier")->check(CLI::IsMember({"cd4", "fourier"}));

  app.add_subcommand("scenarios", "List packaged scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitManifest;
  }

  if (c->parsed()) {
    if (*o_points) check.options.points = points;
    if (*o_seed) check.options.seed = seed;
    if (*o_tol) check.options.tol = tol;
    return cmd_check(check, std::cout, std::cerr);
  }
  if (t->parsed()) {
    if (!at.empty()) {
      try {
        torsion.at = parse_point(at);
      } catch (const std::exception&) {
        std::cerr << "error: --at expects comma-separated numbers, got '" << at << "'\n";
        return kExitManifest;
      }
    }
    if (*t_tol) torsion.tol = tol;
    return cmd_torsion(torsion, std::cout, std::cerr);
  }
  if (s->parsed()) {
    if (!pair.empty()) sim.pair = std::make_pair(pair[0], pair[1]);
    return cmd_simulate(sim, std::cout, std::cerr);
  }
  return cmd_scenarios(std::cout);
}

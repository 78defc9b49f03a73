#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qeo/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quasi-expectation operators: Bernstein-cone dice LPs and bosonic witness hierarchies"};
  app.require_subcommand(1);

  qeo::cli::RunConfig cfg;
  std::string g;
  std::string witness;
  std::string table;
  int rmin = 0;
  int rmax = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_path, "Output file (default: stdout)");
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  };
  const auto add_poly = [&](CLI::App* sub) {
    sub->add_option("--g", g, "Polynomial in th1..thK, e.g. \"th1^2 - th1*th2 + 0.05\"");
    sub->add_option("--k", cfg.k, "Number of die faces")->capture_default_str();
  };
  const auto add_range = [&](CLI::App* sub) {
    sub->add_option("--rmin", rmin, "First level");
    sub->add_option("--rmax", rmax, "Last level");
  };

  auto* dice_example = app.add_subcommand("dice-example", "Lower prevision of g and its extremal quasi-expectation");
  add_poly(dice_example);
  dice_example->add_option("--rmin,--r", rmin, "Level r (default: degree of g)");
  add_common(dice_example);

  auto* dice_sweep = app.add_subcommand("dice-sweep", "Lower previsions of g for r = rmin..rmax (CSV)");
  add_poly(dice_sweep);
  add_range(dice_sweep);
  add_common(dice_sweep);

  auto* signed_measure = app.add_subcommand("signed-measure", "Signed-measure representation of an exchangeable table");
  signed_measure->add_option("--table", table, "Probability table JSON (default: pair exclusion)");
  signed_measure->add_option("--grid", cfg.grid, "Grid resolution for atoms")->capture_default_str();
  signed_measure->add_option("--k", cfg.k, "Faces for the default table")->capture_default_str();
  add_common(signed_measure);

  auto* quantum_witness = app.add_subcommand("quantum-witness", "Spectrum and extremal state of a witness");
  quantum_witness->add_option("--witness", witness, "Witness matrix JSON (default: built-in witness)");
  add_common(quantum_witness);

  auto* quantum_sweep = app.add_subcommand("quantum-sweep", "Bosonic witness hierarchy for r = rmin..rmax (CSV)");
  quantum_sweep->add_option("--witness", witness, "Witness matrix JSON (default: built-in witness)");
  add_range(quantum_sweep);
  add_common(quantum_sweep);

  auto* gleason = app.add_subcommand("gleason", "Outcome probabilities in orthonormal bases");
  add_common(gleason);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qeo::cli::kExitParse;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (!g.empty()) cfg.polynomial = g;
  if (!witness.empty()) cfg.witness_path = witness;
  if (!table.empty()) cfg.table_path = table;
  const auto given = [&](const char* name) {
    const CLI::Option* opt = chosen->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--rmin")) cfg.r_min = rmin;
  if (given("--rmax")) cfg.r_max = rmax;

  return qeo::cli::run(cfg, std::cout, std::cerr);
}

// qpragma: command-line front end.
//
//   qpragma eval      --model M --state S FORMULA
//   qpragma validity  --model M FORMULA
//   qpragma decide    --model M FORMULA
//   qpragma quotient  --model M --depth D [--properties a,b] [--format dot|json]
//   qpragma axioms    --model M --seed N [--trials T]
//   qpragma model-check --model M

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace qpragma::cli;

  CLI::App app{"Pragmatic quantum-logic workbench"};
  app.require_subcommand(1);
  // Global options may follow the subcommand.
  app.fallthrough();

  RunConfig cfg;
  std::string formula;

  app.add_option("--model", cfg.model_path, "Model JSON file, or 'qubit' / 'qutrit'")
      ->default_val("qubit");
  auto* tol = app.add_option("--tol", cfg.tolerance, "Tolerance for rank and inclusion tests");
  app.add_option("--seed", cfg.seed, "Random seed")->default_val(0);
  app.add_option("--depth", cfg.max_depth, "Maximum formula depth")->default_val(3);
  app.add_option("--format", cfg.output_format, "Output format")
      ->check(CLI::IsMember({"text", "json", "dot"}))
      ->default_val("text");
  app.add_option("--state", cfg.state, "State: vector:[re,im;...] or ray-of:<property>");
  app.add_option("--trials", cfg.trials, "Instances per axiom schema")->default_val(200);
  app.add_option("--properties", cfg.properties, "Restrict enumeration to these properties")
      ->delimiter(',');

  auto* eval = app.add_subcommand("eval", "Justification value of a formula at a state");
  eval->add_option("formula", formula)->required();
  auto* validity = app.add_subcommand("validity", "p-valid, p-invalid or contingent");
  validity->add_option("formula", formula)->required();
  auto* decide = app.add_subcommand("decide", "Decidability with criterion trace");
  decide->add_option("formula", formula)->required();
  auto* quotient = app.add_subcommand("quotient", "Quotient lattice of A-free formulas");
  auto* axioms = app.add_subcommand("axioms", "Verify axiom schemata and search counterexamples");
  auto* model_check = app.add_subcommand("model-check", "Validate a model file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.tolerance_set = tol->count() > 0;

  return guarded(std::cerr, [&] {
    cfg.validate();
    if (*eval) return cmd_eval(cfg, formula, std::cout);
    if (*validity) return cmd_validity(cfg, formula, std::cout);
    if (*decide) return cmd_decide(cfg, formula, std::cout);
    if (*quotient) return cmd_quotient(cfg, std::cout);
    if (*axioms) return cmd_axioms(cfg, std::cout);
    if (*model_check) return cmd_model_check(cfg, std::cout);
    return kExitUsage;
  });
}

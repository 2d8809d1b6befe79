// polytoep: batch checks, decompositions and factorizations of Toeplitz
// operators with matrix Laurent-polynomial symbols.

#include <fstream>
#include <iostream>
#include <malloc.h>

#include "CLI11.hpp"
#include "polytoep/cli.hpp"
#include "polytoep/errors.hpp"

int main(int argc, char** argv) {
  // Large window matrices: avoid an mmap round trip per allocation.
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
  polytoep::JobConfig cfg;
  cfg.degree = polytoep::default_degree();

  CLI::App app{"Toeplitz operators with matrix Laurent-polynomial symbols on the polydisc"};
  app.require_subcommand(1, 1);
  app.add_option("-D,--degree", cfg.degree, "Truncation degree per variable (env POLYTOEP_DEGREE)")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", cfg.tol, "Operator-level tolerance")->check(CLI::PositiveNumber);
  app.add_option("--samples", cfg.samples, "Random sample count")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--out", cfg.output, "Write the report here instead of stdout");

  struct Sub {
    const char* name;
    const char* help;
    const char* inputs;
  };
  const Sub subs[] = {
      {"check-toeplitz", "Brown-Halmos test of T_Phi", "PHI"},
      {"check-product", "Coefficient, point and truncation tests for M_Gamma M_Psi^*", "GAMMA PSI"},
      {"decompose", "Signed elementary Toeplitz terms of M_Gamma M_Psi^*", "GAMMA PSI"},
      {"classify", "Isometry / unitary / partial isometry / hyponormal / normal battery", "PHI"},
      {"factor", "Inner factorization T = M_Gamma M_Psi^* of T_Phi or of M_Gamma M_Psi^*",
       "PHI | GAMMA PSI"},
      {"selftest", "Built-in example suite", ""},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    if (*s.inputs) sub->add_option("inputs", cfg.inputs, s.inputs)->required()->check(CLI::ExistingFile);
    sub->callback([&cfg, &s] { cfg.subcommand = s.name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    polytoep::JobResult res = polytoep::run(cfg);
    std::string text = polytoep::render_report(res.report);
    if (cfg.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.output);
      if (!out) {
        std::cerr << "polytoep: cannot write " << cfg.output << "\n";
        return 2;
      }
      out << text;
    }
    return res.exit_code;
  } catch (const polytoep::Error& e) {
    std::cerr << "polytoep: " << e.what() << "\n";
    return 2;
  }
}

#include "blkit/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv) {
  using blkit::cli::Command;
  CLI::App app{"Brascamp-Lieb constants, certificates and checks"};
  app.require_subcommand(1, 1);

  Command cmd;
  std::string output;
  std::uint64_t seed = 0;
  int threads = 0, restarts = 0;
  std::size_t budget = 0;
  double delta = 0, epsilon = 0, certify = 0;

  const std::map<std::string, std::string> about = {
      {"compute", "BL constant of a linear datum"},
      {"classify", "finiteness verdict only"},
      {"expsum-min", "infimum of an exponential sum"},
      {"dualize", "compare a subspace datum with its dual"},
      {"young", "sharp Young constant for exponents q"},
      {"convolution", "datum of a nonlinear convolution inequality"},
      {"verify-nonlinear", "check the local nonlinear inequality on a delta schedule"},
      {"holder", "perturbation table for the constant"},
  };
  for (const std::string& verb : blkit::cli::verbs()) {
    CLI::App* sub = app.add_subcommand(verb, about.at(verb));
    sub->add_option("--input,-i", cmd.input, "input JSON file")->required();
    sub->add_option("--output,-o", output, "report path (default: stdout)");
    sub->add_option("--seed", seed, "seed for restarts and sampling");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--restarts", restarts, "optimiser restarts")->check(CLI::PositiveNumber);
    sub->add_option("--budget", budget, "expansion subset budget");
    sub->add_option("--delta", delta, "near-minimiser accuracy (expsum-min)");
    sub->add_option("--epsilon", epsilon, "slack in (1 + epsilon) BL (verify-nonlinear)");
    sub->add_option("--certify", certify, "near-extremiser accuracy (compute)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : blkit::cli::kInputError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  cmd.verb = sub->get_name();
  if (sub->count("--seed")) cmd.seed = seed;
  if (sub->count("--threads")) cmd.threads = threads;
  if (sub->count("--restarts")) cmd.restarts = restarts;
  if (sub->count("--budget")) cmd.budget = budget;
  if (sub->count("--delta")) cmd.delta = delta;
  if (sub->count("--epsilon")) cmd.epsilon = epsilon;
  if (sub->count("--certify")) cmd.certify = certify;
  if (const char* env = std::getenv("BLKIT_CONFIG")) cmd.config_file = env;

  const blkit::cli::RunResult result = blkit::cli::run(cmd);
  const std::string text = blkit::cli::render(result.report);
  if (sub->count("--output")) {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "cannot write " << output << "\n";
      return blkit::cli::kInputError;
    }
    out << text;
  } else {
    std::cout << text;
  }
  if (result.report.contains("error")) std::cerr << result.report["error"]["message"].get<std::string>() << "\n";
  return result.exit_code;
}

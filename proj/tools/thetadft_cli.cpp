// thetadft: evaluate theta functions and DFT eigenstates, run verification suites.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "thetadft/cli_runner.hpp"

namespace {

using thetadft::Command;
using thetadft::OutputFormat;
using thetadft::RunConfig;

void add_common(CLI::App* sub, RunConfig& cfg, std::string& output) {
  sub->add_option("--tol", cfg.tol, "residual tolerance (default 1e-9, or THETA_DFT_TOL)");
  const std::map<std::string, OutputFormat> formats{
      {"json", OutputFormat::json}, {"csv", OutputFormat::csv}, {"text", OutputFormat::text}};
  sub->add_option("--format", cfg.format, "json | csv | text")->transform(CLI::CheckedTransformer(formats));
  sub->add_option("--output", output, "write results to this file instead of stdout");
}

void add_state(CLI::App* sub, RunConfig& cfg, bool with_xi) {
  sub->add_option("--N", cfg.N, "DFT size")->check(CLI::PositiveNumber);
  sub->add_option("--n", cfg.n, "Hermite index")->check(CLI::NonNegativeNumber);
  if (with_xi) sub->add_option("--xi", cfg.xi, "width")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  cfg.tol = thetadft::default_tolerance();
  std::string output;

  CLI::App app{"Jacobi theta functions and discrete Fourier transform eigenstates"};
  app.require_subcommand(1);

  auto* theta = app.add_subcommand("theta", "theta3, theta4, theta2 at (z, tau)");
  theta->add_option("--z", cfg.z_re, "Re z");
  theta->add_option("--z-im", cfg.z_im, "Im z");
  theta->add_option("--tau-re", cfg.tau_re, "Re tau");
  theta->add_option("--tau-im", cfg.tau_im, "Im tau (> 0)");
  theta->add_option("--order", cfg.order, "also print the order-p z-derivative of theta3")
      ->check(CLI::Range(0, thetadft::kMaxDerivativeOrder));

  auto* eig = app.add_subcommand("eigenstate", "components f_n(j), j = 0..N-1");
  add_state(eig, cfg, true);
  eig->add_option("--repr", cfg.representation, "direct | dual | theta-taylor | width")
      ->check(CLI::IsMember({"direct", "dual", "theta-taylor", "width"}));

  auto* dft = app.add_subcommand("dft-check", "residual of DFT f_n = i^n f_n (or its width form)");
  add_state(dft, cfg, true);

  auto* gram = app.add_subcommand("gram", "normalized Gram matrix with closed-form cross-check");
  gram->add_option("--N", cfg.N, "DFT size")->check(CLI::PositiveNumber);
  gram->add_option("--index-max", cfg.index_max, "largest eigenstate index")->check(CLI::Range(0, 12));

  auto* sweep = app.add_subcommand("sweep", "normalized inner products over a range of N");
  sweep->add_option("--n-min", cfg.N_min, "smallest N")->check(CLI::PositiveNumber);
  sweep->add_option("--n-max", cfg.N_max, "largest N")->check(CLI::PositiveNumber);
  sweep->add_option("--index-max", cfg.index_max, "largest eigenstate index")->check(CLI::Range(0, 12));

  auto* ids = app.add_subcommand("identities", "theta identity residual suite");
  std::vector<std::string> suites = thetadft::identity_suite_names();
  suites.push_back("all");
  ids->add_option("--suite", cfg.suite, "identity name or 'all'")->check(CLI::IsMember(suites));

  auto* two = app.add_subcommand("twovar", "two-variable state checks");
  add_state(two, cfg, false);
  two->add_option("--m", cfg.m, "first Hermite index")->check(CLI::NonNegativeNumber);

  const std::map<CLI::App*, Command> commands{
      {theta, Command::theta}, {eig, Command::eigenstate}, {dft, Command::dft_check},
      {gram, Command::gram},   {sweep, Command::sweep},    {ids, Command::identities},
      {two, Command::twovar}};
  for (const auto& [sub, cmd] : commands) add_common(sub, cfg, output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cout, std::cerr);
    return 2;
  }

  for (const auto& [sub, cmd] : commands)
    if (sub->parsed()) cfg.command = cmd;
  if (!output.empty()) cfg.output_path = output;
  return thetadft::run(cfg, std::cout, std::cerr);
}

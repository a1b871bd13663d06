#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "tomokin/cli/runner.hpp"

namespace {

using namespace tomokin::cli;

int report(const RunResult& r) {
  for (const auto& f : r.files) std::cout << "wrote " << f.string() << '\n';
  if (!r.report.empty()) std::cout << '\n' << r.report;
  if (r.exit_code == kSuccess)
    std::cout << '\n' << r.message << '\n';
  else
    std::cerr << "error: " << r.message << '\n';
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symplectic tomography of classical phase-space densities"};
  app.require_subcommand(1);
  app.fallthrough();

  RunOptions opt;
  if (const char* env = std::getenv("TOMOKIN_OUT_DIR")) opt.out_dir = env;
  std::string out_dir;
  app.add_option("--out-dir", out_dir, "Artifact directory (env TOMOKIN_OUT_DIR)");
  app.add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tolerance-scale", opt.tolerance_scale, "Multiplies every tolerance")
      ->check(CLI::PositiveNumber);

  std::string target;
  auto* run = app.add_subcommand("run", "Run a scenario file or a preset by name");
  run->add_option("scenario", target, "Scenario YAML path or preset name")->required();
  auto* verify = app.add_subcommand("verify", "Run a preset and check its tolerances");
  verify->add_option("preset", target, "Preset name")->required();
  auto* list = app.add_subcommand("list-presets", "List the built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kParseFailure;
  }
  if (!out_dir.empty()) opt.out_dir = out_dir;

  if (list->parsed()) {
    for (const auto& p : presets()) std::cout << p.name << "  " << p.description << '\n';
    return kSuccess;
  }
  if (verify->parsed()) {
    const Preset* p = find_preset(target);
    if (!p) {
      std::cerr << "error: no preset named '" << target << "'\n";
      return kParseFailure;
    }
    return report(run_text(p->yaml, opt));
  }
  return report(run_path_or_preset(target, opt));
}

// decolab command-line front end.
//
//   decolab run -c <config.json> -o <dir>
//   decolab validate -c <config.json>
//   decolab demo <name> [-o <dir>]
//
// Exit codes: 0 ok, 1 validation error, 2 runtime error.

#include "decolab/experiment.hpp"
#include "demo_configs.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace ex = decolab::experiment;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

void print_diagnostics(const std::vector<ex::Diagnostic> &diags) {
  for (const auto &d : diags)
    std::cerr << d.path << ": " << d.message << '\n';
}

int execute(const ex::ExperimentConfig &cfg, const std::string &out_dir) {
  try {
    const auto rr = ex::run(cfg, out_dir);
    std::cout << rr.report.at("results").dump(2) << '\n';
    std::cout << "wrote " << rr.manifest.size() << " files to " << out_dir << '\n';
    return kOk;
  } catch (const ex::ValidationError &e) {
    print_diagnostics(e.diagnostics);
    return kInvalid;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Decoherence and contraction experiments"};
  app.set_version_flag("--version", std::string(ex::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto *run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("-c,--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("-o,--out", out_dir, "Output directory")->required();

  auto *validate = app.add_subcommand("validate", "Check a config against the schema");
  validate->add_option("-c,--config", config_path, "Experiment config (JSON)")->required();

  std::string demo_name;
  bool list = false;
  auto *demo = app.add_subcommand("demo", "Run a canned config");
  demo->add_option("name", demo_name, "Demo name");
  demo->add_option("-o,--out", out_dir, "Output directory (default: demo-<name>)");
  demo->add_flag("--list", list, "List demo names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  if (*validate) {
    try {
      const auto diags = ex::validate_file(config_path);
      if (!diags.empty()) {
        print_diagnostics(diags);
        return kInvalid;
      }
      std::cout << "ok\n";
      return kOk;
    } catch (const std::exception &e) {
      std::cerr << "error: " << e.what() << '\n';
      return kRuntime;
    }
  }

  if (*run) {
    try {
      return execute(ex::ExperimentConfig::load(config_path), out_dir);
    } catch (const nlohmann::json::parse_error &e) {
      std::cerr << "$: not valid JSON: " << e.what() << '\n';
      return kInvalid;
    } catch (const std::exception &e) {
      std::cerr << "error: " << e.what() << '\n';
      return kRuntime;
    }
  }

  const auto &table = decolab_demo::configs();
  if (list || demo_name.empty()) {
    for (const auto &[name, text] : table)
      std::cout << name << '\n';
    return list ? kOk : kInvalid;
  }
  const auto it = table.find(demo_name);
  if (it == table.end()) {
    std::cerr << "unknown demo '" << demo_name << "'; try --list\n";
    return kInvalid;
  }
  if (out_dir.empty())
    out_dir = "demo-" + demo_name;
  return execute(ex::ExperimentConfig::parse(it->second), out_dir);
}

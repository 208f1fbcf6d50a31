#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ringlattice/ringlattice.h"

namespace {

int exit_code(rl_status s) {
  switch (s) {
    case RL_OK: return 0;
    case RL_ERR_CONFIG:
    case RL_ERR_DOMAIN:
    case RL_ERR_TRUNCATION:
    case RL_ERR_SCHEMA:
    case RL_ERR_ARGUMENT: return 2;
    case RL_ERR_ACCURACY: return 3;
    case RL_ERR_CHECK: return 4;
    default: return 1;
  }
}

const char* kind(rl_status s) {
  switch (s) {
    case RL_ERR_CONFIG: return "config error";
    case RL_ERR_DOMAIN: return "domain error";
    case RL_ERR_TRUNCATION: return "truncation error";
    case RL_ERR_SCHEMA: return "schema error";
    case RL_ERR_ACCURACY: return "accuracy failure";
    case RL_ERR_CHECK: return "check failure";
    case RL_ERR_IO: return "io error";
    default: return "error";
  }
}

int report(rl_status s) {
  if (s != RL_OK) std::fprintf(stderr, "ringlattice: %s: %s\n", kind(s), rl_last_error());
  return exit_code(s);
}

void print_check(int, const char*, int, const char* line, void*) {
  std::printf("%s\n", line);
  std::fflush(stdout);
}

struct ConfigHandle {
  rl_config* ptr = nullptr;
  ~ConfigHandle() { rl_config_destroy(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Atom optics on a circular optical lattice"};
  app.set_version_flag("--version", std::string(rl_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  bool svg = false;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--set", overrides, "override one key, key=value (repeatable)")->allow_extra_args(false);
  app.add_flag("--svg", svg, "also write SVG plots");

  int figure = 0;
  auto* fig = app.add_subcommand("fig", "write the data behind one figure");
  fig->add_option("which", figure, "figure number")->required()->check(CLI::Range(1, 6));

  std::string stage;
  auto* run = app.add_subcommand("run", "run one pipeline stage");
  run->add_option("stage", stage, "kick, evolve, farfield, bands or radial")
      ->required()
      ->check(CLI::IsMember({"kick", "evolve", "farfield", "bands", "radial"}));

  auto* check = app.add_subcommand("check", "run the acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ConfigHandle cfg;
  if (rl_status s = rl_config_create(&cfg.ptr); s != RL_OK) return report(s);
  if (!config_path.empty())
    if (rl_status s = rl_config_load_file(cfg.ptr, config_path.c_str()); s != RL_OK) return report(s);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "ringlattice: config error: --set expects key=value, got '%s'\n", kv.c_str());
      return 2;
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (rl_status s = rl_config_set(cfg.ptr, key.c_str(), value.c_str()); s != RL_OK) return report(s);
  }

  if (*fig) return report(rl_run_figure(cfg.ptr, figure, out_dir.c_str(), svg ? 1 : 0));
  if (*run) return report(rl_run_stage(cfg.ptr, stage.c_str(), out_dir.c_str(), svg ? 1 : 0));
  if (*check) {
    int failed = 0;
    const rl_status s = rl_run_check(cfg.ptr, out_dir.c_str(), print_check, nullptr, &failed);
    if (s == RL_OK || s == RL_ERR_CHECK) std::printf("%d of 12 criteria failed\n", failed);
    return report(s);
  }
  return 2;
}

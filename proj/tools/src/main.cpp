#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dicke/app/config.hpp"
#include "dicke/app/runners.hpp"
#include "dicke/error.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("dicke");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  // DICKE_LOG=debug, or per-logger syntax such as "info,dicke=debug"
  if (const char* env = std::getenv("DICKE_LOG")) spdlog::cfg::helpers::load_levels(env);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Floquet master-equation simulator for driven emitters in a cavity"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::string> overrides;

  app.add_option("--config", config_path, "TOML configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Output file (standard output when omitted)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", workers, "Concurrent sweep points")->check(CLI::PositiveNumber);
  app.add_option("--override", overrides, "KEY=VALUE, applied after the config file")->take_all();
  app.fallthrough();

  auto* quasi = app.add_subcommand("quasienergies", "Quasienergy ladders and sidebands over a g grid");
  auto* spectrum = app.add_subcommand("spectrum", "Emission spectrum and peak table");
  auto* g2 = app.add_subcommand("g2", "Zero-delay or delayed Glauber function");
  auto* eof = app.add_subcommand("eof", "Entanglement of formation of two emitters");
  auto* sweep = app.add_subcommand("sweep", "g2(0) or EOF over a (T, g) grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    dicke::app::RunConfig config =
        config_path.empty() ? dicke::app::RunConfig{} : dicke::app::load_config(config_path);
    for (const auto& o : overrides) dicke::app::apply_override(config, o);
    if (!out_path.empty()) config.output.path = out_path;
    if (!format.empty()) dicke::app::apply_override(config, "output.format=" + format);
    config.validate();

    dicke::app::Artifacts artifacts;
    if (*quasi) artifacts = dicke::app::run_quasienergies(config);
    else if (*spectrum) artifacts = dicke::app::run_spectrum(config);
    else if (*g2) artifacts = dicke::app::run_g2(config);
    else if (*eof) artifacts = dicke::app::run_eof(config);
    else if (*sweep) artifacts = dicke::app::run_sweep(config, workers);
    dicke::app::write_artifacts(artifacts, config.output.path);
  } catch (const dicke::ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const dicke::NumericalError& e) {
    spdlog::error("{}", e.what());
    return kExitNumerical;
  }
  return 0;
}

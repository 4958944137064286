// hybrid-radiance <command> --config <file> [--out <dir>] [--workers K] [--format csv|json]
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hybrid_radiance/config.hpp"
#include "hybrid_radiance/errors.hpp"
#include "hybrid_radiance/runner.hpp"
#include "json.hpp"

namespace {

enum Exit { ok = 0, failure = 1, config_error = 2, numerical_error = 3, capacity_error = 4 };

int report(Exit code, const std::string& kind, const std::string& message, const std::string& path = {}) {
  nlohmann::json rec{{"error", kind}, {"exit_code", static_cast<int>(code)}, {"message", message}};
  if (!path.empty()) rec["path"] = path;
  std::cerr << rec.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective decay and spin-phonon entanglement in emitter chains", "hybrid-radiance"};
  std::string command, config_path, out_dir = ".", format;
  int workers = 1;
  bool dump_basis = false, dump_matrix = false;
  app.add_option("command", command, "kernels | two-atom | spectrum | band | entropy-scan | evolve | find-d0")
      ->required();
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "concurrent scan points")->check(CLI::Range(1, 1024));
  app.add_option("--format", format, "override output.format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--dump-basis", dump_basis, "spectrum: write the basis as JSON");
  app.add_flag("--dump-matrix", dump_matrix, "spectrum: write Re/Im of H_eff as CSV");
  app.set_version_flag("--version", std::string(hr::library_version()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(config_error, "usage", e.what());
  }

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) return report(config_error, "config", "cannot read " + config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    hr::RunConfig cfg = hr::parse_config(buf.str());
    if (hr::to_string(cfg.command) != command) {
      return report(config_error, "config",
                    "command '" + command + "' does not match config command '" +
                        std::string(hr::to_string(cfg.command)) + "'",
                    "command");
    }
    hr::RunOptions opts;
    opts.out_dir = out_dir;
    opts.workers = workers;
    if (!format.empty()) opts.format_override = hr::format_from_string(format);
    opts.dump_basis = dump_basis;
    opts.dump_matrix = dump_matrix;
    hr::RunResult result = hr::run(cfg, opts);
    for (const auto& w : result.warnings) {
      std::cerr << nlohmann::json{{"warning", w}}.dump() << '\n';
    }
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    return ok;
  } catch (const hr::ConfigError& e) {
    return report(config_error, "config", e.what(), e.path());
  } catch (const hr::DomainError& e) {
    return report(config_error, "domain", e.what());
  } catch (const hr::CapacityError& e) {
    return report(capacity_error, "capacity", e.what());
  } catch (const hr::NumericalError& e) {
    return report(numerical_error, "numerical", e.what());
  } catch (const std::exception& e) {
    return report(failure, "internal", e.what());
  }
}

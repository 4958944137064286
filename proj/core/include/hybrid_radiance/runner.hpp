#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hybrid_radiance/config.hpp"
#include "hybrid_radiance/output.hpp"

namespace hr {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  int workers = 1;
  std::optional<OutputFormat> format_override;
  bool dump_basis = false;   // spectrum: <stem>.basis.json per scan point
  bool dump_matrix = false;  // spectrum: <stem>.matrix_re.csv / .matrix_im.csv per scan point
};

struct RunResult {
  std::vector<std::filesystem::path> files;  // data files, each with a .meta.json sidecar
  std::vector<std::string> warnings;
};

/// Library version baked into every sidecar.
std::string_view library_version();

/// Computes the table for a command without touching the filesystem.
Table compute_table(const RunConfig& config, int workers = 1, std::vector<std::string>* warnings = nullptr);

/// Computes, then writes the data file and its sidecar (plus optional dumps).
RunResult run(const RunConfig& config, const RunOptions& options);

}  // namespace hr

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hybrid_radiance/band.hpp"
#include "hybrid_radiance/basis.hpp"
#include "hybrid_radiance/geometry.hpp"
#include "hybrid_radiance/lindblad.hpp"

namespace hr {

enum class Command { kernels, two_atom, spectrum, band, entropy_scan, evolve, find_d0 };

std::string_view to_string(Command c);
std::optional<Command> command_from_string(std::string_view name);

enum class OutputFormat { csv, json };

std::string_view to_string(OutputFormat f);
std::optional<OutputFormat> format_from_string(std::string_view name);

/// One GeometryConfig field swept over explicit values. Angles given through
/// "phi_deg" are stored converted, under "phi".
struct ScanSpec {
  std::string parameter;
  std::vector<double> values;
};

struct OutputSpec {
  std::string path;  // data file name inside the output directory; empty = "<command>.<ext>"
  OutputFormat format = OutputFormat::csv;
  int precision = 12;  // significant digits, [6, 17]
};

struct KernelsOptions {
  double kappa_min = 0.1;
  double kappa_max = 12.0;
  int points = 600;
};

struct TwoAtomOptions {
  // "magic": spacings d0 * (0.85, 1, 1.15) with d0 from the Gamma'' zero.
  bool magic_spacings = false;
};

struct BandOptions {
  int points = kDefaultBandPoints;
  int shells = kDefaultShells;
  SumMethod method = SumMethod::accelerated;
};

struct EntropyScanOptions {
  std::vector<int> n_atoms{2, 3, 4, 5, 6, 7, 8};
  std::vector<double> spacings;  // empty = geometry.spacing
};

struct EvolveOptions {
  double t_final = 5.0;
  double dt = 1e-3;
  int n_max = 2;
  int sample_every = 100;
  std::string initial_spin = "symmetric";  // symmetric | antisymmetric | site
  int site = 0;
  std::vector<int> initial_phonons;  // empty = vacuum
};

struct RunConfig {
  Command command = Command::spectrum;
  GeometryConfig geometry;
  std::optional<ScanSpec> scan;
  OutputSpec output;
  KernelsOptions kernels;
  TwoAtomOptions two_atom;
  BandOptions band;
  EntropyScanOptions entropy_scan;
  EvolveOptions evolve;
  std::size_t basis_cap = kDefaultBasisCap;
  std::size_t truncated_cap = kDefaultTruncatedCap;
  std::vector<std::string> warnings;
};

/// Parses and validates a JSON configuration document. Throws ConfigError whose
/// path() names the offending key.
RunConfig parse_config(std::string_view text);

/// Normalized configuration (defaults filled, angles in radians) as JSON text.
std::string config_echo(const RunConfig& config);

/// Sets a GeometryConfig field by name; integer fields reject fractional values.
void set_geometry_field(GeometryConfig& geom, std::string_view field, double value);

}  // namespace hr

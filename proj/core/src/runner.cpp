#include "hybrid_radiance/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <thread>

#include "hybrid_radiance/band.hpp"
#include "hybrid_radiance/entanglement.hpp"
#include "hybrid_radiance/errors.hpp"
#include "hybrid_radiance/heff.hpp"
#include "hybrid_radiance/kernels.hpp"
#include "hybrid_radiance/lindblad.hpp"
#include "hybrid_radiance/spectra.hpp"
#include "json.hpp"

#ifndef HR_VERSION_STRING
#define HR_VERSION_STRING "0.0.0"
#endif

namespace hr {

namespace {

using Rows = std::vector<std::vector<Cell>>;

// Extra files produced alongside the main table (spectrum dumps).
struct SideFile {
  std::string suffix;
  std::string text;
  std::vector<std::string> columns;  // empty for non-tabular dumps
  std::size_t row_count = 0;
};

struct TaskResult {
  Rows rows;
  std::vector<std::string> warnings;
  std::vector<SideFile> side_files;
};

using Task = std::function<TaskResult()>;

// Runs tasks on up to `workers` threads; results come back in task order. The
// exception of the lowest-indexed failing task is rethrown.
std::vector<TaskResult> run_tasks(const std::vector<Task>& tasks, int workers) {
  std::vector<TaskResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), tasks.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::vector<std::string> base_columns(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::kernels:
      return {"kappa", "gamma", "v", "gamma_dd", "v_dd"};
    case Command::two_atom:
      return {"spacing", "eta0", "parity", "n_phonons", "n_antisymmetric", "re_E", "im_E", "rate",
              "rate_at_eta0_zero"};
    case Command::spectrum:
      return {"m", "re_E", "im_E", "rate", "shift", "entropy", "separable", "negative_rate"};
    case Command::band:
      return {"q_d_over_pi", "re_E", "im_E", "rate", "rate_at_eta0_zero", "delta_rate", "tail_estimate"};
    case Command::entropy_scan:
      return {"N", "ln_N", "max_S", "d_over_lambda"};
    case Command::evolve: {
      std::vector<std::string> cols{"t", "trace", "excited"};
      for (int j = 0; j < cfg.geometry.n_atoms; ++j) cols.push_back("pop_" + std::to_string(j));
      cols.push_back("min_eig");
      cols.push_back("positivity_warnings");
      return cols;
    }
    case Command::find_d0:
      return {"phi", "kappa0", "d0_over_lambda"};
  }
  return {};
}

TaskResult kernels_rows(const GeometryConfig& geom, const KernelsOptions& o) {
  TaskResult out;
  for (int i = 0; i < o.points; ++i) {
    double kappa = o.kappa_min + (o.kappa_max - o.kappa_min) * i / (o.points - 1);
    out.rows.push_back({kappa, gamma_kernel(kappa, geom.phi), v_kernel(kappa, geom.phi),
                        kernel_second_derivative(kappa, geom.phi, KernelKind::gamma),
                        kernel_second_derivative(kappa, geom.phi, KernelKind::v)});
  }
  return out;
}

TaskResult two_atom_rows(const GeometryConfig& geom, bool magic) {
  TaskResult out;
  std::vector<double> spacings{geom.spacing};
  if (magic) {
    double d0 = find_kappa0(geom.phi).d0_over_lambda;
    spacings = {0.85 * d0, d0, 1.15 * d0};
  }
  for (double d : spacings) {
    GeometryConfig g = geom;
    g.spacing = d;
    KernelMatrices k = build_matrices(g);
    for (const auto& level : two_atom_spectrum(g, k).levels) {
      bool sym = level.parity == Parity::symmetric;
      double base = GeometryConfig::gamma + (sym ? 1.0 : -1.0) * k.gamma_mat(0, 1);
      out.rows.push_back({d, g.eta0, std::string(sym ? "s" : "a"), static_cast<long long>(level.n_phonons),
                          static_cast<long long>(level.n_antisymmetric), level.energy.real(), level.energy.imag(),
                          level.rate, base});
    }
  }
  return out;
}

std::string basis_json(const HybridBasis& basis) {
  nlohmann::json states = nlohmann::json::array();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto s = basis.state(i);
    states.push_back({{"index", i}, {"spin_site", s.spin_site}, {"occupation", s.occupation}});
  }
  return states.dump(1) + "\n";
}

Table matrix_table(const Eigen::MatrixXcd& h, bool imag) {
  Table t;
  for (Eigen::Index c = 0; c < h.cols(); ++c) t.columns.push_back("c" + std::to_string(c));
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    std::vector<Cell> row;
    for (Eigen::Index c = 0; c < h.cols(); ++c) row.emplace_back(imag ? h(r, c).imag() : h(r, c).real());
    t.rows.push_back(std::move(row));
  }
  return t;
}

TaskResult spectrum_rows(const GeometryConfig& geom, std::size_t cap, bool dump_basis, bool dump_matrix,
                         int precision) {
  TaskResult out;
  HybridBasis basis(geom, cap);
  KernelMatrices k = build_matrices(geom);
  EffectiveHamiltonian h = build_heff(geom, k, basis);
  auto modes = eigendecompose(h);
  auto matches = match_separable(modes, separable_block(geom, k), basis);
  std::vector<bool> separable(modes.size(), false);
  for (const auto& m : matches) separable[m.mode_index] = true;
  int negative = 0;
  for (const auto& mode : modes) {
    double s = von_neumann_entropy(reduce_spin(mode.eigenvector, basis));
    bool neg = mode.rate < kNegativeRateFlag;
    negative += neg;
    out.rows.push_back({static_cast<long long>(mode.index), mode.eigenvalue.real(), mode.eigenvalue.imag(),
                        mode.rate, mode.shift, s, static_cast<long long>(separable[mode.index]),
                        static_cast<long long>(neg)});
  }
  if (negative > 0) {
    out.warnings.push_back(std::to_string(negative) + " mode(s) with negative rate at eta0 = " +
                           format_double(geom.eta0, 6) + " (outside Lamb-Dicke validity)");
  }
  if (dump_basis) out.side_files.push_back({".basis.json", basis_json(basis), {}, basis.size()});
  if (dump_matrix) {
    for (bool imag : {false, true}) {
      Table t = matrix_table(h.matrix, imag);
      out.side_files.push_back({imag ? ".matrix_im.csv" : ".matrix_re.csv", to_csv(t, precision), t.columns,
                                 t.rows.size()});
    }
  }
  return out;
}

TaskResult band_rows(const GeometryConfig& geom, std::vector<double> q_grid, const BandOptions& o) {
  TaskResult out;
  for (const auto& p : band_scan(geom, q_grid, o.shells, o.method)) {
    out.rows.push_back({p.q_d_over_pi, p.e_q.real(), p.e_q.imag(), p.rate, p.rate_eta0_zero, p.delta_rate,
                        p.tail_estimate});
  }
  return out;
}

TaskResult entropy_rows(const GeometryConfig& geom, const EntropyScanOptions& o, std::size_t cap) {
  TaskResult out;
  for (const auto& r : entropy_scan(geom, o.n_atoms, cap)) {
    out.rows.push_back({static_cast<long long>(r.n_atoms), r.ln_n, r.max_entropy, r.spacing});
  }
  return out;
}

TaskResult evolve_rows(const GeometryConfig& geom, const EvolveOptions& o, std::size_t cap) {
  TaskResult out;
  const int n = geom.n_atoms;
  TruncatedSpace space(n, o.n_max, cap);
  KernelMatrices k = build_matrices(geom);
  JumpFamily family = build_jump_family(geom, k, space);

  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(n);
  if (o.initial_spin == "symmetric") {
    amp.setConstant(1.0);
  } else if (o.initial_spin == "antisymmetric") {
    if (n != 2) throw DomainError("antisymmetric start is defined for two atoms only");
    amp(0) = 1.0;
    amp(1) = -1.0;
  } else {
    if (o.site >= n) throw DomainError("initial site outside the chain");
    amp(o.site) = 1.0;
  }
  std::vector<int> phonons = o.initial_phonons;
  if (phonons.empty()) phonons.assign(n, 0);
  if (static_cast<int>(phonons.size()) != n) throw DomainError("initial phonons need one entry per atom");

  Trajectory traj = evolve(single_excitation_state(space, amp, phonons), family, o.t_final, o.dt, o.sample_every);
  long long warnings = 0;
  for (const auto& s : traj.samples) {
    warnings += s.positivity_warning;
    std::vector<Cell> row{s.t, s.trace, s.excited_population};
    for (double p : s.site_populations) row.emplace_back(p);
    row.emplace_back(s.min_eigenvalue);
    row.emplace_back(warnings);
    out.rows.push_back(std::move(row));
  }
  if (traj.positivity_warnings > 0) {
    out.warnings.push_back(std::to_string(traj.positivity_warnings) +
                           " sample(s) with a negative eigenvalue beyond the eta0^4 floor");
  }
  return out;
}

TaskResult find_d0_rows(const GeometryConfig& geom) {
  MagicDistance m = find_kappa0(geom.phi);
  return {{{geom.phi, m.kappa0, m.d0_over_lambda}}, {}, {}};
}

// Splits [0, n) into at most `parts` contiguous chunks.
std::vector<std::pair<std::size_t, std::size_t>> chunks(std::size_t n, int parts) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t p = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(parts, 1)), 1, std::max<std::size_t>(n, 1));
  for (std::size_t i = 0; i < p; ++i) {
    std::size_t lo = n * i / p, hi = n * (i + 1) / p;
    if (hi > lo) out.emplace_back(lo, hi);
  }
  return out;
}

// Tasks for one geometry; band and entropy scans split internally.
void append_tasks(const RunConfig& cfg, const GeometryConfig& geom, int workers, bool dump_basis, bool dump_matrix,
                  std::vector<Task>& tasks) {
  switch (cfg.command) {
    case Command::kernels:
      tasks.push_back([geom, o = cfg.kernels] { return kernels_rows(geom, o); });
      break;
    case Command::two_atom:
      tasks.push_back([geom, m = cfg.two_atom.magic_spacings] { return two_atom_rows(geom, m); });
      break;
    case Command::spectrum:
      tasks.push_back([geom, cap = cfg.basis_cap, dump_basis, dump_matrix, p = cfg.output.precision] {
        return spectrum_rows(geom, cap, dump_basis, dump_matrix, p);
      });
      break;
    case Command::band: {
      auto grid = brillouin_grid(geom.spacing, cfg.band.points);
      for (auto [lo, hi] : chunks(grid.size(), workers)) {
        std::vector<double> part(grid.begin() + static_cast<std::ptrdiff_t>(lo),
                                 grid.begin() + static_cast<std::ptrdiff_t>(hi));
        tasks.push_back([geom, part, o = cfg.band] { return band_rows(geom, part, o); });
      }
      break;
    }
    case Command::entropy_scan: {
      std::vector<double> spacings = cfg.entropy_scan.spacings;
      if (spacings.empty()) spacings.push_back(geom.spacing);
      for (double d : spacings) {
        for (int n : cfg.entropy_scan.n_atoms) {
          GeometryConfig g = geom;
          g.spacing = d;
          EntropyScanOptions one = cfg.entropy_scan;
          one.n_atoms = {n};
          tasks.push_back([g, one, cap = cfg.basis_cap] { return entropy_rows(g, one, cap); });
        }
      }
      break;
    }
    case Command::evolve:
      tasks.push_back([geom, o = cfg.evolve, cap = cfg.truncated_cap] { return evolve_rows(geom, o, cap); });
      break;
    case Command::find_d0:
      tasks.push_back([geom] { return find_d0_rows(geom); });
      break;
  }
}

bool is_integral_scan(const RunConfig& cfg) {
  return cfg.scan && (cfg.scan->parameter == "n_atoms" || cfg.scan->parameter == "n_phonons");
}

struct Computed {
  Table table;
  std::vector<std::string> warnings;
  // side files per scan point (index into scan values, or 0 without a scan)
  std::vector<std::pair<std::size_t, SideFile>> side_files;
};

Computed compute(const RunConfig& cfg, int workers, bool dump_basis, bool dump_matrix) {
  Computed out;
  out.table.columns = base_columns(cfg);
  out.warnings = cfg.warnings;

  std::vector<GeometryConfig> points;
  std::vector<double> scan_values;
  if (cfg.scan) {
    for (double v : cfg.scan->values) {
      GeometryConfig g = cfg.geometry;
      set_geometry_field(g, cfg.scan->parameter, v);
      for (auto& w : validate(g)) out.warnings.push_back(w);
      points.push_back(g);
      scan_values.push_back(v);
    }
  } else {
    points.push_back(cfg.geometry);
  }

  std::vector<Task> tasks;
  std::vector<std::size_t> owner;
  for (std::size_t p = 0; p < points.size(); ++p) {
    append_tasks(cfg, points[p], workers, dump_basis, dump_matrix, tasks);
    owner.resize(tasks.size(), p);
  }
  auto results = run_tasks(tasks, workers);

  bool prepend = false;
  if (cfg.scan) {
    const auto& cols = out.table.columns;
    prepend = std::find(cols.begin(), cols.end(), cfg.scan->parameter) == cols.end();
    if (prepend) out.table.columns.insert(out.table.columns.begin(), cfg.scan->parameter);
  }
  for (std::size_t t = 0; t < results.size(); ++t) {
    for (auto& row : results[t].rows) {
      if (prepend) {
        Cell c = is_integral_scan(cfg) ? Cell{static_cast<long long>(scan_values[owner[t]])}
                                       : Cell{scan_values[owner[t]]};
        row.insert(row.begin(), c);
      }
      out.table.rows.push_back(std::move(row));
    }
    for (auto& w : results[t].warnings) out.warnings.push_back(std::move(w));
    for (auto& f : results[t].side_files) out.side_files.emplace_back(owner[t], std::move(f));
  }
  return out;
}

std::string sidecar(const RunConfig& cfg, const std::string& data_name, const std::vector<std::string>& columns,
                    std::size_t row_count, const std::vector<std::string>& warnings) {
  nlohmann::json meta;
  meta["generator"] = "hybrid-radiance";
  meta["version"] = HR_VERSION_STRING;
  meta["command"] = std::string(to_string(cfg.command));
  meta["data_file"] = data_name;
  meta["columns"] = columns;
  meta["row_count"] = row_count;
  meta["config"] = nlohmann::json::parse(config_echo(cfg));
  meta["warnings"] = warnings;
  return meta.dump(2) + "\n";
}

}  // namespace

std::string_view library_version() { return HR_VERSION_STRING; }

Table compute_table(const RunConfig& config, int workers, std::vector<std::string>* warnings) {
  Computed c = compute(config, workers, false, false);
  if (warnings) *warnings = std::move(c.warnings);
  return std::move(c.table);
}

RunResult run(const RunConfig& config, const RunOptions& options) {
  RunConfig cfg = config;
  if (options.format_override) cfg.output.format = *options.format_override;
  const bool csv = cfg.output.format == OutputFormat::csv;
  const std::string ext = csv ? ".csv" : ".json";

  std::filesystem::path name = cfg.output.path.empty() ? std::string(to_string(cfg.command)) + ext : cfg.output.path;
  name.replace_extension(ext);
  cfg.output.path = name.string();
  const std::string stem = name.stem().string();

  Computed c = compute(cfg, options.workers, options.dump_basis, options.dump_matrix);

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) throw Error("cannot create output directory " + options.out_dir.string() + ": " + ec.message());

  RunResult result;
  auto emit = [&](const std::string& file, const std::string& text, const std::vector<std::string>& columns,
                  std::size_t row_count) {
    auto path = options.out_dir / file;
    write_text(path, text);
    write_text(options.out_dir / (file + ".meta.json"), sidecar(cfg, file, columns, row_count, c.warnings));
    result.files.push_back(path);
  };

  emit(name.string(), csv ? to_csv(c.table, cfg.output.precision) : to_json(c.table, cfg.output.precision), c.table.columns,
       c.table.rows.size());
  for (const auto& [point, side] : c.side_files) {
    std::string file = stem + (cfg.scan ? ".p" + std::to_string(point) : "") + side.suffix;
    emit(file, side.text, side.columns, side.row_count);
  }
  result.warnings = std::move(c.warnings);
  return result;
}

}  // namespace hr

#include "hybrid_radiance/config.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "hybrid_radiance/errors.hpp"
#include "json.hpp"

namespace hr {

namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown key");
  }
}

double get_number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(path, key), "must be finite");
  return x;
}

long long get_integer(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    double x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x)) return static_cast<long long>(x);
  }
  throw ConfigError(join(path, key), "expected an integer");
}

std::string get_string(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

int positive_int(const json& obj, const std::string& key, const std::string& path, long long min = 1) {
  long long v = get_integer(obj, key, path);
  if (v < min || v > 1'000'000'000) {
    throw ConfigError(join(path, key), "must be an integer >= " + std::to_string(min));
  }
  return static_cast<int>(v);
}

std::vector<double> number_list(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  std::string p = join(path, key);
  if (!v.is_array()) throw ConfigError(p, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(p + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

bool is_integer_field(std::string_view field) { return field == "n_atoms" || field == "n_phonons"; }

void parse_geometry(const json& g, RunConfig& cfg) {
  const std::string path = "geometry";
  reject_unknown(g, path, {"n_atoms", "spacing", "phi", "phi_deg", "eta0", "n_phonons", "gamma"});
  if (!g.contains("n_atoms")) throw ConfigError("geometry.n_atoms", "required key missing");
  if (!g.contains("spacing")) throw ConfigError("geometry.spacing", "required key missing");
  if (g.contains("phi") && g.contains("phi_deg")) {
    throw ConfigError("geometry.phi_deg", "give either phi or phi_deg, not both");
  }
  GeometryConfig& geom = cfg.geometry;
  geom.n_atoms = positive_int(g, "n_atoms", path);
  geom.spacing = get_number(g, "spacing", path);
  if (g.contains("phi")) geom.phi = get_number(g, "phi", path);
  if (g.contains("phi_deg")) geom.phi = get_number(g, "phi_deg", path) * kDeg;
  if (g.contains("eta0")) geom.eta0 = get_number(g, "eta0", path);
  if (g.contains("n_phonons")) geom.n_phonons = positive_int(g, "n_phonons", path, 0);
  if (g.contains("gamma") && get_number(g, "gamma", path) != 1.0) {
    throw ConfigError("geometry.gamma", "rates are in units of gamma; only gamma = 1 is accepted");
  }
}

void parse_scan(const json& s, RunConfig& cfg) {
  const std::string path = "scan";
  reject_unknown(s, path, {"parameter", "values", "start", "stop", "step"});
  if (!s.contains("parameter")) throw ConfigError("scan.parameter", "required key missing");
  ScanSpec scan;
  scan.parameter = get_string(s, "parameter", path);
  double unit = 1.0;
  if (scan.parameter == "phi_deg") {
    scan.parameter = "phi";
    unit = kDeg;
  }
  static const std::set<std::string> fields{"n_atoms", "spacing", "phi", "eta0", "n_phonons"};
  if (!fields.count(scan.parameter)) {
    throw ConfigError("scan.parameter", "'" + scan.parameter + "' is not a geometry field");
  }
  bool has_range = s.contains("start") || s.contains("stop") || s.contains("step");
  if (s.contains("values") == has_range) {
    throw ConfigError("scan.values", "give either values or start/stop/step");
  }
  if (s.contains("values")) {
    scan.values = number_list(s, "values", path);
  } else {
    for (const char* k : {"start", "stop", "step"}) {
      if (!s.contains(k)) throw ConfigError(join(path, k), "required key missing");
    }
    double start = get_number(s, "start", path);
    double stop = get_number(s, "stop", path);
    double step = get_number(s, "step", path);
    if (step <= 0.0) throw ConfigError("scan.step", "must be positive");
    if (stop < start) throw ConfigError("scan.stop", "must be >= scan.start");
    double span = (stop - start) / step;
    if (span > 1e6) throw ConfigError("scan.step", "too many scan points");
    // Tolerate representation error so that 0..0.3 step 0.01 gives 31 points.
    auto count = static_cast<long long>(std::floor(span + 1e-9)) + 1;
    for (long long i = 0; i < count; ++i) scan.values.push_back(start + static_cast<double>(i) * step);
  }
  if (scan.values.empty()) throw ConfigError("scan.values", "must not be empty");
  for (std::size_t i = 0; i < scan.values.size(); ++i) {
    double& v = scan.values[i];
    v *= unit;
    if (!std::isfinite(v)) throw ConfigError("scan.values", "must be finite");
    if (is_integer_field(scan.parameter) && v != std::floor(v)) {
      throw ConfigError("scan.values[" + std::to_string(i) + "]",
                        "'" + scan.parameter + "' takes integer values");
    }
    GeometryConfig probe = cfg.geometry;
    set_geometry_field(probe, scan.parameter, v);
    try {
      validate(probe);
    } catch (const DomainError& e) {
      throw ConfigError("scan.values[" + std::to_string(i) + "]", e.what());
    }
  }
  cfg.scan = std::move(scan);
}

void parse_output(const json& o, RunConfig& cfg) {
  const std::string path = "output";
  reject_unknown(o, path, {"path", "format", "precision"});
  if (o.contains("path")) {
    cfg.output.path = get_string(o, "path", path);
    if (cfg.output.path.empty() || cfg.output.path.find('/') != std::string::npos) {
      throw ConfigError("output.path", "must be a plain file name");
    }
  }
  if (o.contains("format")) {
    auto f = format_from_string(get_string(o, "format", path));
    if (!f) throw ConfigError("output.format", "must be csv or json");
    cfg.output.format = *f;
  }
  if (o.contains("precision")) {
    long long p = get_integer(o, "precision", path);
    if (p < 6 || p > 17) throw ConfigError("output.precision", "must lie in [6, 17]");
    cfg.output.precision = static_cast<int>(p);
  }
}

void parse_limits(const json& l, RunConfig& cfg) {
  const std::string path = "limits";
  reject_unknown(l, path, {"basis_cap", "truncated_cap"});
  if (l.contains("basis_cap")) cfg.basis_cap = static_cast<std::size_t>(positive_int(l, "basis_cap", path));
  if (l.contains("truncated_cap")) {
    cfg.truncated_cap = static_cast<std::size_t>(positive_int(l, "truncated_cap", path));
  }
}

void parse_kernels(const json& k, RunConfig& cfg) {
  const std::string path = "kernels";
  reject_unknown(k, path, {"kappa_min", "kappa_max", "points"});
  auto& o = cfg.kernels;
  if (k.contains("kappa_min")) o.kappa_min = get_number(k, "kappa_min", path);
  if (k.contains("kappa_max")) o.kappa_max = get_number(k, "kappa_max", path);
  if (k.contains("points")) o.points = positive_int(k, "points", path, 2);
  if (o.kappa_min <= 0.0) throw ConfigError("kernels.kappa_min", "must be positive");
  if (o.kappa_max <= o.kappa_min) throw ConfigError("kernels.kappa_max", "must exceed kappa_min");
}

void parse_two_atom(const json& t, RunConfig& cfg) {
  reject_unknown(t, "two_atom", {"spacing_set"});
  if (t.contains("spacing_set")) {
    std::string s = get_string(t, "spacing_set", "two_atom");
    if (s == "magic") {
      cfg.two_atom.magic_spacings = true;
    } else if (s == "config") {
      cfg.two_atom.magic_spacings = false;
    } else {
      throw ConfigError("two_atom.spacing_set", "must be config or magic");
    }
  }
}

void parse_band(const json& b, RunConfig& cfg) {
  const std::string path = "band";
  reject_unknown(b, path, {"points", "shells", "method"});
  if (b.contains("points")) cfg.band.points = positive_int(b, "points", path, 2);
  if (b.contains("shells")) cfg.band.shells = positive_int(b, "shells", path, kMinShells);
  if (b.contains("method")) {
    std::string m = get_string(b, "method", path);
    if (m == "accelerated") {
      cfg.band.method = SumMethod::accelerated;
    } else if (m == "raw") {
      cfg.band.method = SumMethod::raw;
    } else {
      throw ConfigError("band.method", "must be accelerated or raw");
    }
  }
}

void parse_entropy_scan(const json& e, RunConfig& cfg) {
  const std::string path = "entropy_scan";
  reject_unknown(e, path, {"n_atoms", "spacings"});
  if (e.contains("n_atoms")) {
    auto list = number_list(e, "n_atoms", path);
    if (list.empty()) throw ConfigError("entropy_scan.n_atoms", "must not be empty");
    cfg.entropy_scan.n_atoms.clear();
    for (double v : list) {
      if (v != std::floor(v) || v < 1 || v > 1e6) {
        throw ConfigError("entropy_scan.n_atoms", "entries must be positive integers");
      }
      cfg.entropy_scan.n_atoms.push_back(static_cast<int>(v));
    }
  }
  if (e.contains("spacings")) {
    cfg.entropy_scan.spacings = number_list(e, "spacings", path);
    for (double d : cfg.entropy_scan.spacings) {
      if (!(d > 0.0)) throw ConfigError("entropy_scan.spacings", "entries must be positive");
    }
  }
}

void parse_evolve(const json& e, RunConfig& cfg) {
  const std::string path = "evolve";
  reject_unknown(e, path, {"t_final", "dt", "n_max", "sample_every", "initial"});
  auto& o = cfg.evolve;
  if (e.contains("t_final")) o.t_final = get_number(e, "t_final", path);
  if (e.contains("dt")) o.dt = get_number(e, "dt", path);
  if (e.contains("n_max")) o.n_max = positive_int(e, "n_max", path, 0);
  if (e.contains("sample_every")) o.sample_every = positive_int(e, "sample_every", path);
  if (!(o.t_final > 0.0)) throw ConfigError("evolve.t_final", "must be positive");
  if (!(o.dt > 0.0) || o.dt > o.t_final) throw ConfigError("evolve.dt", "must lie in (0, t_final]");
  if (e.contains("initial")) {
    const json& i = e.at("initial");
    const std::string ipath = "evolve.initial";
    reject_unknown(i, ipath, {"spin", "site", "phonons"});
    if (i.contains("spin")) {
      o.initial_spin = get_string(i, "spin", ipath);
      if (o.initial_spin != "symmetric" && o.initial_spin != "antisymmetric" && o.initial_spin != "site") {
        throw ConfigError("evolve.initial.spin", "must be symmetric, antisymmetric or site");
      }
    }
    if (i.contains("site")) o.site = positive_int(i, "site", ipath, 0);
    if (i.contains("phonons")) {
      o.initial_phonons.clear();
      for (double v : number_list(i, "phonons", ipath)) {
        if (v != std::floor(v) || v < 0) {
          throw ConfigError("evolve.initial.phonons", "entries must be non-negative integers");
        }
        o.initial_phonons.push_back(static_cast<int>(v));
      }
    }
  }
  const int n = cfg.geometry.n_atoms;
  if (o.initial_spin == "site" && o.site >= n) throw ConfigError("evolve.initial.site", "outside the chain");
  if (o.initial_spin == "antisymmetric" && n != 2) {
    throw ConfigError("evolve.initial.spin", "antisymmetric start is defined for two atoms only");
  }
  if (!o.initial_phonons.empty()) {
    if (static_cast<int>(o.initial_phonons.size()) != n) {
      throw ConfigError("evolve.initial.phonons", "needs one occupation per atom");
    }
    for (int p : o.initial_phonons) {
      if (p > o.n_max) throw ConfigError("evolve.initial.phonons", "occupation exceeds n_max");
    }
  }
}

json geometry_json(const GeometryConfig& g) {
  return json{{"n_atoms", g.n_atoms}, {"spacing", g.spacing}, {"phi", g.phi},
              {"eta0", g.eta0},       {"n_phonons", g.n_phonons}, {"gamma", GeometryConfig::gamma}};
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::kernels: return "kernels";
    case Command::two_atom: return "two-atom";
    case Command::spectrum: return "spectrum";
    case Command::band: return "band";
    case Command::entropy_scan: return "entropy-scan";
    case Command::evolve: return "evolve";
    case Command::find_d0: return "find-d0";
  }
  return "unknown";
}

std::optional<Command> command_from_string(std::string_view name) {
  for (Command c : {Command::kernels, Command::two_atom, Command::spectrum, Command::band,
                    Command::entropy_scan, Command::evolve, Command::find_d0}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::optional<OutputFormat> format_from_string(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  return std::nullopt;
}

void set_geometry_field(GeometryConfig& geom, std::string_view field, double value) {
  if (field == "n_atoms") {
    geom.n_atoms = static_cast<int>(value);
  } else if (field == "n_phonons") {
    geom.n_phonons = static_cast<int>(value);
  } else if (field == "spacing") {
    geom.spacing = value;
  } else if (field == "phi") {
    geom.phi = value;
  } else if (field == "eta0") {
    geom.eta0 = value;
  } else {
    throw DomainError("not a geometry field: " + std::string(field));
  }
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(doc, "", {"command", "geometry", "scan", "output", "limits", "kernels", "two_atom",
                           "spectrum", "band", "entropy_scan", "evolve", "find_d0"});

  RunConfig cfg;
  if (!doc.contains("command")) throw ConfigError("command", "required key missing");
  auto cmd = command_from_string(get_string(doc, "command", ""));
  if (!cmd) throw ConfigError("command", "unknown command");
  cfg.command = *cmd;

  if (!doc.contains("geometry")) throw ConfigError("geometry", "required block missing");
  parse_geometry(doc.at("geometry"), cfg);
  try {
    cfg.warnings = validate(cfg.geometry);
  } catch (const DomainError& e) {
    throw ConfigError("geometry", e.what());
  }

  if (doc.contains("limits")) parse_limits(doc.at("limits"), cfg);
  if (doc.contains("scan")) parse_scan(doc.at("scan"), cfg);
  if (doc.contains("output")) parse_output(doc.at("output"), cfg);
  if (doc.contains("kernels")) parse_kernels(doc.at("kernels"), cfg);
  if (doc.contains("two_atom")) parse_two_atom(doc.at("two_atom"), cfg);
  if (doc.contains("spectrum")) reject_unknown(doc.at("spectrum"), "spectrum", {});
  if (doc.contains("find_d0")) reject_unknown(doc.at("find_d0"), "find_d0", {});
  if (doc.contains("band")) parse_band(doc.at("band"), cfg);
  if (doc.contains("entropy_scan")) parse_entropy_scan(doc.at("entropy_scan"), cfg);
  if (doc.contains("evolve")) parse_evolve(doc.at("evolve"), cfg);

  if (cfg.command == Command::two_atom && cfg.geometry.n_atoms != 2) {
    throw ConfigError("geometry.n_atoms", "two-atom requires n_atoms = 2");
  }
  if (cfg.scan && cfg.command == Command::two_atom && cfg.scan->parameter == "n_atoms") {
    throw ConfigError("scan.parameter", "two-atom cannot scan n_atoms");
  }
  return cfg;
}

std::string config_echo(const RunConfig& cfg) {
  json doc;
  doc["command"] = std::string(to_string(cfg.command));
  doc["geometry"] = geometry_json(cfg.geometry);
  if (cfg.scan) doc["scan"] = json{{"parameter", cfg.scan->parameter}, {"values", cfg.scan->values}};
  doc["output"] = json{{"format", std::string(to_string(cfg.output.format))}, {"precision", cfg.output.precision}};
  if (!cfg.output.path.empty()) doc["output"]["path"] = cfg.output.path;
  doc["limits"] = json{{"basis_cap", cfg.basis_cap}, {"truncated_cap", cfg.truncated_cap}};
  switch (cfg.command) {
    case Command::kernels:
      doc["kernels"] = json{{"kappa_min", cfg.kernels.kappa_min},
                            {"kappa_max", cfg.kernels.kappa_max},
                            {"points", cfg.kernels.points}};
      break;
    case Command::two_atom:
      doc["two_atom"] = json{{"spacing_set", cfg.two_atom.magic_spacings ? "magic" : "config"}};
      break;
    case Command::band:
      doc["band"] = json{{"points", cfg.band.points},
                         {"shells", cfg.band.shells},
                         {"method", cfg.band.method == SumMethod::raw ? "raw" : "accelerated"}};
      break;
    case Command::entropy_scan:
      doc["entropy_scan"] = json{{"n_atoms", cfg.entropy_scan.n_atoms}, {"spacings", cfg.entropy_scan.spacings}};
      break;
    case Command::evolve:
      doc["evolve"] = json{{"t_final", cfg.evolve.t_final},
                           {"dt", cfg.evolve.dt},
                           {"n_max", cfg.evolve.n_max},
                           {"sample_every", cfg.evolve.sample_every},
                           {"initial",
                            {{"spin", cfg.evolve.initial_spin},
                             {"site", cfg.evolve.site},
                             {"phonons", cfg.evolve.initial_phonons}}}};
      break;
    case Command::spectrum:
    case Command::find_d0:
      break;
  }
  return doc.dump(2);
}

}  // namespace hr

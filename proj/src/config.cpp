#include "cdturing/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "cdturing/errors.hpp"
#include "cdturing/format.hpp"

namespace cdturing {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

using Setter = std::function<void(RunConfig&, const Entry&)>;
using KeyTable = std::map<std::string, Setter, std::less<>>;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Setters only say what they expected; parse_config adds line and key.
[[noreturn]] void bad_value(const char* expected) {
  throw ParseError(std::string("expected ") + expected);
}

double to_double(const Entry& e) {
  const auto v = parse_double(e.value);
  if (!v) bad_value("a real number");
  return *v;
}

long to_long(const Entry& e) {
  const auto v = parse_int(e.value);
  if (!v) bad_value("an integer");
  return static_cast<long>(*v);
}

bool to_bool(const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  bad_value("true or false");
}

std::vector<double> to_list(const Entry& e) {
  std::vector<double> out;
  const std::string_view text = trim(e.value);
  if (text.find(':') != std::string_view::npos) {
    // start:step:stop, stop included when it lies on the lattice.
    std::vector<double> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto next = text.find(':', pos);
      const auto tok = trim(text.substr(pos, next - pos));
      const auto v = parse_double(tok);
      if (!v) bad_value("start:step:stop");
      parts.push_back(*v);
      if (next == std::string_view::npos) break;
      pos = next + 1;
    }
    if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0]) {
      bad_value("start:step:stop with step > 0 and stop >= start");
    }
    const auto n = static_cast<long>(
        std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(parts[0] + i * parts[1]);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size() && !text.empty()) {
    const auto next = text.find(',', pos);
    const auto tok = trim(text.substr(pos, next - pos));
    const auto v = parse_double(tok);
    if (!v) bad_value("a comma-separated list of reals");
    out.push_back(*v);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

const std::map<std::string, KeyTable, std::less<>>& key_tables() {
  static const std::map<std::string, KeyTable, std::less<>> tables = [] {
    std::map<std::string, KeyTable, std::less<>> t;

    auto real_key = [](auto accessor) -> Setter {
      return [accessor](RunConfig& c, const Entry& e) {
        accessor(c) = to_double(e);
      };
    };

    KeyTable& model = t["model"];
    model["a"] = real_key([](RunConfig& c) -> double& { return c.model.a; });
    model["b"] = real_key([](RunConfig& c) -> double& { return c.model.b; });
    model["c"] = real_key([](RunConfig& c) -> double& { return c.model.c; });
    model["d"] = real_key([](RunConfig& c) -> double& { return c.model.d; });
    model["e"] = real_key([](RunConfig& c) -> double& { return c.model.e; });
    const std::pair<const char*, std::pair<int, int>> ks[] = {
        {"k11", {0, 0}}, {"k13", {0, 2}}, {"k22", {1, 1}}, {"k23", {1, 2}},
        {"k31", {2, 0}}, {"k32", {2, 1}}, {"k33", {2, 2}}};
    for (const auto& [name, ij] : ks) {
      const int i = ij.first;
      const int j = ij.second;
      model[name] = [i, j](RunConfig& c, const Entry& e) {
        c.model.k[i][j] = to_double(e);
      };
    }
    model["preset"] = [](RunConfig&, const Entry&) {};  // applied first

    KeyTable& grid = t["grid"];
    grid["nx"] = [](RunConfig& c, const Entry& e) {
      c.grid.nx = static_cast<int>(to_long(e));
    };
    grid["ny"] = [](RunConfig& c, const Entry& e) {
      c.grid.ny = static_cast<int>(to_long(e));
    };
    grid["dx"] = real_key([](RunConfig& c) -> double& { return c.grid.dx; });
    grid["dy"] = real_key([](RunConfig& c) -> double& { return c.grid.dy; });

    KeyTable& sim = t["sim"];
    sim["dt"] = real_key([](RunConfig& c) -> double& { return c.sim.dt; });
    sim["steps"] = [](RunConfig& c, const Entry& e) {
      c.sim.steps = to_long(e);
    };
    sim["snapshot_every"] = [](RunConfig& c, const Entry& e) {
      c.sim.snapshot_every = to_long(e);
    };
    sim["seed"] = [](RunConfig& c, const Entry& e) {
      const auto v = parse_uint(e.value);
      if (!v) bad_value("an unsigned 64-bit integer");
      c.sim.seed = *v;
    };
    sim["amplitude"] = real_key(
        [](RunConfig& c) -> double& { return c.sim.perturb_amplitude; });
    sim["scheme"] = [](RunConfig& c, const Entry& e) {
      if (e.value == "explicit") {
        c.sim.scheme = Scheme::explicit_euler;
      } else if (e.value == "semi-implicit") {
        c.sim.scheme = Scheme::semi_implicit;
      } else {
        bad_value("explicit or semi-implicit");
      }
    };
    sim["picard_tol"] =
        real_key([](RunConfig& c) -> double& { return c.sim.picard_tol; });
    sim["reaction"] = [](RunConfig& c, const Entry& e) {
      c.sim.reaction = to_bool(e);
    };
    sim["picard_max_iters"] = [](RunConfig& c, const Entry& e) {
      c.sim.picard_max_iters = static_cast<int>(to_long(e));
    };
    sim["ode_u0"] = [](RunConfig& c, const Entry& e) {
      const auto v = to_list(e);
      if (v.size() != 3) bad_value("three comma-separated reals");
      c.ode.u0 = {v[0], v[1], v[2]};
    };
    sim["ode_t_end"] =
        real_key([](RunConfig& c) -> double& { return c.ode.t_end; });
    sim["ode_dt"] = real_key([](RunConfig& c) -> double& { return c.ode.dt; });

    KeyTable& sweep = t["sweep"];
    sweep["param"] = [](RunConfig& c, const Entry& e) {
      if (e.value == "k31") {
        c.sweep.param = CrossCoeff::k31;
      } else if (e.value == "k32") {
        c.sweep.param = CrossCoeff::k32;
      } else {
        bad_value("k31 or k32");
      }
    };
    sweep["values"] = [](RunConfig& c, const Entry& e) {
      c.sweep.values = to_list(e);
    };
    sweep["lo"] = real_key([](RunConfig& c) -> double& { return c.sweep.lo; });
    sweep["hi"] = real_key([](RunConfig& c) -> double& { return c.sweep.hi; });
    sweep["tol"] = real_key([](RunConfig& c) -> double& { return c.sweep.tol; });
    sweep["mu_mode"] = [](RunConfig& c, const Entry& e) {
      if (e.value == "lattice") {
        c.sweep.mu_mode = MuMode::lattice;
      } else if (e.value == "continuous") {
        c.sweep.mu_mode = MuMode::continuous;
      } else {
        bad_value("lattice or continuous");
      }
    };
    sweep["lattice_lx"] =
        real_key([](RunConfig& c) -> double& { return c.sweep.lattice_lx; });
    sweep["lattice_ly"] =
        real_key([](RunConfig& c) -> double& { return c.sweep.lattice_ly; });
    sweep["m_max"] = [](RunConfig& c, const Entry& e) {
      c.sweep.m_max = static_cast<int>(to_long(e));
    };
    sweep["n_max"] = [](RunConfig& c, const Entry& e) {
      c.sweep.n_max = static_cast<int>(to_long(e));
    };
    sweep["mu_max"] =
        real_key([](RunConfig& c) -> double& { return c.sweep.mu_max; });
    sweep["mu_points"] = [](RunConfig& c, const Entry& e) {
      c.sweep.mu_points = static_cast<int>(to_long(e));
    };
    sweep["rel_threshold"] =
        real_key([](RunConfig& c) -> double& { return c.sweep.rel_threshold; });
    sweep["threads"] = [](RunConfig& c, const Entry& e) {
      const long v = to_long(e);
      if (v < 0) bad_value("a nonnegative integer");
      c.sweep.threads = static_cast<unsigned>(v);
    };

    KeyTable& output = t["output"];
    output["dir"] = [](RunConfig& c, const Entry& e) { c.output.dir = e.value; };
    output["raster"] = [](RunConfig& c, const Entry& e) {
      if (e.value == "p5") {
        c.output.raster = RasterKind::p5;
      } else if (e.value == "p2") {
        c.output.raster = RasterKind::p2;
      } else if (e.value == "none") {
        c.output.raster = RasterKind::none;
      } else {
        bad_value("p5, p2 or none");
      }
    };
    output["dump"] = [](RunConfig& c, const Entry& e) {
      c.output.dump = to_bool(e);
    };

    KeyTable& top = t[""];
    top["code_version"] = [](RunConfig& c, const Entry& e) {
      c.code_version = e.value;
    };
    return t;
  }();
  return tables;
}

// Expands a preset name into a complete configuration.
bool apply_preset(RunConfig& c, std::string_view name) {
  const RunConfig defaults;
  if (name == "paper-fig3") {
    c.model = paper_params(2.0);
    return true;
  }
  if (name == "fig1") {
    c.model = paper_params(2.0);
    c.sweep = defaults.sweep;
    c.sweep.values.clear();
    for (int i = 0; i <= 60; ++i) c.sweep.values.push_back(i * 0.05);
    c.sweep.mu_mode = MuMode::lattice;
    return true;
  }
  if (name == "fig2") {
    c.model = paper_params(2.0);
    c.grid = Grid{};
    c.sim = SimConfig{};
    c.sweep = defaults.sweep;
    c.sweep.values = {1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0};
    return true;
  }
  const std::pair<const char*, double> fig3[] = {
      {"fig3-k17", 1.7}, {"fig3-k18", 1.8}, {"fig3-k19", 1.9}, {"fig3-k20", 2.0}};
  for (const auto& [preset, k32] : fig3) {
    if (name == preset) {
      c.model = paper_params(k32);
      c.grid = Grid{};
      c.sim = SimConfig{};
      return true;
    }
  }
  return false;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

const char* to_string(MuMode m) {
  return m == MuMode::lattice ? "lattice" : "continuous";
}

const char* to_string(RasterKind r) {
  switch (r) {
    case RasterKind::none:
      return "none";
    case RasterKind::p2:
      return "p2";
    case RasterKind::p5:
      return "p5";
  }
  return "none";
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "paper-fig3", "fig1", "fig2", "fig3-k17", "fig3-k18", "fig3-k19",
      "fig3-k20"};
  return names;
}

std::vector<double> RunConfig::mu_set() const {
  if (sweep.mu_mode == MuMode::lattice) {
    return admissible_wavenumbers(sweep.lattice_lx, sweep.lattice_ly,
                                  sweep.m_max, sweep.n_max);
  }
  std::vector<double> mus(static_cast<std::size_t>(sweep.mu_points));
  for (int i = 0; i < sweep.mu_points; ++i) {
    mus[i] = sweep.mu_max * i / (sweep.mu_points - 1);
  }
  return mus;
}

void validate(const RunConfig& c) {
  try {
    validate(c.model);
  } catch (const ValidationError& err) {
    throw ValidationError(std::string("model: ") + err.what());
  }
  try {
    validate(c.grid);
  } catch (const ValidationError& err) {
    throw ValidationError(std::string("grid: ") + err.what());
  }
  try {
    validate(c.sim);
  } catch (const ValidationError& err) {
    throw ValidationError(std::string("sim: ") + err.what());
  }
  const OdeOptions& o = c.ode;
  require(o.u0.u1 >= 0.0 && o.u0.u2 >= 0.0 && o.u0.u3 >= 0.0,
          "sim: ode_u0 must be nonnegative");
  require(o.dt > 0.0 && std::isfinite(o.dt), "sim: ode_dt must be > 0");
  require(o.t_end >= o.dt && std::isfinite(o.t_end),
          "sim: ode_t_end must be >= ode_dt");

  const SweepOptions& s = c.sweep;
  require(!s.values.empty(), "sweep: values must be nonempty");
  for (std::size_t i = 1; i < s.values.size(); ++i) {
    require(s.values[i] > s.values[i - 1],
            "sweep: values must be strictly increasing");
  }
  for (double v : s.values) {
    require(v >= 0.0 && std::isfinite(v), "sweep: values must be >= 0");
  }
  require(s.lo < s.hi && s.lo >= 0.0, "sweep: need 0 <= lo < hi");
  require(s.tol > 0.0, "sweep: tol must be > 0");
  require(s.lattice_lx > 0.0 && s.lattice_ly > 0.0,
          "sweep: lattice_lx and lattice_ly must be > 0");
  require(s.m_max >= 0 && s.n_max >= 0, "sweep: m_max, n_max must be >= 0");
  require(s.mu_max > 0.0, "sweep: mu_max must be > 0");
  require(s.mu_points >= 2, "sweep: mu_points must be >= 2");
  require(s.rel_threshold > 0.0, "sweep: rel_threshold must be > 0");
  require(!c.output.dir.empty(), "output: dir must be nonempty");
}

RunConfig parse_config(std::string_view text,
                       std::span<const std::string> overrides) {
  std::map<std::string, std::map<std::string, Entry, std::less<>>, std::less<>>
      entries;
  const auto& tables = key_tables();
  std::string section;  // "" before any header
  bool model_seen = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                       : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(where + "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty() || !tables.count(section)) {
        throw ParseError(where + "unknown section [" + section + "]");
      }
      if (section == "model") model_seen = true;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(where + "expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(where + "missing key");

    const KeyTable& table = tables.find(section)->second;
    if (!table.count(key)) {
      throw ParseError(where + "unknown key '" + key + "'" +
                       (section.empty() ? "" : " in [" + section + "]"));
    }
    auto& sec = entries[section];
    if (const auto it = sec.find(key); it != sec.end()) {
      throw ParseError(where + "duplicate key '" + key + "' (first set on line " +
                       std::to_string(it->second.line) + ", again on line " +
                       std::to_string(line_no) + ")");
    }
    sec[key] = Entry{value, line_no};
  }

  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    const auto dot = ov.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw ParseError("override '" + ov + "' is not section.key=value");
    }
    const std::string sec(trim(std::string_view(ov).substr(0, dot)));
    const std::string key(trim(std::string_view(ov).substr(dot + 1, eq - dot - 1)));
    const std::string value(trim(std::string_view(ov).substr(eq + 1)));
    const auto table = tables.find(sec);
    if (table == tables.end() || !table->second.count(key)) {
      throw ParseError("override '" + ov + "' names an unknown key");
    }
    entries[sec][key] = Entry{value, 0};
    if (sec == "model") model_seen = true;
  }

  if (!model_seen) throw ValidationError("a [model] section is required");

  RunConfig cfg;
  auto& model_entries = entries["model"];
  if (const auto it = model_entries.find("preset"); it != model_entries.end()) {
    if (!apply_preset(cfg, it->second.value)) {
      throw ParseError("line " + std::to_string(it->second.line) +
                       ": unknown preset '" + it->second.value + "'");
    }
    cfg.preset = it->second.value;
  } else {
    for (const char* req : {"a", "b", "c", "d", "e", "k11", "k22", "k33"}) {
      if (!model_entries.count(req)) {
        throw ValidationError(std::string("model: ") + req +
                              " is required without a preset");
      }
    }
  }

  const bool dy_given = entries["grid"].count("dy") > 0;
  for (const auto& [sec_name, sec] : entries) {
    const KeyTable& table = tables.find(sec_name)->second;
    for (const auto& [key, entry] : sec) {
      try {
        table.find(key)->second(cfg, entry);
      } catch (const ParseError& err) {
        throw ParseError("line " + std::to_string(entry.line) + ": " +
                         (sec_name.empty() ? "" : "[" + sec_name + "] ") + key +
                         " = '" + entry.value + "': " + err.what());
      }
    }
  }
  if (!dy_given) cfg.grid.dy = cfg.grid.dx;

  validate(cfg);
  return cfg;
}

std::string format_config(const RunConfig& c) {
  std::ostringstream out;
  const auto f = [](double v) { return format_double(v); };
  out << "# run manifest\n";
  out << "code_version = " << c.code_version << "\n\n";

  out << "[model]\n";
  if (!c.preset.empty()) out << "preset = " << c.preset << "\n";
  out << "a = " << f(c.model.a) << "\n"
      << "b = " << f(c.model.b) << "\n"
      << "c = " << f(c.model.c) << "\n"
      << "d = " << f(c.model.d) << "\n"
      << "e = " << f(c.model.e) << "\n"
      << "k11 = " << f(c.model.k11()) << "\n"
      << "k13 = " << f(c.model.k13()) << "\n"
      << "k22 = " << f(c.model.k22()) << "\n"
      << "k23 = " << f(c.model.k23()) << "\n"
      << "k31 = " << f(c.model.k31()) << "\n"
      << "k32 = " << f(c.model.k32()) << "\n"
      << "k33 = " << f(c.model.k33()) << "\n\n";

  out << "[grid]\n"
      << "nx = " << c.grid.nx << "\n"
      << "ny = " << c.grid.ny << "\n"
      << "dx = " << f(c.grid.dx) << "\n"
      << "dy = " << f(c.grid.dy) << "\n\n";

  out << "[sim]\n"
      << "dt = " << f(c.sim.dt) << "\n"
      << "steps = " << c.sim.steps << "\n"
      << "snapshot_every = " << c.sim.snapshot_every << "\n"
      << "seed = " << c.sim.seed << "\n"
      << "amplitude = " << f(c.sim.perturb_amplitude) << "\n"
      << "scheme = " << to_string(c.sim.scheme) << "\n"
      << "picard_tol = " << f(c.sim.picard_tol) << "\n"
      << "picard_max_iters = " << c.sim.picard_max_iters << "\n"
      << "reaction = " << (c.sim.reaction ? "true" : "false") << "\n"
      << "ode_u0 = " << join({c.ode.u0.u1, c.ode.u0.u2, c.ode.u0.u3}) << "\n"
      << "ode_t_end = " << f(c.ode.t_end) << "\n"
      << "ode_dt = " << f(c.ode.dt) << "\n\n";

  out << "[sweep]\n"
      << "param = " << to_string(c.sweep.param) << "\n"
      << "values = " << join(c.sweep.values) << "\n"
      << "lo = " << f(c.sweep.lo) << "\n"
      << "hi = " << f(c.sweep.hi) << "\n"
      << "tol = " << f(c.sweep.tol) << "\n"
      << "mu_mode = " << to_string(c.sweep.mu_mode) << "\n"
      << "lattice_lx = " << f(c.sweep.lattice_lx) << "\n"
      << "lattice_ly = " << f(c.sweep.lattice_ly) << "\n"
      << "m_max = " << c.sweep.m_max << "\n"
      << "n_max = " << c.sweep.n_max << "\n"
      << "mu_max = " << f(c.sweep.mu_max) << "\n"
      << "mu_points = " << c.sweep.mu_points << "\n"
      << "rel_threshold = " << f(c.sweep.rel_threshold) << "\n"
      << "threads = " << c.sweep.threads << "\n\n";

  out << "[output]\n"
      << "dir = " << c.output.dir << "\n"
      << "raster = " << to_string(c.output.raster) << "\n"
      << "dump = " << (c.output.dump ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace cdturing

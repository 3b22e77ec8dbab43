#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdturing/model.hpp"
#include "cdturing/output.hpp"
#include "cdturing/pde.hpp"
#include "cdturing/stability.hpp"

namespace cdturing {

inline constexpr const char* kCodeVersion = "1.0.0";

struct OdeOptions {
  SpeciesState u0{0.5, 0.5, 0.5};
  double t_end = 200.0;
  double dt = 0.01;
  bool operator==(const OdeOptions&) const = default;
};

enum class MuMode { lattice, continuous };

const char* to_string(MuMode m);

struct SweepOptions {
  CrossCoeff param = CrossCoeff::k32;
  std::vector<double> values{1.7, 1.8, 1.9, 2.0};
  double lo = 0.1;
  double hi = 3.0;
  double tol = 1e-4;
  MuMode mu_mode = MuMode::lattice;
  double lattice_lx = 40.0;
  double lattice_ly = 40.0;
  int m_max = 50;
  int n_max = 50;
  double mu_max = 5.0;   // continuous mode: uniform grid on [0, mu_max]
  int mu_points = 2001;
  double rel_threshold = 0.01;
  unsigned threads = 0;
  bool operator==(const SweepOptions&) const = default;
};

enum class RasterKind { none, p2, p5 };

const char* to_string(RasterKind r);

struct OutputOptions {
  std::string dir = "out";
  RasterKind raster = RasterKind::p5;
  bool dump = true;
  bool operator==(const OutputOptions&) const = default;
};

/// Everything a run needs. Produced by parse_config, reproduced exactly by
/// parse_config(format_config(cfg)).
struct RunConfig {
  std::string preset;  // informational once expanded
  std::string code_version = kCodeVersion;
  ModelParams model;
  Grid grid;
  SimConfig sim;
  OdeOptions ode;
  SweepOptions sweep;
  OutputOptions output;

  /// Wavenumbers selected by sweep.mu_mode.
  std::vector<double> mu_set() const;

  bool operator==(const RunConfig&) const = default;
};

/// Names accepted by `[model] preset`.
const std::vector<std::string>& preset_names();

/// Line-oriented `key = value` text with `[section]` headers (model, grid,
/// sim, sweep, output). Lines starting with '#' are comments. Lists are
/// comma-separated or `start:step:stop`. Throws ParseError (with line
/// numbers) for syntax, duplicate or unknown keys and ValidationError for
/// violated invariants.
///
/// Each override is "section.key=value" and replaces (or adds) that entry
/// after the document is read.
RunConfig parse_config(std::string_view text,
                       std::span<const std::string> overrides = {});

/// Manifest text: every value spelled out, full precision.
std::string format_config(const RunConfig& cfg);

/// Throws ValidationError naming the first violated invariant.
void validate(const RunConfig& cfg);

}  // namespace cdturing

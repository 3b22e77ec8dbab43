#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "cdturing/pde.hpp"
#include "cdturing/stability.hpp"

namespace cdturing {

enum class Classification { homogeneous, patterned };

const char* to_string(Classification c);

struct PatternMetrics {
  double amplitude = 0.0;  // max - min
  double mean = 0.0;
  std::size_t spot_count = 0;
  Classification classification = Classification::homogeneous;
};

/// Patterned iff amplitude > rel_threshold * mean. Spots are 8-connected
/// components of {v > mean + (max - mean) / 2}, counted only when patterned.
PatternMetrics pattern_metrics(const Field& f, double rel_threshold = 0.01);

/// Final-state extrema of u1 for one swept value.
struct SweepRecord {
  double param_value = 0.0;
  double u1_min = 0.0;
  double u1_max = 0.0;
  PatternMetrics metrics;
};

/// One full simulation per value, every run with cfg.seed. Runs execute on up
/// to `threads` workers (0: hardware concurrency); records come back in the
/// order of `values`. BlowUpError messages name the offending value.
std::vector<SweepRecord> bifurcation_sweep(const ModelParams& p, const Grid& g,
                                           const SimConfig& cfg,
                                           CrossCoeff which,
                                           std::span<const double> values,
                                           double rel_threshold = 0.01,
                                           unsigned threads = 1);

/// Values recorded homogeneous although a smaller value was patterned.
std::vector<double> upset_violations(std::span<const SweepRecord> records);

/// Header "param,u1_min,u1_max,amplitude,spot_count,classification".
void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records);

}  // namespace cdturing

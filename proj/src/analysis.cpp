#include "cdturing/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include "cdturing/errors.hpp"
#include "cdturing/format.hpp"

namespace cdturing {

namespace {

std::size_t count_components(const Field& f, double level) {
  const Grid& g = f.grid();
  std::vector<char> seen(g.size(), 0);
  std::vector<std::pair<int, int>> stack;
  std::size_t count = 0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * g.nx + i;
      if (seen[idx] || !(f(i, j) > level)) continue;
      ++count;
      seen[idx] = 1;
      stack.emplace_back(i, j);
      while (!stack.empty()) {
        const auto [ci, cj] = stack.back();
        stack.pop_back();
        for (int dj = -1; dj <= 1; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            const int ni = ci + di;
            const int nj = cj + dj;
            if (ni < 0 || nj < 0 || ni >= g.nx || nj >= g.ny) continue;
            const std::size_t nidx = static_cast<std::size_t>(nj) * g.nx + ni;
            if (seen[nidx] || !(f(ni, nj) > level)) continue;
            seen[nidx] = 1;
            stack.emplace_back(ni, nj);
          }
        }
      }
    }
  }
  return count;
}

SweepRecord run_one(const ModelParams& p, const Grid& g, const SimConfig& cfg,
                    CrossCoeff which, double value, double rel_threshold) {
  const ModelParams q = with_cross(p, which, value);
  SimResult res;
  try {
    res = simulate(q, g, cfg);
  } catch (const BlowUpError& err) {
    throw BlowUpError(std::string(to_string(which)) + " = " +
                      format_double(value) + ": " + err.what());
  }
  const Field& u1 = res.final[0];
  return {value, u1.min(), u1.max(), pattern_metrics(u1, rel_threshold)};
}

}  // namespace

const char* to_string(Classification c) {
  return c == Classification::patterned ? "patterned" : "homogeneous";
}

PatternMetrics pattern_metrics(const Field& f, double rel_threshold) {
  if (!(rel_threshold > 0.0)) {
    throw ValidationError("rel_threshold must be > 0");
  }
  PatternMetrics m;
  const double lo = f.min();
  const double hi = f.max();
  m.amplitude = hi - lo;
  m.mean = f.mean();
  if (m.amplitude > rel_threshold * m.mean) {
    m.classification = Classification::patterned;
    m.spot_count = count_components(f, m.mean + 0.5 * (hi - m.mean));
  }
  return m;
}

std::vector<SweepRecord> bifurcation_sweep(const ModelParams& p, const Grid& g,
                                           const SimConfig& cfg,
                                           CrossCoeff which,
                                           std::span<const double> values,
                                           double rel_threshold,
                                           unsigned threads) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw ValidationError("sweep values must be strictly increasing");
    }
  }
  validate(g);
  validate(cfg);

  std::vector<SweepRecord> records(values.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(values.size(), 1));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failure_index = values.size();
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        records[i] = run_one(p, g, cfg, which, values[i], rel_threshold);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        // Report the failure at the smallest index, independent of timing.
        if (i < failure_index) {
          failure_index = i;
          failure = std::current_exception();
        }
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<double> upset_violations(std::span<const SweepRecord> records) {
  std::vector<double> out;
  bool patterned_seen = false;
  for (const auto& r : records) {
    const bool patterned =
        r.metrics.classification == Classification::patterned;
    if (patterned_seen && !patterned) out.push_back(r.param_value);
    patterned_seen = patterned_seen || patterned;
  }
  return out;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records) {
  out << "param,u1_min,u1_max,amplitude,spot_count,classification\n";
  for (const auto& r : records) {
    out << format_double(r.param_value) << ',' << format_double(r.u1_min)
        << ',' << format_double(r.u1_max) << ','
        << format_double(r.metrics.amplitude) << ',' << r.metrics.spot_count
        << ',' << to_string(r.metrics.classification) << '\n';
  }
}

}  // namespace cdturing

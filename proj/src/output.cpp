#include "cdturing/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cdturing/errors.hpp"
#include "cdturing/format.hpp"

namespace cdturing {

namespace {

constexpr int kMaxGray = 65535;

int to_level(double v, double lo, double hi) {
  if (!(hi > lo)) return 0;
  const double scaled = (v - lo) / (hi - lo) * kMaxGray;
  return static_cast<int>(std::lround(std::clamp(scaled, 0.0, double(kMaxGray))));
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

// Next header token of a PGM, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  while (in >> tok) {
    if (tok[0] != '#') return tok;
    std::string rest;
    std::getline(in, rest);
  }
  throw IoError("truncated PGM header");
}

}  // namespace

void write_pgm(std::ostream& out, const Field& f, PgmFormat format) {
  const Grid& g = f.grid();
  const double lo = f.min();
  const double hi = f.max();
  out << (format == PgmFormat::binary_p5 ? "P5" : "P2") << '\n'
      << g.nx << ' ' << g.ny << '\n'
      << kMaxGray << '\n';
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int level = to_level(f(i, j), lo, hi);
      if (format == PgmFormat::binary_p5) {
        out.put(static_cast<char>((level >> 8) & 0xff));
        out.put(static_cast<char>(level & 0xff));
      } else {
        out << level << (i + 1 == g.nx ? '\n' : ' ');
      }
    }
  }
}

Field read_pgm(std::istream& in) {
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") throw IoError("not a P2/P5 graymap");
  Grid g;
  g.nx = std::stoi(pgm_token(in));
  g.ny = std::stoi(pgm_token(in));
  const int maxval = std::stoi(pgm_token(in));
  if (maxval != kMaxGray) throw IoError("expected maxval 65535");
  Field f(g);
  if (magic == "P5") {
    in.get();  // single whitespace after maxval
    for (double& v : f.values()) {
      const int hi = in.get();
      const int lo = in.get();
      if (!in) throw IoError("truncated P5 raster");
      v = static_cast<double>((hi << 8) | lo);
    }
  } else {
    for (double& v : f.values()) {
      int level = 0;
      if (!(in >> level)) throw IoError("truncated P2 raster");
      v = level;
    }
  }
  return f;
}

Field pgm_to_values(const Field& levels, double min, double max) {
  Field out(levels.grid());
  auto dst = out.values();
  const auto src = levels.values();
  for (std::size_t k = 0; k < src.size(); ++k) {
    dst[k] = min + (max - min) * src[k] / kMaxGray;
  }
  return out;
}

void write_range_sidecar(std::ostream& out, const Field& f) {
  out << "min = " << format_double(f.min()) << '\n'
      << "max = " << format_double(f.max()) << '\n';
}

void write_matrix(std::ostream& out, const Field& f) {
  const Grid& g = f.grid();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      out << format_double(f(i, j)) << (i + 1 == g.nx ? '\n' : ' ');
    }
  }
}

Field read_matrix(std::istream& in, const Grid& g) {
  Field f(g);
  for (double& v : f.values()) {
    std::string tok;
    if (!(in >> tok)) throw IoError("matrix dump too short");
    const auto parsed = parse_double(tok);
    if (!parsed) throw IoError("bad number '" + tok + "' in matrix dump");
    v = *parsed;
  }
  return f;
}

void write_snapshot(const std::filesystem::path& dir, long step,
                    const Fields& fields, const SnapshotFiles& what) {
  std::filesystem::create_directories(dir);
  char stem[32];
  for (int s = 0; s < 3; ++s) {
    std::snprintf(stem, sizeof stem, "u%d_step%06ld", s + 1, step);
    if (what.raster) {
      auto pgm = open_out(dir / (std::string(stem) + ".pgm"),
                          what.format == PgmFormat::binary_p5);
      write_pgm(pgm, fields[s], what.format);
      auto range = open_out(dir / (std::string(stem) + ".range"), false);
      write_range_sidecar(range, fields[s]);
    }
    if (what.dump) {
      auto txt = open_out(dir / (std::string(stem) + ".txt"), false);
      write_matrix(txt, fields[s]);
    }
  }
}

}  // namespace cdturing

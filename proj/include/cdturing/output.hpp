#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cdturing/pde.hpp"

namespace cdturing {

enum class PgmFormat { ascii_p2, binary_p5 };

/// 16-bit graymap, values mapped affinely from [min, max] of the field onto
/// 0..65535 (all zero for a constant field). P5 samples are big-endian.
void write_pgm(std::ostream& out, const Field& f, PgmFormat format);

/// Grid-sized field of raw gray levels (0..65535) read back from P2 or P5.
Field read_pgm(std::istream& in);

/// Inverts the gray-level mapping using the recorded range.
Field pgm_to_values(const Field& levels, double min, double max);

/// "min = ..." and "max = ..." at full precision.
void write_range_sidecar(std::ostream& out, const Field& f);

/// Row-major, space-separated, one grid row per line, full precision.
void write_matrix(std::ostream& out, const Field& f);
Field read_matrix(std::istream& in, const Grid& g);

struct SnapshotFiles {
  bool raster = true;
  PgmFormat format = PgmFormat::binary_p5;
  bool dump = true;
};

/// u{1,2,3}_step{NNNNNN}.{pgm,range,txt} under `dir`.
void write_snapshot(const std::filesystem::path& dir, long step,
                    const Fields& fields, const SnapshotFiles& what);

}  // namespace cdturing

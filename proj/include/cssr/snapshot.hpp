#pragma once

#include <cstdint>
#include <string>

#include "cssr/spectral_core.hpp"

namespace cssr {

// Binary field snapshot: 48-byte header ("CSSR", version, n_x, m_y or 1, l_x, time, epsilon,
// beta) followed by interleaved (re, im) little-endian f64 values with x fastest.
struct SnapshotMeta {
  std::uint32_t n_x = 0;
  std::uint32_t m_y = 1;  // 1 for 1D fields
  double l_x = 0.0;
  double time = 0.0;
  double epsilon = 0.0;
  double beta = 0.0;
};

struct Snapshot {
  SnapshotMeta meta;
  Field2D field;  // n_x rows, m_y columns
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const Field2D& field, const SnapshotMeta& meta);
// Throws SnapshotError on a missing file, wrong magic, unsupported version or short payload.
Snapshot read_snapshot(const std::string& path);

}  // namespace cssr

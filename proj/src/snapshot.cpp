#include "cssr/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "cssr/errors.hpp"

namespace cssr {

namespace {

constexpr char kMagic[4] = {'C', 'S', 'S', 'R'};
constexpr std::size_t kHeaderSize = 48;

template <class T>
void put(std::vector<unsigned char>& buf, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<unsigned char>(bits >> (8 * i)));
}

template <class T>
T get(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(p[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_snapshot(const std::string& path, const Field2D& field, const SnapshotMeta& meta) {
  if (field.rows() != meta.n_x || field.cols() != meta.m_y) {
    throw SnapshotError("write_snapshot: field shape does not match the header");
  }
  std::vector<unsigned char> buf;
  buf.reserve(kHeaderSize + 16 * field.size());
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put(buf, kSnapshotVersion);
  put(buf, meta.n_x);
  put(buf, meta.m_y);
  put(buf, meta.l_x);
  put(buf, meta.time);
  put(buf, meta.epsilon);
  put(buf, meta.beta);
  for (Eigen::Index i = 0; i < field.size(); ++i) {
    put(buf, field.data()[i].real());
    put(buf, field.data()[i].imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("write_snapshot: cannot open " + path);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw SnapshotError("write_snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("read_snapshot: cannot open " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kHeaderSize) throw SnapshotError("read_snapshot: truncated header in " + path);
  if (std::memcmp(buf.data(), kMagic, 4) != 0) throw SnapshotError("read_snapshot: bad magic in " + path);
  const auto version = get<std::uint32_t>(buf.data() + 4);
  if (version != kSnapshotVersion) {
    throw SnapshotError("read_snapshot: unsupported version " + std::to_string(version));
  }
  Snapshot s;
  s.meta.n_x = get<std::uint32_t>(buf.data() + 8);
  s.meta.m_y = get<std::uint32_t>(buf.data() + 12);
  s.meta.l_x = get<double>(buf.data() + 16);
  s.meta.time = get<double>(buf.data() + 24);
  s.meta.epsilon = get<double>(buf.data() + 32);
  s.meta.beta = get<double>(buf.data() + 40);
  const std::size_t count = std::size_t{s.meta.n_x} * s.meta.m_y;
  if (buf.size() != kHeaderSize + 16 * count) {
    throw SnapshotError("read_snapshot: payload length " + std::to_string(buf.size() - kHeaderSize) +
                        " does not match header (expected " + std::to_string(16 * count) + ")");
  }
  Field2D f(s.meta.n_x, s.meta.m_y);
  const unsigned char* p = buf.data() + kHeaderSize;
  for (std::size_t i = 0; i < count; ++i, p += 16) {
    f.data()[i] = cplx(get<double>(p), get<double>(p + 8));
  }
  s.field = std::move(f);
  return s;
}

}  // namespace cssr

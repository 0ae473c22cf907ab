// Copyright 2026 The cshlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cshlab/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>
#include <unistd.h>

#include "cshlab/errors.hpp"

namespace cshlab::io {
namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot encoding assumes a little-endian host");

constexpr char kMagic[4] = {'C', 'S', 'H', '2'};
constexpr std::size_t kHeader = 4 + 4 + 4 + 8 + 8 + 1;

template <class T>
void put(std::string& out, T v) {
  char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  out.append(b, sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& pos) {
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

void put_field(std::string& out, const ScalarField& f, bool complex) {
  const ScalarField p = as_physical(f);
  for (const cplx& v : p.data()) {
    put(out, v.real());
    if (complex) put(out, v.imag());
  }
}

ScalarField get_field(const std::string& in, std::size_t& pos, const GridSpec& g,
                      bool complex) {
  std::vector<cplx> d(g.size());
  for (auto& v : d) {
    const double re = get<double>(in, pos);
    v = cplx(re, complex ? get<double>(in, pos) : 0.0);
  }
  return ScalarField(g, Representation::physical,
                     complex ? ValueKind::complex : ValueKind::real, std::move(d));
}

std::uint32_t crc(const char* data, std::size_t len) {
  uLong c = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  while (len > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(len, 1u << 30));
    c = crc32(c, reinterpret_cast<const Bytef*>(data), chunk);
    data += chunk;
    len -= chunk;
  }
  return static_cast<std::uint32_t>(c);
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  const std::filesystem::path tmp =
      path.string() + ".tmp." + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw FormatError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw FormatError("cannot rename onto " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string encode_snapshot(const CshState& state, int sigma) {
  const GridSpec& g = state.grid();
  std::string out;
  out.reserve(kHeader + g.size() * 8 * 7 + 4);
  out.append(kMagic, 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
  put<double>(out, g.length());
  put<double>(out, state.t);
  put<std::int8_t>(out, static_cast<std::int8_t>(sigma));
  put_field(out, state.phi, true);
  put_field(out, state.u, true);
  put_field(out, state.a0, false);
  put_field(out, state.a1, false);
  put_field(out, state.a2, false);
  put<std::uint32_t>(out, crc(out.data(), out.size()));
  return out;
}

Snapshot decode_snapshot(const std::string& bytes) {
  if (bytes.size() < kHeader + 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("not a snapshot: bad magic or truncated header");
  }
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != kSnapshotVersion) {
    throw FormatError("unsupported snapshot version " + std::to_string(version));
  }
  const auto n = get<std::uint32_t>(bytes, pos);
  const double length = get<double>(bytes, pos);
  const double t = get<double>(bytes, pos);
  const int sigma = get<std::int8_t>(bytes, pos);
  if (n > (1u << 15)) throw FormatError("snapshot grid size out of range");
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  if (bytes.size() != kHeader + cells * 8 * 7 + 4) {
    throw FormatError("snapshot size does not match its header");
  }
  std::size_t tail = bytes.size() - 4;
  const auto stored = get<std::uint32_t>(bytes, tail);
  if (stored != crc(bytes.data(), bytes.size() - 4)) {
    throw FormatError("snapshot checksum mismatch");
  }
  if (sigma != 1 && sigma != -1) throw FormatError("snapshot sigma must be +1 or -1");
  std::optional<GridSpec> g;
  try {
    g.emplace(static_cast<int>(n), length);
  } catch (const InvalidGrid& e) {
    throw FormatError(std::string("snapshot grid: ") + e.what());
  }
  ScalarField phi = get_field(bytes, pos, *g, true);
  ScalarField u = get_field(bytes, pos, *g, true);
  ScalarField a0 = get_field(bytes, pos, *g, false);
  ScalarField a1 = get_field(bytes, pos, *g, false);
  ScalarField a2 = get_field(bytes, pos, *g, false);
  return Snapshot{t, sigma, std::move(phi), std::move(u), std::move(a0), std::move(a1),
                  std::move(a2)};
}

void write_snapshot(const std::filesystem::path& path, const CshState& state, int sigma) {
  write_file_atomic(path, encode_snapshot(state, sigma));
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  try {
    return decode_snapshot(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string snapshot_name(long index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06ld.csh2", index);
  return buf;
}

std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw FormatError("no such trajectory directory: " + dir.string());
  }
  static const std::regex pattern(R"(snap_\d{6}\.csh2)");
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && std::regex_match(e.path().filename().string(), pattern)) {
      out.push_back(e.path());
    }
  }
  if (out.empty()) throw FormatError("no snapshots in " + dir.string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cshlab::io

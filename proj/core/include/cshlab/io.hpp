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

// File output helpers and the binary snapshot format.
//
// Snapshot layout, little-endian:
//   "CSH2"  u32 version  u32 n  f64 L  f64 t  i8 sigma
//   phi, u   complex, interleaved (re, im) f64, physical samples row-major
//   a0, a1, a2   real f64, physical samples row-major
//   u32 CRC-32 of every preceding byte

#ifndef CSHLAB_IO_HPP_
#define CSHLAB_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cshlab/csh_model.hpp"

namespace cshlab::io {

inline constexpr std::uint32_t kSnapshotVersion = 1;

// Writes to a temporary sibling, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);
// Throws FormatError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

struct Snapshot {
  double t = 0.0;
  int sigma = -1;
  ScalarField phi, u, a0, a1, a2;  // physical
};

std::string encode_snapshot(const CshState& state, int sigma);
// Throws FormatError on bad magic, version, size, grid or checksum.
Snapshot decode_snapshot(const std::string& bytes);

void write_snapshot(const std::filesystem::path& path, const CshState& state, int sigma);
Snapshot read_snapshot(const std::filesystem::path& path);

// File name of the i-th stored snapshot of a run.
std::string snapshot_name(long index);
// Snapshot files of a run directory in index order; throws FormatError when
// none exist.
std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir);

}  // namespace cshlab::io

#endif  // CSHLAB_IO_HPP_

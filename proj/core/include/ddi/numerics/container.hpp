// Copyright 2026 The ddi_attn Authors.
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

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ddi/numerics/tensor.hpp"

// Binary container for named tensors plus opaque named sections.
//
// Layout, all integers and doubles little-endian:
//   magic "DDIATTN\0"  u32 format_version
//   u32 tensor_count, then the manifest: per tensor  str name, u32 rank, u64 extent[rank]
//   per tensor:  str name, u32 rank, u64 extent[rank], f64 value[size]
//   u32 section_count, per section:  str name, u64 byte_count, bytes
// where str is u32 length followed by UTF-8 bytes.
namespace ddi {

inline constexpr std::uint32_t kContainerVersion = 1;

class ByteWriter {
 public:
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void str(std::string_view s);
  void bytes(std::string_view b) { buf_.append(b); }
  void f64s(std::span<const double> values);

  const std::string& buffer() const { return buf_; }
  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

// Reads from a byte buffer; throws CheckpointError on truncation.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  std::string str();
  std::string_view bytes(std::size_t n);
  void f64s(std::span<double> out);
  bool done() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::string_view take(std::size_t n);

  std::string_view data_;
  std::size_t pos_ = 0;
};

struct TensorRef {
  std::string name;
  const Tensor* tensor;
};

struct Section {
  std::string name;
  std::string bytes;
};

struct Container {
  std::vector<std::pair<std::string, Tensor>> tensors;
  std::vector<Section> sections;

  const Tensor* find_tensor(std::string_view name) const;
  const Section* find_section(std::string_view name) const;
};

std::string encode_container(std::span<const TensorRef> tensors, std::span<const Section> sections);
Container decode_container(std::string_view bytes);

void write_container_file(const std::string& path, std::span<const TensorRef> tensors,
                          std::span<const Section> sections);
Container read_container_file(const std::string& path);

}  // namespace ddi

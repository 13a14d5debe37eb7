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

#include "ddi/numerics/container.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "ddi/errors.hpp"

namespace ddi {
namespace {

constexpr std::string_view kMagic("DDIATTN\0", 8);

template <typename T>
void put_le(std::string& buf, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(std::string_view b) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

void put_shape(ByteWriter& w, const Shape& shape) {
  w.u32(static_cast<std::uint32_t>(shape.size()));
  for (auto e : shape) w.u64(e);
}

Shape get_shape(ByteReader& r) {
  const auto rank = r.u32();
  if (rank > 8) throw CheckpointError("implausible tensor rank " + std::to_string(rank));
  Shape shape(rank);
  for (auto& e : shape) e = r.u64();
  return shape;
}

}  // namespace

void ByteWriter::u32(std::uint32_t v) { put_le(buf_, v); }
void ByteWriter::u64(std::uint64_t v) { put_le(buf_, v); }
void ByteWriter::f64(double v) { put_le(buf_, std::bit_cast<std::uint64_t>(v)); }
void ByteWriter::str(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  buf_.append(s);
}
void ByteWriter::f64s(std::span<const double> values) {
  buf_.reserve(buf_.size() + values.size() * 8);
  for (double v : values) f64(v);
}

std::string_view ByteReader::take(std::size_t n) {
  if (n > remaining()) throw CheckpointError("container truncated");
  auto out = data_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::uint32_t ByteReader::u32() { return get_le<std::uint32_t>(take(4)); }
std::uint64_t ByteReader::u64() { return get_le<std::uint64_t>(take(8)); }
double ByteReader::f64() { return std::bit_cast<double>(get_le<std::uint64_t>(take(8))); }
std::string ByteReader::str() {
  auto n = u32();
  return std::string(take(n));
}
std::string_view ByteReader::bytes(std::size_t n) { return take(n); }
void ByteReader::f64s(std::span<double> out) {
  if (out.size() > remaining() / 8) throw CheckpointError("container truncated");
  for (auto& v : out) v = f64();
}

const Tensor* Container::find_tensor(std::string_view name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

const Section* Container::find_section(std::string_view name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::string encode_container(std::span<const TensorRef> tensors, std::span<const Section> sections) {
  ByteWriter w;
  w.bytes(kMagic);
  w.u32(kContainerVersion);
  w.u32(static_cast<std::uint32_t>(tensors.size()));
  for (const auto& t : tensors) {
    w.str(t.name);
    put_shape(w, t.tensor->shape());
  }
  for (const auto& t : tensors) {
    w.str(t.name);
    put_shape(w, t.tensor->shape());
    w.f64s(t.tensor->data());
  }
  w.u32(static_cast<std::uint32_t>(sections.size()));
  for (const auto& s : sections) {
    w.str(s.name);
    w.u64(s.bytes.size());
    w.bytes(s.bytes);
  }
  return w.take();
}

Container decode_container(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.remaining() < kMagic.size() || r.bytes(kMagic.size()) != kMagic) {
    throw CheckpointError("not a ddi_attn container (bad magic)");
  }
  const auto version = r.u32();
  if (version != kContainerVersion) throw CheckpointError("unsupported container version " + std::to_string(version));

  const auto count = r.u32();
  std::vector<std::pair<std::string, Shape>> manifest;
  for (std::uint32_t i = 0; i < count; ++i) {
    auto name = r.str();
    manifest.emplace_back(std::move(name), get_shape(r));
  }

  Container c;
  for (const auto& [name, shape] : manifest) {
    auto body_name = r.str();
    auto body_shape = get_shape(r);
    if (body_name != name || body_shape != shape) {
      throw CheckpointError("tensor '" + body_name + "' does not match manifest entry '" + name + "'");
    }
    const auto n = shape_size(shape);
    if (n > r.remaining() / 8) throw CheckpointError("container truncated in tensor '" + name + "'");
    std::vector<double> values(n);
    r.f64s(values);
    c.tensors.emplace_back(name, Tensor(shape, std::move(values)));
  }

  const auto nsec = r.u32();
  for (std::uint32_t i = 0; i < nsec; ++i) {
    Section s;
    s.name = r.str();
    const auto len = r.u64();
    if (len > r.remaining()) throw CheckpointError("container truncated in section '" + s.name + "'");
    s.bytes = std::string(r.bytes(len));
    c.sections.push_back(std::move(s));
  }
  if (!r.done()) throw CheckpointError("trailing bytes after container");
  return c;
}

void write_container_file(const std::string& path, std::span<const TensorRef> tensors,
                          std::span<const Section> sections) {
  const auto bytes = encode_container(tensors, sections);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path);
}

Container read_container_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_container(buf.str());
}

}  // namespace ddi

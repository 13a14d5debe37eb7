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

#include "ddi/training/checkpoint.hpp"

#include <fstream>

#include "ddi/errors.hpp"
#include "ddi/numerics/container.hpp"

namespace ddi {
namespace {

std::string encode_vocab(const Vocabulary& vocab) {
  ByteWriter w;
  w.u64(vocab.hash());
  w.u32(static_cast<std::uint32_t>(vocab.size()));
  for (const auto& t : vocab.tokens()) w.str(t);
  return w.take();
}

Vocabulary decode_vocab(std::string_view bytes) {
  ByteReader r(bytes);
  const std::uint64_t hash = r.u64();
  const std::uint32_t n = r.u32();
  std::vector<std::string> tokens;
  tokens.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) tokens.push_back(r.str());
  if (!r.done()) throw CheckpointError("trailing bytes in vocab section");
  Vocabulary vocab;
  try {
    vocab = Vocabulary::from_tokens(std::move(tokens));
  } catch (const Error& e) {
    throw CheckpointError(std::string("bad vocab section: ") + e.what());
  }
  if (vocab.hash() != hash) throw CheckpointShapeMismatch("vocabulary hash does not match its tokens");
  return vocab;
}

std::string encode_store(const RelevantStore& store) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(store.capacity()));
  w.u32(static_cast<std::uint32_t>(store.dim()));
  w.u32(static_cast<std::uint32_t>(store.key_count()));
  for (const auto& [key, vectors] : store.entries()) {
    w.str(key.drug1);
    w.str(key.drug2);
    w.u32(static_cast<std::uint32_t>(vectors.size()));
    for (const auto& v : vectors) w.f64s(v);
  }
  return w.take();
}

RelevantStore decode_store(std::string_view bytes) {
  ByteReader r(bytes);
  const std::uint32_t capacity = r.u32();
  const std::uint32_t dim = r.u32();
  const std::uint32_t keys = r.u32();
  RelevantStore store(capacity, dim);
  for (std::uint32_t k = 0; k < keys; ++k) {
    PairKey key;
    key.drug1 = r.str();
    key.drug2 = r.str();
    const std::uint32_t count = r.u32();
    if (count > capacity) throw CheckpointError("store key holds more vectors than its capacity");
    std::vector<double> v(dim);
    for (std::uint32_t i = 0; i < count; ++i) {
      r.f64s(v);
      store.insert(key, v);
    }
  }
  if (!r.done()) throw CheckpointError("trailing bytes in store section");
  return store;
}

const Section& require_section(const Container& c, std::string_view name) {
  const Section* s = c.find_section(name);
  if (!s) throw CheckpointError("checkpoint lacks section '" + std::string(name) + "'");
  return *s;
}

}  // namespace

std::string encode_checkpoint(const TrainConfig& config, const Vocabulary& vocab, const ModelParams& params,
                              const RelevantStore& store) {
  std::vector<TensorRef> refs;
  for (const auto& [name, t] : params.named()) refs.push_back({name, t});
  const std::vector<Section> sections = {
      {"config", config_to_json(config)},
      {"vocab", encode_vocab(vocab)},
      {"store", encode_store(store)},
  };
  return encode_container(refs, sections);
}

void save_checkpoint(const std::string& path, const TrainConfig& config, const Vocabulary& vocab,
                     const ModelParams& params, const RelevantStore& store) {
  const auto bytes = encode_checkpoint(config, vocab, params, store);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path);
}

namespace {

Checkpoint from_container(const Container& c) {
  TrainConfig config = config_from_json(require_section(c, "config").bytes);
  Vocabulary vocab = decode_vocab(require_section(c, "vocab").bytes);
  RelevantStore store = decode_store(require_section(c, "store").bytes);

  std::mt19937_64 rng(0);
  ModelParams params = init_params(config.model, vocab.size(), rng);
  auto named = params.named();
  if (named.size() != c.tensors.size()) {
    throw CheckpointShapeMismatch("checkpoint holds " + std::to_string(c.tensors.size()) + " tensors, config expects " +
                                  std::to_string(named.size()));
  }
  for (auto& [name, t] : named) {
    const Tensor* stored = c.find_tensor(name);
    if (!stored) throw CheckpointShapeMismatch("checkpoint lacks tensor '" + name + "'");
    if (stored->shape() != t->shape()) {
      throw CheckpointShapeMismatch("tensor '" + name + "' has shape " + shape_string(stored->shape()) +
                                    ", expected " + shape_string(t->shape()));
    }
    *t = *stored;
  }
  params.configure(config.model);
  validate_params(params, config.model, vocab.size());
  if (store.dim() != 0 && store.dim() != config.model.d_h) {
    throw CheckpointShapeMismatch("store vectors have length " + std::to_string(store.dim()) + ", expected d_h " +
                                  std::to_string(config.model.d_h));
  }
  return Checkpoint{std::move(config), std::move(vocab), std::move(params), std::move(store)};
}

}  // namespace

Checkpoint decode_checkpoint(std::string_view bytes) { return from_container(decode_container(bytes)); }

Checkpoint load_checkpoint(const std::string& path) { return from_container(read_container_file(path)); }

}  // namespace ddi

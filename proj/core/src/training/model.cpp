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

#include "ddi/training/model.hpp"

#include <json.hpp>

#include "ddi/errors.hpp"

namespace ddi {

void ModelConfig::validate() const {
  if (d_we == 0 || d_pe == 0 || d_h == 0 || t_max < 2) throw Error("model dimensions must be positive (t_max >= 2)");
  if (!(dropout_p >= 0.0 && dropout_p <= 1.0)) throw Error("dropout must lie in [0, 1]");
}

void TrainConfig::validate() const {
  model.validate();
  if (batch_size == 0) throw Error("batch size must be positive");
  if (!(lambda >= 0.0)) throw Error("lambda must be nonnegative");
  if (!(adam.lr > 0.0)) throw Error("learning rate must be positive");
}

std::string config_to_json(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["d_we"] = c.model.d_we;
  j["d_pe"] = c.model.d_pe;
  j["d_h"] = c.model.d_h;
  j["t_max"] = c.model.t_max;
  j["position_clip"] = c.model.clip();
  j["dropout_p"] = c.model.dropout_p;
  j["gru_bias"] = c.model.gru_bias;
  j["dynamic_embeddings"] = c.model.dynamic_embeddings;
  j["sentence_attention"] = c.model.sentence_attention;
  j["store_capacity"] = c.model.store_capacity;
  j["batch_size"] = c.batch_size;
  j["lambda"] = c.lambda;
  j["lr"] = c.adam.lr;
  j["beta1"] = c.adam.beta1;
  j["beta2"] = c.adam.beta2;
  j["epsilon"] = c.adam.epsilon;
  j["max_steps"] = c.max_steps;
  j["eval_every"] = c.eval_every;
  j["checkpoint_every"] = c.checkpoint_every;
  j["seed"] = c.seed;
  j["min_count"] = c.min_count;
  return j.dump(2);
}

TrainConfig config_from_json(std::string_view text) {
  TrainConfig c;
  try {
    auto j = nlohmann::json::parse(text);
    c.model.d_we = j.at("d_we").get<std::size_t>();
    c.model.d_pe = j.at("d_pe").get<std::size_t>();
    c.model.d_h = j.at("d_h").get<std::size_t>();
    c.model.t_max = j.at("t_max").get<std::size_t>();
    c.model.position_clip = j.at("position_clip").get<std::size_t>();
    c.model.dropout_p = j.at("dropout_p").get<double>();
    c.model.gru_bias = j.at("gru_bias").get<bool>();
    c.model.dynamic_embeddings = j.at("dynamic_embeddings").get<bool>();
    c.model.sentence_attention = j.at("sentence_attention").get<bool>();
    c.model.store_capacity = j.at("store_capacity").get<std::size_t>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.lambda = j.at("lambda").get<double>();
    c.adam.lr = j.at("lr").get<double>();
    c.adam.beta1 = j.at("beta1").get<double>();
    c.adam.beta2 = j.at("beta2").get<double>();
    c.adam.epsilon = j.at("epsilon").get<double>();
    c.max_steps = j.at("max_steps").get<std::size_t>();
    c.eval_every = j.at("eval_every").get<std::size_t>();
    c.checkpoint_every = j.at("checkpoint_every").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.min_count = j.at("min_count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("bad config echo: ") + e.what());
  }
  return c;
}

namespace {

template <typename Self, typename Out>
void collect_named(Self& self, Out& out) {
  out.emplace_back("E_w", &self.embeddings.words);
  out.emplace_back("E_p", &self.embeddings.positions);
  for (auto [prefix, gru] : {std::pair{"fwd.", &self.forward}, std::pair{"bwd.", &self.backward}}) {
    const std::string p(prefix);
    out.emplace_back(p + "W_r", &gru->W_r);
    out.emplace_back(p + "U_r", &gru->U_r);
    out.emplace_back(p + "W", &gru->W);
    out.emplace_back(p + "U", &gru->U);
    out.emplace_back(p + "W_z", &gru->W_z);
    out.emplace_back(p + "U_z", &gru->U_z);
    if (gru->has_bias) {
      out.emplace_back(p + "b_r", &gru->b_r);
      out.emplace_back(p + "b_h", &gru->b_h);
      out.emplace_back(p + "b_z", &gru->b_z);
    }
  }
  out.emplace_back("omega", &self.omega);
  out.emplace_back("A_diag", &self.sentence.A_diag);
  out.emplace_back("r", &self.sentence.r);
  out.emplace_back("M", &self.classifier.M);
  out.emplace_back("b_cls", &self.classifier.b_cls);
}

void require_shape(const Tensor& t, const Shape& expected, const std::string& name) {
  if (t.shape() != expected) {
    throw CheckpointShapeMismatch("parameter " + name + " has shape " + shape_string(t.shape()) + ", expected " +
                                  shape_string(expected));
  }
}

}  // namespace

std::vector<std::pair<std::string, Tensor*>> ModelParams::named() {
  std::vector<std::pair<std::string, Tensor*>> out;
  collect_named(*this, out);
  return out;
}

std::vector<std::pair<std::string, const Tensor*>> ModelParams::named() const {
  std::vector<std::pair<std::string, const Tensor*>> out;
  collect_named(*this, out);
  return out;
}

std::vector<Tensor*> ModelParams::trainable() {
  std::vector<Tensor*> out;
  for (auto& [name, t] : named()) {
    if (t->requires_grad()) out.push_back(t);
  }
  return out;
}

void ModelParams::zero_grad() const {
  for (auto& [name, t] : named()) t->zero_grad();
}

void ModelParams::configure(const ModelConfig& config) {
  for (auto& [name, t] : named()) t->set_requires_grad(true);
  embeddings.set_trainable(config.dynamic_embeddings);
}

ModelParams init_params(const ModelConfig& config, std::size_t vocab_size, std::mt19937_64& rng) {
  config.validate();
  ModelParams p;
  p.embeddings = make_embedding_tables(vocab_size, config.d_we, config.d_pe, config.t_max, config.clip(), rng);
  p.forward = make_gru_params(config.input_dim(), config.d_h, config.gru_bias, rng);
  p.backward = make_gru_params(config.input_dim(), config.d_h, config.gru_bias, rng);
  p.omega = Tensor(Shape{config.d_h});
  fill_uniform(p.omega, -0.1, 0.1, rng);
  p.sentence = make_sentence_attention_params(config.d_h, rng);
  p.classifier = make_classifier_params(config.d_h, rng);
  p.configure(config);
  return p;
}

void validate_params(const ModelParams& params, const ModelConfig& config, std::size_t vocab_size) {
  const std::size_t d = config.input_dim();
  const std::size_t d_h = config.d_h;
  require_shape(params.embeddings.words, {vocab_size, config.d_we}, "E_w");
  require_shape(params.embeddings.positions, {2 * config.clip() + 2, config.d_pe}, "E_p");
  for (const GruParams* g : {&params.forward, &params.backward}) {
    for (const Tensor* w : {&g->W_r, &g->W, &g->W_z}) require_shape(*w, {d_h, d}, "GRU input weight");
    for (const Tensor* u : {&g->U_r, &g->U, &g->U_z}) require_shape(*u, {d_h, d_h}, "GRU recurrent weight");
    if (g->has_bias) {
      for (const Tensor* b : {&g->b_r, &g->b_h, &g->b_z}) require_shape(*b, {d_h}, "GRU bias");
    }
  }
  require_shape(params.omega, {d_h}, "omega");
  require_shape(params.sentence.A_diag, {d_h}, "A_diag");
  require_shape(params.sentence.r, {d_h}, "r");
  require_shape(params.classifier.M, {kNumLabels, d_h}, "M");
  require_shape(params.classifier.b_cls, {kNumLabels}, "b_cls");
  if (params.embeddings.t_max != config.t_max || params.embeddings.clip != config.clip()) {
    throw CheckpointShapeMismatch("embedding tables built for a different t_max");
  }
}

ForwardPass forward(Graph& g, const ModelParams& params, const ModelConfig& config, const Instance& instance,
                    const RelevantStore& store, bool training, std::mt19937_64& rng) {
  Var X = embed(g, instance, params.embeddings);
  std::vector<bool> mask(config.t_max, false);
  for (std::size_t i = 0; i < instance.tokens.size(); ++i) mask[i] = instance.tokens[i] != Vocabulary::kPad;
  auto encoded = encode_bidirectional(g, X, mask, params.forward, params.backward, config.dropout_p, training, rng);
  auto word = word_attention(g, encoded, params.omega);

  ForwardPass out;
  out.h_star = word.h_star;
  out.word_weights = word.weights;
  if (config.sentence_attention) {
    auto sent = attend_sentences(g, word.h_star, instance.key, store, params.sentence);
    out.s = sent.s;
    out.sentence_weights = sent.alpha;
  } else {
    out.s = word.h_star;
  }
  out.probabilities = classify(g, out.s, params.classifier);
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ b);
}

}  // namespace ddi

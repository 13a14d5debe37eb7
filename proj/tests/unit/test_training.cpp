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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numeric>

#include "ddi/errors.hpp"
#include "ddi/evaluation/metrics.hpp"
#include "ddi/training/checkpoint.hpp"
#include "ddi/training/split.hpp"
#include "ddi/training/trainer.hpp"
#include "synthetic.hpp"

using namespace ddi;

namespace {

TrainConfig toy_train_config() {
  TrainConfig c;
  c.model.d_we = 8;
  c.model.d_pe = 3;
  c.model.d_h = 6;
  c.model.t_max = 16;
  c.batch_size = 8;
  c.max_steps = 5;
  c.eval_every = 0;
  c.checkpoint_every = 0;
  return c;
}

struct Trained {
  fixtures::ToyData data;
  TrainResult result;
  ModelParams initial;
};

Trained run(const TrainConfig& config, std::size_t threads = 1) {
  auto data = fixtures::synthetic_corpus(config.model.t_max, 2);
  std::mt19937_64 rng(config.seed);
  auto params = init_params(config.model, data.vocab.size(), rng);
  auto initial = params;
  auto result = train(data.corpus.instances, {}, config, std::move(params), {}, threads);
  return {std::move(data), std::move(result), std::move(initial)};
}

bool params_identical(const ModelParams& a, const ModelParams& b) {
  auto na = a.named();
  auto nb = b.named();
  if (na.size() != nb.size()) return false;
  for (std::size_t i = 0; i < na.size(); ++i) {
    if (na[i].first != nb[i].first || !na[i].second->identical(*nb[i].second)) return false;
  }
  return true;
}

}  // namespace

TEST(Loss, Examples) {
  const std::array<double, 5> certain = {0, 0, 1, 0, 0};
  EXPECT_EQ(instance_loss(certain, DdiLabel::Effect), 0.0);
  const std::array<double, 5> uniform = {0.2, 0.2, 0.2, 0.2, 0.2};
  EXPECT_NEAR(instance_loss(uniform, DdiLabel::Int), std::log(5.0), 1e-12);
  EXPECT_NEAR(instance_loss(certain, DdiLabel::False), 27.631021115928547, 1e-9);
}

TEST(Objective, Examples) {
  std::mt19937_64 rng(1);
  auto config = fixtures::tiny_config();
  auto params = init_params(config, 8, rng);
  const std::vector<double> losses = {0.5, 1.5};
  EXPECT_EQ(objective(losses, params, 0.0, true), 1.0);
  EXPECT_THROW(objective({}, params, 0.0, true), EmptyBatch);

  for (auto& [name, t] : params.named()) std::fill(t->data().begin(), t->data().end(), 0.0);
  EXPECT_EQ(l2_penalty(params, true), 0.0);
  params.omega[0] = 2.0;
  const std::vector<double> zero = {0.0};
  EXPECT_EQ(objective(zero, params, 1.0, true), 4.0);
  params.embeddings.words.at(5, 0) = 3.0;
  EXPECT_EQ(l2_penalty(params, true), 13.0);
  EXPECT_EQ(l2_penalty(params, false), 4.0);
}

TEST(Objective, ZeroParametersGiveLnFive) {
  std::mt19937_64 rng(2);
  auto config = fixtures::tiny_config();
  auto params = init_params(config, 8, rng);
  for (auto& [name, t] : params.named()) std::fill(t->data().begin(), t->data().end(), 0.0);
  Instance inst;
  inst.tokens = {Vocabulary::kDrug1, 6, Vocabulary::kDrug2};
  inst.v = 2;
  inst.label = DdiLabel::Advise;
  TrainConfig tc;
  tc.model = config;
  const Instance* batch[] = {&inst};
  auto r = evaluate_batch(params, tc, batch, RelevantStore(), 0, false);
  EXPECT_NEAR(r.objective, std::log(5.0), 1e-12);
  EXPECT_THROW(evaluate_batch(params, tc, {}, RelevantStore(), 0, false), EmptyBatch);
}

TEST(Gradient, FullModelMatchesFiniteDifferences) {
  auto config = fixtures::tiny_config();
  config.dropout_p = 0.25;
  auto check = fixtures::model_gradient_check(config, 0.01, 3);
  EXPECT_LT(check.max_rel_error, 1e-4) << check.worst;
  EXPECT_GT(check.entries, 100u);
}

TEST(Gradient, WithBiasAndWithoutSentenceAttention) {
  auto config = fixtures::tiny_config();
  config.gru_bias = true;
  auto check = fixtures::model_gradient_check(config, 0.01, 4);
  EXPECT_LT(check.max_rel_error, 1e-4) << check.worst;
  config.sentence_attention = false;
  config.dynamic_embeddings = false;
  check = fixtures::model_gradient_check(config, 0.01, 5);
  EXPECT_LT(check.max_rel_error, 1e-4) << check.worst;
}

TEST(Gradient, ThreadCountDoesNotChangeBits) {
  auto config = toy_train_config();
  auto data = fixtures::synthetic_corpus(config.model.t_max, 2);
  std::mt19937_64 rng(1);
  auto params = init_params(config.model, data.vocab.size(), rng);
  params.configure(config.model);
  std::vector<const Instance*> batch;
  for (const auto& i : data.corpus.instances) batch.push_back(&i);
  auto grads = [&](std::size_t threads) {
    params.zero_grad();
    evaluate_batch(params, config, batch, RelevantStore(), 9, true, threads);
    std::vector<double> all;
    for (auto& [name, t] : params.named()) all.insert(all.end(), t->grad().begin(), t->grad().end());
    return all;
  };
  const auto one = grads(1);
  const auto four = grads(4);
  ASSERT_EQ(one.size(), four.size());
  EXPECT_EQ(std::memcmp(one.data(), four.data(), one.size() * sizeof(double)), 0);
}

TEST(Train, ZeroStepsKeepsInitialization) {
  auto config = toy_train_config();
  config.max_steps = 0;
  auto t = run(config);
  EXPECT_TRUE(params_identical(t.result.params, t.initial));
  EXPECT_EQ(t.result.store.key_count(), 0u);
}

TEST(Train, SameSeedSameBits) {
  auto config = toy_train_config();
  auto a = run(config, 1);
  auto b = run(config, 3);
  EXPECT_TRUE(params_identical(a.result.params, b.result.params));
  EXPECT_EQ(a.result.store, b.result.store);
  config.seed = 2;
  auto c = run(config);
  EXPECT_FALSE(params_identical(a.result.params, c.result.params));
}

TEST(Train, StaticEmbeddingsFrozenDynamicMove) {
  auto config = toy_train_config();
  config.model.dynamic_embeddings = false;
  auto frozen = run(config);
  EXPECT_TRUE(frozen.result.params.embeddings.words.identical(frozen.initial.embeddings.words));
  EXPECT_TRUE(frozen.result.params.embeddings.positions.identical(frozen.initial.embeddings.positions));
  EXPECT_FALSE(frozen.result.params.omega.identical(frozen.initial.omega));
  EXPECT_FALSE(frozen.result.params.forward.W.identical(frozen.initial.forward.W));
  EXPECT_FALSE(frozen.result.params.classifier.M.identical(frozen.initial.classifier.M));

  config.model.dynamic_embeddings = true;
  config.max_steps = 1;
  auto moved = run(config);
  EXPECT_FALSE(moved.result.params.embeddings.words.identical(moved.initial.embeddings.words));
  for (std::size_t j = 0; j < config.model.d_we; ++j) {
    EXPECT_EQ(moved.result.params.embeddings.words.at(Vocabulary::kPad, j), 0.0);
  }
}

TEST(Train, StoreFillsAndStoredVectorsNeverChange) {
  auto config = toy_train_config();
  config.max_steps = 1;
  auto first = run(config);
  EXPECT_GT(first.result.store.vector_count(), 0u);
  EXPECT_LE(first.result.store.vector_count(), config.batch_size);
  config.max_steps = 4;
  auto later = run(config);
  for (const auto& [key, vectors] : first.result.store.entries()) {
    const auto& after = later.result.store.find(key);
    ASSERT_GE(after.size(), vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) EXPECT_EQ(after[i], vectors[i]);
  }
}

TEST(Train, NoSentenceAttentionLeavesStoreEmpty) {
  auto config = toy_train_config();
  config.model.sentence_attention = false;
  auto t = run(config);
  EXPECT_EQ(t.result.store.key_count(), 0u);
}

// Adam moves each entry by about lr on the first step, so entries smaller than lr/2 cross zero.
TEST(Train, RegularizationAloneShrinksParameters) {
  auto config = fixtures::tiny_config();
  std::mt19937_64 rng(7);
  auto params = init_params(config, 8, rng);
  params.configure(config);
  params.zero_grad();
  const double lambda = 0.5;
  auto before = params;
  for (auto& [name, t] : params.named()) {
    if (!t->requires_grad()) continue;
    for (std::size_t i = 0; i < t->size(); ++i) t->grad()[i] = 2 * lambda * (*t)[i];
  }
  auto trainable = params.trainable();
  auto state = make_adam_state({}, std::vector<const Tensor*>(trainable.begin(), trainable.end()));
  adam_step(trainable, state);
  auto nb = before.named();
  auto na = params.named();
  for (std::size_t p = 0; p < na.size(); ++p) {
    for (std::size_t i = 0; i < na[p].second->size(); ++i) {
      const double was = (*nb[p].second)[i];
      const double now = (*na[p].second)[i];
      if (std::abs(was) > 0.5e-3) {
        EXPECT_LT(std::abs(now), std::abs(was)) << na[p].first;
      } else if (was != 0.0) {
        EXPECT_LT(std::abs(now), 1e-3) << na[p].first;
      }
    }
  }
}

TEST(Train, TraceAndCheckpointHooks) {
  auto config = toy_train_config();
  config.max_steps = 6;
  config.eval_every = 2;
  config.checkpoint_every = 3;
  auto data = fixtures::synthetic_corpus(config.model.t_max, 2);
  std::mt19937_64 rng(1);
  std::vector<std::size_t> trace_steps, ckpt_steps;
  TrainHooks hooks;
  hooks.on_trace = [&](const TraceRow& r) {
    trace_steps.push_back(r.step);
    EXPECT_TRUE(std::isnan(r.heldout_f1));
  };
  hooks.on_checkpoint = [&](std::size_t s, const ModelParams&, const RelevantStore&) { ckpt_steps.push_back(s); };
  auto result = train(data.corpus.instances, {}, config, init_params(config.model, data.vocab.size(), rng), hooks);
  EXPECT_EQ(trace_steps, (std::vector<std::size_t>{2, 4, 6}));
  EXPECT_EQ(ckpt_steps, (std::vector<std::size_t>{3, 6}));
  EXPECT_EQ(result.step_objectives.size(), 6u);

  EncodedCorpus heldout;
  heldout.instances = data.corpus.instances;
  result = train(data.corpus.instances, heldout, config, init_params(config.model, data.vocab.size(), rng));
  ASSERT_EQ(result.trace.size(), 3u);
  EXPECT_GE(result.trace[0].heldout_f1, 0.0);
  EXPECT_GT(result.trace[0].heldout_objective, 0.0);
}

TEST(Train, ObjectiveDescendsOnSyntheticCorpus) {
  auto data = fixtures::synthetic_corpus(24, 6);
  TrainConfig config;
  config.model.d_we = 16;
  config.model.d_pe = 4;
  config.model.d_h = 16;
  config.model.t_max = 24;
  config.max_steps = 200;
  config.eval_every = 0;
  config.checkpoint_every = 0;
  std::mt19937_64 rng(config.seed);
  auto result = train(data.corpus.instances, {}, config, init_params(config.model, data.vocab.size(), rng));
  const auto& j = result.step_objectives;
  const double first = std::accumulate(j.begin(), j.begin() + 100, 0.0) / 100;
  const double second = std::accumulate(j.begin() + 100, j.end(), 0.0) / 100;
  EXPECT_LT(second, first);
}

TEST(Train, EmptyTrainingSetThrows) {
  auto config = toy_train_config();
  std::mt19937_64 rng(1);
  EXPECT_THROW(train({}, {}, config, init_params(config.model, 10, rng)), EmptyCorpus);
}

TEST(Predict, DeterministicAndHandlesEdgeCases) {
  auto config = toy_train_config();
  auto t = run(config);
  const auto& model = config.model;
  auto a = predict(t.result.params, model, t.result.store, t.data.corpus, 1);
  auto b = predict(t.result.params, model, t.result.store, t.data.corpus, 4);
  ASSERT_EQ(a.size(), t.data.corpus.total());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].probabilities, b[i].probabilities);
    EXPECT_EQ(a[i].h_star, b[i].h_star);
    EXPECT_EQ(a[i].predicted, argmax_label(a[i].probabilities));
    EXPECT_NEAR(std::accumulate(a[i].probabilities.begin(), a[i].probabilities.end(), 0.0), 1.0, 1e-9);
  }
  EXPECT_TRUE(predict(t.result.params, model, t.result.store, std::span<const Instance>{}, 2).empty());

  Instance unseen = t.data.corpus.instances[0];
  unseen.key = {"nothing", "known"};
  Graph g(false);
  std::mt19937_64 rng(0);
  auto pass = forward(g, t.result.params, model, unseen, t.result.store, false, rng);
  EXPECT_TRUE(pass.sentence_weights.value().identical(Tensor::vector({1.0})));
  EXPECT_TRUE(pass.s.value().identical(pass.h_star.value()));
}

TEST(Predict, RejectedInstancesBecomeFalse) {
  auto config = toy_train_config();
  auto t = run(config);
  auto blinded = blind_corpus(fixtures::synthetic_sentences(1));
  auto encoded = encode_corpus(blinded.instances, t.data.vocab, 4);
  ASSERT_FALSE(encoded.rejected.empty());
  auto model = config.model;
  auto preds = predict(t.result.params, model, t.result.store, encoded);
  ASSERT_EQ(preds.size(), blinded.instances.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    EXPECT_EQ(preds[i].source, blinded.instances[i].source);
    if (preds[i].rejected) {
      EXPECT_EQ(preds[i].predicted, DdiLabel::False);
      EXPECT_EQ(preds[i].probabilities[0], 1.0);
    }
  }
}

TEST(Predict, OneAttentionModeEqualsClassifyOfHStar) {
  auto config = toy_train_config();
  config.model.sentence_attention = false;
  auto t = run(config);
  auto preds = predict(t.result.params, config.model, t.result.store, t.data.corpus);
  for (const auto& p : preds) {
    Graph g(false);
    auto o = classify(g, g.constant(Tensor::vector(p.h_star)), t.result.params.classifier).value();
    for (std::size_t c = 0; c < kNumLabels; ++c) EXPECT_EQ(o[c], p.probabilities[c]);
    EXPECT_EQ(p.s, p.h_star);
  }
}

TEST(Argmax, TiesGoLow) {
  const std::array<double, 5> tie = {0.1, 0.3, 0.3, 0.2, 0.1};
  EXPECT_EQ(argmax_label(tie), DdiLabel::Mechanism);
}

TEST(Config, JsonRoundTripAndValidation) {
  auto c = toy_train_config();
  c.lambda = 0.123;
  c.model.dynamic_embeddings = false;
  auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(back.lambda, 0.123);
  EXPECT_FALSE(back.model.dynamic_embeddings);
  EXPECT_THROW(config_from_json("{not json"), CheckpointError);
  c.model.dropout_p = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c.model.dropout_p = 0.5;
  c.model.d_h = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Checkpoint, ByteExactRoundTrip) {
  auto config = toy_train_config();
  auto t = run(config);
  auto bytes = encode_checkpoint(config, t.data.vocab, t.result.params, t.result.store);
  auto ckpt = decode_checkpoint(bytes);
  EXPECT_TRUE(params_identical(ckpt.params, t.result.params));
  EXPECT_EQ(ckpt.store, t.result.store);
  EXPECT_EQ(ckpt.vocab.tokens(), t.data.vocab.tokens());
  EXPECT_EQ(encode_checkpoint(ckpt.config, ckpt.vocab, ckpt.params, ckpt.store), bytes);

  const auto dir = fixtures::temp_dir("ckpt");
  save_checkpoint(dir + "/m.ckpt", config, t.data.vocab, t.result.params, t.result.store);
  EXPECT_TRUE(params_identical(load_checkpoint(dir + "/m.ckpt").params, t.result.params));
}

TEST(Checkpoint, ShapeAndVocabMismatch) {
  auto config = toy_train_config();
  auto t = run(config);
  auto bigger = t.data.vocab;
  bigger.add("extra-token");
  EXPECT_THROW(decode_checkpoint(encode_checkpoint(config, bigger, t.result.params, t.result.store)),
               CheckpointShapeMismatch);
  auto wrong = config;
  wrong.model.d_h = 7;
  EXPECT_THROW(decode_checkpoint(encode_checkpoint(wrong, t.data.vocab, t.result.params, t.result.store)),
               CheckpointShapeMismatch);
  auto bytes = encode_checkpoint(config, t.data.vocab, t.result.params, t.result.store);
  EXPECT_THROW(decode_checkpoint(bytes.substr(0, bytes.size() / 2)), CheckpointError);
}

TEST(Split, HeldoutByDocument) {
  std::vector<BlindedInstance> insts;
  for (int d = 0; d < 200; ++d) {
    BlindedInstance b;
    b.source.doc_id = "doc" + std::to_string(d);
    insts.push_back(b);
  }
  auto split = split_heldout(insts);
  EXPECT_EQ(split.training.size() + split.heldout.size(), 200u);
  EXPECT_GT(split.heldout.size(), 5u);
  EXPECT_LT(split.heldout.size(), 40u);
  for (const auto& h : split.heldout) EXPECT_TRUE(is_heldout_document(h.source.doc_id));

  std::vector<BlindedInstance> only_heldout;
  for (const auto& h : split.heldout) only_heldout.push_back(h);
  auto fallback = split_heldout(only_heldout);
  EXPECT_EQ(fallback.training.size(), only_heldout.size());
  EXPECT_TRUE(fallback.heldout.empty());
}

TEST(Threads, EnvironmentCap) {
  setenv("DDI_ATTN_THREADS", "1", 1);
  EXPECT_EQ(default_thread_count(), 1u);
  unsetenv("DDI_ATTN_THREADS");
  EXPECT_GE(default_thread_count(), 1u);
}

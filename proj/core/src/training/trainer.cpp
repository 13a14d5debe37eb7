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

#include "ddi/training/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <thread>

#include "ddi/errors.hpp"
#include "ddi/evaluation/metrics.hpp"
#include "ddi/numerics/ops.hpp"

namespace ddi {
namespace {

bool is_embedding(const std::string& name) { return name == "E_w" || name == "E_p"; }

// Calls fn(i) for i in [0, n) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> workers;
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i; !failed && (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (error) std::rethrow_exception(error);
}

Prediction rejected_prediction(const RejectedInstance& r) {
  Prediction p;
  p.source = r.source;
  p.gold = r.label;
  p.predicted = DdiLabel::False;
  p.probabilities[label_index(DdiLabel::False)] = 1.0;
  p.rejected = true;
  return p;
}

struct HeldoutScore {
  double objective = std::numeric_limits<double>::quiet_NaN();
  double f1 = std::numeric_limits<double>::quiet_NaN();
};

HeldoutScore score_heldout(const ModelParams& params, const TrainConfig& config, const RelevantStore& store,
                           const EncodedCorpus& heldout, std::size_t threads) {
  HeldoutScore score;
  if (heldout.total() == 0) return score;
  auto predictions = predict(params, config.model, store, heldout, threads);
  std::vector<double> losses;
  std::vector<DdiLabel> golds, predicted;
  for (const auto& p : predictions) {
    golds.push_back(p.gold);
    predicted.push_back(p.predicted);
    if (!p.rejected) losses.push_back(instance_loss(p.probabilities, p.gold));
  }
  if (!losses.empty()) score.objective = objective(losses, params, config.lambda, config.model.dynamic_embeddings);
  score.f1 = metrics(confusion(golds, predicted)).f1;
  return score;
}

}  // namespace

double instance_loss(std::span<const double> probabilities, DdiLabel label) {
  const double p = probabilities[label_index(label)];
  return -std::log(p > kProbabilityFloor ? p : kProbabilityFloor);
}

double l2_penalty(const ModelParams& params, bool include_embeddings) {
  double total = 0.0;
  for (const auto& [name, t] : params.named()) {
    if (!include_embeddings && is_embedding(name)) continue;
    for (double x : t->data()) total += x * x;
  }
  return total;
}

double objective(std::span<const double> losses, const ModelParams& params, double lambda, bool include_embeddings) {
  if (losses.empty()) throw EmptyBatch("objective over an empty batch");
  double mean = 0.0;
  for (double l : losses) mean += l;
  mean /= static_cast<double>(losses.size());
  return mean + lambda * l2_penalty(params, include_embeddings);
}

BatchResult evaluate_batch(ModelParams& params, const TrainConfig& config, std::span<const Instance* const> batch,
                           const RelevantStore& store, std::uint64_t dropout_seed, bool with_gradient,
                           std::size_t threads) {
  if (batch.empty()) throw EmptyBatch("evaluate_batch on an empty batch");
  const std::size_t n = batch.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  threads = std::max<std::size_t>(1, threads);

  BatchResult result;
  std::vector<double> losses(n);
  result.h_stars.resize(n);

  // Waves of `threads` graphs; gradients are folded into θ in batch order.
  for (std::size_t begin = 0; begin < n; begin += threads) {
    const std::size_t count = std::min(threads, n - begin);
    std::vector<std::unique_ptr<Graph>> graphs(count);
    parallel_for(count, threads, [&](std::size_t w) {
      const std::size_t k = begin + w;
      graphs[w] = std::make_unique<Graph>(with_gradient);
      Graph& g = *graphs[w];
      std::mt19937_64 rng(derive_seed(dropout_seed, k, 0));
      auto pass = forward(g, params, config.model, *batch[k], store, /*training=*/true, rng);
      Var loss = neg_log_prob(pass.probabilities, label_index(batch[k]->label), kProbabilityFloor);
      losses[k] = loss.value().item();
      result.h_stars[k] = pass.h_star.value();
      if (with_gradient) g.backprop(scale(loss, inv_n));
    });
    if (with_gradient) {
      for (auto& g : graphs) g->accumulate_into_parameters();
    }
  }

  const bool dynamic = config.model.dynamic_embeddings;
  result.mean_loss = 0.0;
  for (double l : losses) result.mean_loss += l;
  result.mean_loss *= inv_n;
  result.objective = objective(losses, params, config.lambda, dynamic);

  if (with_gradient && config.lambda != 0.0) {
    for (auto& [name, t] : params.named()) {
      if (!t->requires_grad() || (!dynamic && is_embedding(name))) continue;
      auto g = t->grad();
      for (std::size_t i = 0; i < t->size(); ++i) g[i] += 2.0 * config.lambda * (*t)[i];
    }
  }
  return result;
}

TrainResult train(std::span<const Instance> training, const EncodedCorpus& heldout, const TrainConfig& config,
                  ModelParams initial, const TrainHooks& hooks, std::size_t threads) {
  config.validate();
  if (training.empty() && config.max_steps > 0) throw EmptyCorpus("no training instances");

  TrainResult result{std::move(initial), RelevantStore(config.model.store_capacity, config.model.d_h), {}, {}};
  ModelParams& params = result.params;
  params.configure(config.model);
  auto trainable = params.trainable();
  auto adam = make_adam_state(config.adam, trainable);

  std::mt19937_64 sampler(derive_seed(config.seed, 1, 0));
  std::uniform_int_distribution<std::size_t> pick(0, training.empty() ? 0 : training.size() - 1);
  std::vector<const Instance*> batch(config.batch_size);

  for (std::size_t step = 1; step <= config.max_steps; ++step) {
    for (auto& b : batch) b = &training[pick(sampler)];

    params.zero_grad();
    auto br = evaluate_batch(params, config, batch, result.store, derive_seed(config.seed, 2, step), true, threads);
    adam_step(trainable, adam);

    if (config.model.sentence_attention) {
      for (std::size_t k = 0; k < batch.size(); ++k) update_store(result.store, batch[k]->key, br.h_stars[k]);
    }
    result.step_objectives.push_back(br.objective);

    if (config.eval_every && step % config.eval_every == 0) {
      auto score = score_heldout(params, config, result.store, heldout, threads);
      TraceRow row{step, br.objective, score.objective, score.f1};
      result.trace.push_back(row);
      if (hooks.on_trace) hooks.on_trace(row);
    }
    if (config.checkpoint_every && step % config.checkpoint_every == 0 && hooks.on_checkpoint) {
      hooks.on_checkpoint(step, params, result.store);
    }
  }
  params.zero_grad();
  return result;
}

DdiLabel argmax_label(std::span<const double> probabilities) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probabilities.size(); ++i) {
    if (probabilities[i] > probabilities[best]) best = i;
  }
  return label_from_index(best);
}

std::vector<Prediction> predict(const ModelParams& params, const ModelConfig& config, const RelevantStore& store,
                                std::span<const Instance> instances, std::size_t threads) {
  std::vector<Prediction> out(instances.size());
  parallel_for(instances.size(), threads, [&](std::size_t i) {
    Graph g(/*grad_enabled=*/false);
    std::mt19937_64 unused(0);
    auto pass = forward(g, params, config, instances[i], store, /*training=*/false, unused);
    Prediction& p = out[i];
    p.source = instances[i].source;
    p.gold = instances[i].label;
    auto probs = pass.probabilities.value().data();
    std::copy(probs.begin(), probs.end(), p.probabilities.begin());
    p.predicted = argmax_label(p.probabilities);
    auto h = pass.h_star.value().data();
    auto s = pass.s.value().data();
    p.h_star.assign(h.begin(), h.end());
    p.s.assign(s.begin(), s.end());
  });
  return out;
}

std::vector<Prediction> predict(const ModelParams& params, const ModelConfig& config, const RelevantStore& store,
                                const EncodedCorpus& corpus, std::size_t threads) {
  auto scored = predict(params, config, store, std::span<const Instance>(corpus.instances), threads);
  std::vector<std::pair<std::size_t, Prediction>> ordered;
  ordered.reserve(corpus.total());
  for (std::size_t i = 0; i < scored.size(); ++i) ordered.emplace_back(corpus.instances[i].ordinal, std::move(scored[i]));
  for (const auto& r : corpus.rejected) ordered.emplace_back(r.ordinal, rejected_prediction(r));
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Prediction> out;
  out.reserve(ordered.size());
  for (auto& [ordinal, p] : ordered) out.push_back(std::move(p));
  return out;
}

std::size_t default_thread_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DDI_ATTN_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

}  // namespace ddi

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

#include <benchmark/benchmark.h>

#include <random>

#include "ddi/evaluation/metrics.hpp"
#include "ddi/training/trainer.hpp"
#include "synthetic.hpp"

using namespace ddi;

static void BM_GruStep(benchmark::State& state) {
  const auto d_h = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  auto p = make_gru_params(120, d_h, false, rng);
  Tensor x(Shape{120});
  fill_uniform(x, -1, 1, rng);
  for (auto _ : state) {
    Graph g(false);
    auto h = gru_step(g, g.constant(x), g.constant(Tensor(Shape{d_h})), p);
    benchmark::DoNotOptimize(h.value().data().data());
  }
}
BENCHMARK(BM_GruStep)->Arg(16)->Arg(230);

static void BM_InstanceForwardBackward(benchmark::State& state) {
  auto data = fixtures::synthetic_corpus(kDefaultTMax, 2);
  TrainConfig config;
  config.model.d_h = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  auto params = init_params(config.model, data.vocab.size(), rng);
  params.configure(config.model);
  const Instance* batch[] = {&data.corpus.instances[0]};
  RelevantStore store;
  for (auto _ : state) {
    params.zero_grad();
    auto r = evaluate_batch(params, config, batch, store, 1, true);
    benchmark::DoNotOptimize(r.objective);
  }
}
BENCHMARK(BM_InstanceForwardBackward)->Arg(16)->Arg(230)->Unit(benchmark::kMillisecond);

static void BM_Metrics(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> d(0, kNumLabels - 1);
  std::vector<DdiLabel> gold(state.range(0)), pred(state.range(0));
  for (auto& l : gold) l = label_from_index(d(rng));
  for (auto& l : pred) l = label_from_index(d(rng));
  for (auto _ : state) {
    auto r = metrics(confusion(gold, pred));
    benchmark::DoNotOptimize(r.f1);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Metrics)->Arg(5716);

BENCHMARK_MAIN();

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

// ddi_attn: train, predict, evaluate, export-features, inspect.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddi/corpus/blinding.hpp"
#include "ddi/corpus/corpus.hpp"
#include "ddi/corpus/instance.hpp"
#include "ddi/corpus/vocabulary.hpp"
#include "ddi/errors.hpp"
#include "ddi/evaluation/metrics.hpp"
#include "ddi/evaluation/prediction.hpp"
#include "ddi/training/checkpoint.hpp"
#include "ddi/training/split.hpp"
#include "ddi/training/trainer.hpp"

namespace fs = std::filesystem;
using namespace ddi;

namespace {

struct Options {
  std::string train_corpus;
  std::string heldout_corpus;
  std::string test_corpus;
  std::string embeddings;
  std::string checkpoint;
  std::string predictions;
  std::string out = ".";
  bool dump = false;
  bool positive_only_micro = false;
  bool static_embeddings = false;
  bool no_sentence_attention = false;
  TrainConfig train;
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw Error(std::string(what) + " path is required");
  if (!fs::exists(path)) throw IoError(std::string(what) + " not found: " + path);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void log_blinding(const char* name, const BlindingResult& b) {
  std::fprintf(stderr, "%s: %zu pairs, %zu skipped\n", name, b.instances.size(), b.skipped.size());
  for (const auto& s : b.skipped) {
    std::fprintf(stderr, "  skipped %s/%s/%s: %s\n", s.source.doc_id.c_str(), s.source.sent_id.c_str(),
                 s.source.pair_id.c_str(), s.reason.c_str());
  }
}

void log_rejected(const char* name, const EncodedCorpus& c) {
  if (c.rejected.empty()) return;
  std::fprintf(stderr, "%s: %zu instances rejected (drug beyond t_max)\n", name, c.rejected.size());
}

std::string trace_value(double v) { return std::isnan(v) ? "nan" : format_double(v); }

int cmd_train(Options& o) {
  require_file(o.train_corpus, "train corpus");
  if (!o.embeddings.empty()) require_file(o.embeddings, "embedding file");
  if (!o.heldout_corpus.empty()) require_file(o.heldout_corpus, "held-out corpus");
  TrainConfig& config = o.train;
  config.model.dynamic_embeddings = !o.static_embeddings;
  config.model.sentence_attention = !o.no_sentence_attention;
  config.validate();

  auto blinded = blind_corpus(parse_corpus(o.train_corpus));
  log_blinding("train", blinded);
  Split split;
  if (o.heldout_corpus.empty()) {
    split = split_heldout(std::move(blinded.instances));
  } else {
    split.training = std::move(blinded.instances);
    auto held = blind_corpus(parse_corpus(o.heldout_corpus));
    log_blinding("held-out", held);
    split.heldout = std::move(held.instances);
  }
  Vocabulary vocab = build_vocabulary(split.training, config.min_count);
  const auto training = encode_corpus(split.training, vocab, config.model.t_max);
  const auto heldout = encode_corpus(split.heldout, vocab, config.model.t_max);
  log_rejected("train", training);
  if (training.instances.empty()) throw EmptyCorpus("no trainable instances in " + o.train_corpus);

  std::mt19937_64 rng(config.seed);
  ModelParams params = init_params(config.model, vocab.size(), rng);
  if (!o.embeddings.empty()) {
    const auto stats = load_pretrained(fs::path(o.embeddings), vocab, params.embeddings.words);
    std::fprintf(stderr, "embeddings: %zu loaded, %zu skipped, %zu vocabulary tokens missing\n", stats.loaded,
                 stats.skipped, stats.missing);
  }
  std::fprintf(stderr, "vocabulary %zu, training %zu, held-out %zu\n", vocab.size(), training.instances.size(),
               heldout.total());

  const fs::path out(o.out);
  fs::create_directories(out / "checkpoints");
  {
    auto f = open_out(out / "config.json");
    f << config_to_json(config) << '\n';
  }
  auto trace = open_out(out / "trace.tsv");
  trace << "# lambda=" << format_double(config.lambda) << '\n' << "step\ttrain_J\theldout_J\theldout_F1\n";

  TrainHooks hooks;
  hooks.on_trace = [&](const TraceRow& row) {
    trace << row.step << '\t' << trace_value(row.train_objective) << '\t' << trace_value(row.heldout_objective)
          << '\t' << trace_value(row.heldout_f1) << '\n';
    trace.flush();
    std::fprintf(stderr, "step %zu  J %.6f  held-out J %.6f  F1 %.4f\n", row.step, row.train_objective,
                 row.heldout_objective, row.heldout_f1);
  };
  hooks.on_checkpoint = [&](std::size_t step, const ModelParams& p, const RelevantStore& store) {
    char name[32];
    std::snprintf(name, sizeof name, "step_%06zu.ckpt", step);
    save_checkpoint((out / "checkpoints" / name).string(), config, vocab, p, store);
  };

  auto result = train(training.instances, heldout, config, std::move(params), hooks, default_thread_count());
  const std::string final_path = o.checkpoint.empty() ? (out / "model.ckpt").string() : o.checkpoint;
  save_checkpoint(final_path, config, vocab, result.params, result.store);
  std::fprintf(stderr, "wrote %s\n", final_path.c_str());
  return 0;
}

struct Scored {
  Checkpoint ckpt;
  std::vector<Prediction> predictions;
};

Scored score_corpus(const Options& o) {
  require_file(o.checkpoint, "checkpoint");
  require_file(o.test_corpus, "test corpus");
  Checkpoint ckpt = load_checkpoint(o.checkpoint);
  auto blinded = blind_corpus(parse_corpus(o.test_corpus));
  log_blinding("test", blinded);
  const auto encoded = encode_corpus(blinded.instances, ckpt.vocab, ckpt.config.model.t_max);
  log_rejected("test", encoded);
  auto predictions = predict(ckpt.params, ckpt.config.model, ckpt.store, encoded, default_thread_count());
  return {std::move(ckpt), std::move(predictions)};
}

int cmd_predict(const Options& o) {
  auto scored = score_corpus(o);
  fs::create_directories(o.out);
  auto f = open_out(fs::path(o.out) / "predictions.tsv");
  write_predictions_tsv(f, scored.predictions);
  return 0;
}

int cmd_export(const Options& o) {
  auto scored = score_corpus(o);
  fs::create_directories(o.out);
  export_feature_files(o.out, scored.predictions);
  return 0;
}

int cmd_evaluate(const Options& o) {
  const std::string path = o.predictions.empty() ? (fs::path(o.out) / "predictions.tsv").string() : o.predictions;
  require_file(path, "predictions file");
  const auto labels = read_predictions_tsv(fs::path(path));
  const auto cm = confusion(labels.gold, labels.predicted);
  const auto report = metrics(cm);
  std::optional<MicroReport> micro;
  if (o.positive_only_micro) micro = positive_micro(cm);
  const MicroReport* mp = micro ? &*micro : nullptr;

  fs::create_directories(o.out);
  {
    auto f = open_out(fs::path(o.out) / "metrics.tsv");
    write_metrics_tsv(f, report, mp);
  }
  {
    auto f = open_out(fs::path(o.out) / "confusion.tsv");
    write_confusion_tsv(f, cm);
  }
  std::cout << format_report(report, cm, mp);
  return 0;
}

std::uint64_t checksum(const Tensor& t) {
  std::uint64_t h = 14695981039346656037ull;
  const auto* p = reinterpret_cast<const unsigned char*>(t.data().data());
  for (std::size_t i = 0; i < t.size() * sizeof(double); ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

int cmd_inspect(const Options& o) {
  if (o.checkpoint.empty() && o.test_corpus.empty()) throw Error("inspect needs --checkpoint or --test-corpus");
  if (!o.checkpoint.empty()) {
    require_file(o.checkpoint, "checkpoint");
    const auto ckpt = load_checkpoint(o.checkpoint);
    std::printf("vocabulary\t%zu\t%016" PRIx64 "\n", ckpt.vocab.size(), ckpt.vocab.hash());
    std::printf("store\t%zu keys\t%zu vectors\n", ckpt.store.key_count(), ckpt.store.vector_count());
    for (const auto& [name, t] : ckpt.params.named()) {
      std::printf("%s\t%s\t%016" PRIx64 "\n", name.c_str(), shape_string(t->shape()).c_str(), checksum(*t));
    }
  }
  if (!o.test_corpus.empty()) {
    require_file(o.test_corpus, "corpus");
    const auto sentences = parse_corpus(o.test_corpus);
    const auto blinded = blind_corpus(sentences);
    if (o.dump) {
      write_instance_dump(std::cout, blinded.instances);
      return 0;
    }
    std::size_t counts[kNumLabels] = {};
    for (const auto& inst : blinded.instances) ++counts[label_index(inst.label)];
    std::printf("sentences\t%zu\npairs\t%zu\nskipped\t%zu\n", sentences.size(), blinded.instances.size(),
                blinded.skipped.size());
    for (auto l : kAllLabels) std::printf("%s\t%zu\n", std::string(label_name(l)).c_str(), counts[label_index(l)]);
  }
  return 0;
}

void add_model_flags(CLI::App* cmd, Options& o) {
  auto& c = o.train;
  cmd->add_option("--train-corpus", o.train_corpus, "Training corpus (XML file or directory)");
  cmd->add_option("--heldout-corpus", o.heldout_corpus, "Corpus for the trace instead of a document split");
  cmd->add_option("--embeddings", o.embeddings, "Pretrained word vectors, text format");
  cmd->add_option("--seed", c.seed);
  cmd->add_option("--t-max", c.model.t_max);
  cmd->add_option("--d-we", c.model.d_we);
  cmd->add_option("--d-pe", c.model.d_pe);
  cmd->add_option("--d-h", c.model.d_h);
  cmd->add_option("--dropout", c.model.dropout_p);
  cmd->add_option("--batch-size", c.batch_size);
  cmd->add_option("--lambda", c.lambda);
  cmd->add_option("--lr", c.adam.lr);
  cmd->add_option("--max-steps", c.max_steps);
  cmd->add_option("--eval-every", c.eval_every);
  cmd->add_option("--checkpoint-every", c.checkpoint_every);
  cmd->add_flag("--static-embeddings", o.static_embeddings);
  cmd->add_flag("--no-sentence-attention", o.no_sentence_attention);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drug-drug interaction classifier with word and sentence attention"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  Options o;

  auto* train_cmd = app.add_subcommand("train", "Train a model and write checkpoints");
  add_model_flags(train_cmd, o);
  train_cmd->add_option("--checkpoint", o.checkpoint, "Final checkpoint path (default <out>/model.ckpt)");
  train_cmd->add_option("--out", o.out, "Output directory");

  auto* predict_cmd = app.add_subcommand("predict", "Write <out>/predictions.tsv");
  auto* export_cmd = app.add_subcommand("export-features", "Write h* and s feature files");
  for (auto* cmd : {predict_cmd, export_cmd}) {
    cmd->add_option("--checkpoint", o.checkpoint)->required();
    cmd->add_option("--test-corpus", o.test_corpus)->required();
    cmd->add_option("--out", o.out);
  }

  auto* eval_cmd = app.add_subcommand("evaluate", "Score a predictions TSV");
  eval_cmd->add_option("--predictions", o.predictions, "Predictions TSV (default <out>/predictions.tsv)");
  eval_cmd->add_option("--out", o.out);
  eval_cmd->add_flag("--positive-only-micro", o.positive_only_micro);

  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize a corpus or checkpoint");
  inspect_cmd->add_option("--test-corpus,--corpus", o.test_corpus);
  inspect_cmd->add_option("--checkpoint", o.checkpoint);
  inspect_cmd->add_flag("--dump", o.dump, "Print blinded instances as TSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*train_cmd) return cmd_train(o);
    if (*predict_cmd) return cmd_predict(o);
    if (*export_cmd) return cmd_export(o);
    if (*eval_cmd) return cmd_evaluate(o);
    if (*inspect_cmd) return cmd_inspect(o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ddi_attn: %s\n", e.what());
    return 1;
  }
  return 1;
}

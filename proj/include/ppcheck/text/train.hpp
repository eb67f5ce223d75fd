#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppcheck/errors.hpp"
#include "ppcheck/text/classifiers.hpp"
#include "ppcheck/text/features.hpp"
#include "ppcheck/text/metrics.hpp"
#include "ppcheck/text/model_io.hpp"
#include "ppcheck/text/rng.hpp"

namespace ppcheck {

inline nlohmann::json corpus_to_json(const std::string& task,
                                     const LabeledCorpus& corpus) {
  nlohmann::json doc;
  doc["task"] = task;
  auto& docs = doc["docs"] = nlohmann::json::array();
  for (const auto& d : corpus) {
    docs.push_back({{"text", d.text}, {"label", d.label}});
  }
  return doc;
}

inline LabeledCorpus corpus_from_json(const nlohmann::json& doc,
                                      std::string* task = nullptr) {
  LabeledCorpus corpus;
  try {
    if (task) *task = doc.at("task").get<std::string>();
    for (const auto& d : doc.at("docs")) {
      corpus.push_back(
          {d.at("text").get<std::string>(), d.at("label").get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedModel, std::string("corpus: ") + e.what());
  }
  return corpus;
}

inline LabeledCorpus load_corpus(const std::string& path,
                                 std::string* task = nullptr) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedModel, path + ": " + e.what());
  }
  return corpus_from_json(doc, task);
}

inline void save_corpus(const std::string& task, const LabeledCorpus& corpus,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::MissingFile, path);
  out << corpus_to_json(task, corpus).dump(2) << "\n";
}

struct CorpusSplit {
  LabeledCorpus train;
  LabeledCorpus test;
};

// Deterministic Fisher-Yates shuffle, then the first `train_fraction` goes
// to training. The split depends only on (corpus order, seed).
inline CorpusSplit split_corpus(const LabeledCorpus& corpus,
                                double train_fraction, std::uint64_t seed) {
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.next_below(i)]);
  }
  std::size_t n_train =
      static_cast<std::size_t>(train_fraction * static_cast<double>(order.size()));
  CorpusSplit split;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? split.train : split.test).push_back(corpus[order[i]]);
  }
  return split;
}

// Fit vectorizer + ANOVA selection + classifier on a labeled corpus.
inline TextModel train_task_model(const std::string& task,
                                  const LabeledCorpus& corpus,
                                  ClassifierKind kind, double threshold,
                                  std::uint64_t seed,
                                  std::size_t top_k = 20000) {
  TextModel m;
  m.task = task;
  m.tfidf = fit_tfidf(corpus);
  std::vector<SparseVec> full_rows;
  std::vector<int> labels;
  for (const auto& d : corpus) {
    full_rows.push_back(m.tfidf.transform_full(d.text));
    labels.push_back(d.label);
  }
  m.tfidf.selected =
      anova_select(full_rows, labels, m.tfidf.vocabulary.size(), top_k);
  std::vector<SparseVec> rows;
  for (const auto& d : corpus) rows.push_back(m.tfidf.transform(d.text));
  TrainConfig cfg;
  cfg.seed = seed;
  cfg.threshold = threshold;
  m.clf = train(kind, rows, labels, m.tfidf.input_dim(), cfg);
  return m;
}

inline ConfusionMatrix evaluate(const TextModel& m,
                                const LabeledCorpus& corpus) {
  ConfusionMatrix cm;
  for (const auto& d : corpus) {
    bool pred = m.positive(d.text);
    if (d.label == 1) {
      ++(pred ? cm.tp : cm.fn);
    } else {
      ++(pred ? cm.fp : cm.tn);
    }
  }
  return cm;
}

struct TaskTrainResult {
  TextModel model;
  ConfusionMatrix heldout;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

// 80/20 split, train on the 80, report held-out metrics on the 20.
inline TaskTrainResult train_with_holdout(const std::string& task,
                                          const LabeledCorpus& corpus,
                                          ClassifierKind kind,
                                          double threshold,
                                          std::uint64_t seed) {
  CorpusSplit split = split_corpus(corpus, 0.8, seed);
  TaskTrainResult result;
  result.model = train_task_model(task, split.train, kind, threshold, seed);
  result.heldout = evaluate(result.model, split.test);
  result.train_size = split.train.size();
  result.test_size = split.test.size();
  return result;
}

inline nlohmann::json train_log_entry(const TaskTrainResult& r,
                                      ClassifierKind kind) {
  const ConfusionMatrix& cm = r.heldout;
  return {
      {"kind", classifier_kind_name(kind)},
      {"train_size", r.train_size},
      {"test_size", r.test_size},
      {"tp", cm.tp},
      {"fp", cm.fp},
      {"tn", cm.tn},
      {"fn", cm.fn},
      {"accuracy", accuracy(cm)},
      {"sensitivity", sensitivity(cm)},
      {"specificity", specificity(cm)},
      {"precision", precision(cm)},
  };
}

}  // namespace ppcheck

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "ppcheck/errors.hpp"
#include "ppcheck/text/preprocess.hpp"

namespace ppcheck {

struct LabeledDoc {
  std::string text;
  int label = 0;  // 0 or 1
};

using LabeledCorpus = std::vector<LabeledDoc>;

// Sparse feature vector: (column, weight) pairs sorted by column.
using SparseVec = std::vector<std::pair<std::size_t, double>>;

// Unigram+bigram tf-idf vectorizer. tf is the raw in-document count,
// idf(t) = ln((1+N)/(1+df(t))) + 1, document vectors are L2-normalized.
// `selected` holds the post-ANOVA column subset in ascending column order;
// until selection runs it covers the whole vocabulary.
struct TfIdfModel {
  std::vector<std::string> vocabulary;  // column -> n-gram, lexicographic
  std::vector<double> idf;              // per column
  std::vector<std::size_t> selected;

  bool operator==(const TfIdfModel&) const = default;

  std::size_t input_dim() const { return selected.size(); }

  std::size_t column_of(const std::string& gram) const {
    auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), gram);
    if (it == vocabulary.end() || *it != gram) return vocabulary.size();
    return static_cast<std::size_t>(it - vocabulary.begin());
  }

  // tf-idf over the full vocabulary; unseen n-grams are dropped.
  SparseVec transform_full(const std::string& raw_text) const {
    SparseVec v;
    for (const auto& [gram, count] : tokenize_ngrams(preprocess(raw_text))) {
      std::size_t col = column_of(gram);
      if (col == vocabulary.size()) continue;
      v.emplace_back(col, count * idf[col]);
    }
    double norm_sq = 0.0;
    for (const auto& [col, w] : v) norm_sq += w * w;
    if (norm_sq > 0.0) {
      double inv = 1.0 / std::sqrt(norm_sq);
      for (auto& [col, w] : v) w *= inv;
    }
    return v;
  }

  // Same vector restricted and re-indexed to the selected columns.
  SparseVec transform(const std::string& raw_text) const {
    SparseVec full = transform_full(raw_text);
    SparseVec out;
    std::size_t si = 0;
    for (const auto& [col, w] : full) {
      while (si < selected.size() && selected[si] < col) ++si;
      if (si < selected.size() && selected[si] == col) {
        out.emplace_back(si, w);
      }
    }
    return out;
  }
};

inline TfIdfModel fit_tfidf(const LabeledCorpus& corpus) {
  if (corpus.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "tf-idf requires documents");
  }
  std::map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    for (const auto& [gram, count] : tokenize_ngrams(preprocess(doc.text))) {
      ++df[gram];
    }
  }
  TfIdfModel model;
  const double n = static_cast<double>(corpus.size());
  for (const auto& [gram, count] : df) {
    model.vocabulary.push_back(gram);
    model.idf.push_back(std::log((1.0 + n) / (1.0 + count)) + 1.0);
  }
  model.selected.resize(model.vocabulary.size());
  for (std::size_t i = 0; i < model.selected.size(); ++i) model.selected[i] = i;
  return model;
}

// Per-column one-way ANOVA F statistic between the two label groups.
// Constant columns score 0; zero within-group variance with nonzero
// between-group variance scores +inf.
inline std::vector<double> anova_f_values(const std::vector<SparseVec>& rows,
                                          const std::vector<int>& labels,
                                          std::size_t n_cols) {
  std::size_t n0 = 0, n1 = 0;
  for (int y : labels) (y == 0 ? n0 : n1)++;
  if (n0 == 0 || n1 == 0) {
    throw Error(ErrorCode::SingleClass, "ANOVA requires both labels");
  }
  std::vector<double> sum0(n_cols, 0.0), sum1(n_cols, 0.0);
  std::vector<double> sq0(n_cols, 0.0), sq1(n_cols, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto& sum = labels[r] == 0 ? sum0 : sum1;
    auto& sq = labels[r] == 0 ? sq0 : sq1;
    for (const auto& [col, w] : rows[r]) {
      sum[col] += w;
      sq[col] += w * w;
    }
  }
  const double n = static_cast<double>(rows.size());
  std::vector<double> f(n_cols, 0.0);
  for (std::size_t c = 0; c < n_cols; ++c) {
    double mean0 = sum0[c] / n0;
    double mean1 = sum1[c] / n1;
    double grand = (sum0[c] + sum1[c]) / n;
    double ss_within = (sq0[c] - n0 * mean0 * mean0) +
                       (sq1[c] - n1 * mean1 * mean1);
    double ss_between = n0 * (mean0 - grand) * (mean0 - grand) +
                        n1 * (mean1 - grand) * (mean1 - grand);
    if (ss_between <= 1e-300) {
      f[c] = 0.0;
    } else if (ss_within <= 1e-300 || n <= 2) {
      f[c] = std::numeric_limits<double>::infinity();
    } else {
      f[c] = ss_between / (ss_within / (n - 2.0));
    }
  }
  return f;
}

// Top-k columns by F (ties broken by lower column index), returned in
// ascending column order so downstream feature layout is stable.
inline std::vector<std::size_t> anova_select(const std::vector<SparseVec>& rows,
                                             const std::vector<int>& labels,
                                             std::size_t n_cols,
                                             std::size_t k = 20000) {
  std::vector<double> f = anova_f_values(rows, labels, n_cols);
  std::vector<std::size_t> order(n_cols);
  for (std::size_t i = 0; i < n_cols; ++i) order[i] = i;
  if (k < n_cols) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       if (f[a] != f[b]) return f[a] > f[b];
                       return a < b;
                     });
    order.resize(k);
    std::sort(order.begin(), order.end());
  }
  return order;
}

}  // namespace ppcheck

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "ppcheck/errors.hpp"
#include "ppcheck/text/features.hpp"
#include "ppcheck/text/rng.hpp"

namespace ppcheck {

enum class ClassifierKind { mnb, logreg, mlp };

inline const char* classifier_kind_name(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::mnb: return "mnb";
    case ClassifierKind::logreg: return "logreg";
    case ClassifierKind::mlp: return "mlp";
  }
  return "";
}

inline ClassifierKind classifier_kind_from_name(const std::string& name) {
  if (name == "mnb") return ClassifierKind::mnb;
  if (name == "logreg") return ClassifierKind::logreg;
  if (name == "mlp") return ClassifierKind::mlp;
  throw Error(ErrorCode::MalformedModel, "unknown classifier kind: " + name);
}

struct TrainConfig {
  double mnb_alpha = 1.0;
  bool mnb_fit_prior = true;
  double logreg_lr = 0.5;
  int logreg_epochs = 500;
  double logreg_l2 = 1e-4;
  double mlp_lr = 0.0001;
  int mlp_epochs = 1000;
  int mlp_batch = 128;
  double mlp_dropout = 0.2;
  std::uint64_t seed = 7;
  double threshold = 0.5;
};

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// loss = max(z,0) - z*y + log(1 + exp(-|z|)), numerically stable BCE on logits
inline double bce_from_logit(double z, double y) {
  return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

struct MnbParams {
  double class_log_prior[2] = {0.0, 0.0};
  std::vector<double> feature_log_prob[2];  // per class, per column

  bool operator==(const MnbParams& o) const {
    return class_log_prior[0] == o.class_log_prior[0] &&
           class_log_prior[1] == o.class_log_prior[1] &&
           feature_log_prob[0] == o.feature_log_prob[0] &&
           feature_log_prob[1] == o.feature_log_prob[1];
  }
};

struct LogRegParams {
  std::vector<double> weights;
  double bias = 0.0;

  bool operator==(const LogRegParams&) const = default;
};

// Fully-connected net with rectifier hidden units and one sigmoid output.
// Weights W[l] are row-major (sizes[l+1] x sizes[l]).
struct MlpParams {
  std::vector<std::size_t> sizes;  // [d_in, hidden..., 1]
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  bool operator==(const MlpParams&) const = default;

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      n += sizes[l + 1] * sizes[l] + sizes[l + 1];
    }
    return n;
  }

  std::vector<double> flatten() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      out.insert(out.end(), weights[l].begin(), weights[l].end());
      out.insert(out.end(), biases[l].begin(), biases[l].end());
    }
    return out;
  }

  void unflatten(const std::vector<double>& flat) {
    std::size_t pos = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      std::copy_n(flat.begin() + pos, weights[l].size(), weights[l].begin());
      pos += weights[l].size();
      std::copy_n(flat.begin() + pos, biases[l].size(), biases[l].begin());
      pos += biases[l].size();
    }
  }
};

struct Classifier {
  ClassifierKind kind = ClassifierKind::mnb;
  std::variant<MnbParams, LogRegParams, MlpParams> params;
  double threshold = 0.5;

  bool operator==(const Classifier&) const = default;
};

namespace detail {

inline void check_two_classes(const std::vector<int>& labels) {
  bool has0 = false, has1 = false;
  for (int y : labels) (y == 0 ? has0 : has1) = true;
  if (!has0 || !has1) {
    throw Error(ErrorCode::SingleClass, "training needs both labels");
  }
}

}  // namespace detail

inline MnbParams train_mnb(const std::vector<SparseVec>& rows,
                           const std::vector<int>& labels, std::size_t dim,
                           const TrainConfig& cfg) {
  detail::check_two_classes(labels);
  double class_count[2] = {0.0, 0.0};
  std::vector<double> feature_count[2] = {std::vector<double>(dim, 0.0),
                                          std::vector<double>(dim, 0.0)};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    int y = labels[r];
    class_count[y] += 1.0;
    for (const auto& [col, w] : rows[r]) feature_count[y][col] += w;
  }
  MnbParams p;
  for (int c = 0; c < 2; ++c) {
    double prior = cfg.mnb_fit_prior
                       ? class_count[c] / static_cast<double>(rows.size())
                       : 0.5;
    p.class_log_prior[c] = std::log(prior);
    double total = std::accumulate(feature_count[c].begin(),
                                   feature_count[c].end(), 0.0);
    double denom = std::log(total + cfg.mnb_alpha * static_cast<double>(dim));
    p.feature_log_prob[c].resize(dim);
    for (std::size_t t = 0; t < dim; ++t) {
      p.feature_log_prob[c][t] =
          std::log(feature_count[c][t] + cfg.mnb_alpha) - denom;
    }
  }
  return p;
}

inline double predict_proba(const MnbParams& p, const SparseVec& x) {
  double joint[2] = {p.class_log_prior[0], p.class_log_prior[1]};
  for (const auto& [col, w] : x) {
    joint[0] += w * p.feature_log_prob[0][col];
    joint[1] += w * p.feature_log_prob[1][col];
  }
  return sigmoid(joint[1] - joint[0]);
}

inline LogRegParams train_logreg(const std::vector<SparseVec>& rows,
                                 const std::vector<int>& labels,
                                 std::size_t dim, const TrainConfig& cfg) {
  detail::check_two_classes(labels);
  LogRegParams p;
  p.weights.assign(dim, 0.0);
  const double n = static_cast<double>(rows.size());
  std::vector<double> grad(dim);
  for (int epoch = 0; epoch < cfg.logreg_epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    double loss = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      double z = p.bias;
      for (const auto& [col, w] : rows[r]) z += w * p.weights[col];
      double delta = sigmoid(z) - labels[r];
      loss += bce_from_logit(z, labels[r]);
      for (const auto& [col, w] : rows[r]) grad[col] += delta * w;
      grad_bias += delta;
    }
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::NonFiniteLoss, "logistic regression diverged");
    }
    for (std::size_t t = 0; t < dim; ++t) {
      p.weights[t] -= cfg.logreg_lr *
                      (grad[t] / n + cfg.logreg_l2 * p.weights[t]);
    }
    p.bias -= cfg.logreg_lr * grad_bias / n;
  }
  return p;
}

inline double logreg_logit(const LogRegParams& p, const SparseVec& x) {
  double z = p.bias;
  for (const auto& [col, w] : x) z += w * p.weights[col];
  return z;
}

inline double predict_proba(const LogRegParams& p, const SparseVec& x) {
  return sigmoid(logreg_logit(p, x));
}

inline double logreg_mean_loss(const LogRegParams& p,
                               const std::vector<SparseVec>& rows,
                               const std::vector<int>& labels) {
  double loss = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    loss += bce_from_logit(logreg_logit(p, rows[r]), labels[r]);
  }
  return loss / static_cast<double>(rows.size());
}

inline MlpParams make_mlp(std::size_t d_in,
                          const std::vector<std::size_t>& hidden,
                          std::uint64_t seed) {
  MlpParams p;
  p.sizes.push_back(d_in);
  for (std::size_t h : hidden) p.sizes.push_back(h);
  p.sizes.push_back(1);
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < p.sizes.size(); ++l) {
    std::size_t rows = p.sizes[l + 1], cols = p.sizes[l];
    // First-layer inputs are L2-normalized sparse vectors, so the usual
    // fan-in scaling produces near-zero activations and gradients too small
    // for the fixed learning rate and epoch budget to overcome. A large
    // fixed gain on the first layer (std 8) keeps hidden activations and
    // early gradients at O(1); deeper layers use He scaling.
    double scale =
        l == 0 ? 8.0 : std::sqrt(2.0 / static_cast<double>(cols));
    std::vector<double> w(rows * cols);
    for (double& v : w) v = scale * rng.next_gaussian();
    p.weights.push_back(std::move(w));
    p.biases.emplace_back(rows, 0.0);
  }
  return p;
}

struct MlpForward {
  std::vector<std::vector<double>> activations;  // post-ReLU per hidden layer
  double logit = 0.0;
};

// dropout_seed < 0 disables dropout (inference / gradient checks).
inline MlpForward mlp_forward(const MlpParams& p, const SparseVec& x,
                              double dropout_rate, std::uint64_t dropout_seed,
                              std::uint64_t* dropout_counter) {
  MlpForward f;
  std::size_t n_layers = p.sizes.size() - 1;
  std::vector<double> cur;
  for (std::size_t l = 0; l < n_layers; ++l) {
    std::size_t rows = p.sizes[l + 1], cols = p.sizes[l];
    std::vector<double> next(rows);
    for (std::size_t i = 0; i < rows; ++i) next[i] = p.biases[l][i];
    if (l == 0) {
      for (const auto& [col, w] : x) {
        const double* wcol = p.weights[l].data() + col;
        for (std::size_t i = 0; i < rows; ++i) next[i] += wcol[i * cols] * w;
      }
    } else {
      for (std::size_t i = 0; i < rows; ++i) {
        const double* wr = p.weights[l].data() + i * cols;
        double acc = next[i];
        for (std::size_t j = 0; j < cols; ++j) acc += wr[j] * cur[j];
        next[i] = acc;
      }
    }
    if (l + 1 == n_layers) {
      f.logit = next[0];
      break;
    }
    for (double& v : next) v = std::max(v, 0.0);
    if (dropout_rate > 0.0 && dropout_counter != nullptr) {
      double keep = 1.0 - dropout_rate;
      for (double& v : next) {
        bool kept = counter_coin(dropout_seed, (*dropout_counter)++, keep);
        v = kept ? v / keep : 0.0;
      }
    }
    f.activations.push_back(next);
    cur = std::move(next);
  }
  return f;
}

inline double predict_proba(const MlpParams& p, const SparseVec& x) {
  return sigmoid(mlp_forward(p, x, 0.0, 0, nullptr).logit);
}

// Mean BCE loss and its gradient over a batch, accumulated into flat
// parameter layout (W then b per layer). Dropout masks, when enabled, are
// recorded in the forward activations and reused by the backward pass.
inline double mlp_loss_and_grad(const MlpParams& p,
                                const std::vector<SparseVec>& rows,
                                const std::vector<int>& labels,
                                const std::vector<std::size_t>& batch,
                                std::vector<double>& flat_grad,
                                double dropout_rate = 0.0,
                                std::uint64_t dropout_seed = 0,
                                std::uint64_t* dropout_counter = nullptr) {
  std::size_t n_layers = p.sizes.size() - 1;
  flat_grad.assign(p.parameter_count(), 0.0);

  // offsets into the flat layout
  std::vector<std::size_t> w_off(n_layers), b_off(n_layers);
  std::size_t pos = 0;
  for (std::size_t l = 0; l < n_layers; ++l) {
    w_off[l] = pos;
    pos += p.weights[l].size();
    b_off[l] = pos;
    pos += p.biases[l].size();
  }

  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (std::size_t idx : batch) {
    const SparseVec& x = rows[idx];
    MlpForward f =
        mlp_forward(p, x, dropout_rate, dropout_seed, dropout_counter);
    double y = labels[idx];
    loss += bce_from_logit(f.logit, y) * inv_n;
    std::vector<double> delta = {(sigmoid(f.logit) - y) * inv_n};
    for (std::size_t l = n_layers; l-- > 0;) {
      std::size_t rows_l = p.sizes[l + 1], cols_l = p.sizes[l];
      double* gw = flat_grad.data() + w_off[l];
      double* gb = flat_grad.data() + b_off[l];
      for (std::size_t i = 0; i < rows_l; ++i) gb[i] += delta[i];
      if (l == 0) {
        for (const auto& [col, w] : x) {
          for (std::size_t i = 0; i < rows_l; ++i) {
            gw[i * cols_l + col] += delta[i] * w;
          }
        }
        break;
      }
      const std::vector<double>& act = f.activations[l - 1];
      std::vector<double> prev_delta(cols_l, 0.0);
      for (std::size_t i = 0; i < rows_l; ++i) {
        const double* wr = p.weights[l].data() + i * cols_l;
        double d = delta[i];
        for (std::size_t j = 0; j < cols_l; ++j) {
          gw[i * cols_l + j] += d * act[j];
          prev_delta[j] += d * wr[j];
        }
      }
      // ReLU (and dropout) gate: zeroed activations pass no gradient. The
      // inverted-dropout 1/keep scale is already inside act for kept units,
      // so the matching scale must be applied where act is nonzero.
      double keep = 1.0 - dropout_rate;
      bool scaled = dropout_rate > 0.0 && dropout_counter != nullptr;
      for (std::size_t j = 0; j < cols_l; ++j) {
        if (act[j] <= 0.0) {
          prev_delta[j] = 0.0;
        } else if (scaled) {
          prev_delta[j] /= keep;
        }
      }
      delta = std::move(prev_delta);
    }
  }
  if (!std::isfinite(loss)) {
    throw Error(ErrorCode::NonFiniteLoss, "mlp training diverged");
  }
  return loss;
}

inline MlpParams train_mlp(const std::vector<SparseVec>& rows,
                           const std::vector<int>& labels, std::size_t dim,
                           const TrainConfig& cfg,
                           const std::vector<std::size_t>& hidden = {64, 64}) {
  detail::check_two_classes(labels);
  MlpParams p = make_mlp(dim, hidden, cfg.seed);
  Rng shuffle_rng(cfg.seed ^ 0xa021c5b95ULL);
  std::uint64_t dropout_counter = 0;
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> grad;
  std::vector<double> flat = p.flatten();
  for (int epoch = 0; epoch < cfg.mlp_epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.next_below(i)]);
    }
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.mlp_batch)) {
      std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.mlp_batch));
      std::vector<std::size_t> batch(order.begin() + start, order.begin() + end);
      mlp_loss_and_grad(p, rows, labels, batch, grad, cfg.mlp_dropout,
                        cfg.seed, &dropout_counter);
      flat = p.flatten();
      for (std::size_t t = 0; t < flat.size(); ++t) {
        flat[t] -= cfg.mlp_lr * grad[t];
      }
      p.unflatten(flat);
    }
  }
  return p;
}

inline Classifier train(ClassifierKind kind, const std::vector<SparseVec>& rows,
                        const std::vector<int>& labels, std::size_t dim,
                        const TrainConfig& cfg) {
  Classifier clf;
  clf.kind = kind;
  clf.threshold = cfg.threshold;
  switch (kind) {
    case ClassifierKind::mnb:
      clf.params = train_mnb(rows, labels, dim, cfg);
      break;
    case ClassifierKind::logreg:
      clf.params = train_logreg(rows, labels, dim, cfg);
      break;
    case ClassifierKind::mlp:
      clf.params = train_mlp(rows, labels, dim, cfg);
      break;
  }
  return clf;
}

inline double predict_proba(const Classifier& clf, const SparseVec& x) {
  return std::visit([&](const auto& p) { return predict_proba(p, x); },
                    clf.params);
}

// Boundary proba == threshold classifies positive.
inline bool predict(const Classifier& clf, const SparseVec& x) {
  return predict_proba(clf, x) >= clf.threshold;
}

}  // namespace ppcheck

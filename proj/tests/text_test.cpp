#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ppcheck/text/classifiers.hpp"
#include "ppcheck/text/features.hpp"
#include "ppcheck/text/metrics.hpp"
#include "ppcheck/text/model_io.hpp"
#include "ppcheck/text/preprocess.hpp"
#include "ppcheck/text/train.hpp"

using namespace ppcheck;

namespace {

// Independent dense tf-idf: same stated formula, straightforward code path.
struct BruteTfIdf {
  std::vector<std::string> vocab;  // sorted
  std::vector<double> idf;

  explicit BruteTfIdf(const LabeledCorpus& corpus) {
    std::map<std::string, int> df;
    for (const auto& d : corpus) {
      for (const auto& [g, c] : tokenize_ngrams(preprocess(d.text))) ++df[g];
    }
    double n = static_cast<double>(corpus.size());
    for (const auto& [g, c] : df) {
      vocab.push_back(g);
      idf.push_back(std::log((1.0 + n) / (1.0 + c)) + 1.0);
    }
  }

  std::vector<double> row(const std::string& text) const {
    std::vector<double> out(vocab.size(), 0.0);
    auto counts = tokenize_ngrams(preprocess(text));
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      auto it = counts.find(vocab[i]);
      if (it != counts.end()) out[i] = it->second * idf[i];
    }
    double norm = 0.0;
    for (double v : out) norm += v * v;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (double& v : out) v /= norm;
    }
    return out;
  }
};

std::vector<double> densify(const SparseVec& v, std::size_t dim) {
  std::vector<double> out(dim, 0.0);
  for (const auto& [col, w] : v) out[col] = w;
  return out;
}

// Smallest |pre-activation| over all hidden units and rows: a finite
// difference step can cross the ReLU kink whenever this is tiny.
double min_hidden_preactivation(const MlpParams& p,
                                const std::vector<SparseVec>& rows) {
  double best = std::numeric_limits<double>::infinity();
  for (const SparseVec& row : rows) {
    std::vector<double> act(p.sizes[0], 0.0);
    for (const auto& [col, w] : row) act[col] = w;
    for (std::size_t l = 0; l + 1 < p.sizes.size(); ++l) {
      bool hidden = l + 2 < p.sizes.size();
      std::vector<double> next(p.sizes[l + 1], 0.0);
      for (std::size_t j = 0; j < p.sizes[l + 1]; ++j) {
        double z = p.biases[l][j];
        for (std::size_t i = 0; i < p.sizes[l]; ++i) {
          z += p.weights[l][j * p.sizes[l] + i] * act[i];
        }
        if (hidden) best = std::min(best, std::abs(z));
        next[j] = hidden ? std::max(0.0, z) : z;
      }
      act = std::move(next);
    }
  }
  return best;
}

// Direct one-way F statistic per column over a dense matrix.
std::vector<double> brute_anova(const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y) {
  std::size_t n = x.size(), cols = x[0].size();
  std::vector<double> f(cols, 0.0);
  for (std::size_t c = 0; c < cols; ++c) {
    double sum0 = 0, sum1 = 0, n0 = 0, n1 = 0;
    for (std::size_t r = 0; r < n; ++r) {
      (y[r] == 0 ? sum0 : sum1) += x[r][c];
      (y[r] == 0 ? n0 : n1) += 1;
    }
    double m0 = sum0 / n0, m1 = sum1 / n1, grand = (sum0 + sum1) / (n0 + n1);
    double ssb = n0 * (m0 - grand) * (m0 - grand) +
                 n1 * (m1 - grand) * (m1 - grand);
    double ssw = 0;
    for (std::size_t r = 0; r < n; ++r) {
      double m = y[r] == 0 ? m0 : m1;
      ssw += (x[r][c] - m) * (x[r][c] - m);
    }
    if (ssb <= 1e-300) {
      f[c] = 0.0;
    } else if (ssw <= 1e-300 || n <= 2) {
      f[c] = std::numeric_limits<double>::infinity();
    } else {
      f[c] = ssb / (ssw / (static_cast<double>(n) - 2.0));
    }
  }
  return f;
}

LabeledCorpus separable_corpus() {
  LabeledCorpus corpus;
  const char* fill[] = {"today", "now", "always", "often", "sometimes",
                        "quietly", "safely", "quickly", "slowly", "daily"};
  for (const char* f : fill) {
    corpus.push_back({std::string("we collect gps location data ") + f, 1});
    corpus.push_back({std::string("play the fun puzzle game ") + f, 0});
  }
  return corpus;
}

}  // namespace

TEST_CASE("preprocess: lowercase, non-ASCII removal, punctuation to space") {
  CHECK(preprocess("We  COLLECT your-data!") == "we collect your data");
  CHECK(preprocess("") == "");
  CHECK(preprocess("D\xc3\xa9j\xc3\xa0 vu") == "dj vu");
  CHECK(preprocess("  lots   of\t\nspace  ") == "lots of space");
  CHECK(preprocess("...") == "");
}

TEST_CASE("tokenize_ngrams: unigrams plus bigrams with counts") {
  auto t = tokenize_ngrams("we collect data");
  CHECK(t.size() == 5);
  CHECK(t.at("we") == 1);
  CHECK(t.at("collect") == 1);
  CHECK(t.at("data") == 1);
  CHECK(t.at("we collect") == 1);
  CHECK(t.at("collect data") == 1);

  CHECK(tokenize_ngrams("").empty());

  auto rep = tokenize_ngrams("a a a");
  CHECK(rep.at("a") == 3);
  CHECK(rep.at("a a") == 2);
}

TEST_CASE("split_sentences: terminators and abbreviation protection") {
  CHECK(split_sentences("We collect GPS. We share it.").size() == 2);
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("We use data, e.g. your IMEI, for ads.").size() == 1);
  CHECK(split_sentences("Stop! Really? Yes.").size() == 3);
}

TEST_CASE("tf-idf: hand values on the two-document spec of the formula") {
  LabeledCorpus corpus = {{"a b", 0}, {"a c", 1}};
  TfIdfModel m = fit_tfidf(corpus);
  REQUIRE(m.vocabulary.size() == 5);  // a, b, c, "a b", "a c"

  auto idf_of = [&](const std::string& g) {
    return m.idf[m.column_of(g)];
  };
  CHECK(idf_of("a") == Catch::Approx(1.0).margin(1e-15));
  double expected = std::log(3.0 / 2.0) + 1.0;
  CHECK(idf_of("b") == Catch::Approx(expected).margin(1e-15));
  CHECK(idf_of("c") == Catch::Approx(expected).margin(1e-15));

  // transform of an empty string is the zero vector
  CHECK(m.transform_full("").empty());

  // transforming a training doc reproduces its training row
  auto r1 = m.transform_full("a b");
  auto r2 = m.transform_full("a b");
  CHECK(r1 == r2);
}

TEST_CASE("tf-idf: brute-force agreement to 1e-12 on small corpora") {
  std::vector<LabeledCorpus> corpora = {
      {{"a b", 0}, {"a c", 1}},
      {{"we collect gps", 1}, {"we play games", 0}, {"gps data stored", 1},
       {"fun game here", 0}},
      separable_corpus(),
  };
  for (const auto& corpus : corpora) {
    TfIdfModel m = fit_tfidf(corpus);
    BruteTfIdf brute(corpus);
    REQUIRE(m.vocabulary == brute.vocab);
    for (std::size_t i = 0; i < m.idf.size(); ++i) {
      CHECK(std::abs(m.idf[i] - brute.idf[i]) < 1e-12);
    }
    for (const auto& d : corpus) {
      auto dense = densify(m.transform_full(d.text), m.vocabulary.size());
      auto expected = brute.row(d.text);
      for (std::size_t i = 0; i < dense.size(); ++i) {
        CHECK(std::abs(dense[i] - expected[i]) < 1e-12);
      }
    }
  }

  CHECK_THROWS_AS(fit_tfidf({}), Error);
}

TEST_CASE("ANOVA: brute-force agreement, ties, and edge cases") {
  // 6-row toy matrix: col 0 separates perfectly with within-group variance,
  // col 1 is constant, col 2 is noise, col 3 duplicates col 0 (tie).
  std::vector<std::vector<double>> dense = {
      {1.0, 5.0, 0.3, 1.0}, {1.2, 5.0, 0.9, 1.2}, {0.8, 5.0, 0.1, 0.8},
      {3.0, 5.0, 0.5, 3.0}, {3.1, 5.0, 0.2, 3.1}, {2.9, 5.0, 0.8, 2.9}};
  std::vector<int> labels = {0, 0, 0, 1, 1, 1};
  std::vector<SparseVec> rows;
  for (const auto& r : dense) {
    SparseVec v;
    for (std::size_t c = 0; c < r.size(); ++c) v.emplace_back(c, r[c]);
    rows.push_back(v);
  }

  auto f = anova_f_values(rows, labels, 4);
  auto expected = brute_anova(dense, labels);
  for (std::size_t c = 0; c < 4; ++c) {
    if (std::isinf(expected[c])) {
      CHECK(std::isinf(f[c]));
    } else {
      CHECK(std::abs(f[c] - expected[c]) < 1e-12);
    }
  }
  CHECK(f[1] == 0.0);          // constant column
  CHECK(f[0] > f[2]);          // separator beats noise
  CHECK(f[0] == f[3]);         // duplicate columns tie exactly

  // tie broken by lower column index: k=1 must pick col 0, not col 3
  auto top1 = anova_select(rows, labels, 4, 1);
  REQUIRE(top1 == std::vector<std::size_t>{0});

  // k >= column count returns the identity selection
  auto all = anova_select(rows, labels, 4, 10);
  CHECK(all == std::vector<std::size_t>{0, 1, 2, 3});

  CHECK_THROWS_AS(anova_f_values(rows, {0, 0, 0, 0, 0, 0}, 4), Error);
}

TEST_CASE("MNB: posteriors sum to one and separable data is learned") {
  LabeledCorpus corpus = separable_corpus();
  TfIdfModel tfidf = fit_tfidf(corpus);
  std::vector<SparseVec> rows;
  std::vector<int> labels;
  for (const auto& d : corpus) {
    rows.push_back(tfidf.transform_full(d.text));
    labels.push_back(d.label);
  }
  TrainConfig cfg;
  MnbParams p = train_mnb(rows, labels, tfidf.vocabulary.size(), cfg);

  for (const auto& x : rows) {
    double p1 = predict_proba(p, x);
    // class-0 posterior from the same joint log-probabilities
    double j0 = p.class_log_prior[0], j1 = p.class_log_prior[1];
    for (const auto& [col, w] : x) {
      j0 += w * p.feature_log_prob[0][col];
      j1 += w * p.feature_log_prob[1][col];
    }
    double p0 = sigmoid(j0 - j1);
    CHECK(std::abs(p0 + p1 - 1.0) < 1e-12);
    CHECK(p1 >= 0.0);
    CHECK(p1 <= 1.0);
  }

  for (std::size_t r = 0; r < rows.size(); ++r) {
    CHECK((predict_proba(p, rows[r]) >= 0.5) == (labels[r] == 1));
  }
}

TEST_CASE("logreg: separable data learned, loss non-increasing") {
  LabeledCorpus corpus = separable_corpus();
  TfIdfModel tfidf = fit_tfidf(corpus);
  std::vector<SparseVec> rows;
  std::vector<int> labels;
  for (const auto& d : corpus) {
    rows.push_back(tfidf.transform_full(d.text));
    labels.push_back(d.label);
  }
  TrainConfig cfg;
  LogRegParams p = train_logreg(rows, labels, tfidf.vocabulary.size(), cfg);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    CHECK((predict_proba(p, rows[r]) >= 0.5) == (labels[r] == 1));
  }

  // loss is non-increasing across epoch counts
  double last = std::numeric_limits<double>::infinity();
  for (int epochs : {1, 5, 25, 125, 500}) {
    TrainConfig c = cfg;
    c.logreg_epochs = epochs;
    LogRegParams q = train_logreg(rows, labels, tfidf.vocabulary.size(), c);
    double loss = logreg_mean_loss(q, rows, labels);
    CHECK(loss <= last + 1e-12);
    last = loss;
  }

  // zero weights give sigmoid(0) = 0.5 on any input
  LogRegParams zero;
  zero.weights.assign(tfidf.vocabulary.size(), 0.0);
  CHECK(predict_proba(zero, rows[0]) == 0.5);
}

TEST_CASE("mlp: gradient check on small random configurations") {
  Rng rng(123);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t d_in = 2 + rng.next_below(7);  // <= 8
    std::vector<std::size_t> hidden = {2 + rng.next_below(4)};
    if (rng.next_below(2)) hidden.push_back(2 + rng.next_below(3));
    MlpParams p = make_mlp(d_in, hidden, rng.next_u64());

    std::vector<SparseVec> rows;
    std::vector<int> labels;
    for (int r = 0; r < 4; ++r) {
      SparseVec x;
      for (std::size_t c = 0; c < d_in; ++c) {
        x.emplace_back(c, rng.next_gaussian() * 0.5);
      }
      rows.push_back(x);
      labels.push_back(static_cast<int>(rng.next_below(2)));
    }
    std::vector<std::size_t> batch = {0, 1, 2, 3};

    // Jitter the parameters until every hidden pre-activation is well
    // clear of the ReLU kink; central differences are invalid across it.
    do {
      std::vector<double> flat = p.flatten();
      for (double& v : flat) v += 0.1 * rng.next_gaussian();
      p.unflatten(flat);
    } while (min_hidden_preactivation(p, rows) <= 1e-3);

    std::vector<double> grad;
    mlp_loss_and_grad(p, rows, labels, batch, grad);

    std::vector<double> flat = p.flatten();
    for (std::size_t i = 0; i < flat.size(); ++i) {
      const double h = 1e-5;
      MlpParams pp = p;
      std::vector<double> bumped = flat;
      bumped[i] += h;
      pp.unflatten(bumped);
      std::vector<double> tmp;
      double up = mlp_loss_and_grad(pp, rows, labels, batch, tmp);
      bumped[i] = flat[i] - h;
      pp.unflatten(bumped);
      double down = mlp_loss_and_grad(pp, rows, labels, batch, tmp);
      double numeric = (up - down) / (2.0 * h);
      double denom = std::max({std::abs(grad[i]), std::abs(numeric), 1e-8});
      double rel = std::abs(grad[i] - numeric) / denom;
      // Below ~1e-6 both values drown in finite-difference rounding noise
      // (~machine epsilon / h); skip rather than compare noise to noise.
      if (std::abs(grad[i]) < 1e-6 && std::abs(numeric) < 1e-6) rel = 0.0;
      worst = std::max(worst, rel);
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("train: all three kinds fit a separable corpus; seeds reproduce") {
  LabeledCorpus corpus = separable_corpus();
  for (ClassifierKind kind :
       {ClassifierKind::mnb, ClassifierKind::logreg, ClassifierKind::mlp}) {
    TextModel m = train_task_model("toy", corpus, kind, 0.5, 1);
    ConfusionMatrix cm = evaluate(m, corpus);
    INFO(classifier_kind_name(kind));
    CHECK(cm.fp + cm.fn == 0);  // 100% training accuracy

    TextModel again = train_task_model("toy", corpus, kind, 0.5, 1);
    CHECK(again == m);
  }

  LabeledCorpus single;
  for (const auto& d : corpus) {
    if (d.label == 0) single.push_back(d);
  }
  CHECK_THROWS_AS(train_task_model("toy", single, ClassifierKind::mnb, 0.5, 7),
                  Error);
}

TEST_CASE("model io: save + load reproduces scores bit-exactly") {
  LabeledCorpus corpus = separable_corpus();
  auto dir = std::filesystem::temp_directory_path() / "ppcheck_model_io";
  std::filesystem::create_directories(dir);

  for (ClassifierKind kind :
       {ClassifierKind::mnb, ClassifierKind::logreg, ClassifierKind::mlp}) {
    TextModel m = train_task_model("toy", corpus, kind, 0.5, 7);
    std::string path = (dir / "m.json").string();
    save_model(m, path);
    TextModel loaded = load_model(path);
    CHECK(loaded == m);
    for (const auto& d : corpus) {
      CHECK(loaded.score(d.text) == m.score(d.text));
    }
  }

  CHECK_THROWS_AS(load_model((dir / "missing.json").string()), Error);
}

TEST_CASE("split_corpus: deterministic, partitioning, both sides populated") {
  LabeledCorpus corpus = separable_corpus();
  CorpusSplit a = split_corpus(corpus, 0.8, 7);
  CorpusSplit b = split_corpus(corpus, 0.8, 7);
  CHECK(a.train.size() == 16);
  CHECK(a.test.size() == 4);
  REQUIRE(a.train.size() == b.train.size());
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    CHECK(a.train[i].text == b.train[i].text);
  }

  // different seed gives a different shuffle (overwhelmingly likely)
  CorpusSplit c = split_corpus(corpus, 0.8, 8);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    if (a.train[i].text != c.train[i].text) any_diff = true;
  }
  CHECK(any_diff);

  // multiset of documents is preserved
  std::multiset<std::string> orig, split;
  for (const auto& d : corpus) orig.insert(d.text);
  for (const auto& d : a.train) split.insert(d.text);
  for (const auto& d : a.test) split.insert(d.text);
  CHECK(orig == split);
}

TEST_CASE("metrics: formula spot checks and empty denominators") {
  ConfusionMatrix cm{8, 2, 7, 3};  // tp fp tn fn
  CHECK(accuracy(cm) == Catch::Approx(15.0 / 20.0));
  CHECK(sensitivity(cm) == Catch::Approx(8.0 / 11.0));
  CHECK(specificity(cm) == Catch::Approx(7.0 / 9.0));
  CHECK(precision(cm) == Catch::Approx(8.0 / 10.0));

  ConfusionMatrix empty{};
  CHECK(accuracy(empty) == 0.0);
  CHECK(sensitivity(empty) == 0.0);
  CHECK(specificity(empty) == 0.0);
  CHECK(precision(empty) == 0.0);
}

TEST_CASE("corpus io: JSON round-trip") {
  LabeledCorpus corpus = separable_corpus();
  auto dir = std::filesystem::temp_directory_path() / "ppcheck_corpus_io";
  std::filesystem::create_directories(dir);
  std::string path = (dir / "toy.json").string();
  save_corpus("toy", corpus, path);
  std::string task;
  LabeledCorpus again = load_corpus(path, &task);
  CHECK(task == "toy");
  REQUIRE(again.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(again[i].text == corpus[i].text);
    CHECK(again[i].label == corpus[i].label);
  }
  CHECK_THROWS_AS(load_corpus((dir / "nope.json").string()), Error);
}

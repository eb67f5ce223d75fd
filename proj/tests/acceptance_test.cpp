// Acceptance suite: each test case checks one release criterion and prints a
// single PASS/FAIL line for it.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ppcheck/corpus_gen.hpp"
#include "ppcheck/lexicon_default.hpp"
#include "ppcheck/mapping_default.hpp"
#include "ppcheck/pipeline.hpp"

using namespace ppcheck;

namespace {

std::filesystem::path data_dir() {
  const char* env = std::getenv("PPCHECK_DATA");
  REQUIRE(env != nullptr);
  return env;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ppcheck_acc_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void report(int n, const std::string& what, bool ok) {
  std::cout << "Criterion " << n << " (" << what << "): "
            << (ok ? "PASS" : "FAIL") << std::endl;
  REQUIRE(ok);
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), {});
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

class ConstScorer : public PolicyScorer {
 public:
  explicit ConstScorer(double p) : p_(p) {}
  double score(const std::string&) const override { return p_; }
  double threshold() const override { return kDetectorThreshold; }

 private:
  double p_;
};

}  // namespace

TEST_CASE("criterion 1: TR decision-table exactness") {
  auto start = std::chrono::steady_clock::now();

  // Precomputed oracle table over the 5 TR flag bits:
  //   bit0 = accept widget missing, bit1 = expiry before the timeout,
  //   bit2 = home resume broken, bit3 = back resume broken,
  //   bit4 = PSI event before acceptance.
  static const char* kExpected[32] = {
      "Compliant", "Fail_TR3", "Fail_TR6", "Fail_TR3",  // 0..3
      "Fail_TR5",  "Fail_TR3", "Fail_TR6", "Fail_TR3",  // 4..7
      "Fail_TR5",  "Fail_TR3", "Fail_TR6", "Fail_TR3",  // 8..11
      "Fail_TR5",  "Fail_TR3", "Fail_TR6", "Fail_TR3",  // 12..15
      "Fail_TR4",  "Fail_TR3", "Fail_TR6", "Fail_TR3",  // 16..19
      "Fail_TR5",  "Fail_TR3", "Fail_TR6", "Fail_TR3",  // 20..23
      "Fail_TR5",  "Fail_TR3", "Fail_TR6", "Fail_TR3",  // 24..27
      "Fail_TR5",  "Fail_TR3", "Fail_TR6", "Fail_TR3",  // 28..31
  };

  KeywordLexicon lex = default_lexicon();
  MappingStore store = default_mapping_store();
  PipelineModels models = oracle_models(lex);
  auto dir = temp_dir("tr_table");

  int mismatches = 0;
  for (int mask = 0; mask < 32; ++mask) {
    Rng rng(100 + mask);
    gen::TrFlags flags;
    flags.with_accept = (mask & 1) == 0;
    flags.timer_seconds = (mask & 2) ? 5 : 0;
    flags.home_resume_ok = (mask & 4) == 0;
    flags.back_resume_ok = (mask & 8) == 0;
    flags.pre_accept_event = (mask & 16) != 0;
    flags.policy_body = gen::compliant_body(false, lex);

    std::string app_id = "app.trflags" + std::to_string(mask);
    AppPackage pkg = gen::make_policy_app(app_id, flags, rng);
    write_package(pkg, dir / app_id);
    ComplianceReport r = run_pipeline(parse_package(dir / app_id), store,
                                      models);
    if (std::string(verdict_name(r.verdict)) != kExpected[mask]) {
      ++mismatches;
      UNSCOPED_INFO("mask " << mask << ": got " << verdict_name(r.verdict)
                            << ", expected " << kExpected[mask]);
    }
  }

  double secs = elapsed_seconds(start);
  report(1, "TR decision table, 32 fixtures", mismatches == 0 && secs < 5.0);
}

TEST_CASE("criterion 2: oracle end-to-end equivalence on 200 packages") {
  auto start = std::chrono::steady_clock::now();

  KeywordLexicon lex = default_lexicon();
  MappingStore store = default_mapping_store();
  auto dir = temp_dir("oracle_corpus");

  GenSpec spec;
  for (Verdict v : all_verdicts()) spec.counts[v] = 20;
  auto labels = generate_corpus(spec, 7, dir);
  REQUIRE(labels.size() == 200);

  BatchReport batch = run_batch(dir, store, oracle_models(lex), {}, 2);
  std::size_t agree = 0;
  for (const auto& r : batch.reports) {
    auto it = labels.find(r.app_id);
    if (it != labels.end() && it->second == r.verdict) ++agree;
  }

  double secs = elapsed_seconds(start);
  report(2, "oracle batch reproduces ground-truth labels",
         batch.errors.empty() && agree == labels.size() &&
             batch.reports.size() == labels.size() && secs < 60.0);
}

TEST_CASE("criterion 3: pinned bounds") {
  bool ok = true;
  KeywordLexicon lex = default_lexicon();
  MappingStore store = default_mapping_store();
  OraclePolicyScorer oracle;

  // detect performs exactly min(20, reachable-action-count) on every
  // generated no-policy package
  Rng rng(7);
  for (int i = 0; i < 25; ++i) {
    AppPackage pkg = generate_package(Verdict::Fail_TR1_TR2,
                                      "app.nopolicy" + std::to_string(i), lex,
                                      rng);
    StaticAnalysis analysis = analyze(pkg, store);
    DeviceSession count_session(pkg, analysis);
    std::size_t reachable = count_session.enumerate_actions().size();

    DeviceSession s(pkg, analysis);
    DetectOutcome out = detect(s, oracle);
    if (out.found.has_value() ||
        out.actions_performed != std::min<std::size_t>(20, reachable)) {
      ok = false;
      UNSCOPED_INFO("bound fidelity broke on package " << i);
    }
  }

  // TR6: 9 s timer fails, 11 s timer passes the 10 s timeout
  auto verdict_with_timer = [&](int seconds) {
    Rng r(3);
    gen::TrFlags flags;
    flags.timer_seconds = seconds;
    flags.policy_body = gen::compliant_body(false, lex);
    AppPackage pkg = gen::make_policy_app("app.timer", flags, r);
    return run_pipeline(pkg, store, oracle_models(lex)).verdict;
  };
  if (verdict_with_timer(9) != Verdict::Fail_TR6) ok = false;
  if (verdict_with_timer(11) != Verdict::Compliant) ok = false;

  // probability exactly 0.90 classifies positive
  AppPackage tiny;
  tiny.manifest.package_id = "app.boundary";
  UiNode home{"Layout", "some page text", false, std::nullopt, {}};
  tiny.screens["home"] = {"home", home};
  tiny.behavior.initial_screen = "home";
  StaticAnalysis analysis = analyze(tiny, MappingStore{});
  DeviceSession at(tiny, analysis);
  if (!detect(at, ConstScorer(0.90)).found.has_value()) ok = false;
  DeviceSession below(tiny, analysis);
  if (detect(below, ConstScorer(0.89)).found.has_value()) ok = false;

  report(3, "MA bound, TR6 timeout, 0.90 boundary", ok);
}

TEST_CASE("criterion 4: numerical core") {
  bool ok = true;

  // MLP gradient check over >= 100 random small configurations
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t d_in = 2 + rng.next_below(7);
    std::vector<std::size_t> hidden = {2 + rng.next_below(4)};
    if (rng.next_below(2)) hidden.push_back(2 + rng.next_below(3));
    MlpParams p = make_mlp(d_in, hidden, rng.next_u64());

    std::vector<SparseVec> rows;
    std::vector<int> labels;
    std::vector<std::size_t> batch;
    for (int r = 0; r < 3; ++r) {
      SparseVec x;
      for (std::size_t c = 0; c < d_in; ++c) {
        x.emplace_back(c, rng.next_gaussian() * 0.5);
      }
      rows.push_back(x);
      labels.push_back(static_cast<int>(rng.next_below(2)));
      batch.push_back(r);
    }

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
  if (worst >= 1e-4) {
    ok = false;
    UNSCOPED_INFO("worst gradient relative error " << worst);
  }

  // tf-idf against an independent dense computation, <= 10-doc corpora
  std::vector<LabeledCorpus> corpora = {
      {{"a b", 0}, {"a c", 1}},
      {{"we collect gps", 1}, {"we play games", 0}, {"gps data stored", 1},
       {"fun game here", 0}, {"gps position shared", 1}, {"new levels", 0}},
  };
  for (const auto& corpus : corpora) {
    TfIdfModel m = fit_tfidf(corpus);
    double n = static_cast<double>(corpus.size());
    // independent idf from document frequencies
    std::map<std::string, int> df;
    for (const auto& d : corpus) {
      for (const auto& [g, c] : tokenize_ngrams(preprocess(d.text))) ++df[g];
    }
    for (const auto& [g, dfc] : df) {
      double expected = std::log((1.0 + n) / (1.0 + dfc)) + 1.0;
      if (std::abs(m.idf[m.column_of(g)] - expected) >= 1e-12) ok = false;
    }
    for (const auto& d : corpus) {
      // independent row: tf * idf then L2 normalization
      auto counts = tokenize_ngrams(preprocess(d.text));
      std::map<std::size_t, double> expect;
      double norm = 0.0;
      for (const auto& [g, c] : counts) {
        double w = c * m.idf[m.column_of(g)];
        expect[m.column_of(g)] = w;
        norm += w * w;
      }
      norm = std::sqrt(norm);
      for (const auto& [col, w] : m.transform_full(d.text)) {
        if (std::abs(w - expect.at(col) / norm) >= 1e-12) ok = false;
      }
    }
  }

  // ANOVA against the direct F formula on a 6x3 matrix
  std::vector<std::vector<double>> dense = {{1.0, 2.0, 0.3}, {1.2, 2.0, 0.9},
                                            {0.8, 2.0, 0.1}, {3.0, 2.0, 0.5},
                                            {3.1, 2.0, 0.2}, {2.9, 2.0, 0.8}};
  std::vector<int> y = {0, 0, 0, 1, 1, 1};
  std::vector<SparseVec> rows;
  for (const auto& r : dense) {
    SparseVec v;
    for (std::size_t c = 0; c < r.size(); ++c) v.emplace_back(c, r[c]);
    rows.push_back(v);
  }
  auto f = anova_f_values(rows, y, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    double s0 = 0, s1 = 0;
    for (int r = 0; r < 3; ++r) s0 += dense[r][c];
    for (int r = 3; r < 6; ++r) s1 += dense[r][c];
    double m0 = s0 / 3, m1 = s1 / 3, grand = (s0 + s1) / 6;
    double ssb = 3 * (m0 - grand) * (m0 - grand) +
                 3 * (m1 - grand) * (m1 - grand);
    double ssw = 0;
    for (int r = 0; r < 6; ++r) {
      double m = r < 3 ? m0 : m1;
      ssw += (dense[r][c] - m) * (dense[r][c] - m);
    }
    double expected = ssb <= 1e-300 ? 0.0 : ssb / (ssw / 4.0);
    if (std::abs(f[c] - expected) >= 1e-12) ok = false;
  }

  // MNB posteriors sum to 1 +/- 1e-12
  LabeledCorpus nb_corpus = corpora[1];
  TfIdfModel tfidf = fit_tfidf(nb_corpus);
  std::vector<SparseVec> nb_rows;
  std::vector<int> nb_labels;
  for (const auto& d : nb_corpus) {
    nb_rows.push_back(tfidf.transform_full(d.text));
    nb_labels.push_back(d.label);
  }
  MnbParams mnb = train_mnb(nb_rows, nb_labels, tfidf.vocabulary.size(), {});
  for (const auto& x : nb_rows) {
    double j0 = mnb.class_log_prior[0], j1 = mnb.class_log_prior[1];
    for (const auto& [col, w] : x) {
      j0 += w * mnb.feature_log_prob[0][col];
      j1 += w * mnb.feature_log_prob[1][col];
    }
    double sum = sigmoid(j1 - j0) + sigmoid(j0 - j1);
    if (std::abs(sum - 1.0) >= 1e-12) ok = false;
    if (std::abs(predict_proba(mnb, x) - sigmoid(j1 - j0)) != 0.0) ok = false;
  }

  report(4, "MLP gradients, tf-idf/ANOVA oracles, MNB posteriors", ok);
}

TEST_CASE("criterion 5: learned detector sanity on the bundled corpus") {
  bool ok = true;

  LabeledCorpus corpus =
      load_corpus((data_dir() / "corpora" / "detector.json").string());
  TaskTrainResult result = train_with_holdout("detector", corpus,
                                              ClassifierKind::mlp,
                                              kDetectorThreshold, 7);
  double acc = accuracy(result.heldout);
  if (acc < 0.90) {
    ok = false;
    UNSCOPED_INFO("held-out accuracy " << acc);
  }

  // metric formulas against a hand confusion matrix on a 20-item audit subset
  CorpusSplit split = split_corpus(corpus, 0.8, 7);
  REQUIRE(split.test.size() >= 20);
  long tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    bool pred = result.model.positive(split.test[i].text);
    bool truth = split.test[i].label == 1;
    if (pred && truth) ++tp;
    if (pred && !truth) ++fp;
    if (!pred && !truth) ++tn;
    if (!pred && truth) ++fn;
  }
  ConfusionMatrix audit{static_cast<std::size_t>(tp),
                        static_cast<std::size_t>(fp),
                        static_cast<std::size_t>(tn),
                        static_cast<std::size_t>(fn)};
  if (accuracy(audit) !=
      static_cast<double>(tp + tn) / static_cast<double>(tp + tn + fp + fn)) {
    ok = false;
  }
  if (tp + fn > 0 &&
      sensitivity(audit) != static_cast<double>(tp) / (tp + fn)) {
    ok = false;
  }
  if (tn + fp > 0 &&
      specificity(audit) != static_cast<double>(tn) / (tn + fp)) {
    ok = false;
  }
  if (tp + fp > 0 && precision(audit) != static_cast<double>(tp) / (tp + fp)) {
    ok = false;
  }

  report(5, "detector >= 0.90 held-out, metric formulas audited", ok);
}

TEST_CASE("criterion 6: byte-identical reruns") {
  bool ok = true;
  KeywordLexicon lex = default_lexicon();
  MappingStore store = default_mapping_store();

  // identical model files from two training runs with the same seed
  auto models1 = temp_dir("models1");
  auto models2 = temp_dir("models2");
  train_all_models(data_dir() / "corpora", lex, 7, models1);
  train_all_models(data_dir() / "corpora", lex, 7, models2);
  for (const auto& entry : std::filesystem::directory_iterator(models1)) {
    std::string name = entry.path().filename().string();
    if (read_bytes(entry.path()) != read_bytes(models2 / name)) {
      ok = false;
      UNSCOPED_INFO("model file differs: " << name);
    }
  }

  // identical batch reports from two runs over the same corpus
  auto corpus_dir = temp_dir("det_corpus");
  GenSpec spec;
  for (Verdict v : all_verdicts()) spec.counts[v] = 3;
  generate_corpus(spec, 7, corpus_dir);

  PipelineModels learned = learned_models(models1, lex);
  BatchReport b1 = run_batch(corpus_dir, store, learned, {}, 2);
  BatchReport b2 = run_batch(corpus_dir, store, learned, {}, 2);
  std::string r1 = batch_report_to_json(b1).dump(2);
  std::string r2 = batch_report_to_json(b2).dump(2);
  if (r1 != r2) ok = false;

  // and the report bytes survive a write/read cycle unchanged
  auto out1 = temp_dir("report1") / "batch.json";
  auto out2 = temp_dir("report2") / "batch.json";
  std::ofstream(out1, std::ios::binary) << r1;
  std::ofstream(out2, std::ios::binary) << r2;
  if (read_bytes(out1) != read_bytes(out2)) ok = false;

  report(6, "byte-identical reports and model files", ok);
}

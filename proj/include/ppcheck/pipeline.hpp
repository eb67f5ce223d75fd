#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ppcheck/analyzer.hpp"
#include "ppcheck/cr_checker.hpp"
#include "ppcheck/detector.hpp"
#include "ppcheck/device.hpp"
#include "ppcheck/mapping.hpp"
#include "ppcheck/package.hpp"
#include "ppcheck/text/train.hpp"
#include "ppcheck/tr_tester.hpp"

namespace ppcheck {

enum class Verdict {
  Clean,
  Compliant,
  Fail_TR1_TR2,
  Fail_TR3,
  Fail_TR4,
  Fail_TR5,
  Fail_TR6,
  Fail_CR1_PSI,
  Fail_CR1_ThirdParty,
  Fail_CR1_Both,
};

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Clean: return "Clean";
    case Verdict::Compliant: return "Compliant";
    case Verdict::Fail_TR1_TR2: return "Fail_TR1_TR2";
    case Verdict::Fail_TR3: return "Fail_TR3";
    case Verdict::Fail_TR4: return "Fail_TR4";
    case Verdict::Fail_TR5: return "Fail_TR5";
    case Verdict::Fail_TR6: return "Fail_TR6";
    case Verdict::Fail_CR1_PSI: return "Fail_CR1_PSI";
    case Verdict::Fail_CR1_ThirdParty: return "Fail_CR1_ThirdParty";
    case Verdict::Fail_CR1_Both: return "Fail_CR1_Both";
  }
  return "";
}

inline constexpr std::array<Verdict, 10> all_verdicts() {
  return {Verdict::Clean,        Verdict::Compliant,
          Verdict::Fail_TR1_TR2, Verdict::Fail_TR3,
          Verdict::Fail_TR4,     Verdict::Fail_TR5,
          Verdict::Fail_TR6,     Verdict::Fail_CR1_PSI,
          Verdict::Fail_CR1_ThirdParty, Verdict::Fail_CR1_Both};
}

inline std::optional<Verdict> verdict_from_name(std::string_view name) {
  for (Verdict v : all_verdicts()) {
    if (verdict_name(v) == name) return v;
  }
  return std::nullopt;
}

struct PipelineConfig {
  std::size_t max_actions = kDefaultMaxActions;
  int tr6_timeout_seconds = kDefaultTr6TimeoutSeconds;
  std::uint64_t seed = 7;
};

// The classifier surface the pipeline runs against: one policy-page scorer
// and one sentence-level CR model set, either trained or rule-based oracle.
struct PipelineModels {
  std::shared_ptr<const PolicyScorer> scorer;
  std::shared_ptr<const CrModelSet> cr;
  KeywordLexicon lexicon;
  std::string models_version;  // "oracle" in oracle mode
};

// Oracle CR set that owns its lexicon copy, so PipelineModels stays
// self-contained and freely copyable.
class OwnedOracleCrModels : public CrModelSet {
 public:
  explicit OwnedOracleCrModels(KeywordLexicon lex)
      : lex_(std::move(lex)), inner_(lex_) {}
  bool mentions(const std::string& s, PsiKind psi) const override {
    return inner_.mentions(s, psi);
  }
  bool affirmative(const std::string& s) const override {
    return inner_.affirmative(s);
  }
  bool third_party(const std::string& s) const override {
    return inner_.third_party(s);
  }

 private:
  KeywordLexicon lex_;
  OracleCrModels inner_;
};

inline PipelineModels oracle_models(KeywordLexicon lexicon) {
  PipelineModels m;
  m.scorer = std::make_shared<OraclePolicyScorer>();
  m.cr = std::make_shared<OwnedOracleCrModels>(lexicon);
  m.lexicon = std::move(lexicon);
  m.models_version = "oracle";
  return m;
}

// Scorer that owns its detector model.
class OwnedModelScorer : public PolicyScorer {
 public:
  explicit OwnedModelScorer(TextModel model) : model_(std::move(model)) {}
  double score(const std::string& raw_text) const override {
    return model_.score(raw_text);
  }
  double threshold() const override { return model_.clf.threshold; }

 private:
  TextModel model_;
};

inline const std::vector<std::string>& cr_task_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (PsiKind k : all_psi_kinds()) out.emplace_back(psi_name(k));
    out.emplace_back("performed_not_performed");
    out.emplace_back("third_party_first_party");
    return out;
  }();
  return names;
}

// Load a trained model store: detector.json plus one <task>.json per CR task.
inline PipelineModels learned_models(const std::filesystem::path& models_dir,
                                     KeywordLexicon lexicon) {
  PipelineModels m;
  m.scorer = std::make_shared<OwnedModelScorer>(
      load_model((models_dir / "detector.json").string()));
  std::map<PsiKind, TextModel> psi_models;
  for (PsiKind k : all_psi_kinds()) {
    psi_models.emplace(
        k, load_model(
               (models_dir / (std::string(psi_name(k)) + ".json")).string()));
  }
  TextModel performed =
      load_model((models_dir / "performed_not_performed.json").string());
  TextModel third_party =
      load_model((models_dir / "third_party_first_party.json").string());
  m.cr = std::make_shared<LearnedCrModels>(
      std::move(psi_models), std::move(performed), std::move(third_party));
  m.lexicon = std::move(lexicon);
  m.models_version = "models-v" + std::to_string(kModelFormatVersion);
  return m;
}

// Train the detector (mlp, 0.90 threshold) and all 29 CR tasks (kind per
// the lexicon's substitution table, 0.5 threshold) from <task>.json corpora
// in corpus_dir; writes models plus training_log.json with held-out metrics.
inline nlohmann::json train_all_models(const std::filesystem::path& corpus_dir,
                                       const KeywordLexicon& lexicon,
                                       std::uint64_t seed,
                                       const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  nlohmann::json log;

  auto run = [&](const std::string& task, ClassifierKind kind,
                 double threshold) {
    LabeledCorpus corpus =
        load_corpus((corpus_dir / (task + ".json")).string());
    TaskTrainResult result =
        train_with_holdout(task, corpus, kind, threshold, seed);
    save_model(result.model, (out_dir / (task + ".json")).string());
    log[task] = train_log_entry(result, kind);
  };

  run("detector", ClassifierKind::mlp, kDetectorThreshold);
  for (const std::string& task : cr_task_names()) {
    auto it = lexicon.model_substitution.find(task);
    if (it == lexicon.model_substitution.end()) {
      throw Error(ErrorCode::BadConfig,
                  "no model substitution for task '" + task + "'");
    }
    run(task, classifier_kind_from_name(it->second), 0.5);
  }
  std::ofstream out(out_dir / "training_log.json");
  if (!out) throw Error(ErrorCode::MissingFile, (out_dir / "training_log.json").string());
  out << log.dump(2) << "\n";
  return log;
}

struct ComplianceReport {
  std::string app_id;
  Verdict verdict = Verdict::Clean;

  // static phase
  std::set<std::string> privacy_permissions;
  std::set<std::string> privacy_libraries;
  std::set<PsiKind> required_psi;
  std::set<PsiKind> third_party_psi;

  // dynamic phase
  bool policy_found = false;
  double policy_score = 0.0;
  std::vector<Action> detection_path;
  std::size_t actions_performed = 0;
  std::string tr_evidence;
  std::optional<long> acceptance_seq;
  std::vector<ApiEvent> api_events;

  // content phase
  std::set<PsiKind> missing_psi;
  std::set<PsiKind> missing_third_party;
  std::vector<SentenceEvidence> cr_evidence;

  std::string models_version;
  std::string lexicon_version;
  std::string exploration_policy = "keyword-priority";
  long sim_seconds = 0;
  bool needs_manual_review = false;

  bool operator==(const ComplianceReport&) const = default;
};

namespace detail {

inline const char* action_kind_name(Action::Kind k) {
  switch (k) {
    case Action::Kind::tap: return "tap";
    case Action::Kind::swipe: return "swipe";
    case Action::Kind::back: return "back";
    case Action::Kind::home: return "home";
    case Action::Kind::relaunch: return "relaunch";
    case Action::Kind::wait: return "wait";
  }
  return "";
}

inline Action::Kind action_kind_from_name(const std::string& name) {
  for (Action::Kind k : {Action::Kind::tap, Action::Kind::swipe,
                         Action::Kind::back, Action::Kind::home,
                         Action::Kind::relaunch, Action::Kind::wait}) {
    if (name == action_kind_name(k)) return k;
  }
  throw Error(ErrorCode::MalformedModel, "unknown action kind '" + name + "'");
}

inline nlohmann::json action_to_json(const Action& a) {
  return {{"kind", action_kind_name(a.kind)},
          {"id", a.action_id},
          {"seconds", a.seconds}};
}

inline Action action_from_json(const nlohmann::json& j) {
  Action a;
  a.kind = action_kind_from_name(j.at("kind").get<std::string>());
  a.action_id = j.at("id").get<std::string>();
  a.seconds = j.at("seconds").get<int>();
  return a;
}

inline nlohmann::json psi_set_to_json(const std::set<PsiKind>& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (PsiKind k : s) arr.push_back(std::string(psi_name(k)));
  return arr;
}

inline std::set<PsiKind> psi_set_from_json(const nlohmann::json& arr) {
  std::set<PsiKind> out;
  for (const auto& v : arr) {
    auto k = psi_from_name(v.get<std::string>());
    if (!k) {
      throw Error(ErrorCode::MalformedModel,
                  "unknown PSI '" + v.get<std::string>() + "'");
    }
    out.insert(*k);
  }
  return out;
}

}  // namespace detail

inline nlohmann::json report_to_json(const ComplianceReport& r) {
  nlohmann::json doc;
  doc["app_id"] = r.app_id;
  doc["verdict"] = verdict_name(r.verdict);
  doc["static"] = {
      {"privacy_permissions", r.privacy_permissions},
      {"privacy_libraries", r.privacy_libraries},
      {"required_psi", detail::psi_set_to_json(r.required_psi)},
      {"third_party_psi", detail::psi_set_to_json(r.third_party_psi)},
  };
  nlohmann::json path = nlohmann::json::array();
  for (const auto& a : r.detection_path) path.push_back(detail::action_to_json(a));
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : r.api_events) {
    events.push_back({{"api", e.api_method},
                      {"psi", std::string(psi_name(e.psi))},
                      {"sim_time", e.sim_time},
                      {"seq", e.seq}});
  }
  doc["dynamic"] = {
      {"policy_found", r.policy_found},
      {"policy_score", r.policy_score},
      {"detection_path", path},
      {"actions_performed", r.actions_performed},
      {"tr_evidence", r.tr_evidence},
      {"acceptance_seq",
       r.acceptance_seq ? nlohmann::json(*r.acceptance_seq)
                        : nlohmann::json()},
      {"api_events", events},
  };
  nlohmann::json evidence = nlohmann::json::array();
  for (const auto& e : r.cr_evidence) {
    evidence.push_back({{"sentence", e.sentence},
                        {"psi", std::string(psi_name(e.psi))},
                        {"mentions", e.labels.mentions},
                        {"affirmative", e.labels.affirmative},
                        {"third_party", e.labels.third_party}});
  }
  doc["content"] = {
      {"missing_psi", detail::psi_set_to_json(r.missing_psi)},
      {"missing_third_party", detail::psi_set_to_json(r.missing_third_party)},
      {"evidence", evidence},
  };
  doc["models_version"] = r.models_version;
  doc["lexicon_version"] = r.lexicon_version;
  doc["exploration_policy"] = r.exploration_policy;
  doc["sim_seconds"] = r.sim_seconds;
  doc["needs_manual_review"] = r.needs_manual_review;
  return doc;
}

inline ComplianceReport report_from_json(const nlohmann::json& doc) {
  ComplianceReport r;
  try {
    r.app_id = doc.at("app_id").get<std::string>();
    auto v = verdict_from_name(doc.at("verdict").get<std::string>());
    if (!v) {
      throw Error(ErrorCode::MalformedModel,
                  "unknown verdict '" + doc.at("verdict").get<std::string>() +
                      "'");
    }
    r.verdict = *v;
    const auto& st = doc.at("static");
    r.privacy_permissions =
        st.at("privacy_permissions").get<std::set<std::string>>();
    r.privacy_libraries =
        st.at("privacy_libraries").get<std::set<std::string>>();
    r.required_psi = detail::psi_set_from_json(st.at("required_psi"));
    r.third_party_psi = detail::psi_set_from_json(st.at("third_party_psi"));
    const auto& dyn = doc.at("dynamic");
    r.policy_found = dyn.at("policy_found").get<bool>();
    r.policy_score = dyn.at("policy_score").get<double>();
    for (const auto& j : dyn.at("detection_path")) {
      r.detection_path.push_back(detail::action_from_json(j));
    }
    r.actions_performed = dyn.at("actions_performed").get<std::size_t>();
    r.tr_evidence = dyn.at("tr_evidence").get<std::string>();
    if (!dyn.at("acceptance_seq").is_null()) {
      r.acceptance_seq = dyn.at("acceptance_seq").get<long>();
    }
    for (const auto& j : dyn.at("api_events")) {
      auto psi = psi_from_name(j.at("psi").get<std::string>());
      if (!psi) {
        throw Error(ErrorCode::MalformedModel, "unknown PSI in api_events");
      }
      r.api_events.push_back({j.at("api").get<std::string>(), *psi,
                              j.at("sim_time").get<long>(),
                              j.at("seq").get<long>()});
    }
    const auto& content = doc.at("content");
    r.missing_psi = detail::psi_set_from_json(content.at("missing_psi"));
    r.missing_third_party =
        detail::psi_set_from_json(content.at("missing_third_party"));
    for (const auto& j : content.at("evidence")) {
      auto psi = psi_from_name(j.at("psi").get<std::string>());
      if (!psi) {
        throw Error(ErrorCode::MalformedModel, "unknown PSI in evidence");
      }
      r.cr_evidence.push_back({j.at("sentence").get<std::string>(), *psi,
                               {j.at("mentions").get<bool>(),
                                j.at("affirmative").get<bool>(),
                                j.at("third_party").get<bool>()}});
    }
    r.models_version = doc.at("models_version").get<std::string>();
    r.lexicon_version = doc.at("lexicon_version").get<std::string>();
    r.exploration_policy = doc.at("exploration_policy").get<std::string>();
    r.sim_seconds = doc.at("sim_seconds").get<long>();
    r.needs_manual_review = doc.at("needs_manual_review").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedModel,
                std::string("report: ") + e.what());
  }
  return r;
}

// Full per-app workflow. Failure is a verdict, never an exception; only
// malformed inputs or missing models throw.
inline ComplianceReport run_pipeline(const AppPackage& pkg,
                                     const MappingStore& store,
                                     const PipelineModels& models,
                                     const PipelineConfig& config = {}) {
  ComplianceReport r;
  r.app_id = pkg.manifest.package_id;
  r.models_version = models.models_version;
  r.lexicon_version = models.lexicon.version;

  StaticAnalysis analysis = analyze(pkg, store);
  r.privacy_permissions = analysis.privacy_permissions;
  r.privacy_libraries = analysis.privacy_libraries;
  r.required_psi = analysis.required_psi;
  r.third_party_psi = analysis.third_party_psi;

  if (analysis.clean) {
    r.verdict = Verdict::Clean;
    return r;
  }

  DeviceSession session(pkg, analysis);
  auto finish = [&](Verdict v) {
    r.verdict = v;
    r.sim_seconds = session.clock();
    r.api_events = session.events();
    r.needs_manual_review =
        v != Verdict::Clean && v != Verdict::Compliant;
    return r;
  };

  DetectOutcome det = detect(session, *models.scorer, config.max_actions);
  r.actions_performed = det.actions_performed;
  if (!det.found) {
    r.tr_evidence = "no policy page found within " +
                    std::to_string(config.max_actions) + " actions";
    return finish(Verdict::Fail_TR1_TR2);
  }
  r.policy_found = true;
  r.policy_score = det.found->score;
  r.detection_path = det.found->actions;

  TrVerdict tr = test_technical_requirements(session, *det.found,
                                             config.tr6_timeout_seconds);
  if (tr.value != TrValue::Pass) {
    r.tr_evidence = tr.evidence;
    switch (tr.value) {
      case TrValue::Fail_TR3: return finish(Verdict::Fail_TR3);
      case TrValue::Fail_TR6: return finish(Verdict::Fail_TR6);
      default: return finish(Verdict::Fail_TR5);
    }
  }

  const UiNode* accept = contains_explicit_accept(det.found->policy_xml);
  r.acceptance_seq = session.next_seq();
  if (accept->action_id) session.perform(Action::tap(*accept->action_id));

  TrVerdict tr4 = check_tr4(session.events(), r.acceptance_seq);
  if (tr4.value != TrValue::Pass) {
    r.tr_evidence = tr4.evidence;
    return finish(Verdict::Fail_TR4);
  }

  CrVerdict cr = check_cr1(det.found->policy_text, analysis.required_psi,
                           analysis.third_party_psi, *models.cr,
                           models.lexicon);
  r.missing_psi = cr.missing_psi;
  r.missing_third_party = cr.missing_third_party;
  r.cr_evidence = cr.evidence;
  if (!cr.psi_ok && !cr.third_party_ok) return finish(Verdict::Fail_CR1_Both);
  if (!cr.psi_ok) return finish(Verdict::Fail_CR1_PSI);
  if (!cr.third_party_ok) return finish(Verdict::Fail_CR1_ThirdParty);
  return finish(Verdict::Compliant);
}

struct DistributionRow {
  std::size_t count = 0;
  std::string percentage;  // "33.33%"
  std::string ratio;       // "1/3"

  bool operator==(const DistributionRow&) const = default;
};

struct BatchReport {
  std::vector<ComplianceReport> reports;          // sorted by app id
  std::map<std::string, std::string> errors;      // app id -> message
  std::map<std::string, std::size_t> verdict_histogram;
  std::map<std::string, DistributionRow> permission_distribution;
  std::map<std::string, DistributionRow> library_distribution;
  std::size_t total_apps = 0;
};

inline DistributionRow make_row(std::size_t count, std::size_t total) {
  DistributionRow row;
  row.count = count;
  char buf[32];
  double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / total;
  std::snprintf(buf, sizeof(buf), "%.2f%%", pct);
  row.percentage = buf;
  row.ratio = std::to_string(count) + "/" + std::to_string(total);
  return row;
}

inline nlohmann::json batch_report_to_json(const BatchReport& b) {
  nlohmann::json doc;
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& r : b.reports) reports.push_back(report_to_json(r));
  doc["reports"] = reports;
  doc["errors"] = b.errors;
  doc["verdict_histogram"] = b.verdict_histogram;
  auto rows = [](const std::map<std::string, DistributionRow>& dist) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [name, row] : dist) {
      out[name] = {{"count", row.count},
                   {"percentage", row.percentage},
                   {"ratio", row.ratio}};
    }
    return out;
  };
  doc["permission_distribution"] = rows(b.permission_distribution);
  doc["library_distribution"] = rows(b.library_distribution);
  doc["total_apps"] = b.total_apps;
  return doc;
}

// Sorted package subdirectories of `dir` (those containing manifest.xml).
inline std::vector<std::filesystem::path> list_packages(
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::MissingFile, dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_directory() &&
        std::filesystem::exists(entry.path() / "manifest.xml")) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline BatchReport run_batch(const std::filesystem::path& dir,
                             const MappingStore& store,
                             const PipelineModels& models,
                             const PipelineConfig& config = {},
                             unsigned jobs = 1) {
  std::vector<std::filesystem::path> pkgs = list_packages(dir);
  BatchReport batch;
  batch.total_apps = pkgs.size();

  struct Slot {
    std::optional<ComplianceReport> report;
    std::string app_id;
    std::string error;
  };
  std::vector<Slot> slots(pkgs.size());
  auto work = [&](std::size_t stride, std::size_t offset) {
    for (std::size_t i = offset; i < pkgs.size(); i += stride) {
      slots[i].app_id = pkgs[i].filename().string();
      try {
        AppPackage pkg = parse_package(pkgs[i].string());
        slots[i].report = run_pipeline(pkg, store, models, config);
        slots[i].app_id = slots[i].report->app_id;
      } catch (const Error& e) {
        slots[i].error = e.what();
      }
    }
  };
  if (jobs <= 1 || pkgs.size() <= 1) {
    work(1, 0);
  } else {
    unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(pkgs.size()));
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < n; ++t) threads.emplace_back(work, n, t);
    for (auto& th : threads) th.join();
  }

  for (auto& slot : slots) {
    if (slot.report) {
      batch.reports.push_back(std::move(*slot.report));
    } else {
      batch.errors[slot.app_id] = slot.error;
    }
  }
  std::sort(batch.reports.begin(), batch.reports.end(),
            [](const auto& a, const auto& b) { return a.app_id < b.app_id; });

  std::size_t analyzed = batch.reports.size();
  std::map<std::string, std::size_t> perm_counts, lib_counts;
  for (const auto& r : batch.reports) {
    ++batch.verdict_histogram[verdict_name(r.verdict)];
    for (const auto& p : r.privacy_permissions) ++perm_counts[p];
    for (const auto& l : r.privacy_libraries) ++lib_counts[l];
  }
  for (const auto& [name, count] : perm_counts) {
    batch.permission_distribution[name] = make_row(count, analyzed);
  }
  for (const auto& [name, count] : lib_counts) {
    batch.library_distribution[name] = make_row(count, analyzed);
  }
  return batch;
}

}  // namespace ppcheck

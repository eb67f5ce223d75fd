#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppcheck/lexicon_default.hpp"
#include "ppcheck/pipeline.hpp"
#include "ppcheck/text/rng.hpp"

namespace ppcheck {

struct GenSpec {
  std::map<Verdict, std::size_t> counts;
};

inline nlohmann::json gen_spec_to_json(const GenSpec& spec) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [v, n] : spec.counts) counts[verdict_name(v)] = n;
  return {{"counts", counts}};
}

inline GenSpec gen_spec_from_json(const nlohmann::json& doc) {
  GenSpec spec;
  try {
    for (auto it = doc.at("counts").begin(); it != doc.at("counts").end();
         ++it) {
      auto v = verdict_from_name(it.key());
      if (!v) {
        throw Error(ErrorCode::BadConfig,
                    "unknown verdict '" + it.key() + "' in corpus spec");
      }
      spec.counts[*v] = it.value().get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadConfig,
                std::string("corpus spec: ") + e.what());
  }
  return spec;
}

inline GenSpec load_gen_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadConfig, path + ": " + e.what());
  }
  return gen_spec_from_json(doc);
}

namespace gen {

inline UiNode text_node(std::string text) {
  return {"TextView", std::move(text), false, std::nullopt, {}};
}

inline UiNode button(std::string text, std::string action_id) {
  return {"Button", std::move(text), true, std::move(action_id), {}};
}

// Decoy texts: no navigation keywords, no acceptance words, no policy marker.
inline const std::vector<std::string>& decoy_texts() {
  static const std::vector<std::string> pool = {
      "Play Game",  "High Scores",  "Photo Gallery", "Daily Puzzle",
      "Leaderboard", "Sound Volume", "Choose Level",  "Credits",
  };
  return pool;
}

// Affirmative first-party disclosure for one PSI.
inline std::string disclose(PsiKind psi, const KeywordLexicon& lex) {
  return "We collect your " + lex.per_psi.at(psi).data_keywords.front() + ".";
}

// Affirmative third-party-attributed disclosure for one PSI.
inline std::string disclose_third_party(PsiKind psi,
                                        const KeywordLexicon& lex) {
  return "Our partners collect your " +
         lex.per_psi.at(psi).data_keywords.front() + ".";
}

// Negated mention for one PSI.
inline std::string deny(PsiKind psi, const KeywordLexicon& lex) {
  return "We will never collect your " +
         lex.per_psi.at(psi).data_keywords.front() + ".";
}

inline constexpr const char* kPolicyMarkerSentence =
    "This application privacy policy describes our practices.";

struct TrFlags {
  bool with_accept = true;
  int timer_seconds = 0;  // 0 = no expiry timer
  bool home_resume_ok = true;
  bool back_resume_ok = true;
  bool pre_accept_event = false;
  bool with_library = false;
  std::string policy_body;  // appended after the marker sentence
};

// A PSI-bearing app whose home screen links to a detectable policy page.
// Every TR/CR behavior is driven by the flags.
inline AppPackage make_policy_app(const std::string& app_id, TrFlags flags,
                                  Rng& rng) {
  AppPackage pkg;
  pkg.manifest.package_id = app_id;
  pkg.manifest.permissions = {"READ_PHONE_STATE"};
  if (flags.with_library) pkg.libraries.insert("Flurry");

  UiNode home{"Layout", "", false, std::nullopt, {}};
  home.children.push_back(text_node("Welcome to " + app_id));
  std::size_t n_decoys = 1 + rng.next_below(3);
  for (std::size_t i = 0; i < n_decoys; ++i) {
    home.children.push_back(
        button(decoy_texts()[rng.next_below(decoy_texts().size())],
               "decoy_" + std::to_string(i)));
  }
  home.children.push_back(button("View Policy", "nav_policy"));
  pkg.screens["home"] = {"home", home};

  std::string policy_text = std::string(kPolicyMarkerSentence);
  if (!flags.policy_body.empty()) policy_text += " " + flags.policy_body;
  UiNode policy{"Layout", "", false, std::nullopt, {}};
  policy.children.push_back(text_node(policy_text));
  if (flags.with_accept) {
    policy.children.push_back(button("Accept", "accept_btn"));
  } else {
    policy.children.push_back(text_node("Read carefully."));
  }
  pkg.screens["policy"] = {"policy", policy};

  UiNode done{"Layout", "", false, std::nullopt, {}};
  done.children.push_back(text_node("Thanks for using the app."));
  pkg.screens["done"] = {"done", done};

  auto& b = pkg.behavior;
  b.initial_screen = "home";
  b.transitions[{"home", "nav_policy"}] = {"policy", {}};
  if (flags.with_accept) {
    // PSI access starts on acceptance; these events carry seq ==
    // acceptance_seq and must pass TR4.
    b.transitions[{"policy", "accept_btn"}] = {"done", {"getDeviceId()"}};
  }
  if (flags.timer_seconds > 0) {
    b.timers["policy"] = {flags.timer_seconds, "home"};
  }
  b.resume_after_home["policy"] = flags.home_resume_ok ? "policy" : "home";
  if (!flags.back_resume_ok) {
    UiNode trap{"Layout", "", false, std::nullopt, {}};
    trap.children.push_back(text_node("Somewhere else entirely."));
    pkg.screens["trap"] = {"trap", trap};
    b.resume_after_back["policy"] = "trap";
  }
  if (flags.pre_accept_event) b.launch_events = {"getDeviceId()"};
  return pkg;
}

inline std::string compliant_body(bool with_library,
                                  const KeywordLexicon& lex) {
  std::string body = disclose(PsiKind::identifier_imei, lex) + " " +
                     disclose(PsiKind::contact_phone_number, lex);
  if (with_library) {
    body += " " + disclose_third_party(PsiKind::identifier_device, lex);
    body += " " + disclose_third_party(PsiKind::demographic_information, lex);
  }
  return body;
}

}  // namespace gen

// One package whose pipeline verdict (in oracle mode) is `v` by construction.
inline AppPackage generate_package(Verdict v, const std::string& app_id,
                                   const KeywordLexicon& lex, Rng& rng) {
  using gen::TrFlags;
  switch (v) {
    case Verdict::Clean: {
      AppPackage pkg;
      pkg.manifest.package_id = app_id;
      pkg.manifest.permissions = {"INTERNET"};
      UiNode home{"Layout", "", false, std::nullopt, {}};
      home.children.push_back(gen::text_node("Welcome to " + app_id));
      home.children.push_back(gen::text_node("Enjoy the puzzles."));
      pkg.screens["home"] = {"home", home};
      pkg.behavior.initial_screen = "home";
      return pkg;
    }
    case Verdict::Fail_TR1_TR2: {
      // Self-looping buttons, no policy page anywhere; reachable-action
      // count equals the button count exactly.
      AppPackage pkg;
      pkg.manifest.package_id = app_id;
      pkg.manifest.permissions = {"READ_PHONE_STATE"};
      UiNode home{"Layout", "", false, std::nullopt, {}};
      home.children.push_back(gen::text_node("Welcome to " + app_id));
      std::size_t n = 3 + rng.next_below(28);  // 3..30 straddles the MA bound
      for (std::size_t i = 0; i < n; ++i) {
        std::string id = "btn_" + std::to_string(i);
        home.children.push_back(gen::button(
            gen::decoy_texts()[rng.next_below(gen::decoy_texts().size())],
            id));
        pkg.behavior.transitions[{"home", id}] = {"home", {}};
      }
      pkg.screens["home"] = {"home", home};
      pkg.behavior.initial_screen = "home";
      return pkg;
    }
    case Verdict::Fail_TR3: {
      TrFlags f;
      f.with_accept = false;
      f.policy_body = gen::compliant_body(false, lex);
      return gen::make_policy_app(app_id, f, rng);
    }
    case Verdict::Fail_TR6: {
      TrFlags f;
      f.timer_seconds = 3 + static_cast<int>(rng.next_below(7));  // 3..9 s
      f.policy_body = gen::compliant_body(false, lex);
      return gen::make_policy_app(app_id, f, rng);
    }
    case Verdict::Fail_TR5: {
      TrFlags f;
      if (rng.next_below(2) == 0) {
        f.home_resume_ok = false;
      } else {
        f.back_resume_ok = false;
      }
      f.policy_body = gen::compliant_body(false, lex);
      return gen::make_policy_app(app_id, f, rng);
    }
    case Verdict::Fail_TR4: {
      TrFlags f;
      f.pre_accept_event = true;
      f.policy_body = gen::compliant_body(false, lex);
      return gen::make_policy_app(app_id, f, rng);
    }
    case Verdict::Fail_CR1_PSI: {
      TrFlags f;
      // Mentioned but negated, or not mentioned at all.
      f.policy_body = rng.next_below(2) == 0
                          ? gen::deny(PsiKind::identifier_imei, lex) + " " +
                                gen::deny(PsiKind::contact_phone_number, lex)
                          : "We value your experience.";
      return gen::make_policy_app(app_id, f, rng);
    }
    case Verdict::Fail_CR1_ThirdParty: {
      TrFlags f;
      f.with_library = true;
      // First-party disclosure of everything, no third-party attribution.
      f.policy_body = gen::disclose(PsiKind::identifier_imei, lex) + " " +
                      gen::disclose(PsiKind::contact_phone_number, lex) +
                      " " + gen::disclose(PsiKind::identifier_device, lex) +
                      " " +
                      gen::disclose(PsiKind::demographic_information, lex);
      return gen::make_policy_app(app_id, f, rng);
    }
    case Verdict::Fail_CR1_Both: {
      TrFlags f;
      f.with_library = true;
      f.policy_body = "We value your experience.";
      return gen::make_policy_app(app_id, f, rng);
    }
    case Verdict::Compliant: {
      TrFlags f;
      f.with_library = rng.next_below(2) == 0;
      f.policy_body = gen::compliant_body(f.with_library, lex);
      return gen::make_policy_app(app_id, f, rng);
    }
  }
  throw Error(ErrorCode::BadConfig, "unknown verdict class");
}

// Packages + labels.json under out_dir. Deterministic per (spec, seed).
inline std::map<std::string, Verdict> generate_corpus(
    const GenSpec& spec, std::uint64_t seed,
    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  KeywordLexicon lex = default_lexicon();
  Rng rng(seed);
  std::map<std::string, Verdict> labels;
  std::size_t index = 0;
  for (const auto& [verdict, count] : spec.counts) {
    for (std::size_t i = 0; i < count; ++i) {
      char id[16];
      std::snprintf(id, sizeof(id), "app_%04zu", index++);
      AppPackage pkg = generate_package(verdict, id, lex, rng);
      write_package(pkg, out_dir / id);
      labels[id] = verdict;
    }
  }
  nlohmann::json doc;
  auto& lab = doc["labels"] = nlohmann::json::object();
  for (const auto& [id2, v] : labels) lab[id2] = verdict_name(v);
  std::ofstream out(out_dir / "labels.json");
  out << doc.dump(2) << "\n";
  return labels;
}

inline std::map<std::string, Verdict> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadConfig, path + ": " + e.what());
  }
  std::map<std::string, Verdict> labels;
  for (auto it = doc.at("labels").begin(); it != doc.at("labels").end();
       ++it) {
    auto v = verdict_from_name(it.value().get<std::string>());
    if (!v) {
      throw Error(ErrorCode::BadConfig,
                  "unknown verdict in label file: " +
                      it.value().get<std::string>());
    }
    labels[it.key()] = *v;
  }
  return labels;
}

// ---- synthetic text corpora for training ----

namespace gen {

inline const std::vector<std::string>& policy_sentences() {
  static const std::vector<std::string> pool = {
      "this privacy policy explains what data we collect",
      "we collect your email address and phone number",
      "your location data may be shared with our partners",
      "we store usage information to improve the service",
      "you must accept this privacy policy before using the app",
      "personal data is processed according to this privacy policy",
      "we never sell your personal information to advertisers",
      "cookies and device identifiers help us remember you",
      "you can withdraw consent at any time in the settings",
      "data retention lasts only as long as necessary",
      "this privacy policy applies to every feature of the service",
      "third parties receive aggregated data under this privacy policy",
  };
  return pool;
}

inline const std::vector<std::string>& other_sentences() {
  static const std::vector<std::string> pool = {
      "tap the screen to jump over the obstacles",
      "collect coins to unlock new levels",
      "mix the flour and sugar in a large bowl",
      "bake for twenty minutes until golden",
      "the home team won the match last night",
      "press start to begin a new game",
      "swipe left to browse the photo gallery",
      "the weather tomorrow will be mostly sunny",
      "your high score is saved on the leaderboard",
      "share your results with friends online",
      "water the plants twice a week in summer",
      "the train to the city leaves every morning",
  };
  return pool;
}

inline std::string sample_doc(const std::vector<std::string>& pool, Rng& rng,
                              std::size_t min_sentences = 4,
                              std::size_t extra = 5) {
  std::size_t n = min_sentences + rng.next_below(extra);
  std::string doc;
  for (std::size_t i = 0; i < n; ++i) {
    if (!doc.empty()) doc += ". ";
    doc += pool[rng.next_below(pool.size())];
  }
  return doc + ".";
}

}  // namespace gen

// Policy vs non-policy documents for the detector task.
inline LabeledCorpus generate_detector_corpus(std::uint64_t seed,
                                              std::size_t n_per_class) {
  Rng rng(seed);
  LabeledCorpus corpus;
  for (std::size_t i = 0; i < n_per_class; ++i) {
    corpus.push_back({gen::sample_doc(gen::policy_sentences(), rng), 1});
    corpus.push_back({gen::sample_doc(gen::other_sentences(), rng), 0});
  }
  return corpus;
}

// Sentence-level corpus for one CR task. For PSI tasks positives mention the
// task's data keywords; for the auxiliary tasks positives are affirmative /
// third-party-attributed sentences.
inline LabeledCorpus generate_cr_corpus(const std::string& task,
                                        const KeywordLexicon& lex,
                                        std::uint64_t seed,
                                        std::size_t n_per_class) {
  Rng rng(seed);
  LabeledCorpus corpus;

  std::vector<std::string> subjects = {"we", "our app", "the service"};
  std::vector<std::string> actions = {"collect", "use", "share", "store"};
  std::vector<std::string> negations = {"do not", "will never", "wont"};
  std::vector<std::string> tp_subjects = {
      "our partners", "third parties", "advertisers", "analytics providers"};

  auto keyword_of = [&](PsiKind psi) {
    const auto& kws = lex.per_psi.at(psi).data_keywords;
    return kws[rng.next_below(kws.size())];
  };
  auto any_psi = [&]() {
    auto kinds = all_psi_kinds();
    return kinds[rng.next_below(kinds.size())];
  };
  auto first_party = [&](const std::string& kw) {
    return subjects[rng.next_below(subjects.size())] + " " +
           actions[rng.next_below(actions.size())] + " your " + kw;
  };
  auto negated = [&](const std::string& kw) {
    return subjects[rng.next_below(subjects.size())] + " " +
           negations[rng.next_below(negations.size())] + " " +
           actions[rng.next_below(actions.size())] + " your " + kw;
  };
  auto third_party = [&](const std::string& kw) {
    return tp_subjects[rng.next_below(tp_subjects.size())] + " " +
           actions[rng.next_below(actions.size())] + " your " + kw;
  };

  if (task == "performed_not_performed") {
    for (std::size_t i = 0; i < n_per_class; ++i) {
      corpus.push_back({first_party(keyword_of(any_psi())), 1});
      corpus.push_back({negated(keyword_of(any_psi())), 0});
    }
    return corpus;
  }
  if (task == "third_party_first_party") {
    for (std::size_t i = 0; i < n_per_class; ++i) {
      corpus.push_back({third_party(keyword_of(any_psi())), 1});
      corpus.push_back({first_party(keyword_of(any_psi())), 0});
    }
    return corpus;
  }
  auto psi = psi_from_name(task);
  if (!psi) throw Error(ErrorCode::BadConfig, "unknown CR task '" + task + "'");
  // Negatives come from a small fixed set of other PSI kinds, so the
  // negative class's vocabulary stays as concentrated as the positive
  // class's and shared filler tokens carry no class signal.
  std::vector<PsiKind> off_topic;
  {
    auto kinds = all_psi_kinds();
    std::size_t at = 0;
    while (kinds[at] != *psi) ++at;
    for (std::size_t j = 1; off_topic.size() < 3; ++j) {
      off_topic.push_back(kinds[(at + j * 7) % kinds.size()]);
    }
  }
  for (std::size_t i = 0; i < n_per_class; ++i) {
    corpus.push_back({first_party(keyword_of(*psi)), 1});
    if (rng.next_below(4) == 0) {
      corpus.push_back(
          {gen::other_sentences()[rng.next_below(
               gen::other_sentences().size())],
           0});
    } else {
      corpus.push_back(
          {first_party(keyword_of(off_topic[rng.next_below(3)])), 0});
    }
  }
  return corpus;
}

// Writes detector.json plus all 29 CR task corpora into out_dir.
inline void generate_all_corpora(const KeywordLexicon& lex, std::uint64_t seed,
                                 const std::filesystem::path& out_dir,
                                 std::size_t detector_per_class = 300,
                                 std::size_t cr_per_class = 100) {
  std::filesystem::create_directories(out_dir);
  save_corpus("detector", generate_detector_corpus(seed, detector_per_class),
              (out_dir / "detector.json").string());
  std::uint64_t task_seed = seed;
  for (const std::string& task : cr_task_names()) {
    ++task_seed;
    save_corpus(task, generate_cr_corpus(task, lex, task_seed, cr_per_class),
                (out_dir / (task + ".json")).string());
  }
}

}  // namespace ppcheck

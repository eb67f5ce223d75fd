#pragma once

#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppcheck/errors.hpp"
#include "ppcheck/psi.hpp"
#include "ppcheck/text/model_io.hpp"
#include "ppcheck/text/preprocess.hpp"

namespace ppcheck {

struct PsiKeywords {
  std::vector<std::string> data_keywords;    // topic filter
  std::vector<std::string> action_keywords;  // practice filter
};

// Per-PSI keyword sets plus the auxiliary lists driving the rule-based
// (oracle) classifiers, and the model-substitution table mapping each CR
// task onto an implemented classifier kind.
struct KeywordLexicon {
  std::string version;
  std::map<PsiKind, PsiKeywords> per_psi;
  std::vector<std::string> negation_keywords;
  std::vector<std::string> third_party_keywords;
  std::map<std::string, std::string> model_substitution;  // task -> kind
};

// token-boundary containment of a (possibly multiword) keyword
inline bool contains_keyword(const std::string& preprocessed,
                             const std::string& keyword) {
  std::string padded = " " + preprocessed + " ";
  std::string needle = " " + keyword + " ";
  return padded.find(needle) != std::string::npos;
}

inline bool contains_any_keyword(const std::string& preprocessed,
                                 const std::vector<std::string>& keywords) {
  for (const auto& kw : keywords) {
    if (contains_keyword(preprocessed, kw)) return true;
  }
  return false;
}

inline std::vector<std::string> filter_sentences(
    const std::vector<std::string>& sentences, PsiKind psi,
    const KeywordLexicon& lex) {
  std::vector<std::string> out;
  const auto& keywords = lex.per_psi.at(psi).data_keywords;
  for (const auto& s : sentences) {
    if (contains_any_keyword(preprocess(s), keywords)) out.push_back(s);
  }
  return out;
}

struct DisclosureLabels {
  bool mentions = false;
  bool affirmative = false;
  bool third_party = false;

  bool operator==(const DisclosureLabels&) const = default;
};

// Sentence-level classifier triple behind the CR check: per-PSI mention,
// affirmative-vs-negated, and third-party attribution.
class CrModelSet {
 public:
  virtual ~CrModelSet() = default;
  virtual bool mentions(const std::string& sentence, PsiKind psi) const = 0;
  virtual bool affirmative(const std::string& sentence) const = 0;
  virtual bool third_party(const std::string& sentence) const = 0;
};

// Rule-based matcher for oracle mode and ground-truth generation.
class OracleCrModels : public CrModelSet {
 public:
  explicit OracleCrModels(const KeywordLexicon& lex) : lex_(&lex) {}

  bool mentions(const std::string& sentence, PsiKind psi) const override {
    return contains_any_keyword(preprocess(sentence),
                                lex_->per_psi.at(psi).data_keywords);
  }
  bool affirmative(const std::string& sentence) const override {
    return !contains_any_keyword(preprocess(sentence), lex_->negation_keywords);
  }
  bool third_party(const std::string& sentence) const override {
    return contains_any_keyword(preprocess(sentence),
                                lex_->third_party_keywords);
  }

 private:
  const KeywordLexicon* lex_;
};

// Trained per-task models (27 PSI tasks + performed_not_performed +
// third_party_first_party), each thresholded at its own clf.threshold.
class LearnedCrModels : public CrModelSet {
 public:
  LearnedCrModels(std::map<PsiKind, TextModel> psi_models,
                  TextModel performed, TextModel third_party)
      : psi_models_(std::move(psi_models)),
        performed_(std::move(performed)),
        third_party_(std::move(third_party)) {}

  bool mentions(const std::string& sentence, PsiKind psi) const override {
    auto it = psi_models_.find(psi);
    if (it == psi_models_.end()) {
      throw Error(ErrorCode::UntrainedModel,
                  std::string(psi_name(psi)) + " model missing");
    }
    return it->second.positive(sentence);
  }
  bool affirmative(const std::string& sentence) const override {
    return performed_.positive(sentence);
  }
  bool third_party(const std::string& sentence) const override {
    return third_party_.positive(sentence);
  }

 private:
  std::map<PsiKind, TextModel> psi_models_;
  TextModel performed_;
  TextModel third_party_;
};

// Keyword pre-filter gates the models: a sentence without any data keyword
// for `psi` is (false, false, false) and never reaches the classifiers.
inline DisclosureLabels classify_disclosure(const std::string& sentence,
                                            PsiKind psi,
                                            const CrModelSet& models,
                                            const KeywordLexicon& lex) {
  if (!contains_any_keyword(preprocess(sentence),
                            lex.per_psi.at(psi).data_keywords)) {
    return {};
  }
  DisclosureLabels out;
  out.mentions = models.mentions(sentence, psi);
  out.affirmative = models.affirmative(sentence);
  out.third_party = models.third_party(sentence);
  return out;
}

struct SentenceEvidence {
  std::string sentence;
  PsiKind psi;
  DisclosureLabels labels;

  bool operator==(const SentenceEvidence&) const = default;
};

struct CrVerdict {
  bool psi_ok = true;
  bool third_party_ok = true;
  std::set<PsiKind> missing_psi;
  std::set<PsiKind> missing_third_party;
  std::vector<SentenceEvidence> evidence;
};

// CR1: every required PSI must be disclosed affirmatively in some sentence;
// coarse family disclosure covers its fine members; PSI touched by
// third-party libraries additionally needs a third-party-attributing
// disclosing sentence.
inline CrVerdict check_cr1(const std::string& policy_text,
                           const std::set<PsiKind>& required_psi,
                           const std::set<PsiKind>& third_party_psi,
                           const CrModelSet& models,
                           const KeywordLexicon& lex) {
  CrVerdict verdict;
  std::vector<std::string> sentences = split_sentences(policy_text);

  std::set<PsiKind> tasks = required_psi;
  for (PsiKind k : required_psi) tasks.insert(coarse_member(psi_family(k)));

  std::set<PsiKind> disclosed, disclosed_third_party;
  for (PsiKind psi : tasks) {
    for (const auto& s : sentences) {
      DisclosureLabels labels = classify_disclosure(s, psi, models, lex);
      if (!labels.mentions) continue;
      verdict.evidence.push_back({s, psi, labels});
      if (labels.affirmative) {
        disclosed.insert(psi);
        if (labels.third_party) disclosed_third_party.insert(psi);
      }
    }
  }

  auto covered = [](const std::set<PsiKind>& got, PsiKind k) {
    return got.contains(k) || got.contains(coarse_member(psi_family(k)));
  };
  for (PsiKind k : required_psi) {
    if (!covered(disclosed, k)) verdict.missing_psi.insert(k);
  }
  for (PsiKind k : third_party_psi) {
    if (!covered(disclosed_third_party, k)) {
      verdict.missing_third_party.insert(k);
    }
  }
  verdict.psi_ok = verdict.missing_psi.empty();
  verdict.third_party_ok = verdict.missing_third_party.empty();
  return verdict;
}

inline nlohmann::json lexicon_to_json(const KeywordLexicon& lex) {
  nlohmann::json doc;
  doc["version"] = lex.version;
  auto& per_psi = doc["psi"] = nlohmann::json::object();
  for (const auto& [psi, keywords] : lex.per_psi) {
    per_psi[std::string(psi_name(psi))] = {
        {"data_keywords", keywords.data_keywords},
        {"action_keywords", keywords.action_keywords},
    };
  }
  doc["negation_keywords"] = lex.negation_keywords;
  doc["third_party_keywords"] = lex.third_party_keywords;
  doc["model_substitution"] = lex.model_substitution;
  return doc;
}

inline KeywordLexicon lexicon_from_json(const nlohmann::json& doc) {
  KeywordLexicon lex;
  try {
    lex.version = doc.at("version").get<std::string>();
    for (auto it = doc.at("psi").begin(); it != doc.at("psi").end(); ++it) {
      auto psi = psi_from_name(it.key());
      if (!psi) {
        throw Error(ErrorCode::MalformedMapping,
                    "lexicon: unknown PSI '" + it.key() + "'");
      }
      PsiKeywords kw;
      kw.data_keywords =
          it.value().at("data_keywords").get<std::vector<std::string>>();
      kw.action_keywords =
          it.value().at("action_keywords").get<std::vector<std::string>>();
      if (kw.data_keywords.empty()) {
        throw Error(ErrorCode::MalformedMapping,
                    "lexicon: no data keywords for " + it.key());
      }
      lex.per_psi.emplace(*psi, std::move(kw));
    }
    lex.negation_keywords =
        doc.at("negation_keywords").get<std::vector<std::string>>();
    lex.third_party_keywords =
        doc.at("third_party_keywords").get<std::vector<std::string>>();
    if (doc.contains("model_substitution")) {
      lex.model_substitution =
          doc.at("model_substitution")
              .get<std::map<std::string, std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedMapping,
                std::string("lexicon: ") + e.what());
  }
  for (PsiKind k : all_psi_kinds()) {
    if (!lex.per_psi.contains(k)) {
      throw Error(ErrorCode::MalformedMapping,
                  "lexicon: missing PSI " + std::string(psi_name(k)));
    }
  }
  return lex;
}

inline KeywordLexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedMapping, path + ": " + e.what());
  }
  return lexicon_from_json(doc);
}

inline void save_lexicon(const KeywordLexicon& lex, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::MissingFile, path);
  out << lexicon_to_json(lex).dump(2) << "\n";
}

}  // namespace ppcheck

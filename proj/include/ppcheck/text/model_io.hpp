#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "ppcheck/errors.hpp"
#include "ppcheck/text/classifiers.hpp"
#include "ppcheck/text/features.hpp"

namespace ppcheck {

inline constexpr int kModelFormatVersion = 1;

// A trained text model: vectorizer plus classifier, scoring raw text.
struct TextModel {
  std::string task;
  TfIdfModel tfidf;
  Classifier clf;

  double score(const std::string& raw_text) const {
    return predict_proba(clf, tfidf.transform(raw_text));
  }

  bool positive(const std::string& raw_text) const {
    return score(raw_text) >= clf.threshold;
  }

  bool operator==(const TextModel&) const = default;
};

inline nlohmann::json model_to_json(const TextModel& m) {
  nlohmann::json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["task"] = m.task;
  doc["vocabulary"] = m.tfidf.vocabulary;
  doc["idf"] = m.tfidf.idf;
  doc["selected"] = m.tfidf.selected;
  doc["kind"] = classifier_kind_name(m.clf.kind);
  doc["threshold"] = m.clf.threshold;
  auto& params = doc["params"] = nlohmann::json::object();
  switch (m.clf.kind) {
    case ClassifierKind::mnb: {
      const auto& p = std::get<MnbParams>(m.clf.params);
      params["class_log_prior"] = {p.class_log_prior[0], p.class_log_prior[1]};
      params["feature_log_prob_0"] = p.feature_log_prob[0];
      params["feature_log_prob_1"] = p.feature_log_prob[1];
      break;
    }
    case ClassifierKind::logreg: {
      const auto& p = std::get<LogRegParams>(m.clf.params);
      params["weights"] = p.weights;
      params["bias"] = p.bias;
      break;
    }
    case ClassifierKind::mlp: {
      const auto& p = std::get<MlpParams>(m.clf.params);
      params["sizes"] = p.sizes;
      params["weights"] = p.weights;
      params["biases"] = p.biases;
      break;
    }
  }
  return doc;
}

inline TextModel model_from_json(const nlohmann::json& doc) {
  TextModel m;
  try {
    if (doc.at("format_version").get<int>() != kModelFormatVersion) {
      throw Error(ErrorCode::MalformedModel, "unsupported format version");
    }
    m.task = doc.at("task").get<std::string>();
    m.tfidf.vocabulary = doc.at("vocabulary").get<std::vector<std::string>>();
    m.tfidf.idf = doc.at("idf").get<std::vector<double>>();
    m.tfidf.selected = doc.at("selected").get<std::vector<std::size_t>>();
    m.clf.kind = classifier_kind_from_name(doc.at("kind").get<std::string>());
    m.clf.threshold = doc.at("threshold").get<double>();
    const auto& params = doc.at("params");
    switch (m.clf.kind) {
      case ClassifierKind::mnb: {
        MnbParams p;
        p.class_log_prior[0] = params.at("class_log_prior").at(0).get<double>();
        p.class_log_prior[1] = params.at("class_log_prior").at(1).get<double>();
        p.feature_log_prob[0] =
            params.at("feature_log_prob_0").get<std::vector<double>>();
        p.feature_log_prob[1] =
            params.at("feature_log_prob_1").get<std::vector<double>>();
        m.clf.params = std::move(p);
        break;
      }
      case ClassifierKind::logreg: {
        LogRegParams p;
        p.weights = params.at("weights").get<std::vector<double>>();
        p.bias = params.at("bias").get<double>();
        m.clf.params = std::move(p);
        break;
      }
      case ClassifierKind::mlp: {
        MlpParams p;
        p.sizes = params.at("sizes").get<std::vector<std::size_t>>();
        p.weights = params.at("weights").get<std::vector<std::vector<double>>>();
        p.biases = params.at("biases").get<std::vector<std::vector<double>>>();
        m.clf.params = std::move(p);
        break;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedModel, e.what());
  }
  return m;
}

inline void save_model(const TextModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::MissingFile, path);
  out << model_to_json(m).dump(2) << "\n";
}

inline TextModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedModel, path + ": " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace ppcheck

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ppcheck/device.hpp"
#include "ppcheck/package.hpp"
#include "ppcheck/text/model_io.hpp"
#include "ppcheck/text/preprocess.hpp"

namespace ppcheck {

inline constexpr int kDefaultMaxActions = 20;
inline constexpr double kDetectorThreshold = 0.90;

inline constexpr std::array<std::string_view, 5> kAcceptanceLexicon = {
    "accept", "agree", "i agree", "consent", "ok",
};

inline bool matches_acceptance_lexicon(const std::string& widget_text) {
  std::string text = to_lower(widget_text);
  for (std::string_view kw : kAcceptanceLexicon) {
    if (text.find(kw) != std::string::npos) return true;
  }
  return false;
}

// Scores a page's extracted text as policy / not-policy.
class PolicyScorer {
 public:
  virtual ~PolicyScorer() = default;
  virtual double score(const std::string& raw_text) const = 0;
  virtual double threshold() const = 0;
};

class ModelPolicyScorer : public PolicyScorer {
 public:
  explicit ModelPolicyScorer(const TextModel& model) : model_(&model) {}
  double score(const std::string& raw_text) const override {
    return model_->score(raw_text);
  }
  double threshold() const override { return model_->clf.threshold; }

 private:
  const TextModel* model_;
};

// Exact marker-string matcher used in oracle mode.
class OraclePolicyScorer : public PolicyScorer {
 public:
  explicit OraclePolicyScorer(std::string marker = "privacy policy")
      : marker_(preprocess(marker)) {}
  double score(const std::string& raw_text) const override {
    return preprocess(raw_text).find(marker_) != std::string::npos ? 1.0 : 0.0;
  }
  double threshold() const override { return kDetectorThreshold; }

 private:
  std::string marker_;
};

struct DetectionResult {
  std::string policy_text;
  UiNode policy_xml;
  std::vector<Action> actions;  // path from launch
  double score = 0.0;
};

struct DetectOutcome {
  std::optional<DetectionResult> found;  // empty means Fail_TR1_TR2
  std::size_t actions_performed = 0;
};

namespace detail {

// enumerate_actions order, with acceptance-looking taps moved behind the
// other priority taps so exploration never consumes an accept widget first.
inline std::vector<Action> exploration_order(const DeviceSession& session) {
  std::map<std::string, std::string> widget_text;
  auto visit = [&](auto&& self, const UiNode& n) -> void {
    if (n.action_id && !widget_text.contains(*n.action_id)) {
      widget_text[*n.action_id] = n.text;
    }
    for (const auto& c : n.children) self(self, c);
  };
  visit(visit, session.current_page());

  std::vector<Action> ordered = session.enumerate_actions();
  std::stable_sort(ordered.begin(), ordered.end(),
                   [&](const Action& a, const Action& b) {
                     auto accepts = [&](const Action& act) {
                       return act.kind == Action::Kind::tap &&
                              matches_acceptance_lexicon(
                                  widget_text[act.action_id]);
                     };
                     return !accepts(a) && accepts(b);
                   });
  return ordered;
}

inline std::string action_key(const std::string& screen, const Action& a) {
  return a.kind == Action::Kind::swipe ? screen + "\x1f<swipe>"
                                       : screen + "\x1f" + a.action_id;
}

}  // namespace detail

// Bounded exploration for the in-app policy page: classify the current
// screen, otherwise take the next untried action in priority order, up to
// `max_actions` inputs. Empty screens are negative without scoring.
inline DetectOutcome detect(DeviceSession& session, const PolicyScorer& scorer,
                            std::size_t max_actions = kDefaultMaxActions) {
  DetectOutcome out;
  std::set<std::string> tried;
  std::vector<Action> path;
  for (;;) {
    const UiNode& page = session.current_page();
    std::string text = extract_text(page);
    if (!preprocess(text).empty()) {
      double s = scorer.score(text);
      if (s >= scorer.threshold()) {
        out.found = DetectionResult{text, page, path, s};
        return out;
      }
    }
    if (out.actions_performed >= max_actions) return out;
    std::optional<Action> next;
    for (const Action& a : detail::exploration_order(session)) {
      if (tried.insert(detail::action_key(session.current_screen_id(), a))
              .second) {
        next = a;
        break;
      }
    }
    if (!next) return out;  // exploration exhausted below the action budget
    session.perform(*next);
    path.push_back(*next);
    ++out.actions_performed;
  }
}

}  // namespace ppcheck

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppcheck/detector.hpp"
#include "ppcheck/device.hpp"

namespace ppcheck {

inline constexpr int kDefaultTr6TimeoutSeconds = 10;

enum class TrValue { Pass, Fail_TR3, Fail_TR6, Fail_TR5, Fail_TR4 };

inline const char* tr_value_name(TrValue v) {
  switch (v) {
    case TrValue::Pass: return "Pass";
    case TrValue::Fail_TR3: return "Fail_TR3";
    case TrValue::Fail_TR6: return "Fail_TR6";
    case TrValue::Fail_TR5: return "Fail_TR5";
    case TrValue::Fail_TR4: return "Fail_TR4";
  }
  return "";
}

struct TrVerdict {
  TrValue value = TrValue::Pass;
  std::string evidence;  // non-empty for every failure
};

// First Button/CheckBox in document order that is clickable and carries an
// acceptance word.
inline const UiNode* contains_explicit_accept(const UiNode& root) {
  if ((root.widget_class == "Button" || root.widget_class == "CheckBox") &&
      root.clickable && matches_acceptance_lexicon(root.text)) {
    return &root;
  }
  for (const auto& c : root.children) {
    if (const UiNode* hit = contains_explicit_accept(c)) return hit;
  }
  return nullptr;
}

// TR3 (explicit accept widget), TR6 (no expiry within the timeout), TR5
// (home/back must not count as acceptance), evaluated strictly in that
// order. The accept widget itself is never tapped here.
inline TrVerdict test_technical_requirements(
    DeviceSession& session, const DetectionResult& det,
    int timeout_seconds = kDefaultTr6TimeoutSeconds) {
  const UiNode* accept = contains_explicit_accept(det.policy_xml);
  if (accept == nullptr) {
    return {TrValue::Fail_TR3, "no clickable acceptance widget on the policy page"};
  }

  session.perform(Action::wait(timeout_seconds));
  if (session.off_screen() || !(session.current_page() == det.policy_xml)) {
    return {TrValue::Fail_TR6,
            "policy page expired within " + std::to_string(timeout_seconds) +
                " s (now on '" + session.current_screen_id() + "')"};
  }

  session.perform(Action::home());
  session.perform(Action::relaunch());
  if (session.off_screen() || !(session.current_page() == det.policy_xml)) {
    return {TrValue::Fail_TR5,
            "home + relaunch resumed on '" + session.current_screen_id() +
                "' instead of the policy page"};
  }

  session.perform(Action::back());
  session.perform(Action::relaunch());
  for (const Action& a : det.actions) session.perform(a);
  if (session.off_screen() || !(session.current_page() == det.policy_xml)) {
    return {TrValue::Fail_TR5,
            "back + relaunch + replay resumed on '" +
                session.current_screen_id() + "' instead of the policy page"};
  }

  return {TrValue::Pass, ""};
}

// TR4: no monitored API event strictly before acceptance. Events emitted by
// the accept tap itself (seq == acceptance_seq) count as post-acceptance.
inline TrVerdict check_tr4(const std::vector<ApiEvent>& events,
                           std::optional<long> acceptance_seq) {
  std::string offending;
  for (const auto& e : events) {
    if (!acceptance_seq || e.seq < *acceptance_seq) {
      if (!offending.empty()) offending += ", ";
      offending += e.api_method + "@" + std::to_string(e.sim_time) + "s";
    }
  }
  if (offending.empty()) return {TrValue::Pass, ""};
  return {TrValue::Fail_TR4, "PSI collected before acceptance: " + offending};
}

}  // namespace ppcheck

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ppcheck/analyzer.hpp"
#include "ppcheck/errors.hpp"
#include "ppcheck/package.hpp"

namespace ppcheck {

struct Action {
  enum class Kind { tap, swipe, back, home, relaunch, wait };

  Kind kind = Kind::tap;
  std::string action_id;  // tap only
  int seconds = 0;        // wait only

  static Action tap(std::string id) {
    return {Kind::tap, std::move(id), 0};
  }
  static Action swipe() { return {Kind::swipe, {}, 0}; }
  static Action back() { return {Kind::back, {}, 0}; }
  static Action home() { return {Kind::home, {}, 0}; }
  static Action relaunch() { return {Kind::relaunch, {}, 0}; }
  static Action wait(int seconds) { return {Kind::wait, {}, seconds}; }

  bool operator==(const Action&) const = default;
};

struct ApiEvent {
  std::string api_method;
  PsiKind psi;
  long sim_time = 0;
  long seq = 0;

  bool operator==(const ApiEvent&) const = default;
};

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

// Exploration ordering heuristic, not a compliance signal.
inline constexpr std::array<std::string_view, 9> kNavigationKeywords = {
    "privacy", "policy", "terms", "continue", "next",
    "start",   "ok",     "accept", "agree",
};

// Deterministic virtual device. Executes the package's behavior script:
// taps follow transitions, waits advance the simulated clock and may fire
// the current screen's timer, home/back background the app, relaunch resumes
// per the script. Every API event named in `monitored` is logged in order.
class DeviceSession {
 public:
  DeviceSession(const AppPackage& pkg, const StaticAnalysis& analysis)
      : pkg_(&pkg) {
    for (const auto& [src, api, psi] : analysis.monitored_apis) {
      monitored_.emplace(api, psi);
    }
    current_ = pkg.behavior.initial_screen;
    entered_at_ = 0;
    log_events(pkg.behavior.launch_events);
  }

  bool off_screen() const { return off_screen_; }
  const std::string& current_screen_id() const { return current_; }
  long clock() const { return clock_; }
  const std::vector<ApiEvent>& events() const { return events_; }
  const std::vector<Action>& history() const { return history_; }
  long next_seq() const { return next_seq_; }

  const UiNode& current_page() const {
    if (off_screen_) {
      throw Error(ErrorCode::OffScreen, "app is backgrounded");
    }
    return pkg_->screens.at(current_).root;
  }

  // Priority taps (navigation keyword in the widget text, document order),
  // then remaining actionable taps, then swipe. Duplicate action ids dropped.
  std::vector<Action> enumerate_actions() const {
    const UiNode& root = current_page();
    std::vector<std::pair<bool, std::string>> found;  // (priority, action_id)
    std::set<std::string> seen;
    auto visit = [&](auto&& self, const UiNode& n) -> void {
      if (n.clickable && n.action_id && seen.insert(*n.action_id).second) {
        std::string text = to_lower(n.text);
        bool priority = std::any_of(
            kNavigationKeywords.begin(), kNavigationKeywords.end(),
            [&](std::string_view kw) { return text.find(kw) != std::string::npos; });
        found.emplace_back(priority, *n.action_id);
      }
      for (const auto& c : n.children) self(self, c);
    };
    visit(visit, root);
    std::vector<Action> out;
    for (const auto& [priority, id] : found) {
      if (priority) out.push_back(Action::tap(id));
    }
    for (const auto& [priority, id] : found) {
      if (!priority) out.push_back(Action::tap(id));
    }
    if (pkg_->behavior.swipe_next.contains(current_)) {
      out.push_back(Action::swipe());
    }
    return out;
  }

  // Undefined gestures are no-ops; perform never throws.
  void perform(const Action& a) {
    history_.push_back(a);
    switch (a.kind) {
      case Action::Kind::tap: {
        if (off_screen_) return;
        auto it = pkg_->behavior.transitions.find({current_, a.action_id});
        if (it == pkg_->behavior.transitions.end()) return;
        enter(it->second.next_screen);
        log_events(it->second.api_events);
        return;
      }
      case Action::Kind::swipe: {
        if (off_screen_) return;
        auto it = pkg_->behavior.swipe_next.find(current_);
        if (it == pkg_->behavior.swipe_next.end()) return;
        enter(it->second);
        return;
      }
      case Action::Kind::home:
      case Action::Kind::back: {
        if (off_screen_) return;
        off_screen_ = true;
        left_via_home_ = a.kind == Action::Kind::home;
        return;
      }
      case Action::Kind::relaunch: {
        if (!off_screen_) return;
        const auto& resume = left_via_home_ ? pkg_->behavior.resume_after_home
                                            : pkg_->behavior.resume_after_back;
        auto it = resume.find(current_);
        off_screen_ = false;
        enter(it != resume.end() ? it->second : pkg_->behavior.initial_screen);
        return;
      }
      case Action::Kind::wait: {
        if (a.seconds <= 0) return;
        long fire_at = -1;
        if (!off_screen_) {
          auto it = pkg_->behavior.timers.find(current_);
          if (it != pkg_->behavior.timers.end()) {
            long deadline = entered_at_ + it->second.after_seconds;
            if (deadline <= clock_ + a.seconds) fire_at = deadline;
          }
        }
        std::string timer_target;
        if (fire_at >= 0) {
          timer_target = pkg_->behavior.timers.at(current_).next_screen;
        }
        clock_ += a.seconds;
        if (fire_at >= 0) {
          long saved = clock_;
          clock_ = std::max(fire_at, entered_at_);
          enter(timer_target);
          clock_ = saved;
        }
        return;
      }
    }
  }

 private:
  void enter(const std::string& screen_id) {
    current_ = screen_id;
    entered_at_ = clock_;
  }

  void log_events(const std::vector<std::string>& api_methods) {
    for (const auto& api : api_methods) {
      auto it = monitored_.find(api);
      if (it == monitored_.end()) continue;
      events_.push_back({api, it->second, clock_, next_seq_++});
    }
  }

  const AppPackage* pkg_;
  std::map<std::string, PsiKind> monitored_;
  std::string current_;
  bool off_screen_ = false;
  bool left_via_home_ = false;
  long clock_ = 0;
  long entered_at_ = 0;
  long next_seq_ = 0;
  std::vector<ApiEvent> events_;
  std::vector<Action> history_;
};

}  // namespace ppcheck

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppcheck/errors.hpp"
#include "ppcheck/xml.hpp"

namespace ppcheck {

struct Manifest {
  std::string package_id;
  std::vector<std::string> permissions;  // declaration order, no duplicates

  bool operator==(const Manifest&) const = default;
};

struct UiNode {
  std::string widget_class;
  std::string text;
  bool clickable = false;
  std::optional<std::string> action_id;
  std::vector<UiNode> children;

  bool operator==(const UiNode&) const = default;
};

struct Screen {
  std::string screen_id;
  UiNode root;

  bool operator==(const Screen&) const = default;
};

struct Transition {
  std::string next_screen;
  std::vector<std::string> api_events;

  bool operator==(const Transition&) const = default;
};

struct ScreenTimer {
  int after_seconds = 0;
  std::string next_screen;

  bool operator==(const ScreenTimer&) const = default;
};

struct BehaviorScript {
  std::string initial_screen;
  std::vector<std::string> launch_events;
  std::map<std::pair<std::string, std::string>, Transition> transitions;
  std::map<std::string, ScreenTimer> timers;
  std::map<std::string, std::string> resume_after_home;
  std::map<std::string, std::string> resume_after_back;
  std::map<std::string, std::string> swipe_next;

  bool operator==(const BehaviorScript&) const = default;
};

struct AppPackage {
  Manifest manifest;
  std::set<std::string> libraries;
  std::map<std::string, Screen> screens;
  BehaviorScript behavior;

  bool operator==(const AppPackage&) const = default;
};

// Pre-order concatenation of non-empty node texts, single-space separated.
inline std::string extract_text(const UiNode& root) {
  std::string out;
  auto visit = [&](auto&& self, const UiNode& n) -> void {
    if (!n.text.empty()) {
      if (!out.empty()) out += ' ';
      out += n.text;
    }
    for (const auto& c : n.children) self(self, c);
  };
  visit(visit, root);
  return out;
}

inline Manifest parse_manifest_xml(std::string_view bytes) {
  XmlElement root = parse_xml(bytes);
  if (root.name != "manifest") {
    throw Error(ErrorCode::MalformedXml, "root element must be <manifest>");
  }
  Manifest m;
  m.package_id = root.attr("package").value_or("");
  if (m.package_id.empty()) {
    throw Error(ErrorCode::MalformedXml, "manifest lacks a package id");
  }
  static constexpr std::string_view kPrefix = "android.permission.";
  std::set<std::string> seen;
  for (const auto& child : root.children) {
    if (child.name != "uses-permission") {
      throw Error(ErrorCode::MalformedXml,
                  "unexpected element <" + child.name + "> in manifest");
    }
    auto name = child.attr("android:name");
    if (!name) {
      throw Error(ErrorCode::MalformedXml,
                  "uses-permission lacks android:name");
    }
    std::string perm = *name;
    if (perm.starts_with(kPrefix)) perm = perm.substr(kPrefix.size());
    if (perm.empty()) {
      throw Error(ErrorCode::MalformedXml, "empty permission name");
    }
    if (!seen.insert(perm).second) {
      throw Error(ErrorCode::DuplicatePermission, perm);
    }
    m.permissions.push_back(perm);
  }
  return m;
}

inline UiNode ui_node_from_xml(const XmlElement& el) {
  if (el.name != "node") {
    throw Error(ErrorCode::MalformedXml,
                "screen elements must be <node>, got <" + el.name + ">");
  }
  UiNode n;
  n.widget_class = el.attr("class").value_or("");
  if (n.widget_class.empty()) {
    throw Error(ErrorCode::MalformedXml, "node lacks a class attribute");
  }
  n.text = el.attr("text").value_or("");
  auto clickable = el.attr("clickable").value_or("false");
  if (clickable != "true" && clickable != "false") {
    throw Error(ErrorCode::MalformedXml,
                "clickable must be 'true' or 'false'");
  }
  n.clickable = clickable == "true";
  if (auto action = el.attr("action")) {
    if (!n.clickable) {
      throw Error(ErrorCode::MalformedXml,
                  "action '" + *action + "' on a non-clickable node");
    }
    n.action_id = *action;
  }
  for (const auto& child : el.children) {
    n.children.push_back(ui_node_from_xml(child));
  }
  return n;
}

inline XmlElement ui_node_to_xml(const UiNode& n) {
  XmlElement el;
  el.name = "node";
  el.attributes.emplace_back("class", n.widget_class);
  if (!n.text.empty()) el.attributes.emplace_back("text", n.text);
  if (n.clickable) el.attributes.emplace_back("clickable", "true");
  if (n.action_id) el.attributes.emplace_back("action", *n.action_id);
  for (const auto& c : n.children) el.children.push_back(ui_node_to_xml(c));
  return el;
}

inline BehaviorScript behavior_from_json(const nlohmann::json& doc) {
  BehaviorScript b;
  try {
    b.initial_screen = doc.at("initial_screen").get<std::string>();
    if (doc.contains("launch_events")) {
      b.launch_events = doc.at("launch_events").get<std::vector<std::string>>();
    }
    if (doc.contains("transitions")) {
      for (const auto& t : doc.at("transitions")) {
        Transition tr;
        tr.next_screen = t.at("next").get<std::string>();
        if (t.contains("api_events")) {
          tr.api_events = t.at("api_events").get<std::vector<std::string>>();
        }
        auto key = std::pair(t.at("screen").get<std::string>(),
                             t.at("action").get<std::string>());
        if (b.transitions.contains(key)) {
          throw Error(ErrorCode::DuplicateKey,
                      "transition (" + key.first + ", " + key.second + ")");
        }
        b.transitions.emplace(std::move(key), std::move(tr));
      }
    }
    if (doc.contains("timers")) {
      for (auto it = doc.at("timers").begin(); it != doc.at("timers").end();
           ++it) {
        ScreenTimer timer;
        timer.after_seconds = it.value().at("after_seconds").get<int>();
        timer.next_screen = it.value().at("next").get<std::string>();
        if (timer.after_seconds <= 0) {
          throw Error(ErrorCode::MalformedXml,
                      "timer after_seconds must be positive: " + it.key());
        }
        b.timers.emplace(it.key(), std::move(timer));
      }
    }
    auto read_map = [&](const char* key, std::map<std::string, std::string>& m) {
      if (!doc.contains(key)) return;
      for (auto it = doc.at(key).begin(); it != doc.at(key).end(); ++it) {
        m.emplace(it.key(), it.value().get<std::string>());
      }
    };
    read_map("resume_after_home", b.resume_after_home);
    read_map("resume_after_back", b.resume_after_back);
    read_map("swipe_next", b.swipe_next);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedXml,
                std::string("behavior document: ") + e.what());
  }
  return b;
}

inline nlohmann::json behavior_to_json(const BehaviorScript& b) {
  nlohmann::json doc;
  doc["initial_screen"] = b.initial_screen;
  if (!b.launch_events.empty()) doc["launch_events"] = b.launch_events;
  auto transitions = nlohmann::json::array();
  for (const auto& [key, tr] : b.transitions) {
    nlohmann::json t;
    t["screen"] = key.first;
    t["action"] = key.second;
    t["next"] = tr.next_screen;
    if (!tr.api_events.empty()) t["api_events"] = tr.api_events;
    transitions.push_back(std::move(t));
  }
  doc["transitions"] = std::move(transitions);
  if (!b.timers.empty()) {
    auto& timers = doc["timers"] = nlohmann::json::object();
    for (const auto& [screen, timer] : b.timers) {
      timers[screen] = {{"after_seconds", timer.after_seconds},
                        {"next", timer.next_screen}};
    }
  }
  auto write_map = [&](const char* key,
                       const std::map<std::string, std::string>& m) {
    if (m.empty()) return;
    auto& obj = doc[key] = nlohmann::json::object();
    for (const auto& [k, v] : m) obj[k] = v;
  };
  write_map("resume_after_home", b.resume_after_home);
  write_map("resume_after_back", b.resume_after_back);
  write_map("swipe_next", b.swipe_next);
  return doc;
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

// Every screen_id referenced by the behavior script must exist.
inline void validate_package(const AppPackage& pkg) {
  auto require_screen = [&](const std::string& id) {
    if (!pkg.screens.contains(id)) {
      throw Error(ErrorCode::DanglingScreenRef, id);
    }
  };
  require_screen(pkg.behavior.initial_screen);
  for (const auto& [key, tr] : pkg.behavior.transitions) {
    require_screen(key.first);
    require_screen(tr.next_screen);
  }
  for (const auto& [screen, timer] : pkg.behavior.timers) {
    require_screen(screen);
    require_screen(timer.next_screen);
  }
  for (const auto* m : {&pkg.behavior.resume_after_home,
                        &pkg.behavior.resume_after_back,
                        &pkg.behavior.swipe_next}) {
    for (const auto& [from, to] : *m) {
      require_screen(from);
      require_screen(to);
    }
  }
}

inline AppPackage parse_package(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  AppPackage pkg;
  pkg.manifest = parse_manifest_xml(detail::read_file(dir / "manifest.xml"));

  std::istringstream libs(detail::read_file(dir / "libraries.txt"));
  for (std::string line; std::getline(libs, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) pkg.libraries.insert(line);
  }

  fs::path screens_dir = dir / "screens";
  if (!fs::is_directory(screens_dir)) {
    throw Error(ErrorCode::MissingFile, screens_dir.string());
  }
  std::vector<fs::path> screen_files;
  for (const auto& entry : fs::directory_iterator(screens_dir)) {
    if (entry.path().extension() == ".xml") screen_files.push_back(entry.path());
  }
  std::sort(screen_files.begin(), screen_files.end());
  for (const auto& file : screen_files) {
    Screen s;
    s.screen_id = file.stem().string();
    s.root = ui_node_from_xml(parse_xml(detail::read_file(file)));
    if (!pkg.screens.emplace(s.screen_id, s).second) {
      throw Error(ErrorCode::DuplicateScreen, s.screen_id);
    }
  }

  nlohmann::json behavior_doc;
  try {
    behavior_doc = nlohmann::json::parse(detail::read_file(dir / "behavior.json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedXml,
                std::string("behavior.json: ") + e.what());
  }
  pkg.behavior = behavior_from_json(behavior_doc);
  validate_package(pkg);
  return pkg;
}

inline void write_package(const AppPackage& pkg,
                          const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "screens");

  std::string manifest = "<manifest package=\"" +
                         xml_escape(pkg.manifest.package_id) + "\">\n";
  for (const auto& p : pkg.manifest.permissions) {
    manifest += "  <uses-permission android:name=\"android.permission." +
                xml_escape(p) + "\"/>\n";
  }
  manifest += "</manifest>\n";
  std::ofstream(dir / "manifest.xml") << manifest;

  std::ofstream libs(dir / "libraries.txt");
  for (const auto& l : pkg.libraries) libs << l << "\n";
  libs.close();

  for (const auto& [id, screen] : pkg.screens) {
    std::string xml;
    write_xml(ui_node_to_xml(screen.root), xml);
    std::ofstream(dir / "screens" / (id + ".xml")) << xml;
  }

  std::ofstream(dir / "behavior.json")
      << behavior_to_json(pkg.behavior).dump(2) << "\n";
}

}  // namespace ppcheck

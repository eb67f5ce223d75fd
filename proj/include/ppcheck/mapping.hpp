#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "ppcheck/errors.hpp"
#include "ppcheck/psi.hpp"

namespace ppcheck {

// One row of the permission table: a PSI label (either a canonical PsiKind
// name or a free-form label resolved through the store's alias table) and the
// API method gated by the permission.
struct MappingEntry {
  std::string psi_label;
  std::string api_method;
  PsiKind psi;  // resolved at load time

  bool operator==(const MappingEntry&) const = default;
};

struct PermissionMapping {
  std::string permission;
  std::vector<MappingEntry> entries;

  bool operator==(const PermissionMapping&) const = default;
};

struct LibraryMapping {
  std::string library;
  std::vector<MappingEntry> entries;

  bool operator==(const LibraryMapping&) const = default;
};

// (source permission-or-library name, api method, psi)
using ApiTriple = std::tuple<std::string, std::string, PsiKind>;

class MappingStore {
 public:
  MappingStore() = default;

  const std::map<std::string, PermissionMapping>& permissions() const {
    return permissions_;
  }
  const std::map<std::string, LibraryMapping>& libraries() const {
    return libraries_;
  }
  const std::map<std::string, std::string>& aliases() const {
    return aliases_;
  }

  void add_alias(const std::string& label, const std::string& psi_name) {
    if (!psi_from_name(psi_name)) {
      throw Error(ErrorCode::MalformedMapping,
                  "alias target is not a PSI name: " + psi_name);
    }
    aliases_[label] = psi_name;
  }

  void add_permission(PermissionMapping pm) {
    if (pm.permission.empty()) {
      throw Error(ErrorCode::MalformedMapping, "empty permission name");
    }
    if (pm.entries.empty()) {
      throw Error(ErrorCode::MalformedMapping,
                  "permission has no entries: " + pm.permission);
    }
    if (permissions_.contains(pm.permission)) {
      throw Error(ErrorCode::DuplicateKey, "permission: " + pm.permission);
    }
    resolve_entries(pm.entries, "permission " + pm.permission);
    permissions_.emplace(pm.permission, std::move(pm));
  }

  void add_library(LibraryMapping lm) {
    if (lm.library.empty()) {
      throw Error(ErrorCode::MalformedMapping, "empty library name");
    }
    if (lm.entries.empty()) {
      throw Error(ErrorCode::MalformedMapping,
                  "library has no entries: " + lm.library);
    }
    if (libraries_.contains(lm.library)) {
      throw Error(ErrorCode::DuplicateKey, "library: " + lm.library);
    }
    resolve_entries(lm.entries, "library " + lm.library);
    libraries_.emplace(lm.library, std::move(lm));
  }

  std::set<PsiKind> psi_for_permission(const std::string& permission) const {
    std::set<PsiKind> out;
    auto it = permissions_.find(permission);
    if (it == permissions_.end()) return out;
    for (const auto& e : it->second.entries) out.insert(e.psi);
    return out;
  }

  std::set<PsiKind> psi_for_library(const std::string& library) const {
    std::set<PsiKind> out;
    auto it = libraries_.find(library);
    if (it == libraries_.end()) return out;
    for (const auto& e : it->second.entries) out.insert(e.psi);
    return out;
  }

  std::set<ApiTriple> apis_for(const std::set<std::string>& permissions,
                               const std::set<std::string>& libraries) const {
    std::set<ApiTriple> out;
    for (const auto& p : permissions) {
      auto it = permissions_.find(p);
      if (it == permissions_.end()) continue;
      for (const auto& e : it->second.entries) {
        out.emplace(p, e.api_method, e.psi);
      }
    }
    for (const auto& l : libraries) {
      auto it = libraries_.find(l);
      if (it == libraries_.end()) continue;
      for (const auto& e : it->second.entries) {
        out.emplace(l, e.api_method, e.psi);
      }
    }
    return out;
  }

  bool operator==(const MappingStore&) const = default;

 private:
  void resolve_entries(std::vector<MappingEntry>& entries,
                       const std::string& context) {
    std::set<std::string> seen_api;
    for (auto& e : entries) {
      if (!seen_api.insert(e.api_method).second) {
        throw Error(ErrorCode::DuplicateKey,
                    context + ": repeated api method " + e.api_method);
      }
      if (auto k = psi_from_name(e.psi_label)) {
        e.psi = *k;
        continue;
      }
      auto a = aliases_.find(e.psi_label);
      if (a == aliases_.end()) {
        throw Error(ErrorCode::MalformedMapping,
                    context + ": unaliased PSI label '" + e.psi_label + "'");
      }
      e.psi = *psi_from_name(a->second);
    }
  }

  std::map<std::string, std::string> aliases_;
  std::map<std::string, PermissionMapping> permissions_;
  std::map<std::string, LibraryMapping> libraries_;
};

inline MappingStore mapping_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::MalformedMapping, "top level must be an object");
  }
  MappingStore store;
  if (doc.contains("aliases")) {
    const auto& aliases = doc.at("aliases");
    if (!aliases.is_object()) {
      throw Error(ErrorCode::MalformedMapping, "'aliases' must be an object");
    }
    for (auto it = aliases.begin(); it != aliases.end(); ++it) {
      if (!it.value().is_string()) {
        throw Error(ErrorCode::MalformedMapping,
                    "alias value must be a string: " + it.key());
      }
      store.add_alias(it.key(), it.value().get<std::string>());
    }
  }
  auto parse_entry = [](const nlohmann::json& row,
                        const std::string& ctx) -> MappingEntry {
    if (!row.is_object() || !row.contains("psi") || !row.contains("api") ||
        !row.at("psi").is_string() || !row.at("api").is_string()) {
      throw Error(ErrorCode::MalformedMapping,
                  ctx + ": entry must be an object with string 'psi'/'api'");
    }
    MappingEntry e;
    e.psi_label = row.at("psi").get<std::string>();
    e.api_method = row.at("api").get<std::string>();
    return e;
  };
  if (doc.contains("permissions")) {
    const auto& perms = doc.at("permissions");
    if (!perms.is_object()) {
      throw Error(ErrorCode::MalformedMapping, "'permissions' must be an object");
    }
    for (auto it = perms.begin(); it != perms.end(); ++it) {
      PermissionMapping pm;
      pm.permission = it.key();
      if (!it.value().is_array()) {
        throw Error(ErrorCode::MalformedMapping,
                    "permission value must be an array: " + it.key());
      }
      for (const auto& row : it.value()) {
        pm.entries.push_back(parse_entry(row, "permission " + it.key()));
      }
      store.add_permission(std::move(pm));
    }
  }
  if (doc.contains("libraries")) {
    const auto& libs = doc.at("libraries");
    if (!libs.is_object()) {
      throw Error(ErrorCode::MalformedMapping, "'libraries' must be an object");
    }
    for (auto it = libs.begin(); it != libs.end(); ++it) {
      LibraryMapping lm;
      lm.library = it.key();
      if (!it.value().is_array()) {
        throw Error(ErrorCode::MalformedMapping,
                    "library value must be an array: " + it.key());
      }
      for (const auto& row : it.value()) {
        lm.entries.push_back(parse_entry(row, "library " + it.key()));
      }
      store.add_library(std::move(lm));
    }
  }
  return store;
}

inline nlohmann::json mapping_to_json(const MappingStore& store) {
  nlohmann::json doc;
  doc["aliases"] = nlohmann::json::object();
  for (const auto& [label, target] : store.aliases()) {
    doc["aliases"][label] = target;
  }
  doc["permissions"] = nlohmann::json::object();
  for (const auto& [name, pm] : store.permissions()) {
    auto& arr = doc["permissions"][name] = nlohmann::json::array();
    for (const auto& e : pm.entries) {
      arr.push_back({{"psi", e.psi_label}, {"api", e.api_method}});
    }
  }
  doc["libraries"] = nlohmann::json::object();
  for (const auto& [name, lm] : store.libraries()) {
    auto& arr = doc["libraries"][name] = nlohmann::json::array();
    for (const auto& e : lm.entries) {
      arr.push_back({{"psi", e.psi_label}, {"api", e.api_method}});
    }
  }
  return doc;
}

inline MappingStore load_mapping(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedMapping, path + ": " + e.what());
  }
  return mapping_from_json(doc);
}

inline void save_mapping(const MappingStore& store, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::MissingFile, path);
  out << mapping_to_json(store).dump(2) << "\n";
}

}  // namespace ppcheck

#pragma once

#include <set>
#include <string>

#include "ppcheck/mapping.hpp"
#include "ppcheck/package.hpp"

namespace ppcheck {

// Static phase: the app's PSI surface derived from declared permissions and
// embedded libraries. `clean` apps have no PSI surface and skip the dynamic
// pipeline entirely.
struct StaticAnalysis {
  std::set<std::string> privacy_permissions;
  std::set<std::string> privacy_libraries;
  std::set<PsiKind> required_psi;
  std::set<PsiKind> third_party_psi;
  std::set<ApiTriple> monitored_apis;
  bool clean = false;
};

inline StaticAnalysis analyze(const AppPackage& pkg, const MappingStore& store) {
  StaticAnalysis out;
  for (const auto& perm : pkg.manifest.permissions) {
    auto psi = store.psi_for_permission(perm);
    if (psi.empty()) continue;
    out.privacy_permissions.insert(perm);
    out.required_psi.insert(psi.begin(), psi.end());
  }
  for (const auto& lib : pkg.libraries) {
    auto psi = store.psi_for_library(lib);
    if (psi.empty()) continue;
    out.privacy_libraries.insert(lib);
    out.required_psi.insert(psi.begin(), psi.end());
    // Library-touched PSI needs third-party attribution in the policy, even
    // when a permission touches the same PSI.
    out.third_party_psi.insert(psi.begin(), psi.end());
  }
  out.monitored_apis =
      store.apis_for(out.privacy_permissions, out.privacy_libraries);
  out.clean = out.required_psi.empty();
  return out;
}

}  // namespace ppcheck

#pragma once

#include "ppcheck/cr_checker.hpp"

namespace ppcheck {

// Shipped lexicon, seeded from the quoted location examples ("position",
// "gps" / "share", "partner") and extended per PSI. Keywords are stored in
// preprocessed form (lowercase, no punctuation).
inline KeywordLexicon default_lexicon() {
  KeywordLexicon lex;
  lex.version = "lexicon-1";

  auto add = [&](PsiKind psi, std::vector<std::string> data,
                 std::vector<std::string> action) {
    lex.per_psi[psi] = {std::move(data), std::move(action)};
  };

  std::vector<std::string> common_actions = {"collect", "use",   "share",
                                             "store",   "access", "process"};

  add(PsiKind::contact_address, {"postal address", "home address", "street address"}, common_actions);
  add(PsiKind::contact_city, {"city", "hometown"}, common_actions);
  add(PsiKind::contact_email_address, {"email", "email address"}, common_actions);
  add(PsiKind::contact_information, {"contact information", "contact details", "contacts"}, common_actions);
  add(PsiKind::contact_password, {"password", "passwords", "credentials"}, common_actions);
  add(PsiKind::contact_phone_number, {"phone number", "telephone number", "mobile number"}, common_actions);
  add(PsiKind::contact_postal, {"postal code", "postcode"}, common_actions);
  add(PsiKind::contact_zip, {"zip code", "zip"}, common_actions);
  add(PsiKind::demographic_age, {"age", "date of birth", "birthday"}, common_actions);
  add(PsiKind::demographic_gender, {"gender", "sex"}, common_actions);
  add(PsiKind::demographic_information, {"demographic information", "demographics", "demographic data"}, common_actions);
  add(PsiKind::identifier_ad_id, {"advertising id", "advertising identifier", "ad id"}, common_actions);
  add(PsiKind::identifier_cookie, {"cookie", "cookies"}, common_actions);
  add(PsiKind::identifier_device, {"device id", "device identifier", "device model"}, common_actions);
  add(PsiKind::identifier_imei, {"imei"}, common_actions);
  add(PsiKind::identifier_imsi, {"imsi"}, common_actions);
  add(PsiKind::identifier_information, {"identifier information", "unique identifiers", "device identifiers"}, common_actions);
  add(PsiKind::identifier_ip_address, {"ip address"}, common_actions);
  add(PsiKind::identifier_mac, {"mac address"}, common_actions);
  add(PsiKind::identifier_sim_serial, {"sim serial", "sim serial number", "iccid"}, common_actions);
  add(PsiKind::identifier_SSID_BSSID, {"ssid", "bssid", "network name"}, common_actions);
  add(PsiKind::location_bluetooth, {"bluetooth", "bluetooth beacons"}, common_actions);
  add(PsiKind::location_cell_tower, {"cell tower", "cell id", "cellular tower"}, common_actions);
  add(PsiKind::location_gps, {"gps", "gps coordinates", "position", "precise location"}, {"collect", "use", "share", "store", "access", "process", "partner"});
  add(PsiKind::location_information, {"location", "location information", "geolocation"}, common_actions);
  add(PsiKind::location_ip_address, {"ip address", "ip based location"}, common_actions);
  add(PsiKind::location_wifi, {"wifi", "wi fi"}, common_actions);

  lex.negation_keywords = {"not",  "never", "no",      "dont",
                           "don t", "do not", "won t",  "without",
                           "wont"};
  lex.third_party_keywords = {
      "third party",  "third parties",       "partner",
      "partners",     "advertisers",         "advertising partners",
      "analytics providers", "vendors",      "affiliates",
  };

  // Per-task classifier kinds, folded onto the implemented set:
  // linear tasks use logreg, everything else mnb.
  auto sub = [&](std::string_view task, const char* kind) {
    lex.model_substitution[std::string(task)] = kind;
  };
  sub("contact_address", "mnb");
  sub("contact_city", "mnb");
  sub("contact_email_address", "logreg");
  sub("contact_information", "logreg");
  sub("contact_password", "mnb");
  sub("contact_phone_number", "logreg");
  sub("contact_postal", "mnb");
  sub("contact_zip", "mnb");
  sub("demographic_age", "mnb");
  sub("demographic_gender", "mnb");
  sub("demographic_information", "mnb");
  sub("identifier_ad_id", "mnb");
  sub("identifier_cookie", "logreg");
  sub("identifier_device", "mnb");
  sub("identifier_imei", "mnb");
  sub("identifier_imsi", "mnb");
  sub("identifier_information", "mnb");
  sub("identifier_ip_address", "mnb");
  sub("identifier_mac", "mnb");
  sub("identifier_sim_serial", "mnb");
  sub("identifier_SSID_BSSID", "mnb");
  sub("location_bluetooth", "mnb");
  sub("location_cell_tower", "mnb");
  sub("location_gps", "mnb");
  sub("location_information", "logreg");
  sub("location_ip_address", "mnb");
  sub("location_wifi", "mnb");
  sub("performed_not_performed", "mnb");
  sub("third_party_first_party", "mnb");

  return lex;
}

}  // namespace ppcheck

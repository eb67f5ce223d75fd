#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace ppcheck {

// The 27 canonical personal-and-sensitive-information categories checked by
// the content-requirement stage. Each belongs to one family; the
// "*_information" member of a family is its coarse-grained category.
enum class PsiKind {
  contact_address,
  contact_city,
  contact_email_address,
  contact_information,
  contact_password,
  contact_phone_number,
  contact_postal,
  contact_zip,
  demographic_age,
  demographic_gender,
  demographic_information,
  identifier_ad_id,
  identifier_cookie,
  identifier_device,
  identifier_imei,
  identifier_imsi,
  identifier_information,
  identifier_ip_address,
  identifier_mac,
  identifier_sim_serial,
  identifier_SSID_BSSID,
  location_bluetooth,
  location_cell_tower,
  location_gps,
  location_information,
  location_ip_address,
  location_wifi,
};

inline constexpr std::size_t kPsiKindCount = 27;

enum class PsiFamily { contact, demographic, identifier, location };

inline constexpr std::array<PsiKind, kPsiKindCount> all_psi_kinds() {
  return {
      PsiKind::contact_address,        PsiKind::contact_city,
      PsiKind::contact_email_address,  PsiKind::contact_information,
      PsiKind::contact_password,       PsiKind::contact_phone_number,
      PsiKind::contact_postal,         PsiKind::contact_zip,
      PsiKind::demographic_age,        PsiKind::demographic_gender,
      PsiKind::demographic_information, PsiKind::identifier_ad_id,
      PsiKind::identifier_cookie,      PsiKind::identifier_device,
      PsiKind::identifier_imei,        PsiKind::identifier_imsi,
      PsiKind::identifier_information, PsiKind::identifier_ip_address,
      PsiKind::identifier_mac,         PsiKind::identifier_sim_serial,
      PsiKind::identifier_SSID_BSSID,  PsiKind::location_bluetooth,
      PsiKind::location_cell_tower,    PsiKind::location_gps,
      PsiKind::location_information,   PsiKind::location_ip_address,
      PsiKind::location_wifi,
  };
}

inline std::string_view psi_name(PsiKind k) {
  switch (k) {
    case PsiKind::contact_address: return "contact_address";
    case PsiKind::contact_city: return "contact_city";
    case PsiKind::contact_email_address: return "contact_email_address";
    case PsiKind::contact_information: return "contact_information";
    case PsiKind::contact_password: return "contact_password";
    case PsiKind::contact_phone_number: return "contact_phone_number";
    case PsiKind::contact_postal: return "contact_postal";
    case PsiKind::contact_zip: return "contact_zip";
    case PsiKind::demographic_age: return "demographic_age";
    case PsiKind::demographic_gender: return "demographic_gender";
    case PsiKind::demographic_information: return "demographic_information";
    case PsiKind::identifier_ad_id: return "identifier_ad_id";
    case PsiKind::identifier_cookie: return "identifier_cookie";
    case PsiKind::identifier_device: return "identifier_device";
    case PsiKind::identifier_imei: return "identifier_imei";
    case PsiKind::identifier_imsi: return "identifier_imsi";
    case PsiKind::identifier_information: return "identifier_information";
    case PsiKind::identifier_ip_address: return "identifier_ip_address";
    case PsiKind::identifier_mac: return "identifier_mac";
    case PsiKind::identifier_sim_serial: return "identifier_sim_serial";
    case PsiKind::identifier_SSID_BSSID: return "identifier_SSID_BSSID";
    case PsiKind::location_bluetooth: return "location_bluetooth";
    case PsiKind::location_cell_tower: return "location_cell_tower";
    case PsiKind::location_gps: return "location_gps";
    case PsiKind::location_information: return "location_information";
    case PsiKind::location_ip_address: return "location_ip_address";
    case PsiKind::location_wifi: return "location_wifi";
  }
  return "";
}

inline std::optional<PsiKind> psi_from_name(std::string_view name) {
  for (PsiKind k : all_psi_kinds()) {
    if (psi_name(k) == name) return k;
  }
  return std::nullopt;
}

inline PsiFamily psi_family(PsiKind k) {
  switch (k) {
    case PsiKind::contact_address:
    case PsiKind::contact_city:
    case PsiKind::contact_email_address:
    case PsiKind::contact_information:
    case PsiKind::contact_password:
    case PsiKind::contact_phone_number:
    case PsiKind::contact_postal:
    case PsiKind::contact_zip:
      return PsiFamily::contact;
    case PsiKind::demographic_age:
    case PsiKind::demographic_gender:
    case PsiKind::demographic_information:
      return PsiFamily::demographic;
    case PsiKind::identifier_ad_id:
    case PsiKind::identifier_cookie:
    case PsiKind::identifier_device:
    case PsiKind::identifier_imei:
    case PsiKind::identifier_imsi:
    case PsiKind::identifier_information:
    case PsiKind::identifier_ip_address:
    case PsiKind::identifier_mac:
    case PsiKind::identifier_sim_serial:
    case PsiKind::identifier_SSID_BSSID:
      return PsiFamily::identifier;
    case PsiKind::location_bluetooth:
    case PsiKind::location_cell_tower:
    case PsiKind::location_gps:
    case PsiKind::location_information:
    case PsiKind::location_ip_address:
    case PsiKind::location_wifi:
      return PsiFamily::location;
  }
  return PsiFamily::demographic;
}

// Coarse members: the "*_information" category of each family.
inline bool psi_is_coarse(PsiKind k) {
  return k == PsiKind::contact_information ||
         k == PsiKind::demographic_information ||
         k == PsiKind::identifier_information ||
         k == PsiKind::location_information;
}

inline PsiKind coarse_member(PsiFamily f) {
  switch (f) {
    case PsiFamily::contact: return PsiKind::contact_information;
    case PsiFamily::demographic: return PsiKind::demographic_information;
    case PsiFamily::identifier: return PsiKind::identifier_information;
    case PsiFamily::location: return PsiKind::location_information;
  }
  return PsiKind::demographic_information;
}

}  // namespace ppcheck

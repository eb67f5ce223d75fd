#pragma once

#include "ppcheck/mapping.hpp"

namespace ppcheck {

// Shipped mapping store: the 14 privacy-related permissions of the results
// table plus ACCESS_NETWORK_STATE, and four analytics/ad libraries with the
// full InMobi method list. Free-form PSI labels resolve through the alias
// table; labels with no close canonical category fall back to the coarse
// member of the nearest family.
inline MappingStore default_mapping_store() {
  MappingStore store;

  store.add_alias("IMEI", "identifier_imei");
  store.add_alias("Phone Number", "contact_phone_number");
  store.add_alias("Device MAC", "identifier_mac");
  store.add_alias("Router MAC", "identifier_mac");
  store.add_alias("Router SSID", "identifier_SSID_BSSID");
  store.add_alias("GPS Location", "location_gps");
  store.add_alias("Cell Tower Location", "location_cell_tower");
  store.add_alias("Account Email", "contact_email_address");
  store.add_alias("Contacts", "contact_information");
  store.add_alias("SMS Messages", "contact_information");
  store.add_alias("Call Log", "contact_phone_number");
  store.add_alias("Calendar Events", "demographic_information");
  store.add_alias("Stored Files", "identifier_information");
  store.add_alias("Media Capture", "demographic_information");
  store.add_alias("Microphone Audio", "demographic_information");
  store.add_alias("Keywords", "demographic_information");
  store.add_alias("Gender", "demographic_gender");
  store.add_alias("Location", "location_gps");
  store.add_alias("Age", "demographic_age");
  store.add_alias("Multiple Factors", "demographic_information");
  store.add_alias("Postal Code", "contact_postal");
  store.add_alias("Enable Location", "location_information");
  store.add_alias("Income", "demographic_information");
  store.add_alias("Interests", "demographic_information");
  store.add_alias("Area Code", "contact_information");
  store.add_alias("Education", "demographic_information");
  store.add_alias("Ethnicity", "demographic_information");
  store.add_alias("Advertising ID", "identifier_ad_id");
  store.add_alias("App Usage", "demographic_information");
  store.add_alias("Device Model", "identifier_device");

  auto perm = [&](std::string name, std::vector<MappingEntry> entries) {
    store.add_permission({std::move(name), std::move(entries)});
  };
  perm("ACCESS_NETWORK_STATE", {{"Device MAC", "getMacAddress()"}});
  perm("ACCESS_WIFI_STATE",
       {{"Router MAC", "getMacAddress()"}, {"Router SSID", "getBSSID()"}});
  perm("ACCESS_FINE_LOCATION", {{"GPS Location", "getLocation()"}});
  perm("ACCESS_COARSE_LOCATION",
       {{"Cell Tower Location", "getCellLocation()"}});
  perm("READ_PHONE_STATE",
       {{"IMEI", "getDeviceId()"}, {"Phone Number", "getLine1Number()"}});
  perm("READ_EXTERNAL_STORAGE",
       {{"Stored Files", "getExternalStorageDirectory()"}});
  perm("CAMERA", {{"Media Capture", "takePicture()"}});
  perm("GET_ACCOUNTS", {{"Account Email", "getAccounts()"}});
  perm("RECORD_AUDIO", {{"Microphone Audio", "startRecording()"}});
  perm("READ_CONTACTS", {{"Contacts", "getPhoneNumbers()"}});
  perm("CALL_PHONE", {{"Phone Number", "makeCall()"}});
  perm("READ_CALENDAR", {{"Calendar Events", "queryCalendar()"}});
  perm("READ_SMS", {{"SMS Messages", "readSms()"}});
  perm("RECEIVE_SMS", {{"SMS Messages", "onReceiveSms()"}});
  perm("READ_CALL_LOG", {{"Call Log", "queryCallLog()"}});

  auto lib = [&](std::string name, std::vector<MappingEntry> entries) {
    store.add_library({std::move(name), std::move(entries)});
  };
  lib("InMobi", {
                    {"Keywords", "setKeywords"},
                    {"Keywords", "setSearchString"},
                    {"Gender", "setGender"},
                    {"Location", "setCurrentLocation"},
                    {"Age", "setAge"},
                    {"Multiple Factors", "setRequestParams"},
                    {"Postal Code", "setPostalCode"},
                    {"Enable Location", "setLocationInquiryAllowed"},
                    {"Income", "setIncome"},
                    {"Interests", "setInterests"},
                    {"Area Code", "setAreaCode"},
                    {"Education", "setEducation"},
                    {"Ethnicity", "setEthinicity"},
                });
  lib("GoogleAnalytics", {
                             {"Advertising ID", "getAdvertisingId"},
                             {"App Usage", "logEvent"},
                         });
  lib("FacebookAnalytics", {
                               {"Advertising ID", "getAttributionId"},
                               {"App Usage", "logAppEvent"},
                           });
  lib("Flurry", {
                    {"Device Model", "getDeviceModel"},
                    {"App Usage", "logSession"},
                });
  return store;
}

}  // namespace ppcheck

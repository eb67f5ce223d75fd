#pragma once

#include <stdexcept>
#include <string>

namespace ppcheck {

enum class ErrorCode {
  MalformedMapping,
  DuplicateKey,
  MissingFile,
  MalformedXml,
  DanglingScreenRef,
  DuplicateScreen,
  DuplicatePermission,
  OffScreen,
  EmptyCorpus,
  SingleClass,
  NonFiniteLoss,
  UntrainedModel,
  MalformedModel,
  BadConfig,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::MalformedMapping: return "MalformedMapping";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::DanglingScreenRef: return "DanglingScreenRef";
    case ErrorCode::DuplicateScreen: return "DuplicateScreen";
    case ErrorCode::DuplicatePermission: return "DuplicatePermission";
    case ErrorCode::OffScreen: return "OffScreen";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::UntrainedModel: return "UntrainedModel";
    case ErrorCode::MalformedModel: return "MalformedModel";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ppcheck

#pragma once

#include <stdexcept>
#include <string>

namespace tci {

enum class ErrorCode {
  InvalidNode = 1,
  InvalidArgument,
  InvalidWalk,
  Collision,
  InvalidMap,
  UnknownVariable,
  NameClash,
  MissingVariable,
  SchemaMismatch,
  SpaceMismatch,
  Precondition,
  InvalidQuery,
  Budget,
  Parse,
  MalformedTable,
  InvalidModel,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tci

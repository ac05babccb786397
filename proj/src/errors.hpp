// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace pasa {

enum class ErrorCode {
  validation,
  state,
  not_found,
  authorization,
  ssrf,
  io,
  internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ValidationError : Error {
  explicit ValidationError(std::string m) : Error(ErrorCode::validation, std::move(m)) {}
};

struct StateError : Error {
  explicit StateError(std::string m) : Error(ErrorCode::state, std::move(m)) {}
};

struct NotFoundError : Error {
  explicit NotFoundError(std::string m) : Error(ErrorCode::not_found, std::move(m)) {}
};

struct AuthorizationError : Error {
  explicit AuthorizationError(std::string m) : Error(ErrorCode::authorization, std::move(m)) {}
};

struct SsrfError : Error {
  explicit SsrfError(std::string m) : Error(ErrorCode::ssrf, std::move(m)) {}
};

struct IoError : Error {
  explicit IoError(std::string m) : Error(ErrorCode::io, std::move(m)) {}
};

struct InternalError : Error {
  explicit InternalError(std::string m) : Error(ErrorCode::internal, std::move(m)) {}
};

}  // namespace pasa

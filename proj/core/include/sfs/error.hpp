// Copyright 2026 The SFS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sfs {

/// Failure categories shared by every module. The server maps these onto
/// HTTP status codes and the CLI onto exit codes.
enum class ErrorKind {
  Argument,             ///< caller violated a documented precondition
  Load,                 ///< a file could not be opened or read
  Parse,                ///< text input (options, LDIF) is malformed
  Format,               ///< an encoded value (SSHA, DER, PEM) is malformed
  NotFound,
  Conflict,             ///< uniqueness violation
  AlreadyRevoked,
  OwnershipConflict,    ///< user still owns files
  TooLarge,
  Issuance,             ///< CA cannot issue (e.g. root expired)
  Storage,              ///< persistence layer failed
  Unauthenticated,
  AuthenticationFailed,
  Forbidden,
  Rejected,             ///< certificate rejected by chain verification
  Fatal,                ///< randomness or crypto library failure
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sfs

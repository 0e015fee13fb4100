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

#include "sfs/error.hpp"

namespace sfs {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Argument: return "argument";
    case ErrorKind::Load: return "load";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Format: return "format";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::Conflict: return "conflict";
    case ErrorKind::AlreadyRevoked: return "already-revoked";
    case ErrorKind::OwnershipConflict: return "ownership-conflict";
    case ErrorKind::TooLarge: return "too-large";
    case ErrorKind::Issuance: return "issuance";
    case ErrorKind::Storage: return "storage";
    case ErrorKind::Unauthenticated: return "unauthenticated";
    case ErrorKind::AuthenticationFailed: return "authentication-failed";
    case ErrorKind::Forbidden: return "forbidden";
    case ErrorKind::Rejected: return "rejected";
    case ErrorKind::Fatal: return "fatal";
  }
  return "unknown";
}

}  // namespace sfs

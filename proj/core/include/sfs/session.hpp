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

#include <chrono>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

#include "sfs/crypto.hpp"
#include "sfs/filestore.hpp"
#include "sfs/time.hpp"

namespace sfs::server {

inline constexpr std::chrono::minutes default_session_idle{30};

/// Post-login state. Bound to the TLS client certificate that was used at
/// login: a token presented over a connection with any other certificate
/// is rejected.
struct Session {
  std::string token;  ///< 256 random bits, hex
  std::string uid;
  filestore::Role role;
  Sha256Digest client_cert_fingerprint;
  Timestamp created_at;
  Timestamp expires_at;
};

class SessionTable {
 public:
  explicit SessionTable(Clock clock, std::chrono::minutes idle = default_session_idle);

  Session create(std::string_view uid, filestore::Role role, const Sha256Digest& fingerprint);

  /// Returns the live session and slides its idle expiry forward. Throws
  /// Error(Unauthenticated) for unknown, expired or certificate-mismatched
  /// tokens.
  Session touch(std::string_view token, const Sha256Digest& fingerprint);

  /// Throws Error(Unauthenticated) when the token is not live.
  void invalidate(std::string_view token);
  void invalidate_user(std::string_view uid);
  /// Drops sessions opened with a certificate of this fingerprint.
  void invalidate_certificate(const Sha256Digest& fingerprint);

  std::size_t live_count() const;

 private:
  void purge_expired_locked(Timestamp now);

  Clock clock_;
  std::chrono::minutes idle_;
  mutable std::mutex mutex_;
  std::map<std::string, Session, std::less<>> sessions_;
};

}  // namespace sfs::server

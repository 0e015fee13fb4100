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

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "sfs/encoding.hpp"

// LDAP-style salted SHA1 (`{SSHA}`) password hashes.
//
// SHA1 is a weak primitive: a leaked directory lets an attacker test
// password guesses at very high speed. It is kept because the value must be
// directly usable as an LDAP `userPassword` attribute. Treat the directory
// file as a secret.
namespace sfs::credentials {

inline constexpr std::string_view ssha_prefix = "{SSHA}";
inline constexpr std::size_t sha1_size = 20;
inline constexpr std::size_t min_salt_size = 4;
inline constexpr std::size_t max_salt_size = 16;
inline constexpr std::size_t generated_salt_size = 8;

/// `{SSHA}` + base64(SHA1(password ++ salt) ++ salt).
/// Throws Error(Argument) unless 4 <= salt.size() <= 16.
std::string ssha_hash(std::string_view password, std::span<const std::uint8_t> salt);

/// Recomputes the digest with the salt carried by `hash` (any length >= 4)
/// and compares in constant time. A malformed hash throws Error(Format);
/// a well-formed hash of a different password returns false.
bool ssha_verify(std::string_view password, std::string_view hash);

/// True iff `hash` satisfies the stored-format invariants.
bool is_valid_ssha(std::string_view hash) noexcept;

struct UserCredentials {
  std::string username;
  std::string password_hash;
  std::optional<Bytes> certificate;  ///< DER

  friend bool operator==(const UserCredentials&, const UserCredentials&) = default;
};

/// What a client presents at login.
struct SuppliedCredentials {
  std::string username;
  std::string password;
  std::optional<Bytes> certificate;  ///< DER of the TLS peer certificate
};

/// Hashes `plaintext` with a fresh 8-byte salt.
UserCredentials make_credentials(std::string_view username, std::string_view plaintext,
                                 std::optional<Bytes> certificate = std::nullopt);

/// Usernames equal, password verifies, and, when a certificate is stored,
/// the supplied certificate is byte-identical to it. Never throws.
bool credentials_match(const SuppliedCredentials& supplied, const UserCredentials& stored) noexcept;

}  // namespace sfs::credentials

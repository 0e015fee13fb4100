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

#include "sfs/credentials.hpp"

#include "sfs/crypto.hpp"
#include "sfs/error.hpp"

namespace sfs::credentials {

namespace {

Sha1Digest salted_digest(std::string_view password, std::span<const std::uint8_t> salt) {
  Bytes input(password.begin(), password.end());
  input.insert(input.end(), salt.begin(), salt.end());
  return sha1(input);
}

Bytes decode_payload(std::string_view hash) {
  if (!hash.starts_with(ssha_prefix)) throw Error(ErrorKind::Format, "missing {SSHA} prefix");
  Bytes payload = base64_decode(hash.substr(ssha_prefix.size()));
  if (payload.size() < sha1_size + min_salt_size)
    throw Error(ErrorKind::Format, "SSHA payload shorter than digest plus 4-byte salt");
  return payload;
}

}  // namespace

std::string ssha_hash(std::string_view password, std::span<const std::uint8_t> salt) {
  if (salt.size() < min_salt_size || salt.size() > max_salt_size)
    throw Error(ErrorKind::Argument, "salt must be between 4 and 16 bytes");
  const auto digest = salted_digest(password, salt);
  Bytes payload(digest.begin(), digest.end());
  payload.insert(payload.end(), salt.begin(), salt.end());
  return std::string(ssha_prefix) + base64_encode(payload);
}

bool ssha_verify(std::string_view password, std::string_view hash) {
  const Bytes payload = decode_payload(hash);
  const std::span<const std::uint8_t> stored(payload.data(), sha1_size);
  const std::span<const std::uint8_t> salt(payload.data() + sha1_size, payload.size() - sha1_size);
  const auto computed = salted_digest(password, salt);
  return constant_time_equal(computed, stored);
}

bool is_valid_ssha(std::string_view hash) noexcept {
  try {
    decode_payload(hash);
    return true;
  } catch (const Error&) {
    return false;
  }
}

UserCredentials make_credentials(std::string_view username, std::string_view plaintext,
                                 std::optional<Bytes> certificate) {
  if (username.empty()) throw Error(ErrorKind::Argument, "username must not be empty");
  const Bytes salt = random_bytes(generated_salt_size);
  return UserCredentials{std::string(username), ssha_hash(plaintext, salt),
                         std::move(certificate)};
}

bool credentials_match(const SuppliedCredentials& supplied, const UserCredentials& stored) noexcept {
  try {
    if (supplied.username != stored.username) return false;
    if (!ssha_verify(supplied.password, stored.password_hash)) return false;
    if (!stored.certificate) return true;
    return supplied.certificate && *supplied.certificate == *stored.certificate;
  } catch (...) {
    return false;
  }
}

}  // namespace sfs::credentials

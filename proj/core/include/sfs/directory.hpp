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

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "sfs/credentials.hpp"
#include "sfs/encoding.hpp"

// Credential directory with inetOrgPerson semantics: entries keyed by an
// exact, case-sensitive uid carrying userPassword ({SSHA}) and an optional
// DER userCertificate. Optionally backed by a single LDIF file that is
// rewritten atomically after every mutation.
namespace sfs::directory {

struct DirectoryEntry {
  std::string uid;
  std::string user_password;
  std::optional<Bytes> user_certificate;

  friend bool operator==(const DirectoryEntry&, const DirectoryEntry&) = default;
};

/// LDIF rendering of `entries`, sorted by uid. Each record is
///
///   dn: uid=<uid>,ou=people,dc=sfs
///   objectClass: inetOrgPerson
///   uid: <uid>
///   userPassword: {SSHA}...
///   userCertificate;binary:: <base64, folded at 76 columns>
///
/// followed by a blank line. Attribute values that are not LDIF-safe are
/// base64 encoded with `::`.
std::string render_ldif(const std::vector<DirectoryEntry>& entries);

/// Parses LDIF text. Understands comments, `version:`, folded lines, and
/// both `:` and `::` value forms; attributes other than uid, userPassword
/// and userCertificate are ignored. Throws Error(Parse) with a line number.
std::vector<DirectoryEntry> parse_ldif(std::string_view text);

class Directory {
 public:
  /// In-memory directory.
  Directory() = default;
  /// File-backed directory; loads `path` when it exists.
  explicit Directory(std::filesystem::path path);

  Directory(const Directory&) = delete;
  Directory& operator=(const Directory&) = delete;

  /// Throws Conflict on duplicate uid, Argument on an invalid entry.
  void add_user(const DirectoryEntry& entry);
  /// Throws NotFound.
  void delete_user(std::string_view uid);
  /// Throws NotFound.
  credentials::UserCredentials get_credentials(std::string_view uid) const;
  /// Replaces or clears (nullopt) the certificate. Throws NotFound.
  void set_certificate(std::string_view uid, std::optional<Bytes> certificate);
  /// Replaces the stored hash. Throws NotFound, Argument on a malformed hash.
  void set_password_hash(std::string_view uid, std::string_view ssha);

  bool contains(std::string_view uid) const;
  std::vector<std::string> uids() const;
  std::size_t size() const;

  std::string export_ldif() const;
  /// Adds every entry in `text`; all-or-nothing. Throws Parse or Conflict.
  void import_ldif(std::string_view text);

  /// Rewrites the backing file. No-op for in-memory directories.
  void persist() const;

 private:
  void persist_locked() const;
  static void validate(const DirectoryEntry& entry);

  std::optional<std::filesystem::path> path_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, DirectoryEntry, std::less<>> entries_;
};

}  // namespace sfs::directory

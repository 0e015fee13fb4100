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
#include <string>
#include <string_view>

namespace sfs::config {

/// Keys understood by the rest of the system. Anything else found in an
/// options file is kept verbatim.
namespace keys {
inline constexpr std::string_view ca_server = "ca_server";  // reserved, never read
inline constexpr std::string_view db_server = "db_server";
inline constexpr std::string_view keystore_filepath = "keystore_filepath";
inline constexpr std::string_view keystore_password = "keystore_password";
inline constexpr std::string_view ca_certificate_filepath = "ca_certificate_filepath";
inline constexpr std::string_view ca_certificate_password = "ca_certificate_password";
inline constexpr std::string_view ldap_password = "ldap_password";
inline constexpr std::string_view ldap_principal = "ldap_principal";
inline constexpr std::string_view ldap_server = "ldap_server";

// Deployment keys of the embedded stack.
inline constexpr std::string_view crl_filepath = "crl_filepath";
inline constexpr std::string_view audit_log_filepath = "audit_log_filepath";
inline constexpr std::string_view listen_address = "listen_address";
inline constexpr std::string_view listen_port = "listen_port";
inline constexpr std::string_view max_upload_bytes = "max_upload_bytes";
inline constexpr std::string_view session_idle_minutes = "session_idle_minutes";
inline constexpr std::string_view webui_root = "webui_root";
}  // namespace keys

inline constexpr std::string_view default_options_path = ".config";

class OptionsMap {
 public:
  using Entries = std::map<std::string, std::string, std::less<>>;

  OptionsMap() = default;
  OptionsMap(Entries entries, std::filesystem::path source)
      : entries_(std::move(entries)), source_(std::move(source)) {}

  std::optional<std::string> get(std::string_view key) const;
  const Entries& entries() const noexcept { return entries_; }
  const std::filesystem::path& source_path() const noexcept { return source_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Resolves a path-valued option. Relative values are taken relative to
  /// the directory holding the options file.
  std::optional<std::filesystem::path> get_path(std::string_view key) const;

  friend bool operator==(const OptionsMap& a, const OptionsMap& b) {
    return a.entries_ == b.entries_;
  }

 private:
  Entries entries_;
  std::filesystem::path source_;
};

/// Parses options text. Lines are `#` comments, blank, or `key=value`; the
/// key ends at the first `=`, whitespace around key and value is trimmed,
/// the last occurrence of a key wins. Throws Error(Parse) naming the line.
OptionsMap parse_options(std::string_view text, const std::filesystem::path& source = {});

/// Reads and parses a file without touching the process-wide instance.
OptionsMap read_options_file(const std::filesystem::path& path);

/// Process-wide options. The first successful call loads `path` and fixes
/// the instance; every later call returns that same object regardless of
/// its argument. Safe to call concurrently.
const OptionsMap& load_options(const std::filesystem::path& path = default_options_path);

std::optional<std::string> get_option(const OptionsMap& opts, std::string_view key);

/// `key=value` lines in key order, LF terminated.
std::string serialize_options(const OptionsMap& opts);

}  // namespace sfs::config

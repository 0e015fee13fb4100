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
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sfs/audit.hpp"
#include "sfs/ca.hpp"
#include "sfs/directory.hpp"
#include "sfs/filestore.hpp"
#include "sfs/session.hpp"

// Transport-independent core of the web server: two-factor login, session
// checks, per-file authorization and the administrator operations. The
// HTTPS layer passes the TLS peer certificate of every request in; every
// call records exactly one audit event.
namespace sfs::server {

/// CRL cache that re-reads its file whenever the file's mtime or size
/// changes. A CRL that fails to parse or verify keeps the previous list.
class RevocationCache {
 public:
  RevocationCache(ca::Certificate issuer, std::optional<std::filesystem::path> path);

  ca::RevocationList current();
  /// Unconditional reload; throws on an unreadable or unverifiable CRL.
  void reload();

 private:
  void reload_locked();

  ca::Certificate issuer_;
  std::optional<std::filesystem::path> path_;
  std::mutex mutex_;
  ca::RevocationList list_;
  std::filesystem::file_time_type mtime_{};
  std::uintmax_t size_ = 0;
  bool loaded_ = false;
};

struct ServiceOptions {
  ca::Certificate trust_anchor;
  /// Signed CRL written by the CA tooling; nullopt disables revocation.
  std::optional<std::filesystem::path> crl_path;
  std::chrono::minutes session_idle = default_session_idle;
  Clock clock = system_clock();
};

struct LoginResult {
  Session session;
  std::vector<filestore::FileWithRights> files;
};

struct Download {
  filestore::FileRecord file;
  Bytes content;
};

struct FileAcl {
  std::string owner_uid;
  std::vector<filestore::GroupGrant> grants;
};

struct UserSummary {
  std::string uid;
  filestore::Role role;
  bool has_certificate;
};

struct BindResult {
  std::string uid;
  bool created;
};

/// Optional peer certificate as extracted from the TLS layer.
using Peer = std::optional<ca::Certificate>;

class Service {
 public:
  Service(ServiceOptions options, directory::Directory& directory, filestore::FileStore& files,
          audit::AuditLog& audit);

  /// Fails with a single Error(AuthenticationFailed) whatever the cause;
  /// the audit detail records the actual reason.
  LoginResult login(std::string_view username, std::string_view password, const Peer& peer);
  void logout(std::string_view token, const Peer& peer);

  std::vector<filestore::FileWithRights> list_files(std::string_view token, const Peer& peer);
  Download download(std::string_view token, const Peer& peer, filestore::FileId file);
  filestore::FileRecord upload(std::string_view token, const Peer& peer, std::string_view name,
                               std::span<const std::uint8_t> content);
  void delete_file(std::string_view token, const Peer& peer, filestore::FileId file);
  FileAcl get_acl(std::string_view token, const Peer& peer, filestore::FileId file);
  /// Owner or administrator; replaces all grants on the file.
  void set_acl(std::string_view token, const Peer& peer, filestore::FileId file,
               const std::vector<std::pair<filestore::GroupId, filestore::RightSet>>& grants);

  // administrator only
  std::vector<UserSummary> list_users(std::string_view token, const Peer& peer);
  void add_user(std::string_view token, const Peer& peer, std::string_view uid,
                std::optional<std::string> password, filestore::Role role,
                std::optional<Bytes> certificate);
  void delete_user(std::string_view token, const Peer& peer, std::string_view uid);
  void modify_user(std::string_view token, const Peer& peer, std::string_view uid,
                   std::optional<std::string> password, std::optional<filestore::Role> role);

  std::vector<filestore::GroupRecord> list_groups(std::string_view token, const Peer& peer);
  filestore::GroupId create_group(std::string_view token, const Peer& peer, std::string_view name);
  void delete_group(std::string_view token, const Peer& peer, filestore::GroupId group);
  void add_member(std::string_view token, const Peer& peer, filestore::GroupId group,
                  std::string_view uid);
  void remove_member(std::string_view token, const Peer& peer, filestore::GroupId group,
                     std::string_view uid);
  void grant(std::string_view token, const Peer& peer, filestore::GroupId group,
             filestore::FileId file, filestore::RightSet rights);

  /// Binds the certificate to the user named by its CN, creating the user
  /// (role normal, unusable password) when absent. Certificates that do not
  /// verify against the trust anchor fail with Error(Rejected).
  BindResult bind_certificate(std::string_view token, const Peer& peer,
                              std::span<const std::uint8_t> certificate);
  /// Idempotent for users without a certificate.
  void unbind_certificate(std::string_view token, const Peer& peer, std::string_view uid);

  /// Validates a session without auditing; used by the HTTP layer to
  /// answer unknown routes.
  bool has_valid_session(std::string_view token, const Peer& peer);

  /// Records an event on behalf of the transport (e.g. a request rejected
  /// before reaching an operation).
  void record(audit::AuditEvent event);

  std::uint64_t max_upload_bytes() const noexcept { return files_.max_upload_bytes(); }
  SessionTable& sessions() noexcept { return sessions_; }
  RevocationCache& revocations() noexcept { return revocations_; }

 private:
  struct Context {
    Session session;
    filestore::Role role;
  };

  Context authenticate(std::string_view token, const Peer& peer);
  Context authenticate_admin(std::string_view token, const Peer& peer);
  void require_admin(const Context& ctx) const;

  template <typename Body>
  auto audited(audit::Operation op, std::string target, std::string_view token, const Peer& peer,
               Body&& body);

  std::string random_unusable_password() const;

  ServiceOptions options_;
  directory::Directory& directory_;
  filestore::FileStore& files_;
  audit::AuditLog& audit_;
  SessionTable sessions_;
  RevocationCache revocations_;
};

}  // namespace sfs::server

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

#include "sfs/service.hpp"

#include <iostream>

#include "sfs/credentials.hpp"
#include "sfs/crypto.hpp"
#include "sfs/error.hpp"
#include "sfs/fileio.hpp"

namespace sfs::server {

namespace fs = std::filesystem;
using audit::Operation;
using audit::Outcome;
using filestore::Right;
using filestore::Role;

// ---------------------------------------------------------------------------
// RevocationCache

RevocationCache::RevocationCache(ca::Certificate issuer, std::optional<fs::path> path)
    : issuer_(std::move(issuer)), path_(std::move(path)) {
  list_.issuer = issuer_.subject_dn();
}

void RevocationCache::reload_locked() {
  std::error_code ec;
  const auto mtime = fs::last_write_time(*path_, ec);
  if (ec) throw Error(ErrorKind::Load, "cannot stat CRL " + path_->string() + ": " + ec.message());
  const auto size = fs::file_size(*path_, ec);
  list_ = ca::parse_crl(read_file(*path_), issuer_);
  mtime_ = mtime;
  size_ = ec ? 0 : size;
  loaded_ = true;
}

void RevocationCache::reload() {
  if (!path_) return;
  std::lock_guard lock(mutex_);
  reload_locked();
}

ca::RevocationList RevocationCache::current() {
  std::lock_guard lock(mutex_);
  if (path_) {
    std::error_code ec;
    const auto mtime = fs::last_write_time(*path_, ec);
    std::error_code ec2;
    const auto size = fs::file_size(*path_, ec2);
    if (!loaded_ || (!ec && (mtime != mtime_ || (!ec2 && size != size_)))) {
      try {
        reload_locked();
      } catch (const std::exception& e) {
        std::cerr << "sfs: keeping previous CRL: " << e.what() << '\n';
      }
    }
  }
  return list_;
}

// ---------------------------------------------------------------------------
// Service

namespace {

Outcome outcome_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Unauthenticated:
    case ErrorKind::AuthenticationFailed:
    case ErrorKind::Forbidden:
    case ErrorKind::Rejected:
      return Outcome::Denied;
    default:
      return Outcome::Error;
  }
}

std::string principal_or_anonymous(std::string_view name) {
  return name.empty() ? std::string(audit::anonymous) : std::string(name);
}

struct Note {
  std::string target;
  std::string detail;
};

[[noreturn]] void forbidden(const std::string& why) { throw Error(ErrorKind::Forbidden, why); }

std::string base_name(std::string_view name) {
  const auto slash = name.find_last_of("/\\");
  if (slash != std::string_view::npos) name.remove_prefix(slash + 1);
  return std::string(name);
}

}  // namespace

Service::Service(ServiceOptions options, directory::Directory& directory,
                 filestore::FileStore& files, audit::AuditLog& audit)
    : options_(std::move(options)),
      directory_(directory),
      files_(files),
      audit_(audit),
      sessions_(options_.clock, options_.session_idle),
      revocations_(options_.trust_anchor, options_.crl_path) {}

void Service::record(audit::AuditEvent event) {
  try {
    audit_.record(event);
  } catch (const std::exception& e) {
    // Storage trouble must not take the request path down.
    std::cerr << "sfs audit fallback: " << audit::format_line(event) << " (" << e.what() << ")\n";
  }
}

Service::Context Service::authenticate(std::string_view token, const Peer& peer) {
  if (!peer) throw Error(ErrorKind::Unauthenticated, "no client certificate");
  const auto fingerprint = peer->fingerprint();
  if (revocations_.current().contains(peer->serial())) {
    sessions_.invalidate_certificate(fingerprint);
    throw Error(ErrorKind::Unauthenticated, "client certificate is revoked");
  }
  Session session = sessions_.touch(token, fingerprint);
  auto user = files_.find_user(session.uid);
  if (!user) {
    sessions_.invalidate_user(session.uid);
    throw Error(ErrorKind::Unauthenticated, "account no longer exists");
  }
  session.role = user->role;
  return Context{std::move(session), user->role};
}

void Service::require_admin(const Context& ctx) const {
  if (ctx.role != Role::Administrator) forbidden("administrator role required");
}

Service::Context Service::authenticate_admin(std::string_view token, const Peer& peer) {
  auto ctx = authenticate(token, peer);
  require_admin(ctx);
  return ctx;
}

template <typename Body>
auto Service::audited(Operation op, std::string target, std::string_view token, const Peer& peer,
                      Body&& body) {
  audit::AuditEvent event;
  event.operation = op;
  Note note{std::move(target), {}};
  auto finish = [&](Outcome outcome, std::string detail) {
    event.target = note.target;
    event.outcome = outcome;
    event.detail = std::move(detail);
    record(event);
  };
  try {
    Context ctx = authenticate(token, peer);
    event.principal = ctx.session.uid;
    if constexpr (std::is_void_v<decltype(body(ctx, note))>) {
      body(ctx, note);
      finish(Outcome::Success, note.detail);
    } else {
      auto result = body(ctx, note);
      finish(Outcome::Success, note.detail);
      return result;
    }
  } catch (const Error& e) {
    finish(outcome_for(e.kind()), std::string(to_string(e.kind())) + ": " + e.what());
    throw;
  } catch (const std::exception& e) {
    finish(Outcome::Error, e.what());
    throw;
  }
}

bool Service::has_valid_session(std::string_view token, const Peer& peer) {
  try {
    authenticate(token, peer);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::string Service::random_unusable_password() const { return hex_encode(random_bytes(32)); }

LoginResult Service::login(std::string_view username, std::string_view password,
                           const Peer& peer) {
  audit::AuditEvent event;
  event.operation = Operation::Login;
  event.principal = principal_or_anonymous(username);

  auto deny = [&](std::string reason) -> LoginResult {
    event.outcome = Outcome::Denied;
    event.detail = std::move(reason);
    record(event);
    throw Error(ErrorKind::AuthenticationFailed, "authentication failed");
  };

  try {
    if (!peer) return deny("no client certificate");
    const auto crl = revocations_.current();
    const auto verdict = ca::verify_chain(*peer, options_.trust_anchor, crl, options_.clock());
    if (verdict != ca::Verdict::Valid)
      return deny("client certificate " + std::string(ca::to_string(verdict)));

    std::optional<credentials::UserCredentials> stored;
    try {
      stored = directory_.get_credentials(username);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotFound) throw;
    }
    if (!stored) {
      // Burn comparable time so unknown names are not distinguishable by latency.
      static const std::string dummy =
          credentials::ssha_hash("dummy", Bytes(credentials::generated_salt_size, 0));
      (void)credentials::ssha_verify(password, dummy);
      return deny("unknown user");
    }
    const credentials::SuppliedCredentials supplied{std::string(username), std::string(password),
                                                    peer->der()};
    if (!credentials::credentials_match(supplied, *stored)) {
      const bool password_ok = credentials::is_valid_ssha(stored->password_hash) &&
                               credentials::ssha_verify(password, stored->password_hash);
      return deny(password_ok ? "certificate does not match the bound certificate"
                              : "wrong password");
    }
    if (peer->subject_cn() != username)
      return deny("certificate CN '" + peer->subject_cn() + "' does not match username");

    const auto user = files_.find_user(username);
    if (!user) return deny("no account record");

    LoginResult result{sessions_.create(username, user->role, peer->fingerprint()),
                       files_.list_files_for(username)};
    event.outcome = Outcome::Success;
    event.detail = "role=" + std::string(filestore::to_string(user->role));
    record(event);
    return result;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::AuthenticationFailed) throw;
    event.outcome = Outcome::Error;
    event.detail = e.what();
    record(event);
    throw Error(ErrorKind::AuthenticationFailed, "authentication failed");
  }
}

void Service::logout(std::string_view token, const Peer& peer) {
  audited(Operation::Logout, {}, token, peer,
          [&](Context& ctx, Note&) { sessions_.invalidate(ctx.session.token); });
}

std::vector<filestore::FileWithRights> Service::list_files(std::string_view token,
                                                           const Peer& peer) {
  return audited(Operation::List, {}, token, peer, [&](Context& ctx, Note& note) {
    auto files = files_.list_files_for(ctx.session.uid);
    note.detail = std::to_string(files.size()) + " file(s)";
    return files;
  });
}

Download Service::download(std::string_view token, const Peer& peer, filestore::FileId file) {
  return audited(Operation::Download, std::to_string(file), token, peer,
                 [&](Context& ctx, Note&) {
                   const auto rights = files_.effective_rights(ctx.session.uid, file);
                   if (!rights.contains(Right::Download)) forbidden("no download right");
                   return Download{files_.get_file(file), files_.fetch_content(file)};
                 });
}

filestore::FileRecord Service::upload(std::string_view token, const Peer& peer,
                                      std::string_view name,
                                      std::span<const std::uint8_t> content) {
  return audited(Operation::Upload, {}, token, peer, [&](Context& ctx, Note& note) {
    const std::string clean = base_name(name);
    if (clean.empty()) throw Error(ErrorKind::Argument, "file name must not be empty");
    auto rec = files_.store_file(ctx.session.uid, clean, content);
    note.target = std::to_string(rec.file_id);
    note.detail = clean + " (" + std::to_string(rec.size_bytes) + " bytes)";
    return rec;
  });
}

void Service::delete_file(std::string_view token, const Peer& peer, filestore::FileId file) {
  audited(Operation::DeleteFile, std::to_string(file), token, peer, [&](Context& ctx, Note&) {
    const auto rights = files_.effective_rights(ctx.session.uid, file);
    if (!rights.contains(Right::Delete)) forbidden("no delete right");
    files_.delete_file(file);
  });
}

FileAcl Service::get_acl(std::string_view token, const Peer& peer, filestore::FileId file) {
  return audited(Operation::List, std::to_string(file), token, peer, [&](Context& ctx, Note& note) {
    const auto rec = files_.get_file(file);
    if (ctx.role != Role::Administrator && rec.owner_uid != ctx.session.uid)
      forbidden("only the owner or an administrator may read the ACL");
    note.detail = "acl";
    return FileAcl{rec.owner_uid, files_.grants_for_file(file)};
  });
}

void Service::set_acl(std::string_view token, const Peer& peer, filestore::FileId file,
                      const std::vector<std::pair<filestore::GroupId, filestore::RightSet>>& grants) {
  audited(Operation::AclChange, std::to_string(file), token, peer, [&](Context& ctx, Note& note) {
    const auto rec = files_.get_file(file);
    if (ctx.role != Role::Administrator && rec.owner_uid != ctx.session.uid)
      forbidden("only the owner or an administrator may change the ACL");
    files_.replace_grants(file, grants);
    note.detail = std::to_string(grants.size()) + " grant(s)";
  });
}

// ---------------------------------------------------------------------------
// users

std::vector<UserSummary> Service::list_users(std::string_view token, const Peer& peer) {
  return audited(Operation::List, "users", token, peer, [&](Context& ctx, Note&) {
    require_admin(ctx);
    std::vector<UserSummary> out;
    for (const auto& u : files_.list_users()) {
      bool has_cert = false;
      try {
        has_cert = directory_.get_credentials(u.uid).certificate.has_value();
      } catch (const Error&) {
      }
      out.push_back({u.uid, u.role, has_cert});
    }
    return out;
  });
}

void Service::add_user(std::string_view token, const Peer& peer, std::string_view uid,
                       std::optional<std::string> password, Role role,
                       std::optional<Bytes> certificate) {
  audited(Operation::UserAdd, std::string(uid), token, peer, [&](Context& ctx, Note& note) {
    require_admin(ctx);
    if (uid.empty()) throw Error(ErrorKind::Argument, "uid must not be empty");
    if (directory_.contains(uid) || files_.find_user(uid))
      throw Error(ErrorKind::Conflict, "user '" + std::string(uid) + "' already exists");

    std::optional<Bytes> der;
    if (certificate) {
      const auto cert = ca::decode_certificate_auto(*certificate);
      const auto verdict = ca::verify_chain(cert, options_.trust_anchor, revocations_.current(),
                                            options_.clock());
      if (verdict != ca::Verdict::Valid)
        throw Error(ErrorKind::Rejected, "certificate " + std::string(ca::to_string(verdict)));
      der = cert.der();
    }
    auto creds = credentials::make_credentials(uid, password.value_or(random_unusable_password()),
                                               der);
    directory_.add_user({creds.username, creds.password_hash, creds.certificate});
    try {
      files_.create_user(uid, role);
    } catch (...) {
      directory_.delete_user(uid);
      throw;
    }
    note.detail = "role=" + std::string(filestore::to_string(role)) +
                  (password ? "" : " login-disabled") + (der ? " cert" : "");
  });
}

void Service::delete_user(std::string_view token, const Peer& peer, std::string_view uid) {
  audited(Operation::UserDelete, std::string(uid), token, peer, [&](Context& ctx, Note&) {
    require_admin(ctx);
    const bool in_directory = directory_.contains(uid);
    const bool in_store = files_.find_user(uid).has_value();
    if (!in_directory && !in_store)
      throw Error(ErrorKind::NotFound, "user '" + std::string(uid) + "'");
    if (in_store) files_.delete_user(uid);
    if (in_directory) directory_.delete_user(uid);
    sessions_.invalidate_user(uid);
  });
}

void Service::modify_user(std::string_view token, const Peer& peer, std::string_view uid,
                          std::optional<std::string> password, std::optional<Role> role) {
  audited(Operation::UserModify, std::string(uid), token, peer, [&](Context& ctx, Note& note) {
    require_admin(ctx);
    if (!password && !role) throw Error(ErrorKind::Argument, "nothing to modify");
    if (!files_.find_user(uid)) throw Error(ErrorKind::NotFound, "user '" + std::string(uid) + "'");
    if (!directory_.contains(uid))
      throw Error(ErrorKind::NotFound, "directory entry '" + std::string(uid) + "'");
    if (password)
      directory_.set_password_hash(uid, credentials::make_credentials(uid, *password).password_hash);
    if (role) files_.set_role(uid, *role);
    if (password) note.detail += "password ";
    if (role) note.detail += "role=" + std::string(filestore::to_string(*role));
  });
}

// ---------------------------------------------------------------------------
// groups

std::vector<filestore::GroupRecord> Service::list_groups(std::string_view token, const Peer& peer) {
  return audited(Operation::List, "groups", token, peer, [&](Context& ctx, Note&) {
    require_admin(ctx);
    return files_.list_groups();
  });
}

filestore::GroupId Service::create_group(std::string_view token, const Peer& peer,
                                         std::string_view name) {
  return audited(Operation::GroupChange, {}, token, peer, [&](Context& ctx, Note& note) {
    require_admin(ctx);
    const auto id = files_.create_group(name);
    note.target = std::to_string(id);
    note.detail = "create " + std::string(name);
    return id;
  });
}

void Service::delete_group(std::string_view token, const Peer& peer, filestore::GroupId group) {
  audited(Operation::GroupChange, std::to_string(group), token, peer,
          [&](Context& ctx, Note& note) {
            require_admin(ctx);
            files_.delete_group(group);
            note.detail = "delete";
          });
}

void Service::add_member(std::string_view token, const Peer& peer, filestore::GroupId group,
                         std::string_view uid) {
  audited(Operation::GroupChange, std::to_string(group), token, peer,
          [&](Context& ctx, Note& note) {
            require_admin(ctx);
            files_.add_member(group, uid);
            note.detail = "add_member " + std::string(uid);
          });
}

void Service::remove_member(std::string_view token, const Peer& peer, filestore::GroupId group,
                            std::string_view uid) {
  audited(Operation::GroupChange, std::to_string(group), token, peer,
          [&](Context& ctx, Note& note) {
            require_admin(ctx);
            files_.remove_member(group, uid);
            note.detail = "remove_member " + std::string(uid);
          });
}

void Service::grant(std::string_view token, const Peer& peer, filestore::GroupId group,
                    filestore::FileId file, filestore::RightSet rights) {
  audited(Operation::AclChange, std::to_string(file), token, peer, [&](Context& ctx, Note& note) {
    require_admin(ctx);
    files_.grant(group, file, rights);
    note.detail = "group " + std::to_string(group);
    for (const auto& r : rights.normalized().names()) note.detail += " " + r;
  });
}

// ---------------------------------------------------------------------------
// certificates

BindResult Service::bind_certificate(std::string_view token, const Peer& peer,
                                     std::span<const std::uint8_t> certificate) {
  return audited(Operation::CertBind, {}, token, peer, [&](Context& ctx, Note& note) {
    require_admin(ctx);
    const auto cert = ca::decode_certificate_auto(certificate);
    note.detail = "serial " + std::to_string(cert.serial());
    const auto verdict = ca::verify_chain(cert, options_.trust_anchor, revocations_.current(),
                                          options_.clock());
    if (verdict != ca::Verdict::Valid)
      throw Error(ErrorKind::Rejected, "certificate " + std::string(ca::to_string(verdict)));
    if (!cert.has_usage(ca::CertKind::Client))
      throw Error(ErrorKind::Rejected, "certificate is not a client certificate");
    const std::string uid = cert.subject_cn();
    if (uid.empty()) throw Error(ErrorKind::Rejected, "certificate has no common name");
    note.target = uid;

    bool created = false;
    if (!directory_.contains(uid)) {
      auto creds = credentials::make_credentials(uid, random_unusable_password());
      directory_.add_user({uid, creds.password_hash, std::nullopt});
      created = true;
    }
    if (!files_.find_user(uid)) {
      files_.create_user(uid, Role::Normal);
      created = true;
    }
    directory_.set_certificate(uid, cert.der());
    if (created) note.detail += " created user";
    return BindResult{uid, created};
  });
}

void Service::unbind_certificate(std::string_view token, const Peer& peer, std::string_view uid) {
  audited(Operation::CertUnbind, std::string(uid), token, peer, [&](Context& ctx, Note&) {
    require_admin(ctx);
    directory_.set_certificate(uid, std::nullopt);
  });
}

}  // namespace sfs::server

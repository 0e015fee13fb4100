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

#include "cli.hpp"

#include <termios.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "sfs/audit.hpp"
#include "sfs/ca.hpp"
#include "sfs/ca_store.hpp"
#include "sfs/config.hpp"
#include "sfs/credentials.hpp"
#include "sfs/directory.hpp"
#include "sfs/error.hpp"
#include "sfs/filestore.hpp"

namespace sfs::admin {

namespace {

namespace fs = std::filesystem;

std::string operator_name() {
  if (const char* user = std::getenv("USER"); user && *user) return user;
  return "operator";
}

std::string read_password(std::istream& in, std::ostream& err) {
  const bool tty = &in == &std::cin && ::isatty(STDIN_FILENO);
  termios saved{};
  if (tty) {
    err << "Password: " << std::flush;
    ::tcgetattr(STDIN_FILENO, &saved);
    termios quiet = saved;
    quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    ::tcsetattr(STDIN_FILENO, TCSANOW, &quiet);
  }
  std::string password;
  std::getline(in, password);
  if (tty) {
    ::tcsetattr(STDIN_FILENO, TCSANOW, &saved);
    err << '\n';
  }
  if (!password.empty() && password.back() == '\r') password.pop_back();
  if (password.empty()) throw Error(ErrorKind::Argument, "empty password");
  return password;
}

fs::path audit_path_for(const config::OptionsMap& opts) {
  return opts.get_path(config::keys::audit_log_filepath)
      .value_or(opts.source_path().parent_path() / "audit.log");
}

const CLI::App* deepest_parsed(const CLI::App* app) {
  for (const auto* sub : app->get_subcommands())
    if (sub->parsed()) return deepest_parsed(sub);
  return app;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in, Clock clock) {
  CLI::App app{"Administration tool for the SFS certificate authority and accounts", "sfs-admin"};
  app.require_subcommand(1);

  std::string cn;
  std::string kind = "client";
  int days = 0;
  std::string dir;
  std::string out_path;
  ca::Serial serial = 0;
  std::string audit_log;
  std::string uid;
  std::string config_path;
  bool password_prompt = false;

  auto* ca_cmd = app.add_subcommand("ca", "Certificate authority lifecycle");
  ca_cmd->require_subcommand(1);

  auto* init = ca_cmd->add_subcommand("init", "Create a new root CA in --dir");
  init->add_option("--cn", cn, "Root common name")->required();
  init->add_option("--days", days, "Validity in days")->required()->check(CLI::PositiveNumber);
  init->add_option("--dir", dir, "CA directory")->required();

  auto* issue = ca_cmd->add_subcommand("issue", "Issue a server or client certificate");
  issue->add_option("--cn", cn, "Subject common name (the uid for client certificates)")
      ->required();
  issue->add_option("--kind", kind, "server or client")
      ->required()
      ->check(CLI::IsMember({"server", "client"}));
  issue->add_option("--days", days, "Validity in days")->required()->check(CLI::PositiveNumber);
  issue->add_option("--dir", dir, "CA directory")->required();
  issue->add_option("--out", out_path, "Output PEM (certificate + private key)")->required();

  auto* revoke = ca_cmd->add_subcommand("revoke", "Revoke a certificate by serial");
  revoke->add_option("--serial", serial, "Serial number")->required();
  revoke->add_option("--dir", dir, "CA directory")->required();
  revoke->add_option("--audit-log", audit_log, "Also record the revocation in this audit log");

  auto* show_crl = ca_cmd->add_subcommand("show-crl", "List revoked serials");
  show_crl->add_option("--dir", dir, "CA directory")->required();

  auto* bootstrap = app.add_subcommand("bootstrap-admin", "Create the first administrator");
  bootstrap->add_option("--uid", uid, "Administrator uid")->required();
  bootstrap->add_flag("--password-prompt", password_prompt, "Read the password interactively")
      ->required();
  bootstrap->add_option("--config", config_path, "Options file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << deepest_parsed(&app)->help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "sfs-admin: " << e.what() << "\n\n" << deepest_parsed(&app)->help();
    return exit_usage;
  }

  try {
    const auto now = clock();
    if (init->parsed()) {
      fs::create_directories(dir);
      ca::DirectoryLock lock(dir);
      if (ca::ca_exists(dir)) {
        err << "sfs-admin: a CA already exists in " << dir << "; refusing to overwrite\n";
        return exit_failure;
      }
      const auto state = ca::init_ca(cn, days, now);
      ca::save_ca(state, dir, now);
      out << "initialized CA '" << cn << "' in " << dir << "\n"
          << "root fingerprint " << hex_encode(state.root_certificate.fingerprint()) << "\n";
    } else if (issue->parsed()) {
      ca::DirectoryLock lock(dir);
      auto state = ca::load_ca(dir);
      const auto issued = ca::issue_certificate(state, cn, *ca::parse_cert_kind(kind), days, now);
      ca::save_ca(state, dir, now);
      ca::write_issued(issued, out_path);
      out << "issued " << kind << " certificate serial " << issued.serial << " for '" << cn
          << "' to " << out_path << "\n";
    } else if (revoke->parsed()) {
      std::optional<audit::AuditLog> log;
      if (!audit_log.empty()) log.emplace(fs::path(audit_log), clock);
      audit::AuditEvent event{{}, operator_name(), audit::Operation::CertRevoke,
                              std::to_string(serial), audit::Outcome::Success, {}};
      try {
        ca::DirectoryLock lock(dir);
        auto state = ca::load_ca(dir);
        ca::revoke_certificate(state, serial, now);
        ca::save_ca(state, dir, now);
      } catch (const Error& e) {
        if (log) {
          event.outcome = audit::Outcome::Error;
          event.detail = std::string(to_string(e.kind())) + ": " + e.what();
          log->record(event);
        }
        throw;
      }
      if (log) log->record(event);
      out << "revoked serial " << serial << "\n";
    } else if (show_crl->parsed()) {
      const auto state = ca::load_ca(dir);
      for (const auto& entry : ca::export_crl(state, now).entries)
        out << entry.serial << ' ' << format_iso8601(entry.revoked_at) << "\n";
    } else if (bootstrap->parsed()) {
      const auto opts = config::read_options_file(config_path);
      const auto ldif = opts.get_path(config::keys::ldap_server);
      const auto db = opts.get_path(config::keys::db_server);
      if (!ldif || !db)
        throw Error(ErrorKind::Load, "options file must set ldap_server and db_server");
      directory::Directory dirstore(*ldif);
      filestore::FileStore files(*db);
      if (dirstore.contains(uid) || files.find_user(uid)) {
        err << "sfs-admin: user '" << uid << "' already exists\n";
        return exit_failure;
      }
      const auto creds = credentials::make_credentials(uid, read_password(in, err));
      dirstore.add_user({creds.username, creds.password_hash, std::nullopt});
      try {
        files.create_user(uid, filestore::Role::Administrator);
      } catch (...) {
        dirstore.delete_user(uid);
        throw;
      }
      audit::AuditLog log(audit_path_for(opts), clock);
      log.record({{}, operator_name(), audit::Operation::UserAdd, uid, audit::Outcome::Success,
                  "bootstrap administrator"});
      out << "created administrator '" << uid << "'\n";
    }
  } catch (const Error& e) {
    err << "sfs-admin: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_failure;
  } catch (const std::exception& e) {
    err << "sfs-admin: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_ok;
}

}  // namespace sfs::admin

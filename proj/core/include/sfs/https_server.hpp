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
#include <memory>
#include <optional>
#include <string>

#include "sfs/audit.hpp"
#include "sfs/ca.hpp"
#include "sfs/config.hpp"
#include "sfs/directory.hpp"
#include "sfs/filestore.hpp"
#include "sfs/service.hpp"

namespace sfs::server {

inline constexpr int default_port = 8443;

struct ServerConfig {
  /// PEM file holding the server certificate followed by its private key.
  std::filesystem::path keystore;
  std::optional<std::string> keystore_password;
  /// Only client certificates chaining to this root complete the handshake.
  ca::Certificate trust_anchor;
  std::string address = "0.0.0.0";
  int port = default_port;  ///< 0 binds an ephemeral port
  /// Static assets served below /sfs/static/; an index.html there replaces
  /// the built-in login page.
  std::optional<std::filesystem::path> webui_root;
  /// Request bodies above this are refused before reaching a handler.
  std::size_t payload_max_bytes = filestore::default_max_upload_bytes + (1u << 20);
};

/// HTTPS front end over a Service. Requires a client certificate on every
/// connection.
class HttpsServer {
 public:
  HttpsServer(ServerConfig config, Service& service);
  ~HttpsServer();

  HttpsServer(const HttpsServer&) = delete;
  HttpsServer& operator=(const HttpsServer&) = delete;

  /// Binds and starts serving on a background thread. Throws Error(Fatal)
  /// when the listener cannot be set up.
  void start();
  /// Bound port, valid after start().
  int port() const noexcept;
  void stop();
  /// Blocks until stop() is called from elsewhere.
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Every piece of a running deployment, wired from an options map:
///   ldap_server              directory LDIF file
///   db_server                filestore data directory
///   keystore_filepath        server certificate + key PEM
///   keystore_password        passphrase of that key, if encrypted
///   ca_certificate_filepath  the internal CA root certificate
///   crl_filepath             CRL written by the CA tool (default: crl.pem
///                            beside the root certificate)
///   audit_log_filepath       default: audit.log beside the options file
class Deployment {
 public:
  explicit Deployment(const config::OptionsMap& options, Clock clock = system_clock());
  ~Deployment();

  Service& service() noexcept { return *service_; }
  HttpsServer& server() noexcept { return *server_; }
  directory::Directory& directory() noexcept { return *directory_; }
  filestore::FileStore& files() noexcept { return *files_; }
  audit::AuditLog& audit_log() noexcept { return *audit_; }

 private:
  std::unique_ptr<directory::Directory> directory_;
  std::unique_ptr<filestore::FileStore> files_;
  std::unique_ptr<audit::AuditLog> audit_;
  std::unique_ptr<Service> service_;
  std::unique_ptr<HttpsServer> server_;
};

}  // namespace sfs::server

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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfs/ca.hpp"
#include "sfs/ca_store.hpp"
#include "sfs/https_server.hpp"

namespace sfs::testing {

namespace fs = std::filesystem;
using json = nlohmann::json;

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const noexcept { return path_; }
  fs::path operator/(const fs::path& p) const { return path_ / p; }

 private:
  fs::path path_;
};

/// Certificate plus key, as handed to a user.
struct Credential {
  ca::Certificate certificate;
  ca::PrivateKey key;
  ca::Serial serial = 0;
};

Credential from_issued(const ca::IssuedCertificate& issued);
/// Parses a PEM file holding a certificate followed by its key.
Credential read_credential(const fs::path& pem);
void write_credential(const Credential& c, const fs::path& pem);
/// Self-signed leaf with clientAuth usage, outside any CA.
Credential self_signed(std::string_view cn);

/// In-process CA kept in a directory with the standard layout.
class Pki {
 public:
  explicit Pki(fs::path dir, std::string_view root_cn = "SFS Test Root");
  Credential issue(std::string_view cn, ca::CertKind kind, int days = 30);
  void revoke(ca::Serial serial);
  const ca::Certificate& root() const { return state_.root_certificate; }
  const fs::path& dir() const { return dir_; }
  fs::path root_path() const { return dir_ / ca::root_cert_file; }
  fs::path crl_path() const { return dir_ / ca::crl_file; }

 private:
  fs::path dir_;
  ca::CaState state_;
};

/// Options file + state directories for a loopback deployment.
struct DeploymentFiles {
  fs::path config;  ///< the options file
  fs::path ca_dir;
  fs::path audit_log;
  fs::path keystore;
};

/// Writes a keystore for `server` and an options file pointing at the CA in
/// `ca_dir`, with every state file under `root`.
DeploymentFiles write_deployment(const fs::path& root, const fs::path& ca_dir,
                                 const Credential& server,
                                 std::optional<std::string> keystore_password = std::nullopt,
                                 std::map<std::string, std::string> extra = {});

/// A started deployment on an ephemeral loopback port.
class LiveServer {
 public:
  explicit LiveServer(const fs::path& config, Clock clock = system_clock());
  ~LiveServer();
  int port() const { return deployment_->server().port(); }
  server::Deployment& deployment() { return *deployment_; }

 private:
  std::unique_ptr<server::Deployment> deployment_;
};

struct HttpResult {
  int status = 0;      ///< 0: transport failure
  std::string error;   ///< transport error text
  std::string body;
  std::map<std::string, std::string> headers;
  json as_json() const;
};

/// HTTPS client presenting a client certificate (or none).
class ApiClient {
 public:
  ApiClient(int port, const ca::Certificate& trust, std::optional<Credential> client);
  ~ApiClient();

  HttpResult login(const std::string& user, const std::string& password);
  HttpResult get(const std::string& path);
  HttpResult del(const std::string& path);
  HttpResult post_json(const std::string& path, const json& body);
  HttpResult put_json(const std::string& path, const json& body);
  HttpResult post_raw(const std::string& path, const std::string& body,
                      const std::string& content_type);
  HttpResult upload(const std::string& name, const std::string& content);
  HttpResult post(const std::string& path);

  /// Logs in and keeps the token on success.
  bool sign_in(const std::string& user, const std::string& password);
  std::string token;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class ProbeOutcome {
  Served,             ///< handshake done and an HTTP response arrived
  HandshakeRejected,  ///< TLS failure before any application data
};

struct ProbeResult {
  ProbeOutcome outcome;
  std::string detail;
};

/// Raw OpenSSL client: handshake, then GET /sfs/login. `max_tls12` pins the
/// protocol so client certificate rejection happens inside SSL_connect.
ProbeResult tls_probe(int port, const ca::Certificate& trust, const std::optional<Credential>& client,
                      bool max_tls12);

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs `argv` with `input` on stdin and waits for it.
ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input = {});

/// Path of an executable on PATH, if present.
std::optional<fs::path> find_program(std::string_view name);

/// Authenticates over TLS with python3's ssl module (an independent TLS
/// stack) and GETs /sfs/login. Returns the HTTP status, 0 on TLS failure,
/// nullopt if python3 is unavailable.
std::optional<int> python_probe(int port, const fs::path& ca_pem,
                                const std::optional<fs::path>& client_pem, std::string* detail);

/// All audit lines at `path`, parsed.
std::vector<audit::AuditEvent> read_audit(const fs::path& path);

}  // namespace sfs::testing

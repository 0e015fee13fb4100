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

#include "support.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <openssl/err.h>
#include <openssl/ssl.h>
#include <openssl/x509v3.h>
#include <poll.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "sfs/audit.hpp"
#include "sfs/ca_store.hpp"
#include "sfs/config.hpp"
#include "sfs/error.hpp"
#include "sfs/fileio.hpp"

extern char** environ;

namespace sfs::testing {

TempDir::TempDir() {
  std::random_device rd;
  const auto base = fs::temp_directory_path();
  for (int i = 0; i < 100; ++i) {
    auto candidate = base / ("sfs-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::error_code ec;
    if (fs::create_directory(candidate, ec)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

// ---------------------------------------------------------------------------

Credential from_issued(const ca::IssuedCertificate& issued) {
  return {issued.certificate, issued.private_key, issued.serial};
}

Credential read_credential(const fs::path& pem) {
  const auto text = read_file(pem);
  auto cert = ca::Certificate::from_pem(text);
  auto key = ca::PrivateKey::from_pem(text);
  return {cert, key, cert.serial()};
}

void write_credential(const Credential& c, const fs::path& pem) {
  write_file_atomic(pem, c.certificate.pem() + c.key.pem(), fs::perms::owner_read | fs::perms::owner_write);
}

Credential self_signed(std::string_view cn) {
  auto key = ca::PrivateKey::generate_rsa();
  X509* x = X509_new();
  X509_set_version(x, 2);
  ASN1_INTEGER_set(X509_get_serialNumber(x), 2);
  X509_gmtime_adj(X509_getm_notBefore(x), -3600);
  X509_gmtime_adj(X509_getm_notAfter(x), 30L * 86400);
  X509_set_pubkey(x, key.native());
  X509_NAME* name = X509_get_subject_name(x);
  X509_NAME_add_entry_by_txt(name, "CN", MBSTRING_UTF8,
                             reinterpret_cast<const unsigned char*>(std::string(cn).c_str()), -1,
                             -1, 0);
  X509_set_issuer_name(x, name);
  X509V3_CTX ctx;
  X509V3_set_ctx_nodb(&ctx);
  X509V3_set_ctx(&ctx, x, x, nullptr, nullptr, 0);
  for (auto [nid, value] : {std::pair{NID_basic_constraints, "critical,CA:FALSE"},
                            std::pair{NID_ext_key_usage, "clientAuth"}}) {
    X509_EXTENSION* ext = X509V3_EXT_conf_nid(nullptr, &ctx, nid, value);
    X509_add_ext(x, ext, -1);
    X509_EXTENSION_free(ext);
  }
  X509_sign(x, key.native(), EVP_sha256());
  auto cert = ca::Certificate::from_native(x);
  X509_free(x);
  return {cert, key, 2};
}

Pki::Pki(fs::path dir, std::string_view root_cn)
    : dir_(std::move(dir)), state_(ca::init_ca(root_cn, 365, system_clock()())) {
  ca::save_ca(state_, dir_, system_clock()());
}

Credential Pki::issue(std::string_view cn, ca::CertKind kind, int days) {
  auto issued = ca::issue_certificate(state_, cn, kind, days, system_clock()());
  ca::save_ca(state_, dir_, system_clock()());
  return from_issued(issued);
}

void Pki::revoke(ca::Serial serial) {
  ca::revoke_certificate(state_, serial, system_clock()());
  ca::save_ca(state_, dir_, system_clock()());
}

DeploymentFiles write_deployment(const fs::path& root, const fs::path& ca_dir,
                                 const Credential& server,
                                 std::optional<std::string> keystore_password,
                                 std::map<std::string, std::string> extra) {
  DeploymentFiles files;
  files.ca_dir = ca_dir;
  files.keystore = root / "server-keystore.pem";
  files.audit_log = root / "audit.log";
  files.config = root / ".config";
  write_file_atomic(files.keystore,
                    server.certificate.pem() + server.key.pem(keystore_password),
                    fs::perms::owner_read | fs::perms::owner_write);
  std::map<std::string, std::string> opts = {
      {"ldap_server", (root / "directory.ldif").string()},
      {"db_server", (root / "filestore").string()},
      {"keystore_filepath", files.keystore.string()},
      {"ca_certificate_filepath", (ca_dir / ca::root_cert_file).string()},
      {"crl_filepath", (ca_dir / ca::crl_file).string()},
      {"audit_log_filepath", files.audit_log.string()},
      {"listen_address", "127.0.0.1"},
      {"listen_port", "0"},
  };
  if (keystore_password) opts["keystore_password"] = *keystore_password;
  for (auto& [k, v] : extra) opts[k] = v;
  std::string text = "# loopback test deployment\n";
  for (const auto& [k, v] : opts) text += k + "=" + v + "\n";
  write_file_atomic(files.config, text);
  return files;
}

LiveServer::LiveServer(const fs::path& config, Clock clock)
    : deployment_(std::make_unique<server::Deployment>(config::read_options_file(config),
                                                       std::move(clock))) {
  deployment_->server().start();
}

LiveServer::~LiveServer() { deployment_->server().stop(); }

// ---------------------------------------------------------------------------

json HttpResult::as_json() const {
  try {
    return json::parse(body);
  } catch (const json::exception&) {
    return json();
  }
}

struct ApiClient::Impl {
  std::optional<Credential> client;
  httplib::SSLClient http;

  Impl(int port, const ca::Certificate& trust, std::optional<Credential> c)
      : client(std::move(c)),
        http("127.0.0.1", port, client ? client->certificate.native() : nullptr,
             client ? client->key.native() : nullptr) {
    X509_STORE* store = X509_STORE_new();
    X509_STORE_add_cert(store, trust.native());
    http.set_ca_cert_store(store);
    http.enable_server_certificate_verification(true);
    http.set_connection_timeout(5);
    http.set_read_timeout(10);
  }
};

ApiClient::ApiClient(int port, const ca::Certificate& trust, std::optional<Credential> client)
    : impl_(std::make_unique<Impl>(port, trust, std::move(client))) {}

ApiClient::~ApiClient() = default;

namespace {

HttpResult convert(const httplib::Result& r) {
  HttpResult out;
  if (!r) {
    out.error = httplib::to_string(r.error());
    return out;
  }
  out.status = r->status;
  out.body = r->body;
  for (const auto& [k, v] : r->headers) out.headers[k] = v;
  return out;
}

httplib::Headers auth(const std::string& token) {
  if (token.empty()) return {};
  return {{"Authorization", "Bearer " + token}};
}

}  // namespace

HttpResult ApiClient::login(const std::string& user, const std::string& password) {
  httplib::Params params{{"username", user}, {"password", password}};
  return convert(impl_->http.Post("/sfs/api/login", params));
}

bool ApiClient::sign_in(const std::string& user, const std::string& password) {
  auto r = login(user, password);
  if (r.status != 200) return false;
  token = r.as_json().value("token", "");
  return !token.empty();
}

HttpResult ApiClient::get(const std::string& path) {
  return convert(impl_->http.Get(path, auth(token)));
}

HttpResult ApiClient::del(const std::string& path) {
  return convert(impl_->http.Delete(path, auth(token)));
}

HttpResult ApiClient::post(const std::string& path) {
  return convert(impl_->http.Post(path, auth(token), "", "text/plain"));
}

HttpResult ApiClient::post_json(const std::string& path, const json& body) {
  return convert(impl_->http.Post(path, auth(token), body.dump(), "application/json"));
}

HttpResult ApiClient::put_json(const std::string& path, const json& body) {
  return convert(impl_->http.Put(path, auth(token), body.dump(), "application/json"));
}

HttpResult ApiClient::post_raw(const std::string& path, const std::string& body,
                               const std::string& content_type) {
  return convert(impl_->http.Post(path, auth(token), body, content_type));
}

HttpResult ApiClient::upload(const std::string& name, const std::string& content) {
  httplib::MultipartFormDataItems items{{"file", content, name, "application/octet-stream"}};
  return convert(impl_->http.Post("/sfs/api/files", auth(token), items));
}

// ---------------------------------------------------------------------------

namespace {

std::string ssl_error_text() {
  std::string out;
  while (unsigned long e = ERR_get_error()) {
    char buf[256];
    ERR_error_string_n(e, buf, sizeof buf);
    if (!out.empty()) out += "; ";
    out += buf;
  }
  return out;
}

int connect_loopback(int port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<uint16_t>(port));
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    return -1;
  }
  timeval tv{10, 0};
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
  return fd;
}

}  // namespace

ProbeResult tls_probe(int port, const ca::Certificate& trust,
                      const std::optional<Credential>& client, bool max_tls12) {
  ERR_clear_error();
  SSL_CTX* ctx = SSL_CTX_new(TLS_client_method());
  if (max_tls12) SSL_CTX_set_max_proto_version(ctx, TLS1_2_VERSION);
  X509_STORE_add_cert(SSL_CTX_get_cert_store(ctx), trust.native());
  SSL_CTX_set_verify(ctx, SSL_VERIFY_PEER, nullptr);
  if (client) {
    SSL_CTX_use_certificate(ctx, client->certificate.native());
    SSL_CTX_use_PrivateKey(ctx, client->key.native());
  }
  const int fd = connect_loopback(port);
  if (fd < 0) {
    SSL_CTX_free(ctx);
    return {ProbeOutcome::HandshakeRejected, "connect failed"};
  }
  SSL* ssl = SSL_new(ctx);
  SSL_set_fd(ssl, fd);
  ProbeResult result{ProbeOutcome::HandshakeRejected, {}};
  if (SSL_connect(ssl) != 1) {
    result.detail = "SSL_connect: " + ssl_error_text();
  } else {
    const std::string request = "GET /sfs/login HTTP/1.1\r\nHost: 127.0.0.1\r\nConnection: close\r\n\r\n";
    std::string response;
    if (SSL_write(ssl, request.data(), static_cast<int>(request.size())) > 0) {
      char buf[4096];
      int n;
      while ((n = SSL_read(ssl, buf, sizeof buf)) > 0) response.append(buf, static_cast<std::size_t>(n));
    }
    if (response.rfind("HTTP/1.1 ", 0) == 0) {
      result = {ProbeOutcome::Served, response.substr(0, response.find("\r\n"))};
    } else {
      result.detail = "after handshake: " + ssl_error_text();
    }
  }
  SSL_free(ssl);
  ::close(fd);
  SSL_CTX_free(ctx);
  return result;
}

// ---------------------------------------------------------------------------

namespace {

std::string drain(int fd) {
  std::string out;
  char buf[4096];
  ssize_t n;
  while ((n = ::read(fd, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
  return out;
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input) {
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) || ::pipe2(out_pipe, O_CLOEXEC) || ::pipe2(err_pipe, O_CLOEXEC))
    throw std::runtime_error("pipe failed");
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], 0);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], 1);
  posix_spawn_file_actions_adddup2(&actions, err_pipe[1], 2);
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);
  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  ProcessResult result;
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);
    result.err = "spawn failed";
    return result;
  }
  std::thread writer([&] {
    std::size_t off = 0;
    while (off < input.size()) {
      const ssize_t n = ::write(in_pipe[1], input.data() + off, input.size() - off);
      if (n <= 0) break;
      off += static_cast<std::size_t>(n);
    }
    ::close(in_pipe[1]);
  });
  std::thread err_reader([&] { result.err = drain(err_pipe[0]); });
  result.out = drain(out_pipe[0]);
  err_reader.join();
  writer.join();
  ::close(out_pipe[0]);
  ::close(err_pipe[0]);
  int status = 0;
  ::waitpid(pid, &status, 0);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::optional<fs::path> find_program(std::string_view name) {
  const char* path = std::getenv("PATH");
  if (!path) return std::nullopt;
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    const fs::path candidate = fs::path(dir) / name;
    if (::access(candidate.c_str(), X_OK) == 0) return candidate;
  }
  return std::nullopt;
}

std::optional<int> python_probe(int port, const fs::path& ca_pem,
                                const std::optional<fs::path>& client_pem, std::string* detail) {
  const auto python = find_program("python3");
  if (!python) return std::nullopt;
  const std::string script = R"py(
import socket, ssl, sys
port, ca, client = int(sys.argv[1]), sys.argv[2], sys.argv[3]
ctx = ssl.create_default_context(ssl.Purpose.SERVER_AUTH, cafile=ca)
ctx.check_hostname = False
if client:
    ctx.load_cert_chain(client)
try:
    with socket.create_connection(("127.0.0.1", port), timeout=10) as raw:
        with ctx.wrap_socket(raw) as s:
            s.sendall(b"GET /sfs/login HTTP/1.1\r\nHost: 127.0.0.1\r\nConnection: close\r\n\r\n")
            data = b""
            while True:
                chunk = s.recv(4096)
                if not chunk:
                    break
                data += chunk
    line = data.split(b"\r\n", 1)[0].decode()
    print(line.split(" ")[1] if line.startswith("HTTP/") else "0")
    print(line, file=sys.stderr)
except (ssl.SSLError, ConnectionError, OSError) as e:
    print("0")
    print(type(e).__name__ + ": " + str(e), file=sys.stderr)
)py";
  auto r = run_process({python->string(), "-c", script, std::to_string(port), ca_pem.string(),
                        client_pem ? client_pem->string() : ""});
  if (detail) *detail = r.err;
  if (r.exit_code != 0) return std::nullopt;
  try {
    return std::stoi(r.out);
  } catch (...) {
    return std::nullopt;
  }
}

std::vector<audit::AuditEvent> read_audit(const fs::path& path) {
  std::vector<audit::AuditEvent> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line))
    if (auto e = audit::parse_line(line)) out.push_back(*e);
  return out;
}

}  // namespace sfs::testing

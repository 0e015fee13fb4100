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

#include "sfs/https_server.hpp"

#include <openssl/ssl.h>
#include <openssl/x509.h>

#include <charconv>
#include <iostream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "sfs/error.hpp"
#include "sfs/fileio.hpp"

namespace sfs::server {

using json = nlohmann::json;
using filestore::FileId;
using filestore::GroupId;
using filestore::RightSet;

namespace {

constexpr const char* login_page = R"html(<!doctype html>
<html lang="en">
<head><meta charset="utf-8"><title>SFS login</title></head>
<body>
<h1>Secure File System</h1>
<form id="login">
  <label>User name <input name="username" autocomplete="username" required></label>
  <label>Password <input name="password" type="password" autocomplete="current-password" required></label>
  <button type="submit">Log in</button>
</form>
<p id="status"></p>
<ul id="files"></ul>
<script>
document.getElementById('login').addEventListener('submit', async (ev) => {
  ev.preventDefault();
  const body = new URLSearchParams(new FormData(ev.target));
  const status = document.getElementById('status');
  const res = await fetch('/sfs/api/login', {method: 'POST', body});
  if (!res.ok) { status.textContent = 'Login failed.'; return; }
  const data = await res.json();
  status.textContent = 'Logged in as ' + data.uid + ' (' + data.role + ')';
  const list = document.getElementById('files');
  list.replaceChildren(...data.files.map(f => {
    const li = document.createElement('li');
    li.textContent = f.name + ' [' + f.rights.join(', ') + ']';
    return li;
  }));
});
</script>
</body>
</html>
)html";

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Unauthenticated:
    case ErrorKind::AuthenticationFailed: return 401;
    case ErrorKind::Forbidden: return 403;
    case ErrorKind::NotFound: return 404;
    case ErrorKind::Conflict:
    case ErrorKind::OwnershipConflict:
    case ErrorKind::AlreadyRevoked: return 409;
    case ErrorKind::TooLarge: return 413;
    case ErrorKind::Argument:
    case ErrorKind::Parse:
    case ErrorKind::Format:
    case ErrorKind::Rejected: return 400;
    default: return 500;
  }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view kind, std::string message) {
  send_json(res, {{"error", kind}, {"message", std::move(message)}}, status);
}

Peer peer_of(const httplib::Request& req) {
  if (!req.ssl) return std::nullopt;
  X509* cert = SSL_get0_peer_certificate(req.ssl);
  if (!cert) return std::nullopt;
  return ca::Certificate::from_native(cert);
}

std::string bearer_token(const httplib::Request& req) {
  const auto header = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (header.size() > prefix.size() && header.compare(0, prefix.size(), prefix) == 0)
    return header.substr(prefix.size());
  return {};
}

std::int64_t parse_id(const std::string& text) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size())
    throw Error(ErrorKind::Argument, "invalid id '" + text + "'");
  return v;
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("request body: ") + e.what());
  }
}

std::optional<std::string> form_field(const httplib::Request& req, const std::string& name) {
  if (req.has_param(name)) return req.get_param_value(name);
  if (req.has_file(name)) return req.get_file_value(name).content;
  return std::nullopt;
}

RightSet rights_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Argument, "rights must be an array");
  RightSet set;
  for (const auto& r : j) {
    const auto right = r.is_string() ? filestore::parse_right(r.get<std::string>()) : std::nullopt;
    if (!right) throw Error(ErrorKind::Argument, "unknown right " + r.dump());
    set.insert(*right);
  }
  return set;
}

std::string json_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw Error(ErrorKind::Argument, std::string("missing string field '") + key + "'");
  return j[key].get<std::string>();
}

std::optional<std::string> json_opt_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_string())
    throw Error(ErrorKind::Argument, std::string("field '") + key + "' must be a string");
  return j[key].get<std::string>();
}

filestore::Role role_from(const std::string& text) {
  auto role = filestore::parse_role(text);
  if (!role) throw Error(ErrorKind::Argument, "unknown role '" + text + "'");
  return *role;
}

json to_json(const filestore::FileRecord& f) {
  return {{"file_id", f.file_id},
          {"name", f.name},
          {"owner", f.owner_uid},
          {"size", f.size_bytes},
          {"uploaded_at", format_iso8601(f.uploaded_at)},
          {"sha256", f.content_ref}};
}

json to_json(const std::vector<filestore::FileWithRights>& files) {
  json out = json::array();
  for (const auto& f : files) {
    auto j = to_json(f.file);
    j["rights"] = f.rights.names();
    out.push_back(std::move(j));
  }
  return out;
}

std::string content_disposition(const std::string& name) {
  std::string ascii;
  std::string encoded;
  for (unsigned char c : name) {
    ascii += (c < 0x20 || c >= 0x7f || c == '"' || c == '\\') ? '_' : static_cast<char>(c);
    if (std::isalnum(c) || c == '.' || c == '-' || c == '_') {
      encoded += static_cast<char>(c);
    } else {
      static constexpr char hex[] = "0123456789ABCDEF";
      encoded += '%';
      encoded += hex[c >> 4];
      encoded += hex[c & 15];
    }
  }
  return "attachment; filename=\"" + ascii + "\"; filename*=UTF-8''" + encoded;
}

}  // namespace

struct HttpsServer::Impl {
  ServerConfig config;
  Service& service;
  ca::Certificate server_certificate;
  ca::PrivateKey server_key;
  std::unique_ptr<httplib::SSLServer> http;
  std::thread thread;
  int bound_port = 0;

  Impl(ServerConfig cfg, Service& svc)
      : config(std::move(cfg)),
        service(svc),
        server_certificate(load_certificate(config.keystore)),
        server_key(load_key(config.keystore, config.keystore_password)) {}

  static ca::Certificate load_certificate(const std::filesystem::path& keystore) {
    return ca::Certificate::from_pem(read_file(keystore));
  }
  static ca::PrivateKey load_key(const std::filesystem::path& keystore,
                                 const std::optional<std::string>& password) {
    std::optional<std::string_view> pw;
    if (password) pw = *password;
    return ca::PrivateKey::from_pem(read_file(keystore), pw);
  }

  bool setup_tls(SSL_CTX& ctx) {
    SSL_CTX_set_min_proto_version(&ctx, TLS1_2_VERSION);
    SSL_CTX_set_options(&ctx, SSL_OP_NO_COMPRESSION | SSL_OP_NO_SESSION_RESUMPTION_ON_RENEGOTIATION);
    if (SSL_CTX_use_certificate(&ctx, server_certificate.native()) != 1) return false;
    if (SSL_CTX_use_PrivateKey(&ctx, server_key.native()) != 1) return false;
    if (SSL_CTX_check_private_key(&ctx) != 1) return false;

    X509_STORE* store = X509_STORE_new();
    if (!store) return false;
    X509_STORE_add_cert(store, config.trust_anchor.native());
    SSL_CTX_set_cert_store(&ctx, store);
    SSL_CTX_add_client_CA(&ctx, config.trust_anchor.native());
    SSL_CTX_set_verify(&ctx, SSL_VERIFY_PEER | SSL_VERIFY_FAIL_IF_NO_PEER_CERT, nullptr);
    SSL_CTX_set_verify_depth(&ctx, 1);
    return true;
  }

  using Body = std::function<void(const httplib::Request&, httplib::Response&, const Peer&,
                                  const std::string& token)>;

  httplib::Server::Handler wrap(Body body) {
    return [this, body = std::move(body)](const httplib::Request& req, httplib::Response& res) {
      try {
        body(req, res, peer_of(req), bearer_token(req));
      } catch (const Error& e) {
        const auto kind = e.kind();
        if (kind == ErrorKind::AuthenticationFailed)
          send_error(res, 401, to_string(kind), "authentication failed");
        else
          send_error(res, status_for(kind), to_string(kind), e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      }
    };
  }

  void routes() {
    auto& s = *http;
    s.set_payload_max_length(config.payload_max_bytes);

    s.Get("/sfs", [](const httplib::Request&, httplib::Response& res) {
      res.set_redirect("/sfs/login");
    });
    s.Get("/sfs/", [](const httplib::Request&, httplib::Response& res) {
      res.set_redirect("/sfs/login");
    });
    s.Get("/sfs/login", [this](const httplib::Request&, httplib::Response& res) {
      if (config.webui_root) {
        const auto index = *config.webui_root / "index.html";
        std::error_code ec;
        if (std::filesystem::is_regular_file(index, ec)) {
          res.set_content(read_file(index), "text/html; charset=utf-8");
          return;
        }
      }
      res.set_content(login_page, "text/html; charset=utf-8");
    });
    if (config.webui_root) s.set_mount_point("/sfs/static", config.webui_root->string());

    s.Post("/sfs/api/login", wrap([this](const auto& req, auto& res, const Peer& peer, const auto&) {
      const auto username = form_field(req, "username").value_or("");
      const auto password = form_field(req, "password").value_or("");
      auto result = service.login(username, password, peer);
      send_json(res, {{"token", result.session.token},
                      {"uid", result.session.uid},
                      {"role", filestore::to_string(result.session.role)},
                      {"expires_at", format_iso8601(result.session.expires_at)},
                      {"files", to_json(result.files)}});
    }));

    s.Post("/sfs/api/logout", wrap([this](const auto&, auto& res, const Peer& peer,
                                          const auto& token) {
      service.logout(token, peer);
      send_json(res, {{"ok", true}});
    }));

    s.Get("/sfs/api/files", wrap([this](const auto&, auto& res, const Peer& peer,
                                        const auto& token) {
      send_json(res, {{"files", to_json(service.list_files(token, peer))}});
    }));

    s.Post("/sfs/api/files", wrap([this](const auto& req, auto& res, const Peer& peer,
                                         const auto& token) {
      if (!req.is_multipart_form_data() || !req.has_file("file")) {
        // Still an upload attempt: let the service audit it after the session check.
        service.upload(token, peer, "", {});
        return;
      }
      const auto file = req.get_file_value("file");
      std::string name = file.filename;
      if (req.has_file("name")) name = req.get_file_value("name").content;
      if (req.has_param("name")) name = req.get_param_value("name");
      const auto* data = reinterpret_cast<const std::uint8_t*>(file.content.data());
      auto rec = service.upload(token, peer, name, {data, file.content.size()});
      send_json(res, to_json(rec));
    }));

    s.Get(R"(/sfs/api/files/(\d+))", wrap([this](const auto& req, auto& res, const Peer& peer,
                                                  const auto& token) {
      auto dl = service.download(token, peer, parse_id(req.matches[1]));
      res.set_header("Content-Disposition", content_disposition(dl.file.name));
      res.set_content(std::string(dl.content.begin(), dl.content.end()),
                      "application/octet-stream");
    }));

    s.Delete(R"(/sfs/api/files/(\d+))", wrap([this](const auto& req, auto& res, const Peer& peer,
                                                     const auto& token) {
      service.delete_file(token, peer, parse_id(req.matches[1]));
      send_json(res, {{"ok", true}});
    }));

    s.Get(R"(/sfs/api/files/(\d+)/acl)", wrap([this](const auto& req, auto& res, const Peer& peer,
                                                       const auto& token) {
      auto acl = service.get_acl(token, peer, parse_id(req.matches[1]));
      json grants = json::array();
      for (const auto& g : acl.grants)
        grants.push_back({{"group_id", g.group_id}, {"rights", g.rights.names()}});
      send_json(res, {{"owner", acl.owner_uid}, {"grants", grants}});
    }));

    s.Put(R"(/sfs/api/files/(\d+)/acl)", wrap([this](const auto& req, auto& res, const Peer& peer,
                                                       const auto& token) {
      const FileId file = parse_id(req.matches[1]);
      std::vector<std::pair<GroupId, RightSet>> grants;
      std::optional<Error> bad;
      try {
        const auto body = parse_body(req);
        if (!body.contains("grants") || !body["grants"].is_array())
          throw Error(ErrorKind::Argument, "missing array field 'grants'");
        for (const auto& g : body["grants"]) {
          if (!g.contains("group_id") || !g["group_id"].is_number_integer() || !g.contains("rights"))
            throw Error(ErrorKind::Argument, "grant needs group_id and rights");
          grants.emplace_back(g["group_id"].template get<GroupId>(), rights_from_json(g["rights"]));
        }
      } catch (const Error& e) {
        bad = e;
      }
      if (bad) {
        // Authenticate first so an anonymous caller sees 401, then report the body error.
        if (!service.has_valid_session(token, peer)) throw Error(ErrorKind::Unauthenticated, "no valid session");
        service.record({{}, {}, audit::Operation::AclChange, std::to_string(file),
                        audit::Outcome::Error, bad->what()});
        throw *bad;
      }
      service.set_acl(token, peer, file, grants);
      send_json(res, {{"ok", true}});
    }));

    admin_routes();

    // Anything else: 401 without a session so the API surface is not
    // enumerable anonymously, 404 otherwise.
    auto fallback = [this](const httplib::Request& req, httplib::Response& res) {
      if (!service.has_valid_session(bearer_token(req), peer_of(req)))
        send_error(res, 401, to_string(ErrorKind::Unauthenticated), "no valid session");
      else
        send_error(res, 404, to_string(ErrorKind::NotFound), "no such resource");
    };
    s.Get(".*", fallback);
    s.Post(".*", fallback);
    s.Put(".*", fallback);
    s.Delete(".*", fallback);
    s.Patch(".*", fallback);

    s.set_error_handler([this](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
      if (res.status == 413) {
        if (req.method == "POST" && req.path == "/sfs/api/files")
          service.record({{}, {}, audit::Operation::Upload, {}, audit::Outcome::Error,
                          "too-large: request body exceeds limit"});
        send_error(res, 413, to_string(ErrorKind::TooLarge), "request body too large");
      } else if (res.status == 404) {
        send_error(res, 404, to_string(ErrorKind::NotFound), "no such resource");
      } else {
        send_error(res, res.status, "http", httplib::status_message(res.status));
      }
      return httplib::Server::HandlerResponse::Handled;
    });
  }

  void admin_routes() {
    auto& s = *http;

    s.Get("/sfs/api/admin/users", wrap([this](const auto&, auto& res, const Peer& peer,
                                              const auto& token) {
      json users = json::array();
      for (const auto& u : service.list_users(token, peer))
        users.push_back({{"uid", u.uid},
                         {"role", filestore::to_string(u.role)},
                         {"has_certificate", u.has_certificate}});
      send_json(res, {{"users", users}});
    }));

    s.Post("/sfs/api/admin/users", wrap([this](const auto& req, auto& res, const Peer& peer,
                                               const auto& token) {
      std::string uid;
      std::optional<std::string> password;
      filestore::Role role = filestore::Role::Normal;
      std::optional<Bytes> cert;
      try {
        const auto body = parse_body(req);
        uid = json_string(body, "uid");
        password = json_opt_string(body, "password");
        if (auto r = json_opt_string(body, "role")) role = role_from(*r);
        if (auto c = json_opt_string(body, "certificate")) cert = to_bytes(*c);
      } catch (const Error& e) {
        if (!service.has_valid_session(token, peer)) throw Error(ErrorKind::Unauthenticated, "no valid session");
        service.record({{}, {}, audit::Operation::UserAdd, uid, audit::Outcome::Error, e.what()});
        throw;
      }
      service.add_user(token, peer, uid, password, role, cert);
      send_json(res, {{"ok", true}});
    }));

    s.Put(R"(/sfs/api/admin/users/([^/]+))", wrap([this](const auto& req, auto& res,
                                                          const Peer& peer, const auto& token) {
      const std::string uid = req.matches[1];
      std::optional<std::string> password;
      std::optional<filestore::Role> role;
      try {
        const auto body = parse_body(req);
        password = json_opt_string(body, "password");
        if (auto r = json_opt_string(body, "role")) role = role_from(*r);
      } catch (const Error& e) {
        if (!service.has_valid_session(token, peer)) throw Error(ErrorKind::Unauthenticated, "no valid session");
        service.record({{}, {}, audit::Operation::UserModify, uid, audit::Outcome::Error, e.what()});
        throw;
      }
      service.modify_user(token, peer, uid, password, role);
      send_json(res, {{"ok", true}});
    }));

    s.Delete(R"(/sfs/api/admin/users/([^/]+))", wrap([this](const auto& req, auto& res,
                                                             const Peer& peer, const auto& token) {
      service.delete_user(token, peer, std::string(req.matches[1]));
      send_json(res, {{"ok", true}});
    }));

    s.Get("/sfs/api/admin/groups", wrap([this](const auto&, auto& res, const Peer& peer,
                                               const auto& token) {
      json groups = json::array();
      for (const auto& g : service.list_groups(token, peer))
        groups.push_back({{"group_id", g.group_id}, {"name", g.name}, {"members", g.members}});
      send_json(res, {{"groups", groups}});
    }));

    s.Post("/sfs/api/admin/groups", wrap([this](const auto& req, auto& res, const Peer& peer,
                                                const auto& token) {
      std::string name;
      try {
        name = json_string(parse_body(req), "name");
      } catch (const Error& e) {
        if (!service.has_valid_session(token, peer)) throw Error(ErrorKind::Unauthenticated, "no valid session");
        service.record({{}, {}, audit::Operation::GroupChange, {}, audit::Outcome::Error, e.what()});
        throw;
      }
      send_json(res, {{"group_id", service.create_group(token, peer, name)}});
    }));

    s.Delete(R"(/sfs/api/admin/groups/(\d+))", wrap([this](const auto& req, auto& res,
                                                            const Peer& peer, const auto& token) {
      service.delete_group(token, peer, parse_id(req.matches[1]));
      send_json(res, {{"ok", true}});
    }));

    s.Post(R"(/sfs/api/admin/groups/(\d+)/members)",
           wrap([this](const auto& req, auto& res, const Peer& peer, const auto& token) {
             const GroupId group = parse_id(req.matches[1]);
             std::string uid;
             try {
               uid = json_string(parse_body(req), "uid");
             } catch (const Error& e) {
               if (!service.has_valid_session(token, peer)) throw Error(ErrorKind::Unauthenticated, "no valid session");
               service.record({{}, {}, audit::Operation::GroupChange, std::to_string(group),
                               audit::Outcome::Error, e.what()});
               throw;
             }
             service.add_member(token, peer, group, uid);
             send_json(res, {{"ok", true}});
           }));

    s.Delete(R"(/sfs/api/admin/groups/(\d+)/members/([^/]+))",
             wrap([this](const auto& req, auto& res, const Peer& peer, const auto& token) {
               service.remove_member(token, peer, parse_id(req.matches[1]),
                                     std::string(req.matches[2]));
               send_json(res, {{"ok", true}});
             }));

    s.Put(R"(/sfs/api/admin/groups/(\d+)/grants/(\d+))",
          wrap([this](const auto& req, auto& res, const Peer& peer, const auto& token) {
            const GroupId group = parse_id(req.matches[1]);
            const FileId file = parse_id(req.matches[2]);
            RightSet rights;
            try {
              const auto body = parse_body(req);
              if (!body.contains("rights")) throw Error(ErrorKind::Argument, "missing 'rights'");
              rights = rights_from_json(body["rights"]);
            } catch (const Error& e) {
              if (!service.has_valid_session(token, peer)) throw Error(ErrorKind::Unauthenticated, "no valid session");
              service.record({{}, {}, audit::Operation::AclChange, std::to_string(file),
                              audit::Outcome::Error, e.what()});
              throw;
            }
            service.grant(token, peer, group, file, rights);
            send_json(res, {{"ok", true}});
          }));

    s.Post("/sfs/api/admin/certificates", wrap([this](const auto& req, auto& res,
                                                      const Peer& peer, const auto& token) {
      std::string blob = req.body;
      if (req.is_multipart_form_data() && req.has_file("certificate"))
        blob = req.get_file_value("certificate").content;
      const auto* data = reinterpret_cast<const std::uint8_t*>(blob.data());
      auto bound = service.bind_certificate(token, peer, {data, blob.size()});
      send_json(res, {{"uid", bound.uid}, {"created", bound.created}});
    }));

    s.Delete(R"(/sfs/api/admin/certificates/([^/]+))",
             wrap([this](const auto& req, auto& res, const Peer& peer, const auto& token) {
               service.unbind_certificate(token, peer, std::string(req.matches[1]));
               send_json(res, {{"ok", true}});
             }));
  }
};

HttpsServer::HttpsServer(ServerConfig config, Service& service)
    : impl_(std::make_unique<Impl>(std::move(config), service)) {}

HttpsServer::~HttpsServer() { stop(); }

void HttpsServer::start() {
  if (impl_->http) throw Error(ErrorKind::Fatal, "server already started");
  auto* impl = impl_.get();
  impl->http = std::make_unique<httplib::SSLServer>(
      [impl](SSL_CTX& ctx) { return impl->setup_tls(ctx); });
  if (!impl->http->is_valid()) {
    impl->http.reset();
    throw Error(ErrorKind::Fatal, "TLS context setup failed (keystore or trust anchor)");
  }
  impl->routes();
  int port = impl->config.port;
  if (port == 0) {
    port = impl->http->bind_to_any_port(impl->config.address);
    if (port <= 0) {
      impl->http.reset();
      throw Error(ErrorKind::Fatal, "cannot bind " + impl->config.address);
    }
  } else if (!impl->http->bind_to_port(impl->config.address, port)) {
    impl->http.reset();
    throw Error(ErrorKind::Fatal,
                "cannot bind " + impl->config.address + ":" + std::to_string(port));
  }
  impl->bound_port = port;
  impl->thread = std::thread([impl] { impl->http->listen_after_bind(); });
  impl->http->wait_until_ready();
}

int HttpsServer::port() const noexcept { return impl_->bound_port; }

void HttpsServer::stop() {
  if (!impl_ || !impl_->http) return;
  impl_->http->stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  impl_->http.reset();
}

void HttpsServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

// ---------------------------------------------------------------------------

namespace {

std::filesystem::path required_path(const config::OptionsMap& opts, std::string_view key) {
  auto p = opts.get_path(key);
  if (!p) throw Error(ErrorKind::Load, "missing option '" + std::string(key) + "'");
  return *p;
}

template <typename T>
T numeric_option(const config::OptionsMap& opts, std::string_view key, T fallback) {
  auto text = opts.get(key);
  if (!text) return fallback;
  T v{};
  auto [p, ec] = std::from_chars(text->data(), text->data() + text->size(), v);
  if (ec != std::errc() || p != text->data() + text->size())
    throw Error(ErrorKind::Load, "option '" + std::string(key) + "' is not a number");
  return v;
}

}  // namespace

Deployment::Deployment(const config::OptionsMap& options, Clock clock) {
  const auto anchor_path = required_path(options, config::keys::ca_certificate_filepath);
  auto anchor = ca::Certificate::from_pem(read_file(anchor_path));

  directory_ = std::make_unique<directory::Directory>(
      required_path(options, config::keys::ldap_server));

  filestore::Options fs_opts;
  fs_opts.max_upload_bytes = numeric_option<std::uint64_t>(
      options, config::keys::max_upload_bytes, filestore::default_max_upload_bytes);
  fs_opts.clock = clock;
  files_ = std::make_unique<filestore::FileStore>(required_path(options, config::keys::db_server),
                                                  fs_opts);

  auto audit_path = options.get_path(config::keys::audit_log_filepath)
                        .value_or(options.source_path().parent_path() / "audit.log");
  audit_ = std::make_unique<audit::AuditLog>(audit_path, clock);

  ServiceOptions svc{anchor, std::nullopt};
  svc.crl_path = options.get_path(config::keys::crl_filepath)
                     .value_or(anchor_path.parent_path() / "crl.pem");
  svc.session_idle = std::chrono::minutes(numeric_option<int>(
      options, config::keys::session_idle_minutes, static_cast<int>(default_session_idle.count())));
  svc.clock = clock;
  service_ = std::make_unique<Service>(std::move(svc), *directory_, *files_, *audit_);

  ServerConfig srv{required_path(options, config::keys::keystore_filepath),
                   options.get(config::keys::keystore_password),
                   anchor,
                   options.get(config::keys::listen_address).value_or("0.0.0.0"),
                   numeric_option<int>(options, config::keys::listen_port, default_port),
                   options.get_path(config::keys::webui_root),
                   static_cast<std::size_t>(fs_opts.max_upload_bytes) + (1u << 20)};
  server_ = std::make_unique<HttpsServer>(std::move(srv), *service_);
}

Deployment::~Deployment() {
  if (server_) server_->stop();
}

}  // namespace sfs::server

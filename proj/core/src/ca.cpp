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

#include "sfs/ca.hpp"

#include <openssl/pem.h>
#include <openssl/rsa.h>

#include <algorithm>
#include <arpa/inet.h>

#include "openssl_util.hpp"
#include "sfs/error.hpp"

namespace sfs::ca {

using namespace sfs::detail;

std::string_view to_string(CertKind kind) noexcept {
  return kind == CertKind::Server ? "server" : "client";
}

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::Valid: return "valid";
    case Verdict::Untrusted: return "untrusted";
    case Verdict::Expired: return "expired";
    case Verdict::Revoked: return "revoked";
  }
  return "unknown";
}

std::optional<CertKind> parse_cert_kind(std::string_view text) noexcept {
  if (text == "server") return CertKind::Server;
  if (text == "client") return CertKind::Client;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Certificate

namespace {

std::shared_ptr<X509> share(X509* cert) { return std::shared_ptr<X509>(cert, X509_free); }

std::string name_to_string(const X509_NAME* name) {
  auto bio = memory_bio();
  if (X509_NAME_print_ex(bio.get(), name, 0, XN_FLAG_RFC2253) < 0)
    throw_openssl(ErrorKind::Format, "cannot print distinguished name");
  return bio_contents(bio.get());
}

}  // namespace

Certificate Certificate::from_der(std::span<const std::uint8_t> der) {
  const unsigned char* p = der.data();
  X509* cert = d2i_X509(nullptr, &p, static_cast<long>(der.size()));
  if (!cert) throw_openssl(ErrorKind::Format, "undecodable DER certificate");
  if (p != der.data() + der.size()) {
    X509_free(cert);
    throw Error(ErrorKind::Format, "trailing bytes after DER certificate");
  }
  return Certificate(share(cert));
}

Certificate Certificate::from_pem(std::string_view pem) {
  auto bio = memory_bio(pem);
  X509* cert = PEM_read_bio_X509(bio.get(), nullptr, nullptr, nullptr);
  if (!cert) throw_openssl(ErrorKind::Format, "undecodable PEM certificate");
  return Certificate(share(cert));
}

Certificate Certificate::from_native(X509* cert) {
  if (!cert) throw Error(ErrorKind::Argument, "null certificate");
  X509_up_ref(cert);
  return Certificate(share(cert));
}

Bytes Certificate::der() const {
  const int len = i2d_X509(cert_.get(), nullptr);
  if (len <= 0) throw_openssl(ErrorKind::Format, "cannot encode certificate");
  Bytes out(static_cast<std::size_t>(len));
  unsigned char* p = out.data();
  i2d_X509(cert_.get(), &p);
  return out;
}

std::string Certificate::pem() const {
  auto bio = memory_bio();
  if (PEM_write_bio_X509(bio.get(), cert_.get()) != 1)
    throw_openssl(ErrorKind::Format, "cannot encode certificate");
  return bio_contents(bio.get());
}

Serial Certificate::serial() const {
  std::uint64_t value = 0;
  if (ASN1_INTEGER_get_uint64(&value, X509_get0_serialNumber(cert_.get())) != 1)
    throw_openssl(ErrorKind::Format, "serial number out of range");
  return value;
}

std::string Certificate::subject_cn() const {
  const X509_NAME* name = X509_get_subject_name(cert_.get());
  const int idx = X509_NAME_get_index_by_NID(name, NID_commonName, -1);
  if (idx < 0) return {};
  const ASN1_STRING* data = X509_NAME_ENTRY_get_data(X509_NAME_get_entry(name, idx));
  unsigned char* utf8 = nullptr;
  const int len = ASN1_STRING_to_UTF8(&utf8, data);
  if (len < 0) throw_openssl(ErrorKind::Format, "undecodable common name");
  std::string out(reinterpret_cast<char*>(utf8), static_cast<std::size_t>(len));
  OPENSSL_free(utf8);
  return out;
}

std::string Certificate::subject_dn() const {
  return name_to_string(X509_get_subject_name(cert_.get()));
}

std::string Certificate::issuer_dn() const {
  return name_to_string(X509_get_issuer_name(cert_.get()));
}

Timestamp Certificate::not_before() const { return to_timestamp(X509_get0_notBefore(cert_.get())); }
Timestamp Certificate::not_after() const { return to_timestamp(X509_get0_notAfter(cert_.get())); }

bool Certificate::is_ca() const { return X509_check_ca(cert_.get()) == 1; }

bool Certificate::has_usage(CertKind kind) const {
  const std::uint32_t flags = X509_get_extended_key_usage(cert_.get());
  return (flags & (kind == CertKind::Server ? XKU_SSL_SERVER : XKU_SSL_CLIENT)) != 0 &&
         flags != UINT32_MAX;
}

Sha256Digest Certificate::fingerprint() const { return sha256(der()); }

Bytes Certificate::public_key_der() const {
  EVP_PKEY* pub = X509_get0_pubkey(cert_.get());
  const int len = pub ? i2d_PUBKEY(pub, nullptr) : 0;
  if (len <= 0) throw_openssl(ErrorKind::Format, "certificate has no usable public key");
  Bytes out(static_cast<std::size_t>(len));
  unsigned char* p = out.data();
  i2d_PUBKEY(pub, &p);
  return out;
}

// ---------------------------------------------------------------------------
// PrivateKey

PrivateKey PrivateKey::generate_rsa(int bits) {
  EVP_PKEY* key = EVP_RSA_gen(static_cast<unsigned int>(bits));
  if (!key) throw_openssl(ErrorKind::Fatal, "RSA key generation failed");
  return PrivateKey(std::shared_ptr<EVP_PKEY>(key, EVP_PKEY_free));
}

PrivateKey PrivateKey::from_pem(std::string_view pem, std::optional<std::string_view> passphrase) {
  auto bio = memory_bio(pem);
  std::string pass(passphrase.value_or(""));
  EVP_PKEY* key = PEM_read_bio_PrivateKey(bio.get(), nullptr, nullptr,
                                          const_cast<char*>(pass.c_str()));
  if (!key) throw_openssl(ErrorKind::Format, "undecodable private key or wrong passphrase");
  return PrivateKey(std::shared_ptr<EVP_PKEY>(key, EVP_PKEY_free));
}

std::string PrivateKey::pem(std::optional<std::string_view> passphrase) const {
  auto bio = memory_bio();
  int ok = 0;
  if (passphrase) {
    std::string pass(*passphrase);
    ok = PEM_write_bio_PKCS8PrivateKey(bio.get(), key_.get(), EVP_aes_256_cbc(), nullptr, 0,
                                       nullptr, const_cast<char*>(pass.c_str()));
  } else {
    ok = PEM_write_bio_PrivateKey(bio.get(), key_.get(), nullptr, nullptr, 0, nullptr, nullptr);
  }
  if (ok != 1) throw_openssl(ErrorKind::Fatal, "cannot encode private key");
  return bio_contents(bio.get());
}

Bytes PrivateKey::public_key_der() const {
  const int len = i2d_PUBKEY(key_.get(), nullptr);
  if (len <= 0) throw_openssl(ErrorKind::Fatal, "cannot encode public key");
  Bytes out(static_cast<std::size_t>(len));
  unsigned char* p = out.data();
  i2d_PUBKEY(key_.get(), &p);
  return out;
}

// ---------------------------------------------------------------------------
// Issuance

namespace {

constexpr auto seconds_per_day = std::chrono::hours(24);

void add_extension(X509* cert, X509* issuer, int nid, const std::string& value) {
  X509V3_CTX ctx;
  X509V3_set_ctx_nodb(&ctx);
  X509V3_set_ctx(&ctx, issuer, cert, nullptr, nullptr, 0);
  X509ExtPtr ext(X509V3_EXT_conf_nid(nullptr, &ctx, nid, value.c_str()));
  if (!ext || X509_add_ext(cert, ext.get(), -1) != 1)
    throw_openssl(ErrorKind::Issuance, "cannot add extension " + value);
}

X509NamePtr make_name(std::string_view cn) {
  X509NamePtr name(X509_NAME_new());
  if (!name ||
      X509_NAME_add_entry_by_txt(name.get(), "CN", MBSTRING_UTF8,
                                 reinterpret_cast<const unsigned char*>(cn.data()),
                                 static_cast<int>(cn.size()), -1, 0) != 1)
    throw_openssl(ErrorKind::Argument, "invalid common name");
  return name;
}

bool is_ip_literal(const std::string& s) {
  unsigned char buf[16];
  return inet_pton(AF_INET, s.c_str(), buf) == 1 || inet_pton(AF_INET6, s.c_str(), buf) == 1;
}

bool is_dns_name(std::string_view s) {
  if (s.empty() || s.size() > 253) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '-' || c == '.' || c == '*';
  });
}

X509Ptr new_certificate(Serial serial, const X509_NAME* subject, const X509_NAME* issuer,
                        EVP_PKEY* subject_key, Timestamp not_before, Timestamp not_after) {
  X509Ptr cert(X509_new());
  if (!cert) throw_openssl(ErrorKind::Fatal, "X509_new");
  Asn1IntegerPtr sn(ASN1_INTEGER_new());
  auto nb = to_asn1_time(not_before);
  auto na = to_asn1_time(not_after);
  if (!sn || ASN1_INTEGER_set_uint64(sn.get(), serial) != 1 ||
      X509_set_version(cert.get(), X509_VERSION_3) != 1 ||
      X509_set_serialNumber(cert.get(), sn.get()) != 1 ||
      X509_set_subject_name(cert.get(), subject) != 1 ||
      X509_set_issuer_name(cert.get(), issuer) != 1 ||
      X509_set1_notBefore(cert.get(), nb.get()) != 1 ||
      X509_set1_notAfter(cert.get(), na.get()) != 1 ||
      X509_set_pubkey(cert.get(), subject_key) != 1)
    throw_openssl(ErrorKind::Issuance, "cannot populate certificate");
  return cert;
}

Timestamp whole_seconds(Timestamp t) {
  return std::chrono::time_point_cast<std::chrono::seconds>(t);
}

}  // namespace

CaState init_ca(std::string_view subject_cn, int validity_days, Timestamp now) {
  if (validity_days < 1) throw Error(ErrorKind::Argument, "validity_days must be at least 1");
  if (subject_cn.empty()) throw Error(ErrorKind::Argument, "subject CN must not be empty");

  auto key = PrivateKey::generate_rsa(2048);
  auto name = make_name(subject_cn);
  now = whole_seconds(now);
  auto cert = new_certificate(root_serial, name.get(), name.get(), key.native(), now,
                              now + validity_days * seconds_per_day);
  add_extension(cert.get(), cert.get(), NID_basic_constraints, "critical,CA:TRUE");
  add_extension(cert.get(), cert.get(), NID_key_usage, "critical,keyCertSign,cRLSign");
  add_extension(cert.get(), cert.get(), NID_subject_key_identifier, "hash");
  if (X509_sign(cert.get(), key.native(), EVP_sha256()) <= 0)
    throw_openssl(ErrorKind::Fatal, "cannot self-sign root");

  return CaState{key, Certificate::from_native(cert.get()), root_serial + 1, {}};
}

IssuedCertificate issue_certificate(CaState& ca, std::string_view subject_cn, CertKind kind,
                                    int validity_days, Timestamp now) {
  if (subject_cn.empty()) throw Error(ErrorKind::Argument, "subject CN must not be empty");
  if (validity_days < 1) throw Error(ErrorKind::Argument, "validity_days must be at least 1");
  now = whole_seconds(now);
  const Timestamp root_expiry = ca.root_certificate.not_after();
  if (now > root_expiry || now < ca.root_certificate.not_before())
    throw Error(ErrorKind::Issuance, "root certificate is outside its validity period");

  auto key = PrivateKey::generate_rsa(2048);
  auto name = make_name(subject_cn);
  X509* root = ca.root_certificate.native();
  const Serial serial = ca.next_serial;
  const Timestamp expiry = std::min(now + validity_days * seconds_per_day, root_expiry);
  auto cert = new_certificate(serial, name.get(), X509_get_subject_name(root), key.native(), now,
                              expiry);

  add_extension(cert.get(), root, NID_basic_constraints, "critical,CA:FALSE");
  add_extension(cert.get(), root, NID_subject_key_identifier, "hash");
  add_extension(cert.get(), root, NID_authority_key_identifier, "keyid:always");
  if (kind == CertKind::Server) {
    add_extension(cert.get(), root, NID_key_usage, "critical,digitalSignature,keyEncipherment");
    add_extension(cert.get(), root, NID_ext_key_usage, "serverAuth");
    const std::string cn(subject_cn);
    if (is_ip_literal(cn))
      add_extension(cert.get(), root, NID_subject_alt_name, "IP:" + cn);
    else if (is_dns_name(cn))
      add_extension(cert.get(), root, NID_subject_alt_name, "DNS:" + cn);
  } else {
    add_extension(cert.get(), root, NID_key_usage, "critical,digitalSignature");
    add_extension(cert.get(), root, NID_ext_key_usage, "clientAuth");
  }
  if (X509_sign(cert.get(), ca.root_key.native(), EVP_sha256()) <= 0)
    throw_openssl(ErrorKind::Issuance, "cannot sign certificate");

  ca.next_serial = serial + 1;
  return IssuedCertificate{Certificate::from_native(cert.get()), key, serial, kind,
                           std::string(subject_cn)};
}

void revoke_certificate(CaState& ca, Serial serial, Timestamp now) {
  if (serial <= root_serial || serial >= ca.next_serial)
    throw Error(ErrorKind::NotFound, "serial " + std::to_string(serial) + " was never issued");
  if (ca.revoked.contains(serial))
    throw Error(ErrorKind::AlreadyRevoked, "serial " + std::to_string(serial) + " already revoked");
  ca.revoked.emplace(serial, whole_seconds(now));
}

// ---------------------------------------------------------------------------
// CRL

bool RevocationList::contains(Serial serial) const noexcept {
  return std::binary_search(entries.begin(), entries.end(), RevocationEntry{serial, {}},
                            [](const auto& a, const auto& b) { return a.serial < b.serial; });
}

RevocationList export_crl(const CaState& ca, Timestamp now) {
  RevocationList crl;
  crl.issuer = ca.root_certificate.subject_dn();
  crl.this_update = whole_seconds(now);
  for (const auto& [serial, at] : ca.revoked) crl.entries.push_back({serial, at});
  return crl;
}

std::string crl_pem(const CaState& ca, Timestamp now) {
  X509CrlPtr crl(X509_CRL_new());
  if (!crl) throw_openssl(ErrorKind::Fatal, "X509_CRL_new");
  X509* root = ca.root_certificate.native();
  auto last = to_asn1_time(now);
  auto next = to_asn1_time(now + 30 * seconds_per_day);
  if (X509_CRL_set_version(crl.get(), 1) != 1 ||
      X509_CRL_set_issuer_name(crl.get(), X509_get_subject_name(root)) != 1 ||
      X509_CRL_set1_lastUpdate(crl.get(), last.get()) != 1 ||
      X509_CRL_set1_nextUpdate(crl.get(), next.get()) != 1)
    throw_openssl(ErrorKind::Fatal, "cannot populate CRL");

  for (const auto& [serial, at] : ca.revoked) {
    X509_REVOKED* entry = X509_REVOKED_new();
    Asn1IntegerPtr sn(ASN1_INTEGER_new());
    auto when = to_asn1_time(at);
    if (!entry || !sn || ASN1_INTEGER_set_uint64(sn.get(), serial) != 1 ||
        X509_REVOKED_set_serialNumber(entry, sn.get()) != 1 ||
        X509_REVOKED_set_revocationDate(entry, when.get()) != 1 ||
        X509_CRL_add0_revoked(crl.get(), entry) != 1) {
      X509_REVOKED_free(entry);
      throw_openssl(ErrorKind::Fatal, "cannot add CRL entry");
    }
  }
  X509_CRL_sort(crl.get());
  if (X509_CRL_sign(crl.get(), ca.root_key.native(), EVP_sha256()) <= 0)
    throw_openssl(ErrorKind::Fatal, "cannot sign CRL");

  auto bio = memory_bio();
  if (PEM_write_bio_X509_CRL(bio.get(), crl.get()) != 1)
    throw_openssl(ErrorKind::Fatal, "cannot encode CRL");
  return bio_contents(bio.get());
}

RevocationList parse_crl(std::string_view pem, const Certificate& issuer) {
  auto bio = memory_bio(pem);
  X509CrlPtr crl(PEM_read_bio_X509_CRL(bio.get(), nullptr, nullptr, nullptr));
  if (!crl) throw_openssl(ErrorKind::Format, "undecodable CRL");

  X509* root = issuer.native();
  if (X509_NAME_cmp(X509_CRL_get_issuer(crl.get()), X509_get_subject_name(root)) != 0)
    throw Error(ErrorKind::Rejected, "CRL issuer does not match the root certificate");
  EVP_PKEY* pub = X509_get0_pubkey(root);
  if (!pub || X509_CRL_verify(crl.get(), pub) != 1)
    throw_openssl(ErrorKind::Rejected, "CRL signature does not verify");

  RevocationList out;
  out.issuer = name_to_string(X509_CRL_get_issuer(crl.get()));
  out.this_update = to_timestamp(X509_CRL_get0_lastUpdate(crl.get()));
  STACK_OF(X509_REVOKED)* revoked = X509_CRL_get_REVOKED(crl.get());
  const int n = revoked ? sk_X509_REVOKED_num(revoked) : 0;
  for (int i = 0; i < n; ++i) {
    const X509_REVOKED* r = sk_X509_REVOKED_value(revoked, i);
    std::uint64_t serial = 0;
    if (ASN1_INTEGER_get_uint64(&serial, X509_REVOKED_get0_serialNumber(r)) != 1)
      throw_openssl(ErrorKind::Format, "CRL serial out of range");
    out.entries.push_back({serial, to_timestamp(X509_REVOKED_get0_revocationDate(r))});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const auto& a, const auto& b) { return a.serial < b.serial; });
  out.entries.erase(std::unique(out.entries.begin(), out.entries.end(),
                                [](const auto& a, const auto& b) { return a.serial == b.serial; }),
                    out.entries.end());
  return out;
}

// ---------------------------------------------------------------------------
// Verification and encoding

Verdict verify_chain(const Certificate& cert, const Certificate& root, const RevocationList& crl,
                     Timestamp now) {
  if (crl.contains(cert.serial())) return Verdict::Revoked;

  X509* leaf = cert.native();
  X509* anchor = root.native();
  if (X509_NAME_cmp(X509_get_issuer_name(leaf), X509_get_subject_name(anchor)) != 0)
    return Verdict::Untrusted;
  EVP_PKEY* pub = X509_get0_pubkey(anchor);
  if (!pub || X509_verify(leaf, pub) != 1) {
    ERR_clear_error();
    return Verdict::Untrusted;
  }
  if (!root.is_ca()) return Verdict::Untrusted;

  for (const Certificate* c : {&cert, &root}) {
    if (now < c->not_before() || now > c->not_after()) return Verdict::Expired;
  }
  return Verdict::Valid;
}

Verdict verify_chain(std::span<const std::uint8_t> cert_der, const Certificate& root,
                     const RevocationList& crl, Timestamp now) {
  return verify_chain(Certificate::from_der(cert_der), root, crl, now);
}

Bytes encode_certificate(const Certificate& cert, Encoding format) {
  if (format == Encoding::Der) return cert.der();
  return to_bytes(cert.pem());
}

Certificate decode_certificate(std::span<const std::uint8_t> data, Encoding format) {
  if (format == Encoding::Der) return Certificate::from_der(data);
  return Certificate::from_pem(
      std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
}

Certificate decode_certificate_auto(std::span<const std::uint8_t> data) {
  const std::string_view text(reinterpret_cast<const char*>(data.data()), data.size());
  if (text.find("-----BEGIN CERTIFICATE-----") != std::string_view::npos)
    return Certificate::from_pem(text);
  return Certificate::from_der(data);
}

}  // namespace sfs::ca

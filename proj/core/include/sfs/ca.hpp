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

#include <openssl/types.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sfs/crypto.hpp"
#include "sfs/encoding.hpp"
#include "sfs/time.hpp"

// Internal certificate authority: a single self-signed RSA-2048 root that
// signs server and client leaf certificates with SHA-256 and publishes an
// X.509 v2 CRL. No intermediates.
namespace sfs::ca {

using Serial = std::uint64_t;

enum class CertKind { Server, Client };
enum class Encoding { Der, Pem };
enum class Verdict { Valid, Untrusted, Expired, Revoked };

std::string_view to_string(CertKind kind) noexcept;
std::string_view to_string(Verdict verdict) noexcept;
std::optional<CertKind> parse_cert_kind(std::string_view text) noexcept;

/// Immutable X.509 certificate. Copies share the parsed structure.
class Certificate {
 public:
  static Certificate from_der(std::span<const std::uint8_t> der);
  static Certificate from_pem(std::string_view pem);
  /// Wraps an existing handle, taking a new reference.
  static Certificate from_native(X509* cert);

  Bytes der() const;
  std::string pem() const;

  Serial serial() const;
  std::string subject_cn() const;
  std::string subject_dn() const;
  std::string issuer_dn() const;
  Timestamp not_before() const;
  Timestamp not_after() const;
  bool is_ca() const;
  /// Whether extendedKeyUsage carries serverAuth (Server) or clientAuth (Client).
  bool has_usage(CertKind kind) const;
  /// DER of the SubjectPublicKeyInfo.
  Bytes public_key_der() const;
  /// SHA-256 over the DER encoding.
  Sha256Digest fingerprint() const;

  X509* native() const noexcept { return cert_.get(); }

  friend bool operator==(const Certificate& a, const Certificate& b) { return a.der() == b.der(); }

 private:
  explicit Certificate(std::shared_ptr<X509> cert) : cert_(std::move(cert)) {}
  std::shared_ptr<X509> cert_;
};

class PrivateKey {
 public:
  static PrivateKey generate_rsa(int bits = 2048);
  /// Throws Error(Format) on undecodable input or a wrong passphrase.
  static PrivateKey from_pem(std::string_view pem, std::optional<std::string_view> passphrase = {});

  /// PKCS#8 PEM; encrypted with AES-256-CBC when a passphrase is given.
  std::string pem(std::optional<std::string_view> passphrase = {}) const;
  /// DER of the SubjectPublicKeyInfo.
  Bytes public_key_der() const;

  EVP_PKEY* native() const noexcept { return key_.get(); }

 private:
  explicit PrivateKey(std::shared_ptr<EVP_PKEY> key) : key_(std::move(key)) {}
  std::shared_ptr<EVP_PKEY> key_;
};

struct RevocationEntry {
  Serial serial;
  Timestamp revoked_at;
  friend bool operator==(const RevocationEntry&, const RevocationEntry&) = default;
};

/// Decoded view of a CRL: entries sorted by serial, no duplicates.
struct RevocationList {
  std::string issuer;
  std::vector<RevocationEntry> entries;
  Timestamp this_update{};

  bool contains(Serial serial) const noexcept;
};

struct CaState {
  PrivateKey root_key;
  Certificate root_certificate;
  Serial next_serial = 2;
  std::map<Serial, Timestamp> revoked;
};

struct IssuedCertificate {
  Certificate certificate;
  PrivateKey private_key;
  Serial serial;
  CertKind kind;
  std::string subject_cn;
};

inline constexpr Serial root_serial = 1;

/// New key pair and self-signed root (serial 1, CA:TRUE). next_serial = 2.
CaState init_ca(std::string_view subject_cn, int validity_days, Timestamp now);

/// Issues a leaf with serial `ca.next_serial` and advances the counter. The
/// leaf's notAfter never extends past the root's. Client certificates carry
/// clientAuth usage, server certificates serverAuth plus a subjectAltName
/// for the CN.
IssuedCertificate issue_certificate(CaState& ca, std::string_view subject_cn, CertKind kind,
                                    int validity_days, Timestamp now);

/// Throws NotFound for a serial never issued (including the root) and
/// AlreadyRevoked on a second revocation.
void revoke_certificate(CaState& ca, Serial serial, Timestamp now);

RevocationList export_crl(const CaState& ca, Timestamp now);

/// Signed X.509 v2 CRL in PEM.
std::string crl_pem(const CaState& ca, Timestamp now);

/// Parses a PEM CRL and checks its signature against `issuer`. Throws
/// Error(Format) on undecodable input, Error(Rejected) on a bad signature.
RevocationList parse_crl(std::string_view pem, const Certificate& issuer);

/// Revocation first, then signature and issuer, then validity window.
Verdict verify_chain(const Certificate& cert, const Certificate& root, const RevocationList& crl,
                     Timestamp now);
/// As above on DER bytes; undecodable bytes throw Error(Format).
Verdict verify_chain(std::span<const std::uint8_t> cert_der, const Certificate& root,
                     const RevocationList& crl, Timestamp now);

Bytes encode_certificate(const Certificate& cert, Encoding format);
Certificate decode_certificate(std::span<const std::uint8_t> data, Encoding format);
/// PEM if the data carries a BEGIN marker, otherwise DER.
Certificate decode_certificate_auto(std::span<const std::uint8_t> data);

}  // namespace sfs::ca

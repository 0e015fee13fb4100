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

#include "sfs/ca.hpp"

// On-disk layout of a CA directory:
//
//   root.key   PEM private key, mode 0600
//   root.crt   PEM root certificate
//   serial     next serial, decimal text
//   crl.pem    signed CRL; revocation times live here
//   .lock      flock(2) target for mutating commands
namespace sfs::ca {

inline constexpr const char* root_key_file = "root.key";
inline constexpr const char* root_cert_file = "root.crt";
inline constexpr const char* serial_file = "serial";
inline constexpr const char* crl_file = "crl.pem";
inline constexpr const char* lock_file = ".lock";

/// Exclusive advisory lock on a CA directory, held for the object's lifetime.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  int fd_ = -1;
};

bool ca_exists(const std::filesystem::path& dir);

/// Writes every file of the layout atomically (temp file + rename) and
/// regenerates the CRL at `now`.
void save_ca(const CaState& ca, const std::filesystem::path& dir, Timestamp now);

/// Throws Error(Load) when files are missing, Error(Format)/Error(Rejected)
/// on corrupt contents or a CRL not signed by the root.
CaState load_ca(const std::filesystem::path& dir);

/// Certificate PEM followed by the private key PEM, mode 0600.
void write_issued(const IssuedCertificate& issued, const std::filesystem::path& out);

}  // namespace sfs::ca

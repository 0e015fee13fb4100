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

#include "sfs/ca_store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "sfs/error.hpp"
#include "sfs/fileio.hpp"

namespace sfs::ca {

namespace fs = std::filesystem;

constexpr auto owner_only = fs::perms::owner_read | fs::perms::owner_write;

DirectoryLock::DirectoryLock(const fs::path& dir) {
  const auto path = (dir / lock_file).string();
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
  if (fd_ < 0)
    throw Error(ErrorKind::Storage, "cannot open lock " + path + ": " + std::strerror(errno));
  while (::flock(fd_, LOCK_EX) != 0) {
    if (errno == EINTR) continue;
    ::close(fd_);
    throw Error(ErrorKind::Storage, "cannot lock " + path + ": " + std::strerror(errno));
  }
}

DirectoryLock::~DirectoryLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

bool ca_exists(const fs::path& dir) {
  return fs::exists(dir / root_key_file) || fs::exists(dir / root_cert_file);
}

void save_ca(const CaState& ca, const fs::path& dir, Timestamp now) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Storage, "cannot create " + dir.string() + ": " + ec.message());
  write_file_atomic(dir / root_key_file, ca.root_key.pem(), owner_only);
  write_file_atomic(dir / root_cert_file, ca.root_certificate.pem());
  write_file_atomic(dir / serial_file, std::to_string(ca.next_serial) + "\n");
  write_file_atomic(dir / crl_file, crl_pem(ca, now));
}

CaState load_ca(const fs::path& dir) {
  auto key = PrivateKey::from_pem(read_file(dir / root_key_file));
  auto root = Certificate::from_pem(read_file(dir / root_cert_file));
  if (key.public_key_der() != root.public_key_der())
    throw Error(ErrorKind::Format, "root key does not match root certificate");

  const std::string serial_text = read_file(dir / serial_file);
  Serial next = 0;
  const char* first = serial_text.data();
  const char* last = first + serial_text.size();
  while (last > first && (last[-1] == '\n' || last[-1] == '\r' || last[-1] == ' ')) --last;
  auto [ptr, err] = std::from_chars(first, last, next);
  if (err != std::errc{} || ptr != last || next <= root_serial)
    throw Error(ErrorKind::Format, "corrupt serial file in " + dir.string());

  CaState state{key, root, next, {}};
  const auto crl = parse_crl(read_file(dir / crl_file), root);
  for (const auto& e : crl.entries) {
    if (e.serial <= root_serial || e.serial >= next)
      throw Error(ErrorKind::Format, "CRL lists serial " + std::to_string(e.serial) +
                                         " which was never issued");
    state.revoked.emplace(e.serial, e.revoked_at);
  }
  return state;
}

void write_issued(const IssuedCertificate& issued, const fs::path& out) {
  if (out.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(out.parent_path(), ec);
  }
  write_file_atomic(out, issued.certificate.pem() + issued.private_key.pem(), owner_only);
}

}  // namespace sfs::ca

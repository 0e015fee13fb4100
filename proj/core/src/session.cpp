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

#include "sfs/session.hpp"

#include "sfs/error.hpp"

namespace sfs::server {

SessionTable::SessionTable(Clock clock, std::chrono::minutes idle)
    : clock_(std::move(clock)), idle_(idle) {}

Session SessionTable::create(std::string_view uid, filestore::Role role,
                             const Sha256Digest& fingerprint) {
  const auto now = clock_();
  std::lock_guard lock(mutex_);
  purge_expired_locked(now);
  std::string token;
  do {
    token = hex_encode(random_bytes(32));
  } while (sessions_.contains(token));
  Session s{token, std::string(uid), role, fingerprint, now, now + idle_};
  sessions_.emplace(token, s);
  return s;
}

Session SessionTable::touch(std::string_view token, const Sha256Digest& fingerprint) {
  const auto now = clock_();
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) throw Error(ErrorKind::Unauthenticated, "no such session");
  if (now >= it->second.expires_at) {
    sessions_.erase(it);
    throw Error(ErrorKind::Unauthenticated, "session expired");
  }
  if (!constant_time_equal(it->second.client_cert_fingerprint, fingerprint))
    throw Error(ErrorKind::Unauthenticated, "session is bound to a different client certificate");
  it->second.expires_at = now + idle_;
  return it->second;
}

void SessionTable::invalidate(std::string_view token) {
  const auto now = clock_();
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(token);
  if (it == sessions_.end() || now >= it->second.expires_at) {
    if (it != sessions_.end()) sessions_.erase(it);
    throw Error(ErrorKind::Unauthenticated, "no such session");
  }
  sessions_.erase(it);
}

void SessionTable::invalidate_user(std::string_view uid) {
  std::lock_guard lock(mutex_);
  std::erase_if(sessions_, [&](const auto& kv) { return kv.second.uid == uid; });
}

void SessionTable::invalidate_certificate(const Sha256Digest& fingerprint) {
  std::lock_guard lock(mutex_);
  std::erase_if(sessions_,
                [&](const auto& kv) { return kv.second.client_cert_fingerprint == fingerprint; });
}

std::size_t SessionTable::live_count() const {
  const auto now = clock_();
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (const auto& [_, s] : sessions_)
    if (now < s.expires_at) ++n;
  return n;
}

void SessionTable::purge_expired_locked(Timestamp now) {
  std::erase_if(sessions_, [&](const auto& kv) { return now >= kv.second.expires_at; });
}

}  // namespace sfs::server

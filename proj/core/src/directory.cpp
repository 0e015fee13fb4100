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

#include "sfs/directory.hpp"

#include <mutex>

#include "sfs/error.hpp"
#include "sfs/fileio.hpp"

namespace sfs::directory {

namespace fs = std::filesystem;

Directory::Directory(fs::path path) : path_(std::move(path)) {
  if (fs::exists(*path_)) {
    for (auto& e : parse_ldif(read_file(*path_))) {
      const std::string uid = e.uid;
      if (!entries_.emplace(uid, std::move(e)).second)
        throw Error(ErrorKind::Parse, "duplicate uid '" + uid + "' in " + path_->string());
    }
  }
}

void Directory::validate(const DirectoryEntry& entry) {
  if (entry.uid.empty()) throw Error(ErrorKind::Argument, "uid must not be empty");
  if (!credentials::is_valid_ssha(entry.user_password))
    throw Error(ErrorKind::Argument, "userPassword must be an {SSHA} hash");
}

void Directory::add_user(const DirectoryEntry& entry) {
  validate(entry);
  std::unique_lock lock(mutex_);
  if (entries_.contains(entry.uid))
    throw Error(ErrorKind::Conflict, "uid '" + entry.uid + "' already exists");
  entries_.emplace(entry.uid, entry);
  try {
    persist_locked();
  } catch (...) {
    entries_.erase(entry.uid);
    throw;
  }
}

void Directory::delete_user(std::string_view uid) {
  std::unique_lock lock(mutex_);
  auto it = entries_.find(uid);
  if (it == entries_.end()) throw Error(ErrorKind::NotFound, "no such uid '" + std::string(uid) + "'");
  DirectoryEntry removed = std::move(it->second);
  entries_.erase(it);
  try {
    persist_locked();
  } catch (...) {
    entries_.emplace(removed.uid, std::move(removed));
    throw;
  }
}

credentials::UserCredentials Directory::get_credentials(std::string_view uid) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(uid);
  if (it == entries_.end()) throw Error(ErrorKind::NotFound, "no such uid '" + std::string(uid) + "'");
  const auto& e = it->second;
  return credentials::UserCredentials{e.uid, e.user_password, e.user_certificate};
}

void Directory::set_certificate(std::string_view uid, std::optional<Bytes> certificate) {
  std::unique_lock lock(mutex_);
  auto it = entries_.find(uid);
  if (it == entries_.end()) throw Error(ErrorKind::NotFound, "no such uid '" + std::string(uid) + "'");
  std::swap(it->second.user_certificate, certificate);
  try {
    persist_locked();
  } catch (...) {
    std::swap(it->second.user_certificate, certificate);
    throw;
  }
}

void Directory::set_password_hash(std::string_view uid, std::string_view ssha) {
  if (!credentials::is_valid_ssha(ssha))
    throw Error(ErrorKind::Argument, "userPassword must be an {SSHA} hash");
  std::unique_lock lock(mutex_);
  auto it = entries_.find(uid);
  if (it == entries_.end()) throw Error(ErrorKind::NotFound, "no such uid '" + std::string(uid) + "'");
  std::string previous = std::exchange(it->second.user_password, std::string(ssha));
  try {
    persist_locked();
  } catch (...) {
    it->second.user_password = std::move(previous);
    throw;
  }
}

bool Directory::contains(std::string_view uid) const {
  std::shared_lock lock(mutex_);
  return entries_.find(uid) != entries_.end();
}

std::vector<std::string> Directory::uids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [uid, _] : entries_) out.push_back(uid);
  return out;
}

std::size_t Directory::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::string Directory::export_ldif() const {
  std::shared_lock lock(mutex_);
  std::vector<DirectoryEntry> all;
  all.reserve(entries_.size());
  for (const auto& [_, e] : entries_) all.push_back(e);
  return render_ldif(all);
}

void Directory::import_ldif(std::string_view text) {
  auto parsed = parse_ldif(text);
  std::unique_lock lock(mutex_);
  std::map<std::string, DirectoryEntry, std::less<>> staged;
  for (auto& e : parsed) {
    if (entries_.contains(e.uid) || staged.contains(e.uid))
      throw Error(ErrorKind::Conflict, "uid '" + e.uid + "' already exists");
    std::string uid = e.uid;
    staged.emplace(std::move(uid), std::move(e));
  }
  auto before = entries_;
  entries_.merge(staged);
  try {
    persist_locked();
  } catch (...) {
    entries_ = std::move(before);
    throw;
  }
}

void Directory::persist() const {
  std::shared_lock lock(mutex_);
  persist_locked();
}

void Directory::persist_locked() const {
  if (!path_) return;
  std::vector<DirectoryEntry> all;
  all.reserve(entries_.size());
  for (const auto& [_, e] : entries_) all.push_back(e);
  write_file_atomic(*path_, render_ldif(all),
                    fs::perms::owner_read | fs::perms::owner_write);
}

}  // namespace sfs::directory

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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sfs/encoding.hpp"
#include "sfs/time.hpp"

// Users, groups, files and group grants, plus the content blobs they refer
// to. Sharing is ownership + group grants + administrator status; there are
// no per-user grants. The store is policy-free: callers decide whether a
// given principal may invoke an operation, effective_rights says what the
// ACL allows.
namespace sfs::filestore {

enum class Role { Administrator, Normal };

std::string_view to_string(Role role) noexcept;
std::optional<Role> parse_role(std::string_view text) noexcept;

enum class Right : std::uint8_t { View = 1, Download = 2, Delete = 4 };

std::string_view to_string(Right right) noexcept;
std::optional<Right> parse_right(std::string_view text) noexcept;

class RightSet {
 public:
  constexpr RightSet() = default;
  constexpr RightSet(std::initializer_list<Right> rights) {
    for (auto r : rights) bits_ |= static_cast<std::uint8_t>(r);
  }

  static constexpr RightSet all() { return {Right::View, Right::Download, Right::Delete}; }
  static constexpr RightSet from_bits(std::uint8_t bits) {
    RightSet s;
    s.bits_ = bits & 7u;
    return s;
  }

  constexpr bool contains(Right r) const { return (bits_ & static_cast<std::uint8_t>(r)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  constexpr void insert(Right r) { bits_ |= static_cast<std::uint8_t>(r); }

  /// download implies view.
  constexpr RightSet normalized() const {
    RightSet s = *this;
    if (s.contains(Right::Download)) s.insert(Right::View);
    return s;
  }

  constexpr RightSet operator|(RightSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr RightSet& operator|=(RightSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  friend constexpr bool operator==(RightSet, RightSet) = default;

  /// Names in canonical order: view, download, delete.
  std::vector<std::string> names() const;

 private:
  std::uint8_t bits_ = 0;
};

using FileId = std::int64_t;
using GroupId = std::int64_t;

struct UserRecord {
  std::string uid;
  Role role;
  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

struct GroupRecord {
  GroupId group_id;
  std::string name;
  std::set<std::string> members;
  friend bool operator==(const GroupRecord&, const GroupRecord&) = default;
};

struct FileRecord {
  FileId file_id;
  std::string name;
  std::string owner_uid;
  std::uint64_t size_bytes;
  Timestamp uploaded_at;
  std::string content_ref;  ///< hex SHA-256 of the content
  friend bool operator==(const FileRecord&, const FileRecord&) = default;
};

struct GroupGrant {
  GroupId group_id;
  FileId file_id;
  RightSet rights;
  friend bool operator==(const GroupGrant&, const GroupGrant&) = default;
};

struct FileWithRights {
  FileRecord file;
  RightSet rights;
};

inline constexpr std::uint64_t default_max_upload_bytes = 64ull * 1024 * 1024;

struct Options {
  std::uint64_t max_upload_bytes = default_max_upload_bytes;
  Clock clock = system_clock();
};

class FileStore {
 public:
  /// Opens (creating if needed) `root/filestore.db` and `root/blobs/`.
  FileStore(const std::filesystem::path& root, Options options = {});
  /// Volatile store: in-memory database and blobs.
  static std::unique_ptr<FileStore> in_memory(Options options = {});

  ~FileStore();
  FileStore(const FileStore&) = delete;
  FileStore& operator=(const FileStore&) = delete;

  // users
  void create_user(std::string_view uid, Role role);
  /// Refuses with OwnershipConflict while the user owns files; removes the
  /// user from every group.
  void delete_user(std::string_view uid);
  void set_role(std::string_view uid, Role role);
  std::optional<UserRecord> find_user(std::string_view uid) const;
  std::vector<UserRecord> list_users() const;

  // groups
  GroupId create_group(std::string_view name);
  /// Also drops the group's memberships and grants.
  void delete_group(GroupId group);
  /// Idempotent.
  void add_member(GroupId group, std::string_view uid);
  void remove_member(GroupId group, std::string_view uid);
  GroupRecord get_group(GroupId group) const;
  std::vector<GroupRecord> list_groups() const;

  // grants
  /// Replaces the (group, file) grant with `rights` normalized; an empty set
  /// deletes it.
  void grant(GroupId group, FileId file, RightSet rights);
  /// Replaces every grant on `file` in one transaction.
  void replace_grants(FileId file, const std::vector<std::pair<GroupId, RightSet>>& grants);
  std::vector<GroupGrant> grants_for_file(FileId file) const;
  std::vector<GroupGrant> all_grants() const;

  /// Administrator or owner: everything. Otherwise the union of the grants
  /// of every group containing `uid`. Unknown uids have no rights.
  RightSet effective_rights(std::string_view uid, FileId file) const;

  // files
  /// Owner gets implicit full rights; no group grants are created.
  FileRecord store_file(std::string_view uploader_uid, std::string_view name,
                        std::span<const std::uint8_t> content);
  /// Throws NotFound, or Storage if the blob fails its integrity check.
  Bytes fetch_content(FileId file) const;
  void delete_file(FileId file);
  FileRecord get_file(FileId file) const;
  std::vector<FileRecord> list_files() const;
  /// Files with non-empty effective rights for `uid`, ordered by id.
  std::vector<FileWithRights> list_files_for(std::string_view uid) const;

  std::uint64_t max_upload_bytes() const noexcept { return options_.max_upload_bytes; }

 private:
  struct Impl;
  FileStore(std::unique_ptr<Impl> impl, Options options);
  static std::unique_ptr<Impl> open_impl(const std::string& db_path,
                                         std::optional<std::filesystem::path> blob_dir);

  std::unique_ptr<Impl> impl_;
  Options options_;
};

}  // namespace sfs::filestore

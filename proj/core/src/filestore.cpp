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

#include "sfs/filestore.hpp"

#include <sqlite3.h>

#include <map>
#include <mutex>

#include "sfs/crypto.hpp"
#include "sfs/error.hpp"
#include "sfs/fileio.hpp"

namespace sfs::filestore {

namespace fs = std::filesystem;

std::string_view to_string(Role role) noexcept {
  return role == Role::Administrator ? "administrator" : "normal";
}

std::optional<Role> parse_role(std::string_view text) noexcept {
  if (text == "administrator") return Role::Administrator;
  if (text == "normal") return Role::Normal;
  return std::nullopt;
}

std::string_view to_string(Right right) noexcept {
  switch (right) {
    case Right::View: return "view";
    case Right::Download: return "download";
    case Right::Delete: return "delete";
  }
  return "unknown";
}

std::optional<Right> parse_right(std::string_view text) noexcept {
  if (text == "view") return Right::View;
  if (text == "download") return Right::Download;
  if (text == "delete") return Right::Delete;
  return std::nullopt;
}

std::vector<std::string> RightSet::names() const {
  std::vector<std::string> out;
  for (auto r : {Right::View, Right::Download, Right::Delete})
    if (contains(r)) out.emplace_back(to_string(r));
  return out;
}

namespace {

// Schema mirrors the entity-relationship model: users, groups, files and
// the two relations group_user and group_files.
constexpr const char* schema_sql = R"sql(
PRAGMA foreign_keys = ON;
CREATE TABLE IF NOT EXISTS users (
  uid   TEXT PRIMARY KEY NOT NULL,
  role  TEXT NOT NULL CHECK (role IN ('administrator', 'normal'))
);
CREATE TABLE IF NOT EXISTS groups (
  group_id INTEGER PRIMARY KEY AUTOINCREMENT,
  name     TEXT NOT NULL UNIQUE CHECK (length(name) > 0)
);
CREATE TABLE IF NOT EXISTS files (
  file_id     INTEGER PRIMARY KEY AUTOINCREMENT,
  name        TEXT NOT NULL,
  owner_uid   TEXT NOT NULL REFERENCES users(uid) ON DELETE RESTRICT,
  size_bytes  INTEGER NOT NULL CHECK (size_bytes >= 0),
  uploaded_at INTEGER NOT NULL,
  content_ref TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS group_user (
  group_id INTEGER NOT NULL REFERENCES groups(group_id) ON DELETE CASCADE,
  uid      TEXT NOT NULL REFERENCES users(uid) ON DELETE CASCADE,
  PRIMARY KEY (group_id, uid)
);
CREATE TABLE IF NOT EXISTS group_files (
  group_id     INTEGER NOT NULL REFERENCES groups(group_id) ON DELETE CASCADE,
  file_id      INTEGER NOT NULL REFERENCES files(file_id) ON DELETE CASCADE,
  can_view     INTEGER NOT NULL CHECK (can_view IN (0, 1)),
  can_download INTEGER NOT NULL CHECK (can_download IN (0, 1)),
  can_delete   INTEGER NOT NULL CHECK (can_delete IN (0, 1)),
  CHECK (can_download = 0 OR can_view = 1),
  PRIMARY KEY (group_id, file_id)
);
CREATE INDEX IF NOT EXISTS group_user_by_uid ON group_user(uid);
CREATE INDEX IF NOT EXISTS files_by_owner ON files(owner_uid);
)sql";

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK)
      throw Error(ErrorKind::Storage, std::string("prepare failed: ") + sqlite3_errmsg(db));
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int idx, std::string_view v) {
    check(sqlite3_bind_text(stmt_, idx, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
    return *this;
  }
  Statement& bind(int idx, std::int64_t v) {
    check(sqlite3_bind_int64(stmt_, idx, v));
    return *this;
  }

  /// True while a row is available.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw Error(ErrorKind::Storage, std::string("step failed: ") + sqlite3_errmsg(db_));
  }
  void run() {
    while (step()) {
    }
  }

  std::int64_t int_col(int i) const { return sqlite3_column_int64(stmt_, i); }
  std::string text_col(int i) const {
    const auto* p = sqlite3_column_text(stmt_, i);
    return p ? std::string(reinterpret_cast<const char*>(p),
                           static_cast<std::size_t>(sqlite3_column_bytes(stmt_, i)))
             : std::string();
  }
  bool is_null(int i) const { return sqlite3_column_type(stmt_, i) == SQLITE_NULL; }

 private:
  void check(int rc) {
    if (rc != SQLITE_OK)
      throw Error(ErrorKind::Storage, std::string("bind failed: ") + sqlite3_errmsg(db_));
  }
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

Timestamp from_millis(std::int64_t ms) {
  return Timestamp(std::chrono::milliseconds(ms));
}

std::int64_t to_millis(Timestamp t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
}

[[noreturn]] void not_found(const std::string& what) { throw Error(ErrorKind::NotFound, what); }

std::string file_label(FileId id) { return "file " + std::to_string(id); }
std::string group_label(GroupId id) { return "group " + std::to_string(id); }

}  // namespace

struct FileStore::Impl {
  sqlite3* db = nullptr;
  std::optional<fs::path> blob_dir;      // nullopt: memory blobs
  std::map<std::string, Bytes> memory_blobs;
  mutable std::mutex mutex;

  ~Impl() {
    if (db) sqlite3_close(db);
  }

  void exec(const char* sql) const {
    char* err = nullptr;
    if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "unknown";
      sqlite3_free(err);
      throw Error(ErrorKind::Storage, "sqlite: " + msg);
    }
  }

  template <typename F>
  auto transaction(F&& body) const {
    exec("BEGIN IMMEDIATE");
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        exec("COMMIT");
      } else {
        auto result = body();
        exec("COMMIT");
        return result;
      }
    } catch (...) {
      sqlite3_exec(db, "ROLLBACK", nullptr, nullptr, nullptr);
      throw;
    }
  }

  bool user_exists(std::string_view uid) const {
    Statement s(db, "SELECT 1 FROM users WHERE uid = ?");
    s.bind(1, uid);
    return s.step();
  }
  std::optional<Role> user_role(std::string_view uid) const {
    Statement s(db, "SELECT role FROM users WHERE uid = ?");
    s.bind(1, uid);
    if (!s.step()) return std::nullopt;
    return parse_role(s.text_col(0));
  }
  bool group_exists(GroupId g) const {
    Statement s(db, "SELECT 1 FROM groups WHERE group_id = ?");
    s.bind(1, g);
    return s.step();
  }
  std::optional<FileRecord> file(FileId f) const {
    Statement s(db,
                "SELECT file_id, name, owner_uid, size_bytes, uploaded_at, content_ref "
                "FROM files WHERE file_id = ?");
    s.bind(1, f);
    if (!s.step()) return std::nullopt;
    return read_file_row(s);
  }
  static FileRecord read_file_row(const Statement& s) {
    return FileRecord{s.int_col(0),
                      s.text_col(1),
                      s.text_col(2),
                      static_cast<std::uint64_t>(s.int_col(3)),
                      from_millis(s.int_col(4)),
                      s.text_col(5)};
  }

  void require_user(std::string_view uid) const {
    if (!user_exists(uid)) not_found("user '" + std::string(uid) + "'");
  }
  void require_group(GroupId g) const {
    if (!group_exists(g)) not_found(group_label(g));
  }
  FileRecord require_file(FileId f) const {
    auto rec = file(f);
    if (!rec) not_found(file_label(f));
    return *rec;
  }

  void put_grant(GroupId g, FileId f, RightSet rights) const {
    rights = rights.normalized();
    if (rights.empty()) {
      Statement s(db, "DELETE FROM group_files WHERE group_id = ? AND file_id = ?");
      s.bind(1, g).bind(2, f).run();
      return;
    }
    Statement s(db,
                "INSERT INTO group_files (group_id, file_id, can_view, can_download, can_delete) "
                "VALUES (?, ?, ?, ?, ?) ON CONFLICT (group_id, file_id) DO UPDATE SET "
                "can_view = excluded.can_view, can_download = excluded.can_download, "
                "can_delete = excluded.can_delete");
    s.bind(1, g)
        .bind(2, f)
        .bind(3, std::int64_t{rights.contains(Right::View)})
        .bind(4, std::int64_t{rights.contains(Right::Download)})
        .bind(5, std::int64_t{rights.contains(Right::Delete)})
        .run();
  }

  RightSet rights_of(std::string_view uid, const FileRecord& f) const {
    const auto role = user_role(uid);
    if (!role) return {};
    if (*role == Role::Administrator || f.owner_uid == uid) return RightSet::all();
    Statement s(db,
                "SELECT MAX(gf.can_view), MAX(gf.can_download), MAX(gf.can_delete) "
                "FROM group_files gf JOIN group_user gu ON gu.group_id = gf.group_id "
                "WHERE gu.uid = ? AND gf.file_id = ?");
    s.bind(1, uid).bind(2, f.file_id);
    RightSet out;
    if (s.step() && !s.is_null(0)) {
      if (s.int_col(0)) out.insert(Right::View);
      if (s.int_col(1)) out.insert(Right::Download);
      if (s.int_col(2)) out.insert(Right::Delete);
    }
    return out;
  }

  // blobs
  fs::path blob_path(const std::string& ref) const { return *blob_dir / ref.substr(0, 2) / ref; }

  void put_blob(const std::string& ref, std::span<const std::uint8_t> content) {
    if (!blob_dir) {
      memory_blobs.try_emplace(ref, content.begin(), content.end());
      return;
    }
    const auto path = blob_path(ref);
    if (fs::exists(path)) return;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::Storage, "cannot create blob directory: " + ec.message());
    write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(content.data()),
                                             content.size()));
  }

  Bytes get_blob(const std::string& ref) const {
    Bytes data;
    if (!blob_dir) {
      auto it = memory_blobs.find(ref);
      if (it == memory_blobs.end()) throw Error(ErrorKind::Storage, "missing blob " + ref);
      data = it->second;
    } else {
      try {
        data = to_bytes(read_file(blob_path(ref)));
      } catch (const Error&) {
        throw Error(ErrorKind::Storage, "missing blob " + ref);
      }
    }
    if (hex_encode(sha256(data)) != ref)
      throw Error(ErrorKind::Storage, "blob " + ref + " failed its integrity check");
    return data;
  }

  void drop_blob_if_unreferenced(const std::string& ref) {
    Statement s(db, "SELECT 1 FROM files WHERE content_ref = ? LIMIT 1");
    s.bind(1, ref);
    if (s.step()) return;
    if (!blob_dir) {
      memory_blobs.erase(ref);
      return;
    }
    std::error_code ec;
    fs::remove(blob_path(ref), ec);
  }
};

std::unique_ptr<FileStore::Impl> FileStore::open_impl(const std::string& db_path,
                                                      std::optional<fs::path> blob_dir) {
  auto impl = std::make_unique<FileStore::Impl>();
  if (sqlite3_open_v2(db_path.c_str(), &impl->db,
                      SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                      nullptr) != SQLITE_OK) {
    std::string msg = impl->db ? sqlite3_errmsg(impl->db) : "out of memory";
    throw Error(ErrorKind::Storage, "cannot open " + db_path + ": " + msg);
  }
  sqlite3_busy_timeout(impl->db, 5000);
  impl->exec(schema_sql);
  impl->blob_dir = std::move(blob_dir);
  return impl;
}

FileStore::FileStore(std::unique_ptr<Impl> impl, Options options)
    : impl_(std::move(impl)), options_(std::move(options)) {}

FileStore::FileStore(const fs::path& root, Options options) : options_(std::move(options)) {
  std::error_code ec;
  fs::create_directories(root / "blobs", ec);
  if (ec) throw Error(ErrorKind::Storage, "cannot create " + root.string() + ": " + ec.message());
  impl_ = open_impl((root / "filestore.db").string(), root / "blobs");
  impl_->exec("PRAGMA journal_mode = WAL");
}

std::unique_ptr<FileStore> FileStore::in_memory(Options options) {
  return std::unique_ptr<FileStore>(new FileStore(open_impl(":memory:", std::nullopt),
                                                  std::move(options)));
}

FileStore::~FileStore() = default;

// ---------------------------------------------------------------------------
// users

void FileStore::create_user(std::string_view uid, Role role) {
  if (uid.empty()) throw Error(ErrorKind::Argument, "uid must not be empty");
  std::lock_guard lock(impl_->mutex);
  impl_->transaction([&] {
    if (impl_->user_exists(uid))
      throw Error(ErrorKind::Conflict, "user '" + std::string(uid) + "' already exists");
    Statement s(impl_->db, "INSERT INTO users (uid, role) VALUES (?, ?)");
    s.bind(1, uid).bind(2, to_string(role)).run();
  });
}

void FileStore::delete_user(std::string_view uid) {
  std::lock_guard lock(impl_->mutex);
  impl_->transaction([&] {
    impl_->require_user(uid);
    Statement owned(impl_->db, "SELECT COUNT(*) FROM files WHERE owner_uid = ?");
    owned.bind(1, uid);
    owned.step();
    if (const auto n = owned.int_col(0); n > 0)
      throw Error(ErrorKind::OwnershipConflict,
                  "user '" + std::string(uid) + "' still owns " + std::to_string(n) + " file(s)");
    Statement s(impl_->db, "DELETE FROM users WHERE uid = ?");
    s.bind(1, uid).run();
  });
}

void FileStore::set_role(std::string_view uid, Role role) {
  std::lock_guard lock(impl_->mutex);
  impl_->transaction([&] {
    impl_->require_user(uid);
    Statement s(impl_->db, "UPDATE users SET role = ? WHERE uid = ?");
    s.bind(1, to_string(role)).bind(2, uid).run();
  });
}

std::optional<UserRecord> FileStore::find_user(std::string_view uid) const {
  std::lock_guard lock(impl_->mutex);
  auto role = impl_->user_role(uid);
  if (!role) return std::nullopt;
  return UserRecord{std::string(uid), *role};
}

std::vector<UserRecord> FileStore::list_users() const {
  std::lock_guard lock(impl_->mutex);
  Statement s(impl_->db, "SELECT uid, role FROM users ORDER BY uid");
  std::vector<UserRecord> out;
  while (s.step()) out.push_back({s.text_col(0), parse_role(s.text_col(1)).value_or(Role::Normal)});
  return out;
}

// ---------------------------------------------------------------------------
// groups

GroupId FileStore::create_group(std::string_view name) {
  if (name.empty()) throw Error(ErrorKind::Argument, "group name must not be empty");
  std::lock_guard lock(impl_->mutex);
  return impl_->transaction([&] {
    Statement exists(impl_->db, "SELECT 1 FROM groups WHERE name = ?");
    exists.bind(1, name);
    if (exists.step())
      throw Error(ErrorKind::Conflict, "group '" + std::string(name) + "' already exists");
    Statement s(impl_->db, "INSERT INTO groups (name) VALUES (?)");
    s.bind(1, name).run();
    return static_cast<GroupId>(sqlite3_last_insert_rowid(impl_->db));
  });
}

void FileStore::delete_group(GroupId group) {
  std::lock_guard lock(impl_->mutex);
  impl_->transaction([&] {
    impl_->require_group(group);
    Statement s(impl_->db, "DELETE FROM groups WHERE group_id = ?");
    s.bind(1, group).run();
  });
}

void FileStore::add_member(GroupId group, std::string_view uid) {
  std::lock_guard lock(impl_->mutex);
  impl_->transaction([&] {
    impl_->require_group(group);
    impl_->require_user(uid);
    Statement s(impl_->db, "INSERT OR IGNORE INTO group_user (group_id, uid) VALUES (?, ?)");
    s.bind(1, group).bind(2, uid).run();
  });
}

void FileStore::remove_member(GroupId group, std::string_view uid) {
  std::lock_guard lock(impl_->mutex);
  impl_->transaction([&] {
    impl_->require_group(group);
    impl_->require_user(uid);
    Statement s(impl_->db, "DELETE FROM group_user WHERE group_id = ? AND uid = ?");
    s.bind(1, group).bind(2, uid).run();
  });
}

GroupRecord FileStore::get_group(GroupId group) const {
  std::lock_guard lock(impl_->mutex);
  Statement s(impl_->db, "SELECT name FROM groups WHERE group_id = ?");
  s.bind(1, group);
  if (!s.step()) not_found(group_label(group));
  GroupRecord rec{group, s.text_col(0), {}};
  Statement m(impl_->db, "SELECT uid FROM group_user WHERE group_id = ?");
  m.bind(1, group);
  while (m.step()) rec.members.insert(m.text_col(0));
  return rec;
}

std::vector<GroupRecord> FileStore::list_groups() const {
  std::lock_guard lock(impl_->mutex);
  std::vector<GroupRecord> out;
  {
    Statement s(impl_->db, "SELECT group_id, name FROM groups ORDER BY group_id");
    while (s.step()) out.push_back({s.int_col(0), s.text_col(1), {}});
  }
  for (auto& g : out) {
    Statement members(impl_->db, "SELECT uid FROM group_user WHERE group_id = ?");
    members.bind(1, g.group_id);
    while (members.step()) g.members.insert(members.text_col(0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// grants and rights

void FileStore::grant(GroupId group, FileId file, RightSet rights) {
  std::lock_guard lock(impl_->mutex);
  impl_->transaction([&] {
    impl_->require_group(group);
    impl_->require_file(file);
    impl_->put_grant(group, file, rights);
  });
}

void FileStore::replace_grants(FileId file,
                               const std::vector<std::pair<GroupId, RightSet>>& grants) {
  std::lock_guard lock(impl_->mutex);
  impl_->transaction([&] {
    impl_->require_file(file);
    for (const auto& [g, _] : grants) impl_->require_group(g);
    Statement clear(impl_->db, "DELETE FROM group_files WHERE file_id = ?");
    clear.bind(1, file).run();
    for (const auto& [g, rights] : grants) impl_->put_grant(g, file, rights);
  });
}

namespace {

std::vector<GroupGrant> read_grants(Statement& s) {
  std::vector<GroupGrant> out;
  while (s.step()) {
    RightSet r;
    if (s.int_col(2)) r.insert(Right::View);
    if (s.int_col(3)) r.insert(Right::Download);
    if (s.int_col(4)) r.insert(Right::Delete);
    out.push_back({s.int_col(0), s.int_col(1), r});
  }
  return out;
}

}  // namespace

std::vector<GroupGrant> FileStore::grants_for_file(FileId file) const {
  std::lock_guard lock(impl_->mutex);
  impl_->require_file(file);
  Statement s(impl_->db,
              "SELECT group_id, file_id, can_view, can_download, can_delete FROM group_files "
              "WHERE file_id = ? ORDER BY group_id");
  s.bind(1, file);
  return read_grants(s);
}

std::vector<GroupGrant> FileStore::all_grants() const {
  std::lock_guard lock(impl_->mutex);
  Statement s(impl_->db,
              "SELECT group_id, file_id, can_view, can_download, can_delete FROM group_files "
              "ORDER BY file_id, group_id");
  return read_grants(s);
}

RightSet FileStore::effective_rights(std::string_view uid, FileId file) const {
  std::lock_guard lock(impl_->mutex);
  const auto rec = impl_->require_file(file);
  return impl_->rights_of(uid, rec);
}

// ---------------------------------------------------------------------------
// files

FileRecord FileStore::store_file(std::string_view uploader_uid, std::string_view name,
                                 std::span<const std::uint8_t> content) {
  if (content.size() > options_.max_upload_bytes)
    throw Error(ErrorKind::TooLarge, "file of " + std::to_string(content.size()) +
                                         " bytes exceeds the limit of " +
                                         std::to_string(options_.max_upload_bytes));
  const std::string ref = hex_encode(sha256(content));
  const auto now = options_.clock();

  std::lock_guard lock(impl_->mutex);
  impl_->require_user(uploader_uid);
  impl_->put_blob(ref, content);
  try {
    return impl_->transaction([&] {
      impl_->require_user(uploader_uid);
      Statement s(impl_->db,
                  "INSERT INTO files (name, owner_uid, size_bytes, uploaded_at, content_ref) "
                  "VALUES (?, ?, ?, ?, ?)");
      s.bind(1, name)
          .bind(2, uploader_uid)
          .bind(3, static_cast<std::int64_t>(content.size()))
          .bind(4, to_millis(now))
          .bind(5, ref)
          .run();
      const FileId id = sqlite3_last_insert_rowid(impl_->db);
      return FileRecord{id,
                        std::string(name),
                        std::string(uploader_uid),
                        content.size(),
                        from_millis(to_millis(now)),
                        ref};
    });
  } catch (...) {
    impl_->drop_blob_if_unreferenced(ref);
    throw;
  }
}

Bytes FileStore::fetch_content(FileId file) const {
  std::lock_guard lock(impl_->mutex);
  const auto rec = impl_->require_file(file);
  auto data = impl_->get_blob(rec.content_ref);
  if (data.size() != rec.size_bytes)
    throw Error(ErrorKind::Storage, "size mismatch for " + file_label(file));
  return data;
}

void FileStore::delete_file(FileId file) {
  std::lock_guard lock(impl_->mutex);
  const auto ref = impl_->transaction([&] {
    const auto rec = impl_->require_file(file);
    Statement s(impl_->db, "DELETE FROM files WHERE file_id = ?");
    s.bind(1, file).run();
    return rec.content_ref;
  });
  impl_->drop_blob_if_unreferenced(ref);
}

FileRecord FileStore::get_file(FileId file) const {
  std::lock_guard lock(impl_->mutex);
  return impl_->require_file(file);
}

std::vector<FileRecord> FileStore::list_files() const {
  std::lock_guard lock(impl_->mutex);
  Statement s(impl_->db,
              "SELECT file_id, name, owner_uid, size_bytes, uploaded_at, content_ref "
              "FROM files ORDER BY file_id");
  std::vector<FileRecord> out;
  while (s.step()) out.push_back(Impl::read_file_row(s));
  return out;
}

std::vector<FileWithRights> FileStore::list_files_for(std::string_view uid) const {
  std::lock_guard lock(impl_->mutex);
  const auto role = impl_->user_role(uid);
  if (!role) not_found("user '" + std::string(uid) + "'");
  const bool admin = *role == Role::Administrator;

  Statement s(impl_->db,
              "SELECT f.file_id, f.name, f.owner_uid, f.size_bytes, f.uploaded_at, f.content_ref, "
              "       MAX(gf.can_view), MAX(gf.can_download), MAX(gf.can_delete) "
              "FROM files f LEFT JOIN group_files gf ON gf.file_id = f.file_id AND gf.group_id IN "
              "  (SELECT group_id FROM group_user WHERE uid = ?1) "
              "GROUP BY f.file_id ORDER BY f.file_id");
  s.bind(1, uid);
  std::vector<FileWithRights> out;
  while (s.step()) {
    auto rec = Impl::read_file_row(s);
    RightSet rights;
    if (admin || rec.owner_uid == uid) {
      rights = RightSet::all();
    } else if (!s.is_null(6)) {
      if (s.int_col(6)) rights.insert(Right::View);
      if (s.int_col(7)) rights.insert(Right::Download);
      if (s.int_col(8)) rights.insert(Right::Delete);
    }
    if (!rights.empty()) out.push_back({std::move(rec), rights});
  }
  return out;
}

}  // namespace sfs::filestore

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
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfs/time.hpp"

// Append-only audit trail. On disk, one event per line:
//
//   timestamp|principal|operation|target|outcome|detail
//
// timestamp is ISO-8601 UTC with milliseconds; principal, target and detail
// percent-encode '%', '|', CR and LF. Lines are never rewritten.
namespace sfs::audit {

enum class Operation {
  Login,
  Logout,
  List,
  Download,
  Upload,
  DeleteFile,
  AclChange,
  UserAdd,
  UserDelete,
  UserModify,
  GroupChange,
  CertBind,
  CertUnbind,
  CertRevoke,
};

enum class Outcome { Success, Denied, Error };

std::string_view to_string(Operation op) noexcept;
std::string_view to_string(Outcome outcome) noexcept;
std::optional<Operation> parse_operation(std::string_view text) noexcept;
std::optional<Outcome> parse_outcome(std::string_view text) noexcept;

inline constexpr std::string_view anonymous = "anonymous";

struct AuditEvent {
  Timestamp timestamp{};  ///< left at the epoch, the log stamps it
  std::string principal{anonymous};
  Operation operation = Operation::Login;
  std::string target;
  Outcome outcome = Outcome::Success;
  std::string detail;

  friend bool operator==(const AuditEvent&, const AuditEvent&) = default;
};

std::string format_line(const AuditEvent& event);
std::optional<AuditEvent> parse_line(std::string_view line);

struct Filter {
  std::optional<std::string> principal;
  std::optional<Operation> operation;
  std::optional<Timestamp> from;  ///< inclusive
  std::optional<Timestamp> to;    ///< inclusive
};

class AuditLog {
 public:
  /// Memory-only log.
  explicit AuditLog(Clock clock = system_clock());
  /// Appends to `path`, creating it if needed. Other processes may append
  /// to the same file concurrently.
  explicit AuditLog(std::filesystem::path path, Clock clock = system_clock());
  ~AuditLog();

  AuditLog(const AuditLog&) = delete;
  AuditLog& operator=(const AuditLog&) = delete;

  /// Durably appends `event` and returns it as stored. Timestamps are
  /// clamped so the log never goes backwards. Throws Error(Storage).
  AuditEvent record(AuditEvent event);

  /// Matching events in log order.
  std::vector<AuditEvent> query(const Filter& filter = {}) const;

  const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

 private:
  std::vector<AuditEvent> load() const;
  std::optional<Timestamp> last_on_disk() const;

  Clock clock_;
  std::optional<std::filesystem::path> path_;
  int fd_ = -1;
  mutable std::mutex mutex_;
  std::vector<AuditEvent> memory_;
  Timestamp last_{};
};

}  // namespace sfs::audit

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

#include "sfs/audit.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>

#include "sfs/error.hpp"
#include "sfs/fileio.hpp"

namespace sfs::audit {

namespace {

constexpr std::array<std::string_view, 14> operation_names = {
    "login",       "logout",     "list",        "download",    "upload",
    "delete_file", "acl_change", "user_add",    "user_delete", "user_modify",
    "group_change", "cert_bind", "cert_unbind", "cert_revoke",
};

constexpr std::array<std::string_view, 3> outcome_names = {"success", "denied", "error"};

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '%': out += "%25"; break;
      case '|': out += "%7C"; break;
      case '\n': out += "%0A"; break;
      case '\r': out += "%0D"; break;
      default: out += c;
    }
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::optional<std::string> unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out += s[i];
      continue;
    }
    if (i + 2 >= s.size()) return std::nullopt;
    const int hi = hex_value(s[i + 1]);
    const int lo = hex_value(s[i + 2]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out += static_cast<char>(hi * 16 + lo);
    i += 2;
  }
  return out;
}

bool matches(const AuditEvent& e, const Filter& f) {
  if (f.principal && e.principal != *f.principal) return false;
  if (f.operation && e.operation != *f.operation) return false;
  if (f.from && e.timestamp < *f.from) return false;
  if (f.to && e.timestamp > *f.to) return false;
  return true;
}

Timestamp truncate_ms(Timestamp t) {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(t);
}

}  // namespace

std::string_view to_string(Operation op) noexcept {
  return operation_names[static_cast<std::size_t>(op)];
}

std::string_view to_string(Outcome outcome) noexcept {
  return outcome_names[static_cast<std::size_t>(outcome)];
}

std::optional<Operation> parse_operation(std::string_view text) noexcept {
  for (std::size_t i = 0; i < operation_names.size(); ++i)
    if (operation_names[i] == text) return static_cast<Operation>(i);
  return std::nullopt;
}

std::optional<Outcome> parse_outcome(std::string_view text) noexcept {
  for (std::size_t i = 0; i < outcome_names.size(); ++i)
    if (outcome_names[i] == text) return static_cast<Outcome>(i);
  return std::nullopt;
}

std::string format_line(const AuditEvent& e) {
  std::string line = format_iso8601(e.timestamp);
  line += '|';
  line += escape(e.principal);
  line += '|';
  line += to_string(e.operation);
  line += '|';
  line += escape(e.target);
  line += '|';
  line += to_string(e.outcome);
  line += '|';
  line += escape(e.detail);
  return line;
}

std::optional<AuditEvent> parse_line(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  std::array<std::string_view, 6> fields;
  std::size_t n = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == '|') {
      if (n == fields.size()) return std::nullopt;
      fields[n++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (n != fields.size()) return std::nullopt;
  auto ts = parse_iso8601(fields[0]);
  auto principal = unescape(fields[1]);
  auto op = parse_operation(fields[2]);
  auto target = unescape(fields[3]);
  auto outcome = parse_outcome(fields[4]);
  auto detail = unescape(fields[5]);
  if (!ts || !principal || !op || !target || !outcome || !detail) return std::nullopt;
  return AuditEvent{*ts, *principal, *op, *target, *outcome, *detail};
}

// ---------------------------------------------------------------------------

AuditLog::AuditLog(Clock clock) : clock_(std::move(clock)) {}

AuditLog::AuditLog(std::filesystem::path path, Clock clock)
    : clock_(std::move(clock)), path_(std::move(path)) {
  if (path_->has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path_->parent_path(), ec);
  }
  fd_ = ::open(path_->c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0640);
  if (fd_ < 0)
    throw Error(ErrorKind::Storage,
                "cannot open audit log " + path_->string() + ": " + std::strerror(errno));
}

AuditLog::~AuditLog() {
  if (fd_ >= 0) ::close(fd_);
}

std::optional<Timestamp> AuditLog::last_on_disk() const {
  const int rfd = ::open(path_->c_str(), O_RDONLY | O_CLOEXEC);
  if (rfd < 0) return std::nullopt;
  struct stat st {};
  std::optional<Timestamp> out;
  if (::fstat(rfd, &st) == 0 && st.st_size > 0) {
    const off_t size = st.st_size;
    const off_t chunk = std::min<off_t>(size, 8192);
    std::string buf(static_cast<std::size_t>(chunk), '\0');
    if (::pread(rfd, buf.data(), buf.size(), size - chunk) == chunk) {
      if (!buf.empty() && buf.back() == '\n') buf.pop_back();
      const auto nl = buf.rfind('\n');
      const std::string_view last =
          nl == std::string::npos ? std::string_view(buf) : std::string_view(buf).substr(nl + 1);
      if (auto e = parse_line(last)) out = e->timestamp;
    }
  }
  ::close(rfd);
  return out;
}

AuditEvent AuditLog::record(AuditEvent event) {
  std::lock_guard lock(mutex_);
  if (event.timestamp == Timestamp{}) event.timestamp = clock_();
  event.timestamp = truncate_ms(event.timestamp);

  if (!path_) {
    if (event.timestamp < last_) event.timestamp = last_;
    last_ = event.timestamp;
    memory_.push_back(event);
    return event;
  }

  if (::flock(fd_, LOCK_EX) != 0)
    throw Error(ErrorKind::Storage, std::string("cannot lock audit log: ") + std::strerror(errno));
  struct Unlock {
    int fd;
    ~Unlock() { ::flock(fd, LOCK_UN); }
  } unlock{fd_};

  if (auto disk = last_on_disk(); disk && *disk > last_) last_ = *disk;
  if (event.timestamp < last_) event.timestamp = last_;

  const std::string line = format_line(event) + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::Storage, std::string("audit append failed: ") + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fdatasync(fd_) != 0)
    throw Error(ErrorKind::Storage, std::string("audit sync failed: ") + std::strerror(errno));
  last_ = event.timestamp;
  return event;
}

std::vector<AuditEvent> AuditLog::load() const {
  std::vector<AuditEvent> out;
  std::string text;
  try {
    text = read_file(*path_);
  } catch (const Error&) {
    return out;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;  // partial trailing line from a concurrent writer
    if (auto e = parse_line(std::string_view(text).substr(pos, nl - pos))) out.push_back(*e);
    pos = nl + 1;
  }
  return out;
}

std::vector<AuditEvent> AuditLog::query(const Filter& filter) const {
  std::lock_guard lock(mutex_);
  const auto all = path_ ? load() : memory_;
  std::vector<AuditEvent> out;
  for (const auto& e : all)
    if (matches(e, filter)) out.push_back(e);
  return out;
}

}  // namespace sfs::audit

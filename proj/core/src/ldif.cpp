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

#include <algorithm>
#include <cctype>
#include <set>

#include "sfs/directory.hpp"
#include "sfs/error.hpp"

namespace sfs::directory {

namespace {

constexpr std::size_t fold_width = 76;

// RFC 2849 SAFE-STRING: no NUL/CR/LF, ASCII only, must not start with
// space, ':' or '<'. Trailing spaces are base64 encoded too, since many
// tools strip them.
bool is_safe_string(std::string_view v) {
  if (v.empty()) return true;
  const auto first = static_cast<unsigned char>(v.front());
  if (first == ' ' || first == ':' || first == '<') return false;
  if (v.back() == ' ') return false;
  return std::all_of(v.begin(), v.end(), [](char ch) {
    const auto c = static_cast<unsigned char>(ch);
    return c != 0 && c != '\n' && c != '\r' && c < 0x80;
  });
}

void append_line(std::string& out, std::string_view line) {
  if (line.size() <= fold_width) {
    out.append(line);
    out += '\n';
    return;
  }
  out.append(line.substr(0, fold_width));
  out += '\n';
  line.remove_prefix(fold_width);
  while (!line.empty()) {
    const auto n = std::min(line.size(), fold_width - 1);
    out += ' ';
    out.append(line.substr(0, n));
    out += '\n';
    line.remove_prefix(n);
  }
}

void append_attr(std::string& out, std::string_view name, std::string_view value) {
  std::string line(name);
  if (is_safe_string(value)) {
    line += ": ";
    line += value;
  } else {
    line += ":: ";
    line += base64_encode(to_bytes(value));
  }
  append_line(out, line);
}

std::string escape_dn_value(std::string_view v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const char c = v[i];
    const bool special = c == ',' || c == '+' || c == '"' || c == '\\' || c == '<' || c == '>' ||
                         c == ';' || c == '=' || (i == 0 && (c == '#' || c == ' ')) ||
                         (i + 1 == v.size() && c == ' ');
    if (special) out += '\\';
    out += c;
  }
  return out;
}

struct LogicalLine {
  std::size_t number;  // physical line where it starts
  std::string text;
};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::Parse, "LDIF line " + std::to_string(line) + ": " + what);
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

// Splits into logical lines; blank lines are kept as empty separators and
// comments are dropped (including their continuations).
std::vector<LogicalLine> unfold(std::string_view text) {
  std::vector<LogicalLine> out;
  bool in_comment = false;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!line.empty() && line.front() == ' ') {
      if (in_comment) continue;
      if (out.empty() || out.back().text.empty()) fail(number, "continuation without a preceding line");
      out.back().text.append(line.substr(1));
      continue;
    }
    in_comment = !line.empty() && line.front() == '#';
    if (in_comment) continue;
    out.push_back({number, std::string(line)});
  }
  return out;
}

struct Attribute {
  std::string name;     // without options
  std::string options;  // e.g. "binary"
  std::string value;    // decoded
};

Attribute parse_attribute(const LogicalLine& line) {
  const auto colon = line.text.find(':');
  if (colon == std::string::npos || colon == 0) fail(line.number, "expected 'attribute: value'");
  Attribute attr;
  std::string_view desc(line.text.data(), colon);
  if (auto semi = desc.find(';'); semi != std::string_view::npos) {
    attr.options = std::string(desc.substr(semi + 1));
    desc = desc.substr(0, semi);
  }
  attr.name = std::string(desc);
  std::string_view rest(line.text);
  rest.remove_prefix(colon + 1);
  if (!rest.empty() && rest.front() == ':') {
    rest.remove_prefix(1);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    try {
      attr.value = to_string(base64_decode(rest));
    } catch (const Error&) {
      fail(line.number, "invalid base64 value for " + attr.name);
    }
  } else if (!rest.empty() && rest.front() == '<') {
    fail(line.number, "URL values are not supported");
  } else {
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    attr.value = std::string(rest);
  }
  return attr;
}

}  // namespace

std::string render_ldif(const std::vector<DirectoryEntry>& entries) {
  std::vector<const DirectoryEntry*> sorted;
  sorted.reserve(entries.size());
  for (const auto& e : entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->uid < b->uid; });

  std::string out;
  for (const auto* e : sorted) {
    append_attr(out, "dn", "uid=" + escape_dn_value(e->uid) + ",ou=people,dc=sfs");
    append_attr(out, "objectClass", "inetOrgPerson");
    append_attr(out, "uid", e->uid);
    append_attr(out, "userPassword", e->user_password);
    if (e->user_certificate)
      append_line(out, "userCertificate;binary:: " + base64_encode(*e->user_certificate));
    out += '\n';
  }
  return out;
}

std::vector<DirectoryEntry> parse_ldif(std::string_view text) {
  const auto lines = unfold(text);
  std::vector<DirectoryEntry> out;

  std::size_t i = 0;
  bool first_record = true;
  while (i < lines.size()) {
    if (lines[i].text.empty()) {
      ++i;
      continue;
    }
    const std::size_t record_start = lines[i].number;
    std::vector<Attribute> attrs;
    std::vector<std::size_t> numbers;
    for (; i < lines.size() && !lines[i].text.empty(); ++i) {
      attrs.push_back(parse_attribute(lines[i]));
      numbers.push_back(lines[i].number);
    }
    if (first_record && attrs.size() == 1 && iequals(attrs[0].name, "version")) {
      if (attrs[0].value != "1") fail(record_start, "unsupported LDIF version");
      first_record = false;
      continue;
    }
    first_record = false;
    // A version line may also open the first record directly.
    std::size_t k = 0;
    if (out.empty() && iequals(attrs[0].name, "version") && attrs.size() > 1) k = 1;
    if (!iequals(attrs[k].name, "dn")) fail(numbers[k], "record must start with dn");

    DirectoryEntry entry;
    bool have_uid = false;
    bool have_password = false;
    for (++k; k < attrs.size(); ++k) {
      const auto& a = attrs[k];
      if (iequals(a.name, "uid")) {
        if (have_uid) fail(numbers[k], "multiple uid values");
        if (a.value.empty()) fail(numbers[k], "empty uid");
        entry.uid = a.value;
        have_uid = true;
      } else if (iequals(a.name, "userPassword")) {
        if (have_password) fail(numbers[k], "multiple userPassword values");
        if (!credentials::is_valid_ssha(a.value)) fail(numbers[k], "userPassword is not {SSHA}");
        entry.user_password = a.value;
        have_password = true;
      } else if (iequals(a.name, "userCertificate")) {
        if (entry.user_certificate) fail(numbers[k], "multiple userCertificate values");
        entry.user_certificate = to_bytes(a.value);
      } else if (iequals(a.name, "changetype")) {
        fail(numbers[k], "change records are not supported");
      }
    }
    if (!have_uid) fail(record_start, "record has no uid");
    if (!have_password) fail(record_start, "record has no userPassword");
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace sfs::directory

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

#include "sfs/config.hpp"

#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>

#include "sfs/error.hpp"

namespace sfs::config {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<std::string> OptionsMap::get(std::string_view key) const {
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::filesystem::path> OptionsMap::get_path(std::string_view key) const {
  auto value = get(key);
  if (!value || value->empty()) return std::nullopt;
  std::filesystem::path p(*value);
  if (p.is_relative() && source_.has_parent_path()) p = source_.parent_path() / p;
  return p;
}

OptionsMap parse_options(std::string_view text, const std::filesystem::path& source) {
  OptionsMap::Entries entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  // UTF-8 byte order mark
  if (text.starts_with("\xEF\xBB\xBF")) pos = 3;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected key=value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty())
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": empty key");
    entries.insert_or_assign(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return OptionsMap(std::move(entries), source);
}

OptionsMap read_options_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Load, "cannot open options file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Load, "cannot read options file " + path.string());
  return parse_options(buf.str(), path);
}

const OptionsMap& load_options(const std::filesystem::path& path) {
  static std::mutex mutex;
  static std::unique_ptr<const OptionsMap> instance;
  std::lock_guard lock(mutex);
  if (!instance) instance = std::make_unique<const OptionsMap>(read_options_file(path));
  return *instance;
}

std::optional<std::string> get_option(const OptionsMap& opts, std::string_view key) {
  return opts.get(key);
}

std::string serialize_options(const OptionsMap& opts) {
  std::string out;
  for (const auto& [k, v] : opts.entries()) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

}  // namespace sfs::config

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

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace sfs {

using Timestamp = std::chrono::system_clock::time_point;

/// Injectable time source. Modules that compare against "now" take one of
/// these so tests can move time deterministically.
using Clock = std::function<Timestamp()>;

inline Clock system_clock() {
  return [] { return std::chrono::system_clock::now(); };
}

/// `YYYY-MM-DDTHH:MM:SS.mmmZ`, always UTC, millisecond precision.
std::string format_iso8601(Timestamp t);

/// Accepts the format produced by format_iso8601 and the same without
/// fractional seconds.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// A clock that only moves when told to.
class ManualClock {
 public:
  explicit ManualClock(Timestamp start = std::chrono::system_clock::now()) : now_(start) {}

  Timestamp now() const { return now_; }
  void advance(std::chrono::system_clock::duration d) { now_ += d; }
  void set(Timestamp t) { now_ = t; }

  Clock as_clock() {
    return [this] { return now_; };
  }

 private:
  Timestamp now_;
};

}  // namespace sfs

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

#include <iosfwd>
#include <string>
#include <vector>

#include "sfs/time.hpp"

namespace sfs::admin {

/// Exit codes of sfs-admin.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

/// Runs one sfs-admin invocation. `args` excludes the program name.
/// Passwords are read from `in`: with echo disabled when it is the
/// controlling terminal, otherwise as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in, Clock clock = system_clock());

}  // namespace sfs::admin

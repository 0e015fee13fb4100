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

#include <csignal>
#include <iostream>

#include "sfs/config.hpp"
#include "sfs/error.hpp"
#include "sfs/https_server.hpp"

namespace {

void wait_for_signal() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  int sig = 0;
  sigwait(&set, &sig);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 2 || (argc == 2 && std::string_view(argv[1]).starts_with("-"))) {
    std::cerr << "usage: sfs-server [options-file]   (default: .config)\n";
    return 2;
  }
  // Block the termination signals before any thread exists so only sigwait sees them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  try {
    const auto& options =
        sfs::config::load_options(argc == 2 ? argv[1] : sfs::config::default_options_path);
    sfs::server::Deployment deployment(options);
    deployment.server().start();
    std::cerr << "sfs-server listening on port " << deployment.server().port() << "\n";
    wait_for_signal();
    deployment.server().stop();
  } catch (const sfs::Error& e) {
    std::cerr << "sfs-server: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "sfs-server: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

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
#include <map>
#include <string>
#include <string_view>

#include "sfs/encoding.hpp"

namespace sfs::testing {

inline std::filesystem::path fixture_dir() { return SFS_FIXTURE_DIR; }

inline Bytes from_hex(std::string_view hex) {
  Bytes out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2)
    out.push_back(static_cast<std::uint8_t>(std::stoi(std::string(hex.substr(i, 2)), nullptr, 16)));
  return out;
}

/// What fixtures/sample.config must parse to.
inline std::map<std::string, std::string, std::less<>> sample_config_expected() {
  return {
      {"ca_server", "ca.internal.example:9443"},
      {"db_server", "data/filestore"},
      {"keystore_filepath", "keys/server.pem"},
      {"keystore_password", "pa=ss=word"},
      {"ca_certificate_filepath", "ca/root.crt"},
      {"ca_certificate_password", "unused-secret"},
      {"ldap_principal", "cn=admin,dc=sfs"},
      {"ldap_password", "second=="},
      {"ldap_server", "directory.ldif"},
  };
}

// Frozen output of an independent SSHA implementation (Python hashlib +
// base64): base64(SHA1(password || salt) || salt).
struct SshaVector {
  const char* password;
  const char* salt_hex;
  const char* hash;
};

inline constexpr SshaVector ssha_vectors[] = {
    {"secret", "01020304", "{SSHA}uJDd0BIdJ9Z7yDCZNWdgYeb33+cBAgME"},
    {"", "00000000", "{SSHA}kGnKeOdFCihRc0MbPlLFwlKZ5HMAAAAA"},
    {"password", "deadbeef", "{SSHA}Br1wrGZy5k78sRGZ6wVxOWiCDprerb7v"},
    {"correct horse battery staple", "0011223344556677",
     "{SSHA}4oYjUMqV0V66EZo/6Z1LRSdv8zYAESIzRFVmdw=="},
    {"p@ss:w=rd|x", "ffeeddccbbaa9988", "{SSHA}QsNx39fOH93HiHQhMQlmYIQuPq7/7t3Mu6qZiA=="},
    {"p\xc3\xa4ssw\xc3\xb6rd", "a1b2c3d4e5f60718", "{SSHA}KYNy/E0DOY2BuCPEWbOYbff9VfyhssPU5fYHGA=="},
    {"a", "000102030405060708090a0b0c0d0e0f", "{SSHA}T4rFXX2f7pSGnlh+jEeaIPPD72MAAQIDBAUGBwgJCgsMDQ4P"},
    {"admin", "7a7a7a7a", "{SSHA}+rsL3spnU2dwAf67HuY8VBtv4cR6enp6"},
    {"xxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxx",
     "0102030405", "{SSHA}8L4AwE761qwuS9erZOMUaAJJNNkBAgMEBQ=="},
    {"Tr0ub4dor&3", "5f5f5f5f5f5f5f5f5f5f5f5f", "{SSHA}jL/9Nm27D2N4HnF7UnTcDK2J15RfX19fX19fX19fX18="},
    {" spaces ", "cafebabe00ff", "{SSHA}QgkneKJUgG4lcW+BucN8EVtHE7PK/rq+AP8="},
};

}  // namespace sfs::testing

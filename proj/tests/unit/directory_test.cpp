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

#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "oracles.hpp"
#include "sfs/credentials.hpp"
#include "sfs/directory.hpp"
#include "sfs/error.hpp"
#include "sfs/fileio.hpp"
#include "support.hpp"

namespace sfs::directory {
namespace {

using testing::TempDir;

std::string hash(std::string_view pw) { return credentials::make_credentials("x", pw).password_hash; }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Fatal;
}

TEST(Directory, CrudBasics) {
  Directory dir;
  const auto h = hash("pw");
  dir.add_user({"alice", h, std::nullopt});
  EXPECT_TRUE(dir.contains("alice"));
  EXPECT_FALSE(dir.contains("Alice"));
  EXPECT_EQ(kind_of([&] { dir.add_user({"alice", h, std::nullopt}); }), ErrorKind::Conflict);
  EXPECT_EQ(kind_of([&] { dir.add_user({"", h, std::nullopt}); }), ErrorKind::Argument);
  EXPECT_EQ(kind_of([&] { dir.add_user({"bob", "plain", std::nullopt}); }), ErrorKind::Argument);

  auto c = dir.get_credentials("alice");
  EXPECT_EQ(c.username, "alice");
  EXPECT_EQ(c.password_hash, h);
  EXPECT_FALSE(c.certificate);

  dir.set_certificate("alice", to_bytes("der"));
  EXPECT_EQ(dir.get_credentials("alice").certificate, to_bytes("der"));
  dir.set_certificate("alice", std::nullopt);
  dir.set_certificate("alice", std::nullopt);  // clearing twice is fine
  EXPECT_FALSE(dir.get_credentials("alice").certificate);

  EXPECT_EQ(kind_of([&] { dir.get_credentials("nobody"); }), ErrorKind::NotFound);
  EXPECT_EQ(kind_of([&] { dir.set_certificate("nobody", std::nullopt); }), ErrorKind::NotFound);
  EXPECT_EQ(kind_of([&] { dir.delete_user("nobody"); }), ErrorKind::NotFound);
  dir.delete_user("alice");
  EXPECT_EQ(dir.size(), 0u);
}

TEST(Directory, ModelEquivalence) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Directory dir;
    std::mt19937_64 rng(seed);
    auto result = testing::run_directory_equivalence(dir, rng, 500);
    EXPECT_EQ(result.operations, 500);
    EXPECT_TRUE(result.mismatches.empty()) << "seed " << seed << ": " << result.mismatches.front();
  }
}

TEST(Directory, LdifReexportIsByteIdentical) {
  for (std::uint64_t seed = 11; seed <= 20; ++seed) {
    Directory dir;
    std::mt19937_64 rng(seed);
    testing::run_directory_equivalence(dir, rng, 300);
    const auto first = dir.export_ldif();
    Directory copy;
    copy.import_ldif(first);
    EXPECT_EQ(copy.export_ldif(), first) << "seed " << seed;
    EXPECT_EQ(copy.uids(), dir.uids());
    for (const auto& uid : dir.uids()) EXPECT_EQ(copy.get_credentials(uid), dir.get_credentials(uid));
  }
}

TEST(Directory, FileBackedPersistsEveryMutation) {
  TempDir tmp;
  const auto path = tmp / "dir.ldif";
  const auto h = hash("pw");
  {
    Directory dir(path);
    dir.add_user({"alice", h, to_bytes("cert")});
    dir.add_user({"bob", h, std::nullopt});
    dir.delete_user("bob");
  }
  Directory reopened(path);
  EXPECT_EQ(reopened.uids(), std::vector<std::string>{"alice"});
  EXPECT_EQ(reopened.get_credentials("alice").certificate, to_bytes("cert"));
  EXPECT_EQ(read_file(path), reopened.export_ldif());
}

TEST(Directory, ImportIsAllOrNothing) {
  Directory dir;
  dir.add_user({"alice", hash("a"), std::nullopt});
  const std::string ldif = render_ldif({{"carol", hash("c"), std::nullopt}, {"alice", hash("b"), std::nullopt}});
  EXPECT_EQ(kind_of([&] { dir.import_ldif(ldif); }), ErrorKind::Conflict);
  EXPECT_FALSE(dir.contains("carol"));
  EXPECT_EQ(kind_of([&] { dir.import_ldif("dn: uid=x\nuid: x\n"); }), ErrorKind::Parse);
  EXPECT_EQ(dir.size(), 1u);
}

TEST(Ldif, RendersTheDocumentedLayout) {
  const std::string h = "{SSHA}uJDd0BIdJ9Z7yDCZNWdgYeb33+cBAgME";
  const auto text = render_ldif({{"bob", h, std::nullopt}, {"alice", h, Bytes{1, 2, 3}}});
  EXPECT_EQ(text,
            "dn: uid=alice,ou=people,dc=sfs\n"
            "objectClass: inetOrgPerson\n"
            "uid: alice\n"
            "userPassword: {SSHA}uJDd0BIdJ9Z7yDCZNWdgYeb33+cBAgME\n"
            "userCertificate;binary:: AQID\n"
            "\n"
            "dn: uid=bob,ou=people,dc=sfs\n"
            "objectClass: inetOrgPerson\n"
            "uid: bob\n"
            "userPassword: {SSHA}uJDd0BIdJ9Z7yDCZNWdgYeb33+cBAgME\n"
            "\n");
}

TEST(Ldif, FoldsLongLines) {
  const auto text = render_ldif({{"alice", hash("x"), Bytes(300, 0xAB)}});
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    EXPECT_LE(nl - start, 76u);
    start = nl + 1;
  }
  EXPECT_EQ(parse_ldif(text).at(0).user_certificate, Bytes(300, 0xAB));
}

TEST(Ldif, ParsesHandWrittenInput) {
  const std::string text =
      "version: 1\n"
      "# a comment\n"
      "dn: uid=alice,ou=people,dc=sfs\n"
      "objectClass: inetOrgPerson\n"
      "cn: Alice Example\n"
      "uid: alice\n"
      "userPassword:: e1NTSEF9dUpEZDBCSWRKOVo3eURDWk5XZGdZZWIzMytjQkFnTUU=\n"
      "userCertificate;binary:: AQ\n"
      " ID\n"
      "\n"
      "\n"
      "dn: uid=bob,ou=people,dc=sfs\n"
      "uid: bob\n"
      "userPassword: {SSHA}uJDd0BIdJ9Z7yDCZNWdgYeb33+cBAgME\n";
  const auto entries = parse_ldif(text);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].uid, "alice");
  EXPECT_EQ(entries[0].user_password, "{SSHA}uJDd0BIdJ9Z7yDCZNWdgYeb33+cBAgME");
  EXPECT_EQ(entries[0].user_certificate, (Bytes{1, 2, 3}));
  EXPECT_EQ(entries[1].uid, "bob");
  EXPECT_FALSE(entries[1].user_certificate);
}

TEST(Ldif, RejectsUnsupportedOrBrokenRecords) {
  const std::string pw = "userPassword: {SSHA}uJDd0BIdJ9Z7yDCZNWdgYeb33+cBAgME\n";
  for (const std::string& bad : std::vector<std::string>{
           "uid: alice\n" + pw,                                           // no dn
           "dn: uid=a\n" + pw,                                            // no uid
           "dn: uid=a\nuid: a\n",                                         // no password
           "dn: uid=a\nuid: a\nuid: b\n" + pw,                            // two uids
           "dn: uid=a\nchangetype: delete\nuid: a\n" + pw,                // change record
           "dn: uid=a\nuid:< file:///etc/passwd\n" + pw,                  // URL value
           "dn: uid=a\nuid: a\nuserPassword: plain\n",                    // not SSHA
           "dn: uid=a\nuid:: !!!\n" + pw,                                 // bad base64
           " continuation first\n",                                       // fold with nothing
       }) {
    EXPECT_EQ(kind_of([&] { parse_ldif(bad); }), ErrorKind::Parse) << bad;
  }
}

TEST(Directory, ConcurrentReadersAndWriters) {
  Directory dir;
  const auto h = hash("pw");
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 50; ++i) {
        const auto uid = "t" + std::to_string(t) + "u" + std::to_string(i);
        dir.add_user({uid, h, std::nullopt});
        EXPECT_TRUE(dir.contains(uid));
        (void)dir.export_ldif();
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(dir.size(), 200u);
}

}  // namespace
}  // namespace sfs::directory

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

#include <set>

#include "sfs/error.hpp"
#include "sfs/session.hpp"

namespace sfs::server {
namespace {

using namespace std::chrono_literals;

Sha256Digest fp(std::uint8_t b) {
  Sha256Digest d{};
  d.fill(b);
  return d;
}

TEST(SessionTable, TokensAreUniqueAndLong) {
  ManualClock clock;
  SessionTable table(clock.as_clock());
  std::set<std::string> tokens;
  for (int i = 0; i < 200; ++i) {
    auto s = table.create("u", filestore::Role::Normal, fp(1));
    EXPECT_EQ(s.token.size(), 64u);
    EXPECT_TRUE(tokens.insert(s.token).second);
    EXPECT_GT(s.expires_at, s.created_at);
  }
  EXPECT_EQ(table.live_count(), 200u);
}

TEST(SessionTable, IdleExpirySlides) {
  ManualClock clock;
  SessionTable table(clock.as_clock(), 30min);
  auto s = table.create("alice", filestore::Role::Normal, fp(1));
  clock.advance(29min);
  EXPECT_NO_THROW(table.touch(s.token, fp(1)));
  clock.advance(29min);
  EXPECT_NO_THROW(table.touch(s.token, fp(1)));
  clock.advance(30min);
  EXPECT_THROW(table.touch(s.token, fp(1)), Error);
  EXPECT_EQ(table.live_count(), 0u);
}

TEST(SessionTable, BoundToCertificate) {
  ManualClock clock;
  SessionTable table(clock.as_clock());
  auto s = table.create("alice", filestore::Role::Normal, fp(1));
  try {
    table.touch(s.token, fp(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unauthenticated);
  }
  EXPECT_NO_THROW(table.touch(s.token, fp(1)));
}

TEST(SessionTable, Invalidation) {
  ManualClock clock;
  SessionTable table(clock.as_clock());
  auto a = table.create("alice", filestore::Role::Normal, fp(1));
  auto a2 = table.create("alice", filestore::Role::Normal, fp(1));
  auto b = table.create("bob", filestore::Role::Normal, fp(2));
  table.invalidate(a.token);
  EXPECT_THROW(table.invalidate(a.token), Error);
  EXPECT_THROW(table.invalidate("garbage"), Error);
  EXPECT_THROW(table.touch(a.token, fp(1)), Error);
  EXPECT_NO_THROW(table.touch(a2.token, fp(1)));
  table.invalidate_user("alice");
  EXPECT_THROW(table.touch(a2.token, fp(1)), Error);
  table.invalidate_certificate(fp(2));
  EXPECT_THROW(table.touch(b.token, fp(2)), Error);
  EXPECT_EQ(table.live_count(), 0u);
}

}  // namespace
}  // namespace sfs::server

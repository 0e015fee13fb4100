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

#include "oracles.hpp"

#include <algorithm>

#include "sfs/credentials.hpp"

namespace sfs::testing {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

}  // namespace

AclInstance random_acl_instance(std::mt19937_64& rng, int max_users, int max_groups,
                                int max_files) {
  AclInstance inst;
  const int users = uniform(rng, 1, max_users);
  const int groups = uniform(rng, 0, max_groups);
  const int files = uniform(rng, 0, max_files);
  for (int u = 0; u < users; ++u) inst.users.push_back({"user" + std::to_string(u), coin(rng, 0.2)});
  for (int g = 0; g < groups; ++g) {
    std::set<int> members;
    for (int u = 0; u < users; ++u)
      if (coin(rng, 0.4)) members.insert(u);
    inst.groups.push_back(std::move(members));
  }
  for (int f = 0; f < files; ++f) inst.file_owner.push_back(uniform(rng, 0, users - 1));
  for (int g = 0; g < groups; ++g)
    for (int f = 0; f < files; ++f)
      if (coin(rng, 0.35)) inst.grants[{g, f}] = static_cast<std::uint8_t>(uniform(rng, 1, 7));
  return inst;
}

std::uint8_t oracle_rights(const AclInstance& inst, int user, int file) {
  if (inst.users[static_cast<std::size_t>(user)].admin) return 7;
  if (inst.file_owner[static_cast<std::size_t>(file)] == user) return 7;
  std::uint8_t bits = 0;
  for (std::size_t g = 0; g < inst.groups.size(); ++g) {
    if (!inst.groups[g].contains(user)) continue;
    auto it = inst.grants.find({static_cast<int>(g), file});
    if (it != inst.grants.end()) bits |= it->second;
  }
  if (bits & 2) bits |= 1;  // download implies view
  return bits;
}

LoadedInstance load_instance(filestore::FileStore& store, const AclInstance& inst,
                             std::mt19937_64& rng) {
  using filestore::RightSet;
  using filestore::Role;
  LoadedInstance ids;
  for (const auto& u : inst.users) store.create_user(u.uid, u.admin ? Role::Administrator : Role::Normal);
  for (std::size_t g = 0; g < inst.groups.size(); ++g)
    ids.group_ids.push_back(store.create_group("group" + std::to_string(g)));
  for (std::size_t f = 0; f < inst.file_owner.size(); ++f) {
    const auto& owner = inst.users[static_cast<std::size_t>(inst.file_owner[f])].uid;
    const std::string content = "content of file " + std::to_string(f);
    ids.file_ids.push_back(
        store
            .store_file(owner, "file" + std::to_string(f) + ".txt",
                        {reinterpret_cast<const std::uint8_t*>(content.data()), content.size()})
            .file_id);
  }
  const int users = static_cast<int>(inst.users.size());
  for (std::size_t g = 0; g < inst.groups.size(); ++g) {
    for (int u = 0; u < users; ++u) {
      const auto& uid = inst.users[static_cast<std::size_t>(u)].uid;
      const bool member = inst.groups[g].contains(u);
      if (member) {
        store.add_member(ids.group_ids[g], uid);
        if (coin(rng, 0.2)) store.add_member(ids.group_ids[g], uid);  // idempotent repeat
      } else if (coin(rng, 0.2)) {
        store.add_member(ids.group_ids[g], uid);
        store.remove_member(ids.group_ids[g], uid);
      }
    }
  }
  for (std::size_t g = 0; g < inst.groups.size(); ++g) {
    for (std::size_t f = 0; f < inst.file_owner.size(); ++f) {
      auto it = inst.grants.find({static_cast<int>(g), static_cast<int>(f)});
      // A throwaway grant first, so the final state depends on replacement.
      const bool scratch = coin(rng, 0.25);
      if (scratch)
        store.grant(ids.group_ids[g], ids.file_ids[f],
                    RightSet::from_bits(static_cast<std::uint8_t>(uniform(rng, 1, 7))));
      if (it != inst.grants.end())
        store.grant(ids.group_ids[g], ids.file_ids[f], RightSet::from_bits(it->second));
      else if (scratch || coin(rng, 0.5))
        store.grant(ids.group_ids[g], ids.file_ids[f], RightSet{});  // withdraw
    }
  }
  return ids;
}

std::vector<AclMismatch> compare_acl(const filestore::FileStore& store, const AclInstance& inst,
                                     const LoadedInstance& ids) {
  std::vector<AclMismatch> out;
  const int users = static_cast<int>(inst.users.size());
  const int files = static_cast<int>(inst.file_owner.size());
  for (int u = 0; u < users; ++u) {
    const auto& uid = inst.users[static_cast<std::size_t>(u)].uid;
    std::vector<std::pair<filestore::FileId, std::uint8_t>> expected_list;
    for (int f = 0; f < files; ++f) {
      const auto expected = oracle_rights(inst, u, f);
      const auto actual = store.effective_rights(uid, ids.file_ids[static_cast<std::size_t>(f)]).bits();
      if (expected != actual)
        out.push_back({"effective_rights(" + uid + ", file" + std::to_string(f) + ") = " +
                       std::to_string(actual) + ", oracle " + std::to_string(expected)});
      if (expected != 0) expected_list.emplace_back(ids.file_ids[static_cast<std::size_t>(f)], expected);
    }
    std::sort(expected_list.begin(), expected_list.end());
    std::vector<std::pair<filestore::FileId, std::uint8_t>> actual_list;
    for (const auto& fw : store.list_files_for(uid)) actual_list.emplace_back(fw.file.file_id, fw.rights.bits());
    if (actual_list != expected_list)
      out.push_back({"list_files_for(" + uid + ") differs: " + std::to_string(actual_list.size()) +
                     " entries, oracle " + std::to_string(expected_list.size())});
  }
  return out;
}

// ---------------------------------------------------------------------------

std::optional<ErrorKind> DirectoryModel::add(const directory::DirectoryEntry& e) {
  if (e.uid.empty() || !credentials::is_valid_ssha(e.user_password)) return ErrorKind::Argument;
  if (entries_.contains(e.uid)) return ErrorKind::Conflict;
  entries_[e.uid] = e;
  return std::nullopt;
}

std::optional<ErrorKind> DirectoryModel::remove(const std::string& uid) {
  if (entries_.erase(uid) == 0) return ErrorKind::NotFound;
  return std::nullopt;
}

std::optional<ErrorKind> DirectoryModel::set_certificate(const std::string& uid,
                                                         std::optional<Bytes> cert) {
  auto it = entries_.find(uid);
  if (it == entries_.end()) return ErrorKind::NotFound;
  it->second.user_certificate = std::move(cert);
  return std::nullopt;
}

std::optional<ErrorKind> DirectoryModel::set_password(const std::string& uid,
                                                      const std::string& hash) {
  if (!credentials::is_valid_ssha(hash)) return ErrorKind::Argument;
  auto it = entries_.find(uid);
  if (it == entries_.end()) return ErrorKind::NotFound;
  it->second.user_password = hash;
  return std::nullopt;
}

namespace {

template <typename Fn>
std::optional<ErrorKind> outcome_of(Fn&& fn) {
  try {
    fn();
    return std::nullopt;
  } catch (const Error& e) {
    return e.kind();
  }
}

std::string describe(const std::optional<ErrorKind>& k) {
  return k ? std::string(to_string(*k)) : "ok";
}

}  // namespace

DirectoryRunResult run_directory_equivalence(directory::Directory& dir, std::mt19937_64& rng,
                                             int operations) {
  static const std::vector<std::string> pool = {
      "alice", "bob", "carol", "dave", "Alice", "o'brien", "jos\xc3\xa9", "a,b+c", " lead",
      "trail ", "x=y", "#hash", "user.name", "u;semi", "u\"q"};
  DirectoryModel model;
  DirectoryRunResult result;
  for (int i = 0; i < operations; ++i) {
    const std::string& uid = pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pool.size()) - 1))];
    Bytes salt(credentials::generated_salt_size);
    for (auto& b : salt) b = static_cast<std::uint8_t>(uniform(rng, 0, 255));
    const auto hash = credentials::ssha_hash("pw" + std::to_string(i), salt);
    Bytes cert(static_cast<std::size_t>(uniform(rng, 1, 200)));
    for (auto& b : cert) b = static_cast<std::uint8_t>(uniform(rng, 0, 255));

    std::optional<ErrorKind> expected;
    std::optional<ErrorKind> actual;
    std::string op;
    switch (uniform(rng, 0, 5)) {
      case 0:
      case 1: {
        directory::DirectoryEntry e{uid, hash, coin(rng) ? std::optional<Bytes>(cert) : std::nullopt};
        if (coin(rng, 0.05)) e.user_password = "{SSHA}bad";
        op = "add";
        expected = model.add(e);
        actual = outcome_of([&] { dir.add_user(e); });
        break;
      }
      case 2:
        op = "delete";
        expected = model.remove(uid);
        actual = outcome_of([&] { dir.delete_user(uid); });
        break;
      case 3:
        op = "set_certificate";
        expected = model.set_certificate(uid, cert);
        actual = outcome_of([&] { dir.set_certificate(uid, cert); });
        break;
      case 4:
        op = "clear_certificate";
        expected = model.set_certificate(uid, std::nullopt);
        actual = outcome_of([&] { dir.set_certificate(uid, std::nullopt); });
        break;
      default: {
        op = "set_password";
        const std::string h = coin(rng, 0.05) ? std::string("plain") : hash;
        expected = model.set_password(uid, h);
        actual = outcome_of([&] { dir.set_password_hash(uid, h); });
        break;
      }
    }
    ++result.operations;
    if (expected != actual)
      result.mismatches.push_back("step " + std::to_string(i) + " " + op + "(" + uid +
                                  "): " + describe(actual) + ", model " + describe(expected));

    std::vector<std::string> model_uids;
    for (const auto& [k, _] : model.entries()) model_uids.push_back(k);
    if (dir.uids() != model_uids) {
      result.mismatches.push_back("step " + std::to_string(i) + ": uid sets differ");
      continue;
    }
    for (const auto& [k, e] : model.entries()) {
      const auto c = dir.get_credentials(k);
      if (c.password_hash != e.user_password || c.certificate != e.user_certificate)
        result.mismatches.push_back("step " + std::to_string(i) + ": entry " + k + " differs");
    }
  }
  return result;
}

}  // namespace sfs::testing

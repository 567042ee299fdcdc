#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "evidence_store.hpp"
#include "hash.hpp"

using namespace bcoc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("bcoc-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<std::uint8_t> bytes(std::string_view s) { return {s.begin(), s.end()}; }

Address alice() { return addressFromName("alice"); }
Address bob() { return addressFromName("bob"); }
Address carol() { return addressFromName("carol"); }

}  // namespace

TEST(EvidenceId, HashOfBlobAndNonce) {
  const auto blob = bytes("evidence");
  EXPECT_EQ(generateId(blob, 42).hex(),
            "c6be50f30d13aec27ce765978402073ad809f246e2e64ae47a808273c06d4fd5");
  EXPECT_NE(generateId(blob, 1), generateId(blob, 2));
  EXPECT_THROW(generateId({}, 1), Error);
}

TEST(Store, PutGetEraseAndReload) {
  TempDir tmp;
  const auto blob = bytes("disk image");
  const EvidenceId id = generateId(blob, 7);
  {
    EvidenceStore s(tmp.path);
    s.put(id, 7, blob);
    EXPECT_TRUE(s.contains(id));
    EXPECT_THROW(s.put(id, 7, blob), Error);
  }
  EvidenceStore s(tmp.path);
  ASSERT_TRUE(s.contains(id));
  const auto got = s.get(id);
  ASSERT_TRUE(got);
  EXPECT_EQ(got->blob, blob);
  EXPECT_EQ(got->nonce, 7u);
  EXPECT_TRUE(s.erase(id));
  EXPECT_FALSE(fs::exists(s.blobPath(id)));
  EXPECT_FALSE(s.erase(id));
  EXPECT_FALSE(s.get(id));
}

TEST(LocalLedger, ManualCommitSealsPending) {
  LocalLedger l;
  l.issue(makeCreateEvidence(l.nextSeq(), alice(), generateId(bytes("x"), 1), "", l.now()));
  EXPECT_EQ(l.committed().size(), 0u);
  EXPECT_EQ(l.mempool().size(), 1u);
  const auto receipts = l.commit();
  ASSERT_EQ(receipts.size(), 1u);
  EXPECT_TRUE(receipts[0].succeeded());
  EXPECT_EQ(l.committed().size(), 1u);
  EXPECT_EQ(l.drainOutcomes().size(), 1u);
  EXPECT_TRUE(l.drainOutcomes().empty());
}

TEST(Frontend, CustodyFlow) {
  TempDir tmp;
  EvidenceStore store(tmp.path);
  LocalLedger ledger(true);
  Frontend f(store, ledger, 3);

  const auto blob = bytes("laptop disk");
  const EvidenceId id = f.submitEvidence(alice(), blob, "laptop");
  f.sync();
  ASSERT_NE(ledger.committed().find(id), nullptr);

  f.transferEvidence(alice(), id, bob());
  f.transferEvidence(bob(), id, carol());
  f.sync();
  const auto& e = ledger.committed().getEvidence(id);
  EXPECT_EQ(e.taddr, (std::vector<Address>{alice(), bob(), carol()}));

  EXPECT_EQ(f.acquireEvidence(carol(), id), blob);
  try {
    f.acquireEvidence(alice(), id);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::NotOwner);
  }

  EXPECT_THROW(f.discardEvidence(bob(), id), Error);
  f.discardEvidence(alice(), id);
  EXPECT_TRUE(store.contains(id));
  f.sync();
  EXPECT_FALSE(store.contains(id));
  EXPECT_EQ(ledger.committed().find(id), nullptr);
  EXPECT_EQ(f.pendingDiscards(), 0u);
}

TEST(Frontend, BlobStaysUntilRemovalCommits) {
  TempDir tmp;
  EvidenceStore store(tmp.path);
  LocalLedger ledger;
  Frontend f(store, ledger, 3);
  const EvidenceId id = f.submitEvidence(alice(), bytes("abc"), "");
  ledger.commit();
  f.sync();
  f.discardEvidence(alice(), id);
  f.sync();
  EXPECT_TRUE(store.contains(id));
  EXPECT_EQ(f.pendingDiscards(), 1u);
  ledger.commit();
  f.sync();
  EXPECT_FALSE(store.contains(id));
}

TEST(Frontend, RevertedRemovalKeepsBlob) {
  TempDir tmp;
  EvidenceStore store(tmp.path);
  LocalLedger ledger;
  Frontend f(store, ledger, 3);
  const EvidenceId id = f.submitEvidence(alice(), bytes("abc"), "");
  ledger.commit();
  f.discardEvidence(alice(), id);
  f.discardEvidence(alice(), id);  // second removal reverts
  ledger.commit();
  f.sync();
  EXPECT_FALSE(store.contains(id));
  EXPECT_EQ(f.pendingDiscards(), 0u);

  const EvidenceId keep = f.submitEvidence(alice(), bytes("def"), "");
  ledger.commit();
  ledger.mutableState().transfer(alice(), keep, bob(), 5);
  f.discardEvidence(alice(), keep);
  ledger.mutableState().removeEvidence(alice(), keep);
  ledger.commit();
  f.sync();
  EXPECT_TRUE(store.contains(keep));
}

TEST(Frontend, TamperedBlobFailsIntegrity) {
  TempDir tmp;
  EvidenceStore store(tmp.path);
  LocalLedger ledger(true);
  Frontend f(store, ledger, 9);
  const EvidenceId id = f.submitEvidence(alice(), bytes("original"), "");
  {
    std::ofstream out(store.blobPath(id), std::ios::binary | std::ios::trunc);
    out << "tampered";
  }
  try {
    f.acquireEvidence(alice(), id);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::IntegrityViolation);
  }
}

TEST(Frontend, RetriesOnCollisionThenGivesUp) {
  TempDir tmp;
  EvidenceStore store(tmp.path);
  LocalLedger ledger(true);
  int calls = 0;
  EvidenceId fixed;
  fixed.bytes[0] = 1;
  Frontend f(store, ledger, 1, [&](std::span<const std::uint8_t>, std::uint64_t) {
    ++calls;
    return fixed;
  });
  EXPECT_EQ(f.submitEvidence(alice(), bytes("a"), ""), fixed);
  calls = 0;
  try {
    f.submitEvidence(alice(), bytes("b"), "");
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::IdCollision);
  }
  EXPECT_EQ(calls, Frontend::kMaxIdAttempts);
}

TEST(Frontend, InputValidation) {
  TempDir tmp;
  EvidenceStore store(tmp.path);
  LocalLedger ledger(true);
  Frontend f(store, ledger, 1);
  EXPECT_THROW(f.submitEvidence(alice(), {}, ""), Error);
  EXPECT_THROW(f.submitEvidence(Address{}, bytes("a"), ""), Error);
  EXPECT_THROW(f.submitEvidence(alice(), bytes("a"), std::string(1025, 'd')), Error);
  EXPECT_EQ(store.size(), 0u);
}

#include <gtest/gtest.h>

#include <random>

#include "ledger.hpp"
#include "reference_ledger.hpp"

using namespace bcoc;

namespace {

Address user(std::uint8_t n) {
  Address a;
  a.bytes[0] = n;
  return a;
}

EvidenceId evid(std::uint8_t n) {
  EvidenceId id;
  id.bytes[31] = n;
  return id;
}

}  // namespace

TEST(CostModel, TableAnchors) {
  EXPECT_EQ(txGas(TxType::transfer()), 80502u);
  EXPECT_EQ(txSize(TxType::transfer()), 174u);
  EXPECT_EQ(txGas(TxType::remove()), 236478u);
  EXPECT_EQ(txSize(TxType::remove()), 142u);
  EXPECT_EQ(txGas(TxType::create(0)), 170207u);
  EXPECT_EQ(txSize(TxType::create(0)), 207u);
  EXPECT_EQ(txGas(TxType::create(1024)), 897367u);
  EXPECT_EQ(txSize(TxType::create(1024)), 1233u);
}

TEST(CostModel, InterpolatedMidpoint) {
  EXPECT_EQ(txGas(TxType::create(512)), 533787u);
  EXPECT_EQ(txSize(TxType::create(512)), 720u);
}

TEST(CostModel, MonotoneInDescriptionLength) {
  for (std::uint32_t l = 1; l <= 1024; ++l) {
    EXPECT_GE(txGas(TxType::create(l)), txGas(TxType::create(l - 1)));
    EXPECT_GE(txSize(TxType::create(l)), txSize(TxType::create(l - 1)));
  }
}

TEST(CostModel, RejectsLongDescription) {
  try {
    txGas(TxType::create(1025));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidDescriptionLength);
  }
}

TEST(CostModel, OverridesTakePrecedence) {
  CostModel m;
  m.overrideCreate(100, {999, 123456});
  EXPECT_EQ(m.gas(TxType::create(100)), 123456u);
  EXPECT_EQ(m.size(TxType::create(100)), 999u);
  EXPECT_EQ(m.gas(TxType::create(1024)), 897367u);
}

TEST(Ledger, CreateRecordsCreatorAsOwner) {
  LedgerState s;
  EXPECT_EQ(s.createEvidence(user(1), evid(1), "laptop disk image", 10), Revert::None);
  const auto& e = s.getEvidence(evid(1));
  EXPECT_EQ(e.creator, user(1));
  EXPECT_EQ(e.owner, user(1));
  EXPECT_EQ(e.taddr, std::vector<Address>{user(1)});
  EXPECT_EQ(e.ttime, std::vector<std::uint64_t>{10});
}

TEST(Ledger, CreateRejections) {
  LedgerState s;
  EXPECT_EQ(s.createEvidence(user(1), EvidenceId{}, "", 1), Revert::InvalidId);
  EXPECT_EQ(s.createEvidence(Address{}, evid(1), "", 1), Revert::InvalidAddress);
  EXPECT_EQ(s.createEvidence(user(1), evid(1), std::string(1025, 'x'), 1),
            Revert::DescriptionTooLong);
  EXPECT_EQ(s.createEvidence(user(1), evid(1), std::string(1024, 'x'), 1), Revert::None);
  EXPECT_EQ(s.createEvidence(user(2), evid(1), "", 1), Revert::EvidenceAlreadyExists);
}

TEST(Ledger, TransferChainBuildsHistory) {
  LedgerState s;
  s.createEvidence(user(1), evid(1), "", 1);
  EXPECT_EQ(s.transfer(user(1), evid(1), user(2), 2), Revert::None);
  EXPECT_EQ(s.transfer(user(2), evid(1), user(3), 3), Revert::None);
  const auto& e = s.getEvidence(evid(1));
  EXPECT_EQ(e.taddr, (std::vector<Address>{user(1), user(2), user(3)}));
  EXPECT_EQ(e.ttime, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(e.owner, user(3));
  EXPECT_EQ(e.creator, user(1));
}

TEST(Ledger, TransferRejections) {
  LedgerState s;
  EXPECT_EQ(s.transfer(user(1), evid(1), user(2), 1), Revert::EvidenceNotFound);
  s.createEvidence(user(1), evid(1), "", 1);
  const LedgerState before = s;
  EXPECT_EQ(s.transfer(user(2), evid(1), user(3), 2), Revert::NotOwner);
  EXPECT_EQ(s.transfer(user(1), evid(1), Address{}, 2), Revert::InvalidAddress);
  EXPECT_EQ(s, before);
}

TEST(Ledger, TimesNeverDecrease) {
  LedgerState s;
  s.createEvidence(user(1), evid(1), "", 100);
  s.transfer(user(1), evid(1), user(2), 50);
  EXPECT_EQ(s.getEvidence(evid(1)).ttime.back(), 100u);
  EXPECT_EQ(checkEntryInvariants(s.getEvidence(evid(1))), "");
}

TEST(Ledger, RemoveByCreatorOnly) {
  LedgerState s;
  s.createEvidence(user(1), evid(1), "", 1);
  s.transfer(user(1), evid(1), user(2), 2);
  EXPECT_EQ(s.removeEvidence(user(2), evid(1)), Revert::NotCreator);
  EXPECT_EQ(s.removeEvidence(user(1), evid(1)), Revert::None);
  EXPECT_EQ(s.find(evid(1)), nullptr);
  EXPECT_THROW(s.getEvidence(evid(1)), Error);
  EXPECT_EQ(s.removeEvidence(user(1), evid(1)), Revert::EvidenceNotFound);
  // Re-creation after removal is allowed.
  EXPECT_EQ(s.createEvidence(user(3), evid(1), "", 5), Revert::None);
}

TEST(Ledger, ApplyChargesGasOnRevert) {
  LedgerState s;
  const Transaction create = makeCreateEvidence(1, user(1), evid(1), "d", SimTime{0});
  EXPECT_TRUE(applyTransaction(s, create, 1).succeeded());
  const Receipt r = applyTransaction(s, create, 2);
  EXPECT_EQ(r.status, Revert::EvidenceAlreadyExists);
  EXPECT_EQ(r.gasCharged, txGas(TxType::create(1)));
}

TEST(Ledger, TransactionConstructionChecksDescription) {
  EXPECT_THROW(makeCreateEvidence(1, user(1), evid(1), std::string(1025, 'a'), SimTime{0}), Error);
  const Transaction t = makeTransfer(2, user(1), evid(1), user(2), SimTime{0});
  EXPECT_EQ(t.gas, 80502u);
  EXPECT_EQ(t.size, 174u);
}

TEST(Ledger, DigestTracksContent) {
  LedgerState a, b;
  EXPECT_EQ(a.digest(), b.digest());
  a.createEvidence(user(1), evid(1), "x", 1);
  EXPECT_NE(a.digest(), b.digest());
  b.createEvidence(user(1), evid(1), "x", 1);
  EXPECT_EQ(a.digest(), b.digest());
}

TEST(Ledger, RestoreValidatesInvariants) {
  LedgerState s;
  EvidenceEntry bad;
  bad.id = evid(1);
  bad.creator = user(1);
  bad.owner = user(2);
  bad.taddr = {user(1)};
  bad.ttime = {1};
  EXPECT_THROW(s.restore(bad), Error);
  bad.owner = user(1);
  s.restore(bad);
  EXPECT_EQ(s.size(), 1u);
}

TEST(Ledger, MatchesReferenceOnRandomSequences) {
  std::mt19937_64 rng(7);
  for (int run = 0; run < 200; ++run) {
    LedgerState state;
    reference::Ledger ref;
    for (const auto& [tx, now] : reference::randomSequence(rng, 1 + rng() % 200)) {
      const LedgerState before = state;
      const Receipt r = applyTransaction(state, tx, now);
      ASSERT_EQ(r.status, ref.apply(tx, now)) << "run " << run << " seq " << tx.seq;
      ASSERT_EQ(r.gasCharged, tx.gas);
      if (!r.succeeded()) {
        ASSERT_EQ(state, before);
      }
    }
    std::string why;
    ASSERT_TRUE(reference::sameState(state, ref, &why)) << why;
    for (const auto& [id, e] : state.entries()) ASSERT_EQ(checkEntryInvariants(e), "");
  }
}

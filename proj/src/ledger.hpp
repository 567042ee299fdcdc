#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "types.hpp"

namespace bcoc {

inline constexpr std::uint32_t kMaxDescriptionLength = 1024;

enum class TxKind : std::uint8_t { CreateEvidence, Transfer, RemoveEvidence };

const char* txKindName(TxKind kind) noexcept;

/// A transaction type in the cost-model sense: CreateEvidence is a distinct
/// type for every description length.
struct TxType {
  TxKind kind = TxKind::Transfer;
  std::uint32_t descriptionLength = 0;

  static TxType create(std::uint32_t length) { return {TxKind::CreateEvidence, length}; }
  static TxType transfer() { return {TxKind::Transfer, 0}; }
  static TxType remove() { return {TxKind::RemoveEvidence, 0}; }

  friend auto operator<=>(const TxType&, const TxType&) = default;
};

struct TxCost {
  std::uint64_t size = 0;  // bytes
  std::uint64_t gas = 0;   // units
};

/// Per-type size and gas. Defaults to the measured prototype values with
/// linear interpolation for intermediate description lengths; individual
/// CreateEvidence lengths can be overridden with measured figures.
class CostModel {
 public:
  CostModel();

  TxCost cost(TxType type) const;
  std::uint64_t gas(TxType type) const { return cost(type).gas; }
  std::uint64_t size(TxType type) const { return cost(type).size; }

  void setTransfer(TxCost c) { transfer_ = c; }
  void setRemove(TxCost c) { remove_ = c; }
  void setCreateEndpoints(TxCost atZero, TxCost atMax);
  void overrideCreate(std::uint32_t length, TxCost c);

  static const CostModel& standard();

 private:
  TxCost transfer_;
  TxCost remove_;
  TxCost createZero_;
  TxCost createMax_;
  std::map<std::uint32_t, TxCost> createOverrides_;
};

/// Gas and size under the standard cost model. Throw InvalidDescriptionLength
/// for CreateEvidence lengths above 1024.
std::uint64_t txGas(TxType type);
std::uint64_t txSize(TxType type);

enum class Revert : std::uint8_t {
  None,
  InvalidId,
  EvidenceAlreadyExists,
  DescriptionTooLong,
  EvidenceNotFound,
  NotOwner,
  NotCreator,
  InvalidAddress,
};

const char* revertName(Revert r) noexcept;

struct Transaction {
  std::uint64_t seq = 0;  // unique within a simulation
  TxKind kind = TxKind::Transfer;
  Address issuer;
  EvidenceId evidence;
  Address newOwner;         // Transfer only
  std::string description;  // CreateEvidence only
  SimTime issueTime{0};
  std::uint64_t gas = 0;
  std::uint64_t size = 0;

  TxType type() const {
    return kind == TxKind::CreateEvidence
               ? TxType::create(static_cast<std::uint32_t>(description.size()))
               : TxType{kind, 0};
  }

  Digest hash() const;
};

Transaction makeCreateEvidence(std::uint64_t seq, const Address& issuer, const EvidenceId& id,
                               std::string description, SimTime issueTime,
                               const CostModel& costs = CostModel::standard());
Transaction makeTransfer(std::uint64_t seq, const Address& issuer, const EvidenceId& id,
                         const Address& newOwner, SimTime issueTime,
                         const CostModel& costs = CostModel::standard());
Transaction makeRemoveEvidence(std::uint64_t seq, const Address& issuer, const EvidenceId& id,
                               SimTime issueTime,
                               const CostModel& costs = CostModel::standard());

struct Receipt {
  std::uint64_t txSeq = 0;
  Revert status = Revert::None;
  std::uint64_t gasCharged = 0;

  bool succeeded() const { return status == Revert::None; }
};

/// Custody record. taddr and ttime grow together, creator first.
struct EvidenceEntry {
  EvidenceId id;
  Address creator;
  Address owner;
  std::string description;
  std::vector<Address> taddr;
  std::vector<std::uint64_t> ttime;  // seconds

  friend bool operator==(const EvidenceEntry&, const EvidenceEntry&) = default;
};

/// The evidence log: a map from id to custody record, mutated only through
/// the three contract primitives. Every mutator either applies completely
/// or returns a revert reason and leaves the state untouched.
class LedgerState {
 public:
  Revert createEvidence(const Address& sender, const EvidenceId& id, std::string description,
                        std::uint64_t now);
  Revert transfer(const Address& sender, const EvidenceId& id, const Address& newOwner,
                  std::uint64_t now);
  Revert removeEvidence(const Address& sender, const EvidenceId& id);

  const EvidenceEntry* find(const EvidenceId& id) const;
  // Throws EvidenceNotFound.
  const EvidenceEntry& getEvidence(const EvidenceId& id) const;

  std::size_t size() const { return evidences_.size(); }
  const std::map<EvidenceId, EvidenceEntry>& entries() const { return evidences_; }

  /// Hash over every entry in id order; equal states have equal digests.
  Digest digest() const;

  /// Restores an entry verbatim (persistence). Validates the entry invariants.
  void restore(EvidenceEntry entry);

  friend bool operator==(const LedgerState&, const LedgerState&) = default;

 private:
  std::map<EvidenceId, EvidenceEntry> evidences_;
};

/// Dispatches a transaction to the matching primitive. Gas is charged whether
/// or not the call reverts.
Receipt applyTransaction(LedgerState& state, const Transaction& tx, std::uint64_t ledgerTime);

/// Checks the per-entry invariants; returns an empty string when they hold.
std::string checkEntryInvariants(const EvidenceEntry& entry);

}  // namespace bcoc

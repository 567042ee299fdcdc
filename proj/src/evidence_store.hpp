#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "block.hpp"
#include "ledger.hpp"
#include "net_sim.hpp"

namespace bcoc {

/// sha256(blob || big-endian nonce). Throws EmptyEvidence for an empty blob.
EvidenceId generateId(std::span<const std::uint8_t> blob, std::uint64_t nonce);

struct StoredEvidence {
  EvidenceId id;
  std::uint64_t nonce = 0;
  std::vector<std::uint8_t> blob;
  std::uint64_t size = 0;
};

/// Flat-file evidence repository: <root>/<hex id>.bin plus <root>/index.tsv
/// with one "hexId<TAB>nonce<TAB>size" line per blob.
class EvidenceStore {
 public:
  explicit EvidenceStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path blobPath(const EvidenceId& id) const;

  bool contains(const EvidenceId& id) const { return index_.contains(id); }
  std::size_t size() const { return index_.size(); }
  std::vector<EvidenceId> ids() const;

  /// Throws IdCollision if the id is already stored, IoError on write failure.
  void put(const EvidenceId& id, std::uint64_t nonce, std::span<const std::uint8_t> blob);
  std::optional<StoredEvidence> get(const EvidenceId& id) const;
  bool erase(const EvidenceId& id);

 private:
  struct Meta {
    std::uint64_t nonce;
    std::uint64_t size;
  };
  void loadIndex();
  void saveIndex() const;

  std::filesystem::path root_;
  std::map<EvidenceId, Meta> index_;
};

/// The frontend's view of the evidence log: it can issue transactions and
/// read committed state, never pending state.
class LedgerGateway {
 public:
  struct Outcome {
    Transaction tx;
    Receipt receipt;
  };

  virtual ~LedgerGateway() = default;
  virtual std::uint64_t nextSeq() = 0;
  virtual SimTime now() const = 0;
  virtual void issue(Transaction tx) = 0;
  virtual const LedgerState& committed() const = 0;
  /// Outcomes committed since the previous call, in commit order.
  virtual std::vector<Outcome> drainOutcomes() = 0;
};

/// Single-node evidence log: a mempool and a chain without consensus.
/// commit() seals every pending transaction into a block; with autoCommit
/// each issued transaction is committed immediately.
class LocalLedger final : public LedgerGateway {
 public:
  explicit LocalLedger(bool autoCommit = false, std::uint64_t gasLimit = UINT64_MAX);

  std::uint64_t nextSeq() override { return seq_++; }
  SimTime now() const override { return now_; }
  void setNow(SimTime t) { now_ = t; }
  void issue(Transaction tx) override;
  const LedgerState& committed() const override { return state_; }
  std::vector<Outcome> drainOutcomes() override;

  /// Builds and applies one block stamped with the current time.
  std::vector<Receipt> commit();

  const Mempool& mempool() const { return mempool_; }
  const std::vector<Block>& chain() const { return chain_; }
  LedgerState& mutableState() { return state_; }
  void setNextSeq(std::uint64_t seq) { seq_ = seq; }

 private:
  bool autoCommit_;
  std::uint64_t gasLimit_;
  std::uint64_t seq_ = 1;
  SimTime now_{0};
  Mempool mempool_;
  LedgerState state_;
  std::vector<Block> chain_;
  std::vector<Outcome> outcomes_;
};

/// Custody workflow over a store and a ledger: submit, acquire, transfer,
/// discard. Blobs of discarded evidence are deleted only once the removal
/// transaction has committed successfully (see sync()).
class Frontend {
 public:
  using IdGenerator = std::function<EvidenceId(std::span<const std::uint8_t>, std::uint64_t)>;

  static constexpr int kMaxIdAttempts = 8;

  Frontend(EvidenceStore& store, LedgerGateway& ledger, std::uint64_t seed,
           IdGenerator idGen = generateId);

  EvidenceId submitEvidence(const Address& creator, std::span<const std::uint8_t> blob,
                            std::string description);
  std::vector<std::uint8_t> acquireEvidence(const Address& requester, const EvidenceId& id);
  /// Issues a Transfer; the ledger decides whether it succeeds.
  std::uint64_t transferEvidence(const Address& owner, const EvidenceId& id,
                                 const Address& newOwner);
  std::uint64_t discardEvidence(const Address& requester, const EvidenceId& id);

  /// Applies committed outcomes: deletes blobs whose removal succeeded and
  /// forgets removals that reverted. Returns the outcomes processed.
  std::vector<LedgerGateway::Outcome> sync();

  std::size_t pendingDiscards() const { return pendingDiscards_.size(); }

 private:
  EvidenceStore& store_;
  LedgerGateway& ledger_;
  DeterministicRng rng_;
  IdGenerator idGen_;
  std::map<std::uint64_t, EvidenceId> pendingDiscards_;
};

}  // namespace bcoc

#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bcoc {

enum class ErrorCode {
  InvalidArgument,
  ConfigError,
  InvalidSpec,
  EvidenceNotFound,
  EvidenceAlreadyExists,
  InvalidId,
  DescriptionTooLong,
  InvalidDescriptionLength,
  InvalidAddress,
  NotOwner,
  NotCreator,
  EmptyEvidence,
  IntegrityViolation,
  IdCollision,
  IoError,
  SchedulingInPast,
  UnknownNode,
  NotProposer,
  InvalidMaxSize,
  InvalidBounds,
  CapacityTooLargeForExactDP,
};

const char* errorName(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

std::string toHex(const std::uint8_t* data, std::size_t size);
// Returns false on odd length or a non-hex character.
bool fromHex(std::string_view hex, std::uint8_t* out, std::size_t size);

/// Fixed-width opaque identifier. The tag keeps addresses, evidence ids and
/// digests from being mixed up at compile time.
template <std::size_t N, class Tag>
struct FixedBytes {
  static constexpr std::size_t kSize = N;
  std::array<std::uint8_t, N> bytes{};

  bool isZero() const noexcept {
    for (auto b : bytes) {
      if (b != 0) return false;
    }
    return true;
  }

  std::string hex() const { return toHex(bytes.data(), N); }

  static FixedBytes fromHexOrThrow(std::string_view text) {
    FixedBytes out;
    if (text.size() != 2 * N || !fromHex(text, out.bytes.data(), N)) {
      throw Error(ErrorCode::InvalidArgument,
                  "expected " + std::to_string(2 * N) + " hex digits, got '" +
                      std::string(text) + "'");
    }
    return out;
  }

  friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
};

using Address = FixedBytes<20, struct AddressTag>;
using EvidenceId = FixedBytes<32, struct EvidenceIdTag>;
using Digest = FixedBytes<32, struct DigestTag>;

/// Simulation time since genesis. Never derived from the wall clock.
using SimTime = std::chrono::nanoseconds;

inline SimTime fromSeconds(double seconds) {
  return SimTime(static_cast<std::int64_t>(seconds * 1e9 + (seconds >= 0 ? 0.5 : -0.5)));
}

inline double toSeconds(SimTime t) { return static_cast<double>(t.count()) / 1e9; }

/// Address derived from a human-readable name, used for simulated identities.
Address addressFromName(std::string_view name);

}  // namespace bcoc

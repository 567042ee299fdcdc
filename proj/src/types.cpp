#include "types.hpp"

#include <algorithm>

#include "hash.hpp"

namespace bcoc {

const char* errorName(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EvidenceNotFound: return "EvidenceNotFound";
    case ErrorCode::EvidenceAlreadyExists: return "EvidenceAlreadyExists";
    case ErrorCode::InvalidId: return "InvalidId";
    case ErrorCode::DescriptionTooLong: return "DescriptionTooLong";
    case ErrorCode::InvalidDescriptionLength: return "InvalidDescriptionLength";
    case ErrorCode::InvalidAddress: return "InvalidAddress";
    case ErrorCode::NotOwner: return "NotOwner";
    case ErrorCode::NotCreator: return "NotCreator";
    case ErrorCode::EmptyEvidence: return "EmptyEvidence";
    case ErrorCode::IntegrityViolation: return "IntegrityViolation";
    case ErrorCode::IdCollision: return "IdCollision";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchedulingInPast: return "SchedulingInPast";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NotProposer: return "NotProposer";
    case ErrorCode::InvalidMaxSize: return "InvalidMaxSize";
    case ErrorCode::InvalidBounds: return "InvalidBounds";
    case ErrorCode::CapacityTooLargeForExactDP: return "CapacityTooLargeForExactDP";
  }
  return "Unknown";
}

std::string toHex(const std::uint8_t* data, std::size_t size) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(2 * size, '0');
  for (std::size_t i = 0; i < size; ++i) {
    out[2 * i] = kDigits[data[i] >> 4];
    out[2 * i + 1] = kDigits[data[i] & 0x0f];
  }
  return out;
}

namespace {
int nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

bool fromHex(std::string_view hex, std::uint8_t* out, std::size_t size) {
  if (hex.size() != 2 * size) return false;
  for (std::size_t i = 0; i < size; ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return false;
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return true;
}

Address addressFromName(std::string_view name) {
  Digest d = sha256(name);
  Address a;
  std::copy_n(d.bytes.begin(), Address::kSize, a.bytes.begin());
  return a;
}

}  // namespace bcoc

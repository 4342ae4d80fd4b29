#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sis/errors.hpp"

namespace sis {

/// Fixed-length binary vector. Bit i maps to node i; the integer encoding
/// puts node i at bit position i, so enumeration in ascending index order
/// is the canonical order for configurations and actions.
template <class Tag>
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : bits_(n, 0) {}
  explicit BitVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) b = b ? 1 : 0;
  }

  static BitVector from_index(std::size_t n, std::uint64_t index) {
    if (n < 64 && (index >> n) != 0)
      throw ArgumentError("index " + std::to_string(index) + " does not fit in " +
                          std::to_string(n) + " bits");
    BitVector v(n);
    for (std::size_t i = 0; i < n && i < 64; ++i) v.bits_[i] = (index >> i) & 1U;
    return v;
  }

  /// Parses "0110..." where character i is node i.
  static BitVector parse(std::string_view text) {
    BitVector v(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] != '0' && text[i] != '1')
        throw ArgumentError("bit string may only contain '0' and '1': " + std::string(text));
      v.bits_[i] = text[i] == '1';
    }
    return v;
  }

  std::uint64_t index() const {
    if (bits_.size() > 63)
      throw CapabilityError("bit vector of length " + std::to_string(bits_.size()) +
                            " has no 64-bit index");
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i)
      idx |= static_cast<std::uint64_t>(bits_[i]) << i;
    return idx;
  }

  std::string to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) s[i] = '1';
    return s;
  }

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto b : bits_) c += b;
    return c;
  }
  bool none() const { return count() == 0; }

  const std::vector<std::uint8_t>& raw() const { return bits_; }

  auto operator<=>(const BitVector&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// X(k): infection status of every node (1 = infected).
using Configuration = BitVector<struct ConfigurationTag>;
/// u(k): protection decision of every node (1 = protected).
using Action = BitVector<struct ActionTag>;

/// Open-loop control over a horizon; entry h applies at step t0 + h.
using ControlSchedule = std::vector<Action>;

inline ControlSchedule zero_schedule(std::size_t n, std::size_t steps) {
  return ControlSchedule(steps, Action(n));
}

inline std::size_t total_protections(const ControlSchedule& u) {
  std::size_t c = 0;
  for (const auto& a : u) c += a.count();
  return c;
}

}  // namespace sis

#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

#include "statfinder/error.hpp"

namespace statfinder {

// Identifier of the form <P1><P2> followed by exactly `Digits` decimal
// digits, e.g. St000004 or Mp00001. Ordered by its text, which coincides
// with numeric order because the width is fixed.
template <char P1, char P2, int Digits>
class PrefixedId {
 public:
  static constexpr int kDigits = Digits;
  static constexpr long kMaxNumber = [] {
    long m = 1;
    for (int i = 0; i < Digits; ++i) m *= 10;
    return m - 1;
  }();

  PrefixedId() = default;

  static bool valid(std::string_view text) noexcept {
    if (text.size() != 2 + Digits || text[0] != P1 || text[1] != P2) return false;
    for (std::size_t i = 2; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9') return false;
    }
    return true;
  }

  static PrefixedId parse(std::string_view text) {
    if (!valid(text)) {
      throw InvalidIdentifier("\"" + std::string(text) + "\" is not an identifier of the form " +
                              std::string{P1, P2} + std::string(Digits, 'N'));
    }
    PrefixedId id;
    id.text_ = std::string(text);
    return id;
  }

  static PrefixedId from_number(long number) {
    if (number < 0 || number > kMaxNumber) {
      throw IdentifierOverflow("identifier number " + std::to_string(number) + " out of range");
    }
    std::string digits = std::to_string(number);
    return parse(std::string{P1, P2} + std::string(Digits - digits.size(), '0') + digits);
  }

  long number() const { return std::stol(text_.substr(2)); }
  const std::string& str() const noexcept { return text_; }

  auto operator<=>(const PrefixedId&) const = default;
  bool operator==(const PrefixedId&) const = default;

 private:
  std::string text_;
};

using StatisticId = PrefixedId<'S', 't', 6>;
using MapId = PrefixedId<'M', 'p', 5>;

}  // namespace statfinder

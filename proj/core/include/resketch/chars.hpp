#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace resketch {

// Working alphabet: printable ASCII, 0x20 ' ' through 0x7e '~'.
inline constexpr char kAlphabetFirst = 0x20;
inline constexpr char kAlphabetLast = 0x7e;
inline constexpr int kAlphabetSize = kAlphabetLast - kAlphabetFirst + 1;  // 95

inline bool in_alphabet(char c) { return c >= kAlphabetFirst && c <= kAlphabetLast; }

// Bitset over the 95-character alphabet. Value type, cheap to copy.
struct CharSet {
  uint64_t lo = 0;
  uint64_t hi = 0;

  static CharSet none() { return {}; }
  static CharSet all();
  static CharSet of(std::string_view chars);
  static CharSet range(char first, char last);

  void insert(char c);
  bool contains(char c) const;
  bool empty() const { return lo == 0 && hi == 0; }
  int count() const;
  char first() const;          // smallest member; requires !empty()
  char nth(int i) const;       // i-th smallest member; requires i < count()

  CharSet operator|(const CharSet& o) const { return {lo | o.lo, hi | o.hi}; }
  CharSet operator&(const CharSet& o) const { return {lo & o.lo, hi & o.hi}; }
  CharSet operator-(const CharSet& o) const { return {lo & ~o.lo, hi & ~o.hi}; }
  bool operator==(const CharSet&) const = default;

  // Compact human-readable form for diagnostics and DOT labels, e.g. "[0-9]".
  std::string label() const;
};

// Named character classes of the surface language. Eps and Null are the empty
// string and empty language; they denote no characters.
enum class CharClass : uint8_t {
  Let,
  Vow,
  Cap,
  Low,
  Num,
  Alphanum,
  Hex,
  Spec,
  Any,
  Eps,
  Null,
};

const CharSet& char_class_set(CharClass c);
std::string_view char_class_name(CharClass c);
bool char_class_from_name(std::string_view name, CharClass* out);

}  // namespace resketch

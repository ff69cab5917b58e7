#include "resketch/chars.hpp"

#include <array>
#include <bit>
#include <cassert>

namespace resketch {

namespace {

int bit_index(char c) {
  assert(in_alphabet(c));
  return c - kAlphabetFirst;
}

}  // namespace

CharSet CharSet::all() {
  CharSet s;
  s.lo = ~uint64_t{0};
  s.hi = (uint64_t{1} << (kAlphabetSize - 64)) - 1;
  return s;
}

CharSet CharSet::of(std::string_view chars) {
  CharSet s;
  for (char c : chars) s.insert(c);
  return s;
}

CharSet CharSet::range(char first, char last) {
  CharSet s;
  for (char c = first; c <= last; ++c) s.insert(c);
  return s;
}

void CharSet::insert(char c) {
  int i = bit_index(c);
  if (i < 64)
    lo |= uint64_t{1} << i;
  else
    hi |= uint64_t{1} << (i - 64);
}

bool CharSet::contains(char c) const {
  if (!in_alphabet(c)) return false;
  int i = c - kAlphabetFirst;
  return i < 64 ? (lo >> i) & 1 : (hi >> (i - 64)) & 1;
}

int CharSet::count() const { return std::popcount(lo) + std::popcount(hi); }

char CharSet::first() const {
  assert(!empty());
  int i = lo ? std::countr_zero(lo) : 64 + std::countr_zero(hi);
  return static_cast<char>(kAlphabetFirst + i);
}

char CharSet::nth(int i) const {
  assert(i >= 0 && i < count());
  for (int b = 0; b < kAlphabetSize; ++b) {
    char c = static_cast<char>(kAlphabetFirst + b);
    if (contains(c) && i-- == 0) return c;
  }
  assert(false);
  return 0;
}

std::string CharSet::label() const {
  std::string out = "[";
  int b = 0;
  while (b < kAlphabetSize) {
    if (!contains(static_cast<char>(kAlphabetFirst + b))) {
      ++b;
      continue;
    }
    int e = b;
    while (e + 1 < kAlphabetSize && contains(static_cast<char>(kAlphabetFirst + e + 1))) ++e;
    out += static_cast<char>(kAlphabetFirst + b);
    if (e > b + 1) out += '-';
    if (e > b) out += static_cast<char>(kAlphabetFirst + e);
    b = e + 1;
  }
  out += ']';
  return out;
}

namespace {

struct ClassTable {
  CharSet let, vow, cap, low, num, alphanum, hex, spec, any, none;
  ClassTable() {
    cap = CharSet::range('A', 'Z');
    low = CharSet::range('a', 'z');
    num = CharSet::range('0', '9');
    let = cap | low;
    vow = CharSet::of("AEIOUaeiou");
    alphanum = let | num;
    hex = num | CharSet::range('A', 'F') | CharSet::range('a', 'f');
    any = CharSet::all();
    spec = (any - alphanum) - CharSet::of(" ");
  }
};

const ClassTable& table() {
  static const ClassTable t;
  return t;
}

}  // namespace

const CharSet& char_class_set(CharClass c) {
  const ClassTable& t = table();
  switch (c) {
    case CharClass::Let: return t.let;
    case CharClass::Vow: return t.vow;
    case CharClass::Cap: return t.cap;
    case CharClass::Low: return t.low;
    case CharClass::Num: return t.num;
    case CharClass::Alphanum: return t.alphanum;
    case CharClass::Hex: return t.hex;
    case CharClass::Spec: return t.spec;
    case CharClass::Any: return t.any;
    case CharClass::Eps:
    case CharClass::Null: return t.none;
  }
  return t.none;
}

std::string_view char_class_name(CharClass c) {
  switch (c) {
    case CharClass::Let: return "let";
    case CharClass::Vow: return "vow";
    case CharClass::Cap: return "cap";
    case CharClass::Low: return "low";
    case CharClass::Num: return "num";
    case CharClass::Alphanum: return "alphanum";
    case CharClass::Hex: return "hex";
    case CharClass::Spec: return "spec";
    case CharClass::Any: return "any";
    case CharClass::Eps: return "eps";
    case CharClass::Null: return "null";
  }
  return "";
}

bool char_class_from_name(std::string_view name, CharClass* out) {
  static constexpr std::array<CharClass, 11> kAll = {
      CharClass::Let, CharClass::Vow, CharClass::Cap,  CharClass::Low,
      CharClass::Num, CharClass::Alphanum, CharClass::Hex, CharClass::Spec,
      CharClass::Any, CharClass::Eps, CharClass::Null,
  };
  for (CharClass c : kAll) {
    if (char_class_name(c) == name) {
      *out = c;
      return true;
    }
  }
  return false;
}

}  // namespace resketch

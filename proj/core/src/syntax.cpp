#include "resketch/syntax.hpp"

#include <array>
#include <cctype>
#include <optional>
#include <string_view>

namespace resketch {

namespace {

struct OpSpelling {
  Op op;
  std::string_view name;
  int regex_args;
  int int_args;
};

constexpr std::array<OpSpelling, 12> kOps = {{
    {Op::StartsWith, "StartsWith", 1, 0},
    {Op::EndsWith, "EndsWith", 1, 0},
    {Op::Contains, "Contains", 1, 0},
    {Op::Not, "Not", 1, 0},
    {Op::Optional, "Optional", 1, 0},
    {Op::KleeneStar, "KleeneStar", 1, 0},
    {Op::Concat, "Concat", 2, 0},
    {Op::And, "And", 2, 0},
    {Op::Or, "Or", 2, 0},
    {Op::Repeat, "Repeat", 1, 1},
    {Op::RepeatAtLeast, "RepeatAtLeast", 1, 1},
    {Op::RepeatRange, "RepeatRange", 1, 2},
}};

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Sketch parse() {
    Sketch s = sketch();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return s;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char take() {
    if (pos_ >= text_.size()) fail("unexpected end of input");
    return text_[pos_++];
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  Sketch sketch() {
    skip_ws();
    char c = peek();
    if (c == '?') return hole_sketch();
    if (c == '<') return angle();
    if (c == '"') return quoted();
    if (std::isalpha(static_cast<unsigned char>(c))) return operator_form();
    fail("expected a regex or sketch");
  }

  Sketch hole_sketch() {
    expect('?');
    expect('{');
    std::vector<Sketch> comps;
    skip_ws();
    if (peek() != '}') {
      comps.push_back(sketch());
      skip_ws();
      while (peek() == ',') {
        ++pos_;
        comps.push_back(sketch());
        skip_ws();
      }
    }
    expect('}');
    return hole(std::move(comps));
  }

  Sketch angle() {
    expect('<');
    size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '>') ++pos_;
    if (pos_ >= text_.size()) fail("unterminated '<'");
    std::string_view body(text_.data() + start, pos_ - start);
    ++pos_;  // '>'
    CharClass c;
    if (char_class_from_name(body, &c)) return Sketch(cls(c));
    if (body.size() != 1) {
      pos_ = start;
      fail("unknown character class");
    }
    if (!in_alphabet(body[0])) {
      pos_ = start;
      fail("literal outside alphabet");
    }
    return Sketch(lit(body[0]));
  }

  Sketch quoted() {
    expect('"');
    std::string chars;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string literal");
      char c = take();
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("dangling escape");
        c = take();
      }
      if (!in_alphabet(c)) {
        --pos_;
        fail("literal outside alphabet");
      }
      chars += c;
    }
    return Sketch(str(chars));
  }

  int integer() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer");
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (take() - '0');
      if (v > 1'000'000) fail("repetition count too large");
    }
    if (v < 1) fail("repetition count must be >= 1");
    return static_cast<int>(v);
  }

  Sketch operator_form() {
    size_t start = pos_;
    while (std::isalnum(static_cast<unsigned char>(peek()))) ++pos_;
    std::string_view name(text_.data() + start, pos_ - start);

    const OpSpelling* spec = nullptr;
    for (const OpSpelling& s : kOps) {
      if (s.name == name) spec = &s;
    }
    if (!spec && name == "RepAtLeast") spec = &kOps[10];
    if (!spec && name == "RepRange") spec = &kOps[11];
    if (!spec) {
      pos_ = start;
      fail("unknown operator '" + std::string(name) + "'");
    }

    expect('(');
    std::vector<Sketch> args;
    args.push_back(sketch());
    if (spec->regex_args == 2) {
      skip_ws();
      expect(',');
      args.push_back(sketch());
    }
    std::vector<int> ints;
    for (int i = 0; i < spec->int_args; ++i) {
      skip_ws();
      expect(',');
      ints.push_back(integer());
    }
    skip_ws();
    size_t op_pos = pos_;
    expect(')');

    switch (spec->op) {
      case Op::StartsWith: return starts_with(args[0]);
      case Op::EndsWith: return ends_with(args[0]);
      case Op::Contains: return contains(args[0]);
      case Op::Not: return negate(args[0]);
      case Op::Optional: return optional(args[0]);
      case Op::KleeneStar: return star(args[0]);
      case Op::Concat: return concat(args[0], args[1]);
      case Op::And: return conj(args[0], args[1]);
      case Op::Or: return alt(args[0], args[1]);
      case Op::Repeat: return repeat(args[0], ints[0]);
      case Op::RepeatAtLeast: return repeat_at_least(args[0], ints[0]);
      case Op::RepeatRange:
        if (ints[0] > ints[1]) {
          pos_ = op_pos;
          fail("repetition range is inverted");
        }
        return repeat_range(args[0], ints[0], ints[1]);
      default: fail("unreachable");
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
};

std::string_view op_name(Op op) {
  for (const OpSpelling& s : kOps)
    if (s.op == op) return s.name;
  return "";
}

void print_node(const NodeRef& n, std::string& out) {
  switch (n->op) {
    case Op::Class:
      out += '<';
      out += char_class_name(n->cls);
      out += '>';
      return;
    case Op::Literal:
      if (n->lit == '<' || n->lit == '>' || n->lit == '"' || n->lit == '\\') {
        out += '"';
        if (n->lit == '"' || n->lit == '\\') out += '\\';
        out += n->lit;
        out += '"';
      } else {
        out += '<';
        out += n->lit;
        out += '>';
      }
      return;
    case Op::Hole:
      out += "?{";
      for (size_t i = 0; i < n->kids.size(); ++i) {
        if (i) out += ',';
        print_node(n->kids[i], out);
      }
      out += '}';
      return;
    default: break;
  }
  out += op_name(n->op);
  out += '(';
  for (size_t i = 0; i < n->kids.size(); ++i) {
    if (i) out += ',';
    print_node(n->kids[i], out);
  }
  if (n->op == Op::Repeat || n->op == Op::RepeatAtLeast) {
    out += ',';
    out += std::to_string(n->min);
  } else if (n->op == Op::RepeatRange) {
    out += ',';
    out += std::to_string(n->min);
    out += ',';
    out += std::to_string(n->max);
  }
  out += ')';
}

std::string class_standard(CharClass c) {
  switch (c) {
    case CharClass::Let: return "[A-Za-z]";
    case CharClass::Vow: return "[AEIOUaeiou]";
    case CharClass::Cap: return "[A-Z]";
    case CharClass::Low: return "[a-z]";
    case CharClass::Num: return "[0-9]";
    case CharClass::Alphanum: return "[A-Za-z0-9]";
    case CharClass::Hex: return "[0-9A-Fa-f]";
    case CharClass::Spec: return "[!-/:-@\\[-`{-~]";
    case CharClass::Any: return ".";
    case CharClass::Eps: return "()";
    case CharClass::Null: return "[^ -~]";  // nothing printable; empty over our alphabet
  }
  return "";
}

std::string escape_standard(char c) {
  static constexpr std::string_view kSpecial = "\\^$.|?*+()[]{}";
  std::string out;
  if (kSpecial.find(c) != std::string_view::npos) out += '\\';
  out += c;
  return out;
}

void std_node(const NodeRef& n, std::string& out);

// Parenthesized operand.
void std_group(const NodeRef& n, std::string& out) {
  out += '(';
  std_node(n, out);
  out += ')';
}

// Concat operand: literals and nested concat chains stay bare so literal
// strings read naturally ("truck"); everything else is grouped.
void std_concat_operand(const NodeRef& n, std::string& out) {
  if (n->op == Op::Literal || n->op == Op::Concat)
    std_node(n, out);
  else
    std_group(n, out);
}

void std_node(const NodeRef& n, std::string& out) {
  switch (n->op) {
    case Op::Class: out += class_standard(n->cls); return;
    case Op::Literal: out += escape_standard(n->lit); return;
    case Op::StartsWith:
      std_group(n->kids[0], out);
      out += ".*";
      return;
    case Op::EndsWith:
      out += ".*";
      std_group(n->kids[0], out);
      return;
    case Op::Contains:
      out += ".*";
      std_group(n->kids[0], out);
      out += ".*";
      return;
    case Op::Not:
      out += '~';
      std_group(n->kids[0], out);
      return;
    case Op::Optional:
      std_group(n->kids[0], out);
      out += '?';
      return;
    case Op::KleeneStar:
      std_group(n->kids[0], out);
      out += '*';
      return;
    case Op::Concat:
      std_concat_operand(n->kids[0], out);
      std_concat_operand(n->kids[1], out);
      return;
    case Op::And:
      std_group(n->kids[0], out);
      out += '&';
      std_group(n->kids[1], out);
      return;
    case Op::Or:
      std_group(n->kids[0], out);
      out += '|';
      std_group(n->kids[1], out);
      return;
    case Op::Repeat:
      std_group(n->kids[0], out);
      out += '{' + std::to_string(n->min) + '}';
      return;
    case Op::RepeatAtLeast:
      std_group(n->kids[0], out);
      out += '{' + std::to_string(n->min) + ",}";
      return;
    case Op::RepeatRange:
      std_group(n->kids[0], out);
      out += '{' + std::to_string(n->min) + ',' + std::to_string(n->max) + '}';
      return;
    case Op::Hole: return;  // unreachable: input is concrete
  }
}

}  // namespace

Regex parse_regex(const std::string& text) {
  Sketch s = Parser(text).parse();
  if (!s.concrete()) throw ParseError("holes are not allowed in a regex", 0);
  return to_regex(s);
}

Sketch parse_sketch(const std::string& text) { return Parser(text).parse(); }

std::string print_sketch(const Sketch& s) {
  std::string out;
  print_node(s.ref(), out);
  return out;
}

std::string to_standard_regex(const Regex& r) {
  std::string out;
  std_node(r.ref(), out);
  return out;
}

}  // namespace resketch

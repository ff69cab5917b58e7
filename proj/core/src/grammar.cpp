#include "resketch/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "resketch/syntax.hpp"

namespace resketch {

namespace {

// Table-driven lemmatizer: exactly the folds the shipped lexicon relies on.
// Tokens not listed pass through untouched ("lines" stays "lines").
const std::unordered_map<std::string, std::string>& lemma_table() {
  static const std::unordered_map<std::string, std::string> table = {
      {"letters", "letter"},         {"numbers", "number"},
      {"digits", "digit"},           {"numerals", "numeral"},
      {"numerics", "numeric"},       {"decimals", "decimal"},
      {"characters", "character"},   {"chars", "char"},
      {"vowels", "vowel"},           {"words", "word"},
      {"strings", "string"},         {"spaces", "space"},
      {"commas", "comma"},           {"dots", "dot"},
      {"periods", "period"},         {"dashes", "dash"},
      {"hyphens", "hyphen"},         {"underscores", "underscore"},
      {"semicolons", "semicolon"},   {"colons", "colon"},
      {"alphabets", "alphabet"},     {"capitals", "capital"},
      {"times", "time"},             {"starts", "start"},
      {"starting", "start"},         {"started", "start"},
      {"begins", "begin"},           {"beginning", "begin"},
      {"ends", "end"},               {"ending", "end"},
      {"ended", "end"},              {"finishes", "finish"},
      {"finishing", "finish"},       {"terminates", "terminate"},
      {"terminating", "terminate"},  {"terminated", "terminate"},
      {"contains", "contain"},       {"containing", "contain"},
      {"contained", "contain"},      {"follows", "follow"},
      {"following", "follow"},       {"followed", "follow"},
      {"precedes", "precede"},       {"preceding", "precede"},
      {"preceded", "precede"},       {"separates", "separate"},
      {"separating", "separate"},    {"delimits", "delimit"},
      {"delimited", "delimit"},      {"divides", "divide"},
      {"divided", "divide"},         {"splits", "split"},
      {"allows", "allow"},           {"allowed", "allow"},
      {"optionally", "optional"},    {"letter's", "letter"},
  };
  return table;
}

const std::unordered_map<std::string, long>& number_words() {
  static const std::unordered_map<std::string, long> table = {
      {"zero", 0}, {"one", 1}, {"two", 2},   {"three", 3}, {"four", 4}, {"five", 5},
      {"six", 6},  {"seven", 7}, {"eight", 8}, {"nine", 9}, {"ten", 10},
  };
  return table;
}

bool is_punct_token(char c) {
  return c == ',' || c == '.' || c == ';' || c == ':' || c == '!' || c == '?' ||
         c == '(' || c == ')';
}

void push_word(std::vector<Token>& out, std::string word) {
  if (word.empty()) return;
  for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  bool digits = std::all_of(word.begin(), word.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  });
  if (digits && word.size() <= 9) {
    out.push_back(Token{Token::Kind::Int, word, std::stol(word)});
    return;
  }
  if (auto it = number_words().find(word); it != number_words().end()) {
    out.push_back(Token{Token::Kind::Int, word, it->second});
    return;
  }
  if (auto it = lemma_table().find(word); it != lemma_table().end()) word = it->second;
  out.push_back(Token{Token::Kind::Word, std::move(word), 0});
}

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

const std::unordered_set<std::string>& known_fns() {
  static const std::unordered_set<std::string> fns = {
      "IdentityFn",      "SelectFn",   "ConstantFn",      "NumberFn",
      "ConstFn",         "ConstUnionFn", "NotFn",         "NotccFn",
      "NotContainFn",    "OptionalFn", "StartwithFn",     "EndwithFn",
      "ConcatFn",        "RepeatFn",   "RepeatAOrBFn",    "RepeatatleastFn",
      "RepeatrangeFn",   "UnarySketchFn", "SketchJoinFn", "SepFn",
      "DecimalFn",
  };
  return fns;
}

std::string value_tag(const SemValue& v) {
  if (std::holds_alternative<std::monostate>(v)) return "null";
  if (std::holds_alternative<long>(v)) return std::to_string(std::get<long>(v));
  if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
  if (const Sketch* s = std::get_if<Sketch>(&v)) {
    if (s->node().op == Op::Class) return std::string(char_class_name(s->node().cls));
    return print_sketch(*s);
  }
  return print_value(v);
}

SemValue parse_lex_value(const std::string& text, int line) {
  if (text == "null") return std::monostate{};
  if (text.rfind("op.", 0) == 0) return text;
  if (!text.empty() &&
      std::all_of(text.begin(), text.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }))
    return static_cast<long>(std::stol(text));
  try {
    return parse_sketch(text);
  } catch (const ParseError& e) {
    throw GrammarError(std::string("bad lexicon value '") + text + "': " + e.what(), line);
  }
}

// Sketch arguments may arrive as constant sets; regex-typed positions fold
// them into a left-nested Or chain.
bool as_sketch(const SemValue& v, Sketch* out) {
  if (const Sketch* s = std::get_if<Sketch>(&v)) {
    *out = *s;
    return true;
  }
  if (const auto* set = std::get_if<std::vector<Sketch>>(&v)) {
    if (set->empty()) return false;
    Sketch acc = (*set)[0];
    for (size_t i = 1; i < set->size(); ++i) acc = alt(acc, (*set)[i]);
    *out = std::move(acc);
    return true;
  }
  return false;
}

bool as_list(const SemValue& v, std::vector<Sketch>* out) {
  if (const Sketch* s = std::get_if<Sketch>(&v)) {
    out->push_back(*s);
    return true;
  }
  if (const auto* set = std::get_if<std::vector<Sketch>>(&v)) {
    out->insert(out->end(), set->begin(), set->end());
    return true;
  }
  return false;
}

bool as_int(const SemValue& v, long* out) {
  if (const long* n = std::get_if<long>(&v)) {
    *out = *n;
    return true;
  }
  return false;
}

void dedup_by_print(std::vector<Sketch>& xs) {
  std::unordered_set<std::string> seen;
  std::vector<Sketch> kept;
  for (Sketch& s : xs)
    if (seen.insert(print_sketch(s)).second) kept.push_back(std::move(s));
  xs = std::move(kept);
}

}  // namespace

std::vector<Token> tokenize(const std::string& description) {
  std::vector<Token> out;
  std::string word;
  size_t i = 0;
  const size_t n = description.size();
  while (i < n) {
    char c = description[i];
    if (c == '"') {
      push_word(out, std::move(word));
      word.clear();
      size_t close = description.find('"', i + 1);
      if (close == std::string::npos)
        throw std::invalid_argument("unbalanced quote at offset " + std::to_string(i));
      out.push_back(Token{Token::Kind::Const, description.substr(i + 1, close - i - 1), 0});
      i = close + 1;
      continue;
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'') {
      word.push_back(c);
    } else {
      push_word(out, std::move(word));
      word.clear();
      if (is_punct_token(c)) out.push_back(Token{Token::Kind::Word, std::string(1, c), 0});
      // '-' and any other separator just splits
    }
    ++i;
  }
  push_word(out, std::move(word));
  return out;
}

std::string print_value(const SemValue& v) {
  if (std::holds_alternative<std::monostate>(v)) return "null";
  if (const long* n = std::get_if<long>(&v)) return std::to_string(*n);
  if (const Sketch* s = std::get_if<Sketch>(&v)) return print_sketch(*s);
  if (const std::string* m = std::get_if<std::string>(&v)) return *m;
  const auto& set = std::get<std::vector<Sketch>>(v);
  std::string out = "{";
  for (size_t i = 0; i < set.size(); ++i) {
    if (i) out += ",";
    out += print_sketch(set[i]);
  }
  out += "}";
  return out;
}

Grammar parse_grammar(const std::string& rules_text, const std::string& lexicon_text) {
  Grammar g;

  // Lexicon first: categories it introduces legitimize rule references.
  {
    std::istringstream in(lexicon_text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string t = strip(line);
      if (t.empty() || t[0] == '#') continue;
      size_t tab1 = line.find('\t');
      size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
      if (tab2 == std::string::npos)
        throw GrammarError("lexicon line needs phrase<TAB>category<TAB>value", lineno);
      LexEntry e;
      e.phrase = strip(line.substr(0, tab1));
      e.category = strip(line.substr(tab1 + 1, tab2 - tab1 - 1));
      std::string value = strip(line.substr(tab2 + 1));
      if (e.phrase.empty()) throw GrammarError("empty lexicon phrase", lineno);
      if (e.category.empty() || e.category[0] != '$')
        throw GrammarError("lexicon category must start with '$'", lineno);
      e.value = parse_lex_value(value, lineno);
      e.id = "lex:" + value_tag(e.value);
      e.phrase_len = 1 + static_cast<int>(std::count(e.phrase.begin(), e.phrase.end(), ' '));
      g.max_phrase_len = std::max(g.max_phrase_len, e.phrase_len);
      g.produced.insert(e.category);
      g.lex_by_phrase[e.phrase].push_back(g.lexicon.size());
      g.lexicon.push_back(std::move(e));
    }
  }

  {
    std::istringstream in(rules_text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string t = strip(line);
      if (t.empty() || t[0] == '#') continue;
      size_t arrow = t.find("->");
      if (arrow == std::string::npos) throw GrammarError("rule is missing '->'", lineno);
      GrammarRule r;
      r.lhs = split_ws(t.substr(0, arrow));
      if (r.lhs.empty()) throw GrammarError("rule has an empty match sequence", lineno);
      std::string rhs = strip(t.substr(arrow + 2));
      size_t open = rhs.find('[');
      size_t close = rhs.rfind(']');
      if (open == std::string::npos || close == std::string::npos || close < open)
        throw GrammarError("rule action must be bracketed", lineno);
      r.target = strip(rhs.substr(0, open));
      if (r.target.empty() || r.target[0] != '$')
        throw GrammarError("rule target must be a category", lineno);
      std::string action = rhs.substr(open + 1, close - open - 1);
      std::replace(action.begin(), action.end(), ',', ' ');
      std::vector<std::string> parts = split_ws(action);
      if (parts.empty()) throw GrammarError("empty rule action", lineno);
      r.fn = parts[0];
      if (r.fn.rfind("sketch.", 0) == 0) r.fn = r.fn.substr(7);
      if (r.fn == "IdentifyFn") r.fn = "IdentityFn";  // common source typo
      if (!known_fns().count(r.fn))
        throw GrammarError("unknown semantic function '" + r.fn + "'", lineno);
      for (size_t i = 1; i < parts.size(); ++i) {
        const std::string& p = parts[i];
        Selector sel;
        if (p.rfind("arg:", 0) == 0) {
          sel.arg = std::atoi(p.c_str() + 4);
          if (sel.arg < 0 || sel.arg >= static_cast<int>(r.lhs.size()))
            throw GrammarError("selector " + p + " out of range", lineno);
        } else if (p.rfind("val:", 0) == 0) {
          sel.is_val = true;
          sel.val = std::atol(p.c_str() + 4);
        } else {
          throw GrammarError("malformed selector '" + p + "'", lineno);
        }
        r.selectors.push_back(sel);
      }
      std::string joined;
      for (const std::string& e : r.lhs) {
        if (!joined.empty()) joined += "_";
        joined += e;
      }
      r.id = joined + "->" + r.target + ":" + r.fn;
      g.produced.insert(r.target);
      g.rules.push_back(std::move(r));
    }
  }

  // Token-level builtins produce these without any rule.
  g.produced.insert("$CONST");
  g.produced.insert("$INT");

  for (const GrammarRule& r : g.rules)
    for (const std::string& e : r.lhs)
      if (!e.empty() && e[0] == '$' && !g.produced.count(e))
        throw GrammarError("category " + e + " is never produced (rule " + r.id + ")", 0);

  return g;
}

Grammar load_grammar(const std::string& rules_path, const std::string& lexicon_path) {
  auto slurp = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grammar file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  return parse_grammar(slurp(rules_path), slurp(lexicon_path));
}

bool try_apply_semfn(const std::string& fn, const std::vector<SemValue>& args,
                     SemValue* out) {
  try {
    if (fn == "IdentityFn" || fn == "SelectFn" || fn == "ConstFn") {
      if (args.size() != 1) return false;
      *out = args[0];
      return true;
    }
    if (fn == "ConstantFn") {
      *out = std::monostate{};
      return true;
    }
    if (fn == "NumberFn") {
      long n;
      if (args.size() != 1 || !as_int(args[0], &n)) return false;
      *out = n;
      return true;
    }
    if (fn == "ConstUnionFn") {
      std::vector<Sketch> set;
      if (args.size() != 2 || !as_list(args[0], &set) || !as_list(args[1], &set)) return false;
      dedup_by_print(set);
      *out = std::move(set);
      return true;
    }
    if (fn == "NotFn" || fn == "NotccFn" || fn == "NotContainFn" || fn == "OptionalFn" ||
        fn == "StartwithFn" || fn == "EndwithFn") {
      Sketch x = hole();
      if (args.size() != 1 || !as_sketch(args[0], &x)) return false;
      if (fn == "NotFn") *out = negate(x);
      if (fn == "NotccFn") *out = conj(Sketch(cls(CharClass::Any)), negate(x));
      if (fn == "NotContainFn") *out = negate(contains(x));
      if (fn == "OptionalFn") *out = optional(x);
      if (fn == "StartwithFn") *out = starts_with(x);
      if (fn == "EndwithFn") *out = ends_with(x);
      return true;
    }
    if (fn == "ConcatFn") {
      Sketch a = hole(), b = hole();
      if (args.size() != 2 || !as_sketch(args[0], &a) || !as_sketch(args[1], &b)) return false;
      *out = concat(a, b);
      return true;
    }
    if (fn == "RepeatFn") {
      Sketch x = hole();
      long k;
      if (args.size() != 2 || !as_sketch(args[0], &x) || !as_int(args[1], &k)) return false;
      *out = repeat(x, static_cast<int>(k));
      return true;
    }
    if (fn == "RepeatAOrBFn") {
      Sketch x = hole();
      long a, b;
      if (args.size() != 3 || !as_sketch(args[0], &x) || !as_int(args[1], &a) ||
          !as_int(args[2], &b))
        return false;
      *out = alt(repeat(x, static_cast<int>(a)), repeat(x, static_cast<int>(b)));
      return true;
    }
    if (fn == "RepeatatleastFn") {
      Sketch x = hole();
      long k;
      if (args.size() != 2 || !as_sketch(args[0], &x) || !as_int(args[1], &k)) return false;
      // "0 or more" is KleeneStar, not a degenerate RepeatAtLeast.
      *out = k == 0 ? star(x) : repeat_at_least(x, static_cast<int>(k));
      return true;
    }
    if (fn == "RepeatrangeFn") {
      Sketch x = hole();
      long k1, k2;
      if (args.size() != 3 || !as_sketch(args[0], &x) || !as_int(args[1], &k1) ||
          !as_int(args[2], &k2))
        return false;
      *out = repeat_range(x, static_cast<int>(k1), static_cast<int>(k2));
      return true;
    }
    if (fn == "UnarySketchFn") {
      std::vector<Sketch> set;
      if (args.size() != 1 || !as_list(args[0], &set)) return false;
      dedup_by_print(set);
      *out = hole(std::move(set));
      return true;
    }
    if (fn == "SketchJoinFn") {
      std::vector<Sketch> set;
      if (args.size() != 2 || !as_list(args[0], &set) || !as_list(args[1], &set)) return false;
      dedup_by_print(set);
      *out = std::move(set);
      return true;
    }
    if (fn == "SepFn") {
      Sketch x = hole(), sep = hole();
      if (args.size() != 2 || !as_sketch(args[0], &x) || !as_sketch(args[1], &sep)) return false;
      *out = hole({x, sep, concat(x, star(concat(sep, x)))});
      return true;
    }
    if (fn == "DecimalFn") {
      Sketch a = Sketch(repeat_at_least(cls(CharClass::Num), 1));
      Sketch b = a;
      if (!args.empty()) {
        if (args.size() != 2 || !as_sketch(args[0], &a) || !as_sketch(args[1], &b)) return false;
      }
      *out = hole({a, b, concat(a, optional(concat(Sketch(lit('.')), b)))});
      return true;
    }
  } catch (const std::invalid_argument&) {
    return false;  // constructor rejected an argument (e.g. Repeat count < 1)
  }
  return false;
}

SemValue apply_semfn(const std::string& fn, const std::vector<SemValue>& args) {
  SemValue out;
  if (!try_apply_semfn(fn, args, &out))
    throw std::invalid_argument("semantic function " + fn + " rejected its arguments");
  return out;
}

}  // namespace resketch

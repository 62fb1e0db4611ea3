#include "semnet/porter.hpp"

#include <algorithm>
#include <array>
#include <cstddef>

namespace semnet {
namespace {

// Working view over the candidate stem: s[0..end). Suffix checks shrink a
// probe window; rules rewrite the tail in place on a private copy.
struct Stem {
  std::string s;
  std::size_t end;  // one past the last live character

  explicit Stem(std::string_view w) : s(w), end(w.size()) {}

  bool is_consonant(std::size_t i) const {
    switch (s[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !is_consonant(i - 1);
      default:
        return true;
    }
  }

  // m in the [C](VC)^m[V] decomposition of s[0..limit).
  int measure(std::size_t limit) const {
    int m = 0;
    std::size_t i = 0;
    while (i < limit && is_consonant(i)) ++i;
    while (i < limit) {
      while (i < limit && !is_consonant(i)) ++i;
      if (i >= limit) break;
      ++m;
      while (i < limit && is_consonant(i)) ++i;
    }
    return m;
  }

  bool has_vowel(std::size_t limit) const {
    for (std::size_t i = 0; i < limit; ++i)
      if (!is_consonant(i)) return true;
    return false;
  }

  bool double_consonant(std::size_t limit) const {
    return limit >= 2 && s[limit - 1] == s[limit - 2] && is_consonant(limit - 1);
  }

  // consonant-vowel-consonant ending where the final consonant is not w, x, y.
  bool cvc(std::size_t limit) const {
    if (limit < 3) return false;
    if (!is_consonant(limit - 3) || is_consonant(limit - 2) ||
        !is_consonant(limit - 1))
      return false;
    char c = s[limit - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends_with(std::string_view suf) const {
    return end >= suf.size() &&
           std::string_view(s).substr(end - suf.size(), suf.size()) == suf;
  }

  std::size_t stem_len(std::string_view suf) const { return end - suf.size(); }

  void replace(std::string_view suf, std::string_view with) {
    std::size_t base = end - suf.size();
    s.replace(base, end - base, with);
    end = base + with.size();
  }
};

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Longest matching suffix selects the rule; its m-condition is then tested
// once, and the step ends whether or not the rewrite fires.
bool apply_table(Stem& st, const Rule* rules, std::size_t n, int min_measure) {
  const Rule* best = nullptr;
  for (std::size_t i = 0; i < n; ++i) {
    if (st.ends_with(rules[i].suffix) &&
        (!best || rules[i].suffix.size() > best->suffix.size()))
      best = &rules[i];
  }
  if (!best) return false;
  if (st.measure(st.stem_len(best->suffix)) > min_measure)
    st.replace(best->suffix, best->replacement);
  return true;
}

void step1a(Stem& st) {
  if (st.ends_with("sses")) st.replace("sses", "ss");
  else if (st.ends_with("ies")) st.replace("ies", "i");
  else if (st.ends_with("ss")) { /* keep */ }
  else if (st.ends_with("s")) st.replace("s", "");
}

void step1b(Stem& st) {
  if (st.ends_with("eed")) {
    if (st.measure(st.stem_len("eed")) > 0) st.replace("eed", "ee");
    return;
  }
  bool stripped = false;
  if (st.ends_with("ed") && st.has_vowel(st.stem_len("ed"))) {
    st.replace("ed", "");
    stripped = true;
  } else if (st.ends_with("ing") && st.has_vowel(st.stem_len("ing"))) {
    st.replace("ing", "");
    stripped = true;
  }
  if (!stripped) return;

  if (st.ends_with("at")) st.replace("at", "ate");
  else if (st.ends_with("bl")) st.replace("bl", "ble");
  else if (st.ends_with("iz")) st.replace("iz", "ize");
  else if (st.double_consonant(st.end)) {
    char c = st.s[st.end - 1];
    if (c != 'l' && c != 's' && c != 'z') --st.end;
  } else if (st.measure(st.end) == 1 && st.cvc(st.end)) {
    st.replace("", "e");
  }
}

void step1c(Stem& st) {
  if (st.ends_with("y") && st.has_vowel(st.stem_len("y")))
    st.replace("y", "i");
}

void step2(Stem& st) {
  static constexpr std::array<Rule, 20> rules{{
      {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
      {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
      {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
      {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
      {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
      {"iviti", "ive"},   {"biliti", "ble"},
  }};
  apply_table(st, rules.data(), rules.size(), 0);
}

void step3(Stem& st) {
  static constexpr std::array<Rule, 7> rules{{
      {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
      {"ical", "ic"},  {"ful", ""},   {"ness", ""},
  }};
  apply_table(st, rules.data(), rules.size(), 0);
}

void step4(Stem& st) {
  static constexpr std::array<Rule, 18> rules{{
      {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},
      {"able", ""}, {"ible", ""}, {"ant", ""},  {"ement", ""},
      {"ment", ""}, {"ent", ""},  {"ou", ""},   {"ism", ""}, {"ate", ""},
      {"iti", ""},  {"ous", ""},  {"ive", ""},  {"ize", ""},
  }};
  // "ion" carries an extra stem-final s/t condition, so handle the longest
  // match manually before falling back to the plain table.
  const Rule* best = nullptr;
  for (const Rule& r : rules)
    if (st.ends_with(r.suffix) && (!best || r.suffix.size() > best->suffix.size()))
      best = &r;
  bool ion = st.ends_with("ion");
  if (ion && (!best || best->suffix.size() < 3)) {
    std::size_t base = st.stem_len("ion");
    if (base >= 1 && (st.s[base - 1] == 's' || st.s[base - 1] == 't') &&
        st.measure(base) > 1)
      st.replace("ion", "");
    return;
  }
  if (best && st.measure(st.stem_len(best->suffix)) > 1)
    st.replace(best->suffix, best->replacement);
}

void step5a(Stem& st) {
  if (!st.ends_with("e")) return;
  int m = st.measure(st.stem_len("e"));
  if (m > 1 || (m == 1 && !st.cvc(st.stem_len("e")))) st.replace("e", "");
}

void step5b(Stem& st) {
  if (st.double_consonant(st.end) && st.s[st.end - 1] == 'l' &&
      st.measure(st.end) > 1)
    --st.end;
}

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.size() <= 2) return std::string(word);
  for (char c : word)
    if (c < 'a' || c > 'z') return std::string(word);

  Stem st(word);
  step1a(st);
  step1b(st);
  step1c(st);
  step2(st);
  step3(st);
  step4(st);
  step5a(st);
  step5b(st);
  return st.s.substr(0, st.end);
}

}  // namespace semnet

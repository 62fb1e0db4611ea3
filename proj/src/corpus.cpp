#include "semnet/corpus.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "semnet/porter.hpp"

namespace semnet {
namespace {

bool all_upper_alpha3(std::string_view s) {
  return s.size() == 3 &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty() || s.size() > 9) return false;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

// `<ISO3>_<session>_<year>` from a stem like "USA_25_1970".
bool parse_stem(std::string_view stem, SpeechDoc& doc) {
  auto first = stem.find('_');
  if (first == std::string_view::npos) return false;
  auto second = stem.find('_', first + 1);
  if (second == std::string_view::npos) return false;
  if (stem.find('_', second + 1) != std::string_view::npos) return false;

  std::string_view country = stem.substr(0, first);
  std::string_view session = stem.substr(first + 1, second - first - 1);
  std::string_view year = stem.substr(second + 1);
  if (!all_upper_alpha3(country)) return false;
  if (!parse_int(session, doc.session)) return false;
  if (year.size() != 4 || !parse_int(year, doc.year)) return false;
  doc.country = country;
  return true;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Latin-1 letters. 0xD7 and 0xF7 are signs, not letters.
bool is_latin1_letter(std::uint32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
  return cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7;
}

std::uint32_t to_lower_latin1(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

void append_utf8(std::string& s, std::uint32_t cp) {
  if (cp < 0x80) {
    s.push_back(static_cast<char>(cp));
  } else {  // Latin-1 range only
    s.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    s.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Decodes one UTF-8 code point at i; malformed bytes decode as U+FFFD so
// they split tokens like any other non-letter.
std::uint32_t next_code_point(std::string_view s, std::size_t& i) {
  auto byte = [&](std::size_t k) { return static_cast<std::uint8_t>(s[k]); };
  std::uint8_t b0 = byte(i);
  if (b0 < 0x80) {
    i += 1;
    return b0;
  }
  int len = (b0 >= 0xF0) ? 4 : (b0 >= 0xE0) ? 3 : (b0 >= 0xC0) ? 2 : 0;
  if (len == 0 || i + len > s.size()) {
    i += 1;
    return 0xFFFD;
  }
  std::uint32_t cp = b0 & (0x7F >> len);
  for (int k = 1; k < len; ++k) {
    std::uint8_t b = byte(i + k);
    if ((b & 0xC0) != 0x80) {
      i += 1;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return cp;
}

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

}  // namespace

long DocTermMatrix::total_count() const {
  long total = 0;
  for (const Entry& e : entries) total += e.count;
  return total;
}

LoadResult load_corpus(const std::filesystem::path& root, const LoadOptions& opts) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec))
    throw std::runtime_error("corpus root is not a readable directory: " +
                             root.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  LoadResult result;
  for (const auto& path : files) {
    std::string name = path.filename().string();
    SpeechDoc doc;
    if (path.extension() != ".txt" || !parse_stem(path.stem().string(), doc)) {
      result.warnings.push_back("skipped (name does not match <ISO3>_<session>_<year>.txt): " + name);
      continue;
    }
    if (doc.year < opts.year_min || doc.year > opts.year_max) {
      result.warnings.push_back("skipped (year out of range): " + name);
      continue;
    }
    doc.text = read_file(path);
    if (doc.text.empty())
      result.warnings.push_back("empty document: " + name);
    result.docs.push_back(std::move(doc));
  }
  return result;
}

std::vector<std::string> tokenize_latin1(std::string_view utf8_text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < utf8_text.size()) {
    std::uint32_t cp = next_code_point(utf8_text, i);
    if (is_latin1_letter(cp)) {
      append_utf8(current, to_lower_latin1(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TokenizedDoc preprocess(const SpeechDoc& doc, const PreprocessConfig& cfg) {
  TokenizedDoc out;
  out.doc_id = doc.doc_id();
  for (std::string& tok : tokenize_latin1(doc.text)) {
    if (cfg.stopwords.count(tok)) continue;
    if (cfg.stem && is_ascii(tok)) tok = porter_stem(tok);
    out.tokens.push_back(std::move(tok));
  }
  return out;
}

TrimResult trim_vocabulary(const std::vector<TokenizedDoc>& docs,
                           int min_term_count, int min_doc_count) {
  if (min_term_count < 1 || min_doc_count < 1)
    throw std::invalid_argument("trim thresholds must be >= 1");

  // Single counting pass over the full input; ordered map keeps the
  // surviving vocabulary lexicographic and the output deterministic.
  struct Counts {
    long corpus = 0;
    int docs = 0;
    int last_doc = -1;
  };
  std::map<std::string, Counts> counts;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const std::string& tok : docs[d].tokens) {
      Counts& c = counts[tok];
      c.corpus += 1;
      if (c.last_doc != static_cast<int>(d)) {
        c.last_doc = static_cast<int>(d);
        c.docs += 1;
      }
    }
  }

  TrimResult result;
  for (auto& [term, c] : counts) {
    if (c.corpus < min_term_count || c.docs < min_doc_count) continue;
    result.vocab.term_id.emplace(term, result.vocab.size());
    result.vocab.terms.push_back(term);
    result.vocab.corpus_count.push_back(c.corpus);
    result.vocab.doc_count.push_back(c.docs);
  }

  result.matrix.n_docs = static_cast<int>(docs.size());
  result.matrix.n_terms = result.vocab.size();
  result.empty_doc.assign(docs.size(), 0);
  std::vector<int> doc_counts(result.vocab.size(), 0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::vector<int> seen;
    for (const std::string& tok : docs[d].tokens) {
      auto it = result.vocab.term_id.find(tok);
      if (it == result.vocab.term_id.end()) continue;
      if (doc_counts[it->second] == 0) seen.push_back(it->second);
      doc_counts[it->second] += 1;
    }
    std::sort(seen.begin(), seen.end());
    if (seen.empty()) result.empty_doc[d] = 1;
    for (int t : seen) {
      result.matrix.entries.push_back({static_cast<int>(d), t, doc_counts[t]});
      doc_counts[t] = 0;
    }
  }
  return result;
}

void write_vocabulary(const std::filesystem::path& file, const Vocabulary& v) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());
  for (const std::string& t : v.terms) out << t << '\n';
}

std::string serialize_doc_term_matrix(const DocTermMatrix& m,
                                      const std::vector<std::string>& doc_ids) {
  if (static_cast<int>(doc_ids.size()) != m.n_docs)
    throw std::invalid_argument("doc_ids size does not match matrix rows");
  std::string out = "doc_id,term_id,count\n";
  for (const auto& e : m.entries) {
    out += doc_ids[e.doc];
    out += ',';
    out += std::to_string(e.term);
    out += ',';
    out += std::to_string(e.count);
    out += '\n';
  }
  return out;
}

void write_doc_term_matrix(const std::filesystem::path& file,
                           const DocTermMatrix& m,
                           const std::vector<std::string>& doc_ids) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());
  out << serialize_doc_term_matrix(m, doc_ids);
}

}  // namespace semnet

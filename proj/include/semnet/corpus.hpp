#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace semnet {

// One General-Debate-style statement: a dated, per-speaker plain-text file.
struct SpeechDoc {
  std::string country;  // ISO-3166 alpha-3, uppercase
  int year = 0;
  int session = 0;
  std::string text;     // raw UTF-8; may be empty

  std::string doc_id() const {
    return country + "_" + std::to_string(session) + "_" + std::to_string(year);
  }
};

struct TokenizedDoc {
  std::string doc_id;
  std::vector<std::string> tokens;  // lowercase, letters only, stemmed
};

struct Vocabulary {
  std::vector<std::string> terms;                 // dense ids 0..V-1
  std::unordered_map<std::string, int> term_id;
  std::vector<long> corpus_count;                 // per term
  std::vector<int> doc_count;                     // per term

  int size() const { return static_cast<int>(terms.size()); }
};

struct DocTermMatrix {
  struct Entry {
    int doc;
    int term;
    int count;  // >= 1
  };
  int n_docs = 0;
  int n_terms = 0;
  std::vector<Entry> entries;  // sorted by (doc, term), unique

  long total_count() const;
};

struct LoadOptions {
  int year_min = 1970;
  int year_max = 2014;
};

struct LoadResult {
  std::vector<SpeechDoc> docs;            // sorted by filename
  std::vector<std::string> warnings;      // one per skipped/suspect file
};

struct PreprocessConfig {
  std::unordered_set<std::string> stopwords;  // lowercase
  bool stem = true;
};

struct TrimResult {
  Vocabulary vocab;
  DocTermMatrix matrix;
  std::vector<char> empty_doc;  // 1 where a doc lost every token
};

// Reads every `<ISO3>_<session>_<year>.txt` under root (non-recursive).
// Files that do not match the convention are skipped with a warning.
LoadResult load_corpus(const std::filesystem::path& root,
                       const LoadOptions& opts = {});

// Splits UTF-8 text on anything that is not a Latin-1 letter and lowercases.
// Digits and non-Latin-1 characters act as separators and never survive.
std::vector<std::string> tokenize_latin1(std::string_view utf8_text);

// tokenize -> drop stopwords -> Porter-stem (pure-ASCII tokens only).
TokenizedDoc preprocess(const SpeechDoc& doc, const PreprocessConfig& cfg);

// Keeps terms with corpus_count >= min_term_count AND doc_count >=
// min_doc_count; counts are taken once over the full input. Docs that end up
// empty stay as all-zero rows and are flagged.
TrimResult trim_vocabulary(const std::vector<TokenizedDoc>& docs,
                           int min_term_count = 10, int min_doc_count = 5);

// One term per line; term id = line number.
void write_vocabulary(const std::filesystem::path& file, const Vocabulary& v);

// Sparse triples `doc_id,term_id,count` with a header line.
std::string serialize_doc_term_matrix(const DocTermMatrix& m,
                                      const std::vector<std::string>& doc_ids);
void write_doc_term_matrix(const std::filesystem::path& file,
                           const DocTermMatrix& m,
                           const std::vector<std::string>& doc_ids);

}  // namespace semnet

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "semnet/corpus.hpp"

namespace semnet {

struct LdaConfig {
  int n_topics = 8;
  double alpha = 0;        // <= 0 selects the 50/K convention
  double beta = 0.01;
  int n_iterations = 1000;
  int burn_in = 200;
  std::uint64_t seed = 0;
  bool average_theta = false;  // average post-burn-in sweeps instead of final state

  double resolved_alpha() const { return alpha > 0 ? alpha : 50.0 / n_topics; }
  void validate() const;
};

// Final state of a collapsed Gibbs run. Tokens are the doc/term matrix
// expanded to occurrences, ordered by (doc, term). Count tables are always
// derivable from `assignments`; check_counts() verifies that by recounting.
struct LdaModel {
  int n_topics = 0;
  int n_docs = 0;
  int n_terms = 0;
  std::vector<int> token_doc;     // per occurrence
  std::vector<int> token_term;    // per occurrence
  std::vector<int> assignments;   // topic label per occurrence
  std::vector<long> n_dk;         // n_docs x n_topics
  std::vector<long> n_kw;         // n_topics x n_terms
  std::vector<long> n_k;          // n_topics
  std::vector<int> doc_len;       // tokens per doc
  std::vector<double> phi;        // n_topics x n_terms, rows sum to 1
  std::vector<double> theta_accum;  // present when average_theta; already divided
  long doc_topic(int d, int k) const { return n_dk[static_cast<std::size_t>(d) * n_topics + k]; }
  long topic_term(int k, int w) const { return n_kw[static_cast<std::size_t>(k) * n_terms + w]; }
  std::span<const double> phi_row(int k) const {
    return {phi.data() + static_cast<std::size_t>(k) * n_terms,
            static_cast<std::size_t>(n_terms)};
  }
  void check_counts() const;  // throws on any mismatch
};

struct TopicMatrix {
  int n_topics = 0;
  std::vector<std::string> labels;  // aligned to matrix rows
  std::vector<double> theta;        // n_docs x n_topics, rows on the simplex

  int n_docs() const { return static_cast<int>(labels.size()); }
  std::span<const double> row(int d) const {
    return {theta.data() + static_cast<std::size_t>(d) * n_topics,
            static_cast<std::size_t>(n_topics)};
  }
};

// Collapsed Gibbs sampling. Deterministic in (matrix, config): every draw is
// keyed by (seed, doc, position, iteration). Throws "empty corpus" when the
// matrix has no entries.
LdaModel fit_lda(const DocTermMatrix& matrix, const LdaConfig& config);

// theta[d][k] = (n_dk + alpha) / (N_d + K alpha); zero-token docs fall out
// uniform. Labels default to the row index as a string.
TopicMatrix topic_prevalences(const LdaModel& model, const DocTermMatrix& matrix,
                              const LdaConfig& config,
                              std::vector<std::string> labels = {});

// Full conditional p(z = k | rest) for one token occurrence, with that
// occurrence removed from the counts. Exposed for verification against
// enumeration of the collapsed posterior.
std::vector<double> gibbs_conditional(const LdaModel& model,
                                      const LdaConfig& config, int token_index);

// CSV `doc_id,theta_0,...,theta_{K-1}`.
void write_theta_csv(const std::filesystem::path& file, const TopicMatrix& tm);

// Topic-term rows prefixed by a `# key = value` config header block.
void write_phi_csv(const std::filesystem::path& file, const LdaModel& model,
                   const LdaConfig& config);

}  // namespace semnet

#include "semnet/topics.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "semnet/rng.hpp"

namespace semnet {
namespace {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Per-occurrence position within its document; draws are keyed by it.
std::vector<int> doc_positions(const LdaModel& m) {
  std::vector<int> pos(m.token_doc.size());
  std::vector<int> next(m.n_docs, 0);
  for (std::size_t i = 0; i < m.token_doc.size(); ++i)
    pos[i] = next[m.token_doc[i]]++;
  return pos;
}

int pick_from_weights(const std::vector<double>& w, double u) {
  double total = 0;
  for (double x : w) total += x;
  double target = u * total;
  double acc = 0;
  int k = 0;
  for (; k < static_cast<int>(w.size()) - 1; ++k) {
    acc += w[k];
    if (target < acc) return k;
  }
  return k;
}

}  // namespace

void LdaConfig::validate() const {
  if (n_topics < 2) throw std::invalid_argument("n_topics must be >= 2");
  if (resolved_alpha() <= 0) throw std::invalid_argument("alpha must be > 0");
  if (beta <= 0) throw std::invalid_argument("beta must be > 0");
  if (n_iterations < 1) throw std::invalid_argument("n_iterations must be >= 1");
  if (burn_in < 0 || burn_in >= n_iterations)
    throw std::invalid_argument("burn_in must be in [0, n_iterations)");
}

void LdaModel::check_counts() const {
  std::vector<long> dk(n_dk.size(), 0), kw(n_kw.size(), 0), k_tot(n_k.size(), 0);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    int d = token_doc[i], w = token_term[i], z = assignments[i];
    if (z < 0 || z >= n_topics) throw std::runtime_error("assignment out of range");
    dk[static_cast<std::size_t>(d) * n_topics + z] += 1;
    kw[static_cast<std::size_t>(z) * n_terms + w] += 1;
    k_tot[z] += 1;
  }
  if (dk != n_dk || kw != n_kw || k_tot != n_k)
    throw std::runtime_error("count tables inconsistent with assignments");
  for (int d = 0; d < n_docs; ++d) {
    long sum = 0;
    for (int k = 0; k < n_topics; ++k) sum += doc_topic(d, k);
    if (sum != doc_len[d]) throw std::runtime_error("doc count drift");
  }
}

std::vector<double> gibbs_conditional(const LdaModel& m, const LdaConfig& cfg,
                                      int token_index) {
  const double alpha = cfg.resolved_alpha();
  const double beta = cfg.beta;
  const int d = m.token_doc[token_index];
  const int w = m.token_term[token_index];
  const int z = m.assignments[token_index];
  std::vector<double> p(m.n_topics);
  double total = 0;
  for (int k = 0; k < m.n_topics; ++k) {
    double ndk = static_cast<double>(m.doc_topic(d, k) - (k == z ? 1 : 0));
    double nkw = static_cast<double>(m.topic_term(k, w) - (k == z ? 1 : 0));
    double nk = static_cast<double>(m.n_k[k] - (k == z ? 1 : 0));
    p[k] = (ndk + alpha) * (nkw + beta) / (nk + m.n_terms * beta);
    total += p[k];
  }
  for (double& x : p) x /= total;
  return p;
}

LdaModel fit_lda(const DocTermMatrix& matrix, const LdaConfig& config) {
  config.validate();
  if (matrix.entries.empty()) throw std::invalid_argument("empty corpus");

  const int K = config.n_topics;
  const int V = matrix.n_terms;
  const int D = matrix.n_docs;
  const double alpha = config.resolved_alpha();
  const double beta = config.beta;
  const double v_beta = V * beta;

  LdaModel m;
  m.n_topics = K;
  m.n_docs = D;
  m.n_terms = V;
  m.doc_len.assign(D, 0);
  for (const auto& e : matrix.entries) {
    if (e.doc < 0 || e.doc >= D || e.term < 0 || e.term >= V || e.count < 1)
      throw std::invalid_argument("doc-term matrix entry out of range");
    for (int c = 0; c < e.count; ++c) {
      m.token_doc.push_back(e.doc);
      m.token_term.push_back(e.term);
    }
    m.doc_len[e.doc] += e.count;
  }
  const std::size_t n_tokens = m.token_doc.size();

  m.n_dk.assign(static_cast<std::size_t>(D) * K, 0);
  m.n_kw.assign(static_cast<std::size_t>(K) * V, 0);
  m.n_k.assign(K, 0);
  m.assignments.resize(n_tokens);
  std::vector<int> pos = doc_positions(m);

  auto inc = [&](int d, int w, int k, long delta) {
    m.n_dk[static_cast<std::size_t>(d) * K + k] += delta;
    m.n_kw[static_cast<std::size_t>(k) * V + w] += delta;
    m.n_k[k] += delta;
  };

  // Iteration 0 initializes assignments uniformly at random.
  for (std::size_t i = 0; i < n_tokens; ++i) {
    double u = uniform01(config.seed, m.token_doc[i], pos[i], 0);
    int z = static_cast<int>(u * K);
    if (z >= K) z = K - 1;
    m.assignments[i] = z;
    inc(m.token_doc[i], m.token_term[i], z, 1);
  }

  std::vector<double> weights(K);
  std::vector<double> theta_accum;
  int accum_sweeps = 0;
  if (config.average_theta)
    theta_accum.assign(static_cast<std::size_t>(D) * K, 0.0);

  for (int iter = 1; iter <= config.n_iterations; ++iter) {
    for (std::size_t i = 0; i < n_tokens; ++i) {
      const int d = m.token_doc[i];
      const int w = m.token_term[i];
      const int old_z = m.assignments[i];
      inc(d, w, old_z, -1);
      for (int k = 0; k < K; ++k) {
        weights[k] = (static_cast<double>(m.doc_topic(d, k)) + alpha) *
                     (static_cast<double>(m.topic_term(k, w)) + beta) /
                     (static_cast<double>(m.n_k[k]) + v_beta);
      }
      double u = uniform01(config.seed, d, pos[i], iter);
      int z = pick_from_weights(weights, u);
      m.assignments[i] = z;
      inc(d, w, z, 1);
    }
    if (config.average_theta && iter > config.burn_in) {
      for (int d = 0; d < D; ++d) {
        double denom = m.doc_len[d] + K * alpha;
        for (int k = 0; k < K; ++k)
          theta_accum[static_cast<std::size_t>(d) * K + k] +=
              (static_cast<double>(m.doc_topic(d, k)) + alpha) / denom;
      }
      ++accum_sweeps;
    }
  }

  if (config.average_theta && accum_sweeps > 0) {
    for (double& x : theta_accum) x /= accum_sweeps;
    m.theta_accum = std::move(theta_accum);
  }

  m.phi.assign(static_cast<std::size_t>(K) * V, 0.0);
  for (int k = 0; k < K; ++k) {
    double denom = static_cast<double>(m.n_k[k]) + v_beta;
    for (int w = 0; w < V; ++w)
      m.phi[static_cast<std::size_t>(k) * V + w] =
          (static_cast<double>(m.topic_term(k, w)) + beta) / denom;
  }

#ifndef NDEBUG
  m.check_counts();
#endif
  return m;
}

TopicMatrix topic_prevalences(const LdaModel& model, const DocTermMatrix& matrix,
                              const LdaConfig& config,
                              std::vector<std::string> labels) {
  if (model.n_docs != matrix.n_docs || model.n_terms != matrix.n_terms)
    throw std::invalid_argument("model was not fitted on this matrix");
  const int K = model.n_topics;
  const double alpha = config.resolved_alpha();

  TopicMatrix tm;
  tm.n_topics = K;
  if (labels.empty()) {
    for (int d = 0; d < model.n_docs; ++d) labels.push_back(std::to_string(d));
  } else if (static_cast<int>(labels.size()) != model.n_docs) {
    throw std::invalid_argument("label count does not match matrix rows");
  }
  tm.labels = std::move(labels);

  if (!model.theta_accum.empty()) {
    tm.theta = model.theta_accum;
    return tm;
  }
  tm.theta.resize(static_cast<std::size_t>(model.n_docs) * K);
  for (int d = 0; d < model.n_docs; ++d) {
    double denom = model.doc_len[d] + K * alpha;
    for (int k = 0; k < K; ++k)
      tm.theta[static_cast<std::size_t>(d) * K + k] =
          (static_cast<double>(model.doc_topic(d, k)) + alpha) / denom;
  }
  return tm;
}

void write_theta_csv(const std::filesystem::path& file, const TopicMatrix& tm) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());
  out << "doc_id";
  for (int k = 0; k < tm.n_topics; ++k) out << ",theta_" << k;
  out << '\n';
  for (int d = 0; d < tm.n_docs(); ++d) {
    out << tm.labels[d];
    for (double x : tm.row(d)) out << ',' << format_real(x);
    out << '\n';
  }
}

void write_phi_csv(const std::filesystem::path& file, const LdaModel& model,
                   const LdaConfig& config) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + file.string());
  out << "# n_topics = " << config.n_topics << '\n';
  out << "# alpha = " << format_real(config.resolved_alpha()) << '\n';
  out << "# beta = " << format_real(config.beta) << '\n';
  out << "# n_iterations = " << config.n_iterations << '\n';
  out << "# burn_in = " << config.burn_in << '\n';
  out << "# seed = " << config.seed << '\n';
  out << "topic";
  for (int w = 0; w < model.n_terms; ++w) out << ",term_" << w;
  out << '\n';
  for (int k = 0; k < model.n_topics; ++k) {
    out << k;
    for (double x : model.phi_row(k)) out << ',' << format_real(x);
    out << '\n';
  }
}

}  // namespace semnet

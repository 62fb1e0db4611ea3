#pragma once

#include <span>
#include <vector>

namespace semnet {

// Discrete plug-in estimators, all in bits (log base 2). 0*log(0) := 0.

// Validates a probability vector: entries >= 0, sum within 1e-9 of 1.
void validate_prob_vector(std::span<const double> p);

// H(p) = -sum p_i log2 p_i over a valid probability vector.
double entropy_bits(std::span<const double> p);

// B x B joint counts over paired samples of two variables.
struct JointHistogram {
  int bins = 0;
  std::vector<long> counts;        // row-major, bins*bins
  std::vector<long> row_marginal;  // X
  std::vector<long> col_marginal;  // Y
  long total = 0;

  long at(int x, int y) const { return counts[static_cast<std::size_t>(x) * bins + y]; }

  // Quantizes each component of u and v into `bins` equal-width bins over
  // [0,1] and counts the index-aligned pairs (u_k, v_k).
  static JointHistogram from_paired(std::span<const double> u,
                                    std::span<const double> v, int bins);
};

// I(X;Y) >= 0 from plug-in frequencies, via I = H(X) + H(Y) - H(X,Y).
// The summation order is transpose-invariant, so swapping the two variables
// reproduces the value bit for bit.
double mutual_information_bits(const JointHistogram& joint);

struct MiResult {
  double i_xy = 0;  // bits
  double h_x = 0;
  double h_y = 0;
  double nmi = 0;   // I / sqrt(H(X) H(Y)), clamped to [0,1]; 0 when H(X)H(Y)=0
};

enum class NmiMode {
  kPairedBinning,  // default: vectors with the same shape score high
  kMixture,        // which-vector indicator vs topic index; similar vectors score low
};

struct NmiConfig {
  int bins = 4;
  NmiMode mode = NmiMode::kPairedBinning;
};

// Normalized mutual information between two probability vectors of equal
// length K >= 2. Throws on length mismatch or invalid simplex input.
MiResult normalized_mi(std::span<const double> u, std::span<const double> v,
                       const NmiConfig& cfg = {});

}  // namespace semnet

#include "semnet/infomet.hpp"

#include <cmath>
#include <stdexcept>

namespace semnet {
namespace {

inline double plogp(double p) { return p > 0 ? p * std::log2(p) : 0.0; }

// Joint entropy summed diagonal-first, then symmetric cell pairs (x<y) with
// the two terms of a pair added together. Addition and multiplication of two
// doubles are commutative, so transposing the histogram cannot change a
// single rounding step.
double joint_entropy_bits(const JointHistogram& j) {
  const double n = static_cast<double>(j.total);
  double h = 0;
  for (int x = 0; x < j.bins; ++x) h -= plogp(static_cast<double>(j.at(x, x)) / n);
  for (int x = 0; x < j.bins; ++x)
    for (int y = x + 1; y < j.bins; ++y)
      h -= plogp(static_cast<double>(j.at(x, y)) / n) +
           plogp(static_cast<double>(j.at(y, x)) / n);
  return h;
}

double marginal_entropy_bits(const std::vector<long>& marginal, long total) {
  const double n = static_cast<double>(total);
  double h = 0;
  for (long c : marginal) h -= plogp(static_cast<double>(c) / n);
  return h;
}

int bin_of(double value, int bins) {
  int b = static_cast<int>(value * bins);
  if (b < 0) b = 0;
  if (b >= bins) b = bins - 1;  // value == 1.0 lands in the top bin
  return b;
}

MiResult from_entropies(double h_x, double h_y, double h_xy) {
  MiResult r;
  r.h_x = h_x;
  r.h_y = h_y;
  r.i_xy = h_x + h_y - h_xy;
  if (r.i_xy < 0) r.i_xy = 0;
  const double denom_sq = h_x * h_y;
  if (denom_sq <= 0) {
    r.nmi = 0;
  } else {
    r.nmi = r.i_xy / std::sqrt(denom_sq);
    if (r.nmi < 0) r.nmi = 0;
    if (r.nmi > 1) r.nmi = 1;
  }
  return r;
}

MiResult paired_binning_nmi(std::span<const double> u, std::span<const double> v,
                            int bins) {
  JointHistogram j = JointHistogram::from_paired(u, v, bins);
  return from_entropies(marginal_entropy_bits(j.row_marginal, j.total),
                        marginal_entropy_bits(j.col_marginal, j.total),
                        joint_entropy_bits(j));
}

// X = which vector (fair coin), Y = component index drawn from the chosen
// vector. The joint is 0.5*u and 0.5*v on the two rows.
MiResult mixture_nmi(std::span<const double> u, std::span<const double> v) {
  const std::size_t k = u.size();
  double h_x = 1.0;  // fair binary indicator
  double h_y = 0;
  double h_xy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    h_y -= plogp(0.5 * u[i] + 0.5 * v[i]);
    h_xy -= plogp(0.5 * u[i]) + plogp(0.5 * v[i]);
  }
  return from_entropies(h_x, h_y, h_xy);
}

}  // namespace

void validate_prob_vector(std::span<const double> p) {
  double sum = 0;
  for (double x : p) {
    if (!(x >= 0)) throw std::invalid_argument("invalid simplex: negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("invalid simplex: entries do not sum to 1");
}

double entropy_bits(std::span<const double> p) {
  validate_prob_vector(p);
  double h = 0;
  for (double x : p) h -= plogp(x);
  return h < 0 ? 0.0 : h;
}

JointHistogram JointHistogram::from_paired(std::span<const double> u,
                                           std::span<const double> v, int bins) {
  if (u.size() != v.size())
    throw std::invalid_argument("paired vectors differ in length");
  if (bins < 2) throw std::invalid_argument("need at least 2 bins");
  JointHistogram j;
  j.bins = bins;
  j.counts.assign(static_cast<std::size_t>(bins) * bins, 0);
  j.row_marginal.assign(bins, 0);
  j.col_marginal.assign(bins, 0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    int x = bin_of(u[i], bins);
    int y = bin_of(v[i], bins);
    j.counts[static_cast<std::size_t>(x) * bins + y] += 1;
    j.row_marginal[x] += 1;
    j.col_marginal[y] += 1;
  }
  j.total = static_cast<long>(u.size());
  return j;
}

double mutual_information_bits(const JointHistogram& joint) {
  if (joint.total < 1) throw std::invalid_argument("empty histogram");
  double i = marginal_entropy_bits(joint.row_marginal, joint.total) +
             marginal_entropy_bits(joint.col_marginal, joint.total) -
             joint_entropy_bits(joint);
  return i < 0 ? 0.0 : i;
}

MiResult normalized_mi(std::span<const double> u, std::span<const double> v,
                       const NmiConfig& cfg) {
  if (u.size() != v.size())
    throw std::invalid_argument("vectors differ in length");
  if (u.size() < 2) throw std::invalid_argument("need at least 2 components");
  validate_prob_vector(u);
  validate_prob_vector(v);
  return cfg.mode == NmiMode::kPairedBinning ? paired_binning_nmi(u, v, cfg.bins)
                                             : mixture_nmi(u, v);
}

}  // namespace semnet

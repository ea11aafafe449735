#pragma once

// PAR2 arithmetic and the significance tests used to compare solvers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace gapsat {

enum class Currency { flips, seconds };

inline const char* to_string(Currency c) { return c == Currency::flips ? "flips" : "seconds"; }

/// Measured cost when solved, twice the timeout otherwise.
inline double par2(bool solved, double measured, double timeout) {
  if (!(timeout > 0))
    throw std::invalid_argument("par2 needs a positive timeout");
  return solved ? measured : 2.0 * timeout;
}

/// Flip timeouts used for training runs: 1e9 (3-SAT), 5e8 (5-SAT), 2.5e8 (7-SAT).
inline std::uint64_t default_flip_timeout(std::size_t k) {
  switch (k) {
  case 3:
    return 1'000'000'000;
  case 5:
    return 500'000'000;
  case 7:
    return 250'000'000;
  default:
    throw std::invalid_argument("no default flip timeout for k = " + std::to_string(k));
  }
}

inline double mean(std::span<const double> x) {
  if (x.empty())
    throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Unbiased sample variance.
inline double variance(std::span<const double> x) {
  if (x.size() < 2)
    throw std::invalid_argument("variance needs at least two observations");
  const double mu = mean(x);
  double ss = 0;
  for (double v : x)
    ss += (v - mu) * (v - mu);
  return ss / static_cast<double>(x.size() - 1);
}

struct TTestResult {
  double t = 0;
  double p = 1;
  double df = 0;
};

namespace detail {

inline double two_sided_t_p(double t, double df) {
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

inline double two_sided_normal_p(double z) {
  return 2.0 * boost::math::cdf(boost::math::complement(boost::math::normal(), std::fabs(z)));
}

} // namespace detail

/// Student's paired t-test on a - b, two-sided. Identical samples give t = 0,
/// p = 1; a constant non-zero difference has no finite t and is rejected.
inline TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("paired_t_test: samples differ in length");
  if (a.size() < 2)
    throw std::invalid_argument("paired_t_test: need at least two pairs");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    d[i] = a[i] - b[i];
  const double df = static_cast<double>(d.size() - 1);
  if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; }))
    return {0.0, 1.0, df};
  const double var = variance(d);
  if (var == 0.0)
    throw std::domain_error("paired_t_test: differences have zero variance");
  const double t = mean(d) / std::sqrt(var / static_cast<double>(d.size()));
  return {t, detail::two_sided_t_p(t, df), df};
}

/// Welch's unequal-variance t-test, two-sided.
inline TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("welch_t_test: need at least two observations per sample");
  const double va = variance(a) / static_cast<double>(a.size());
  const double vb = variance(b) / static_cast<double>(b.size());
  if (va + vb == 0.0)
    throw std::domain_error("welch_t_test: both samples are constant");
  const double t = (mean(a) - mean(b)) / std::sqrt(va + vb);
  const double df = (va + vb) * (va + vb) /
                    (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  return {t, detail::two_sided_t_p(t, df), df};
}

/// Average ranks (1-based) with ties sharing the mean of their positions.
inline std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]])
      ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

struct WilcoxonResult {
  double wPlus = 0; ///< rank sum of positive differences a - b
  double p = 1;
  std::size_t n = 0; ///< non-zero differences
  bool exact = false;
};

inline constexpr std::size_t wilcoxonExactBelow = 20;

/// Wilcoxon signed-rank test, two-sided. Zero differences are dropped and ties
/// get average ranks. Exact null distribution for fewer than 20 non-zero
/// differences, normal approximation with tie and continuity correction above.
inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("wilcoxon_signed_rank: samples differ in length");
  std::vector<double> d, absd;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] - b[i];
    if (x != 0.0) {
      d.push_back(x);
      absd.push_back(std::fabs(x));
    }
  }
  if (d.empty())
    throw std::domain_error("wilcoxon_signed_rank: all differences are zero");

  const auto ranks = average_ranks(absd);
  WilcoxonResult r;
  r.n = d.size();
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > 0)
      r.wPlus += ranks[i];

  if (r.n < wilcoxonExactBelow) {
    // Average ranks are multiples of 1/2, so doubled ranks are integers and the
    // null distribution of 2W+ is a subset-sum count over them.
    std::vector<int> doubled(r.n);
    int total = 0;
    for (std::size_t i = 0; i < r.n; ++i)
      total += doubled[i] = static_cast<int>(std::lround(2 * ranks[i]));
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1;
    for (int w : doubled)
      for (int s = total; s >= w; --s)
        count[static_cast<std::size_t>(s)] += count[static_cast<std::size_t>(s - w)];
    const int observed = static_cast<int>(std::lround(2 * r.wPlus));
    double lower = 0, upper = 0;
    for (int s = 0; s <= total; ++s) {
      if (s <= observed)
        lower += count[static_cast<std::size_t>(s)];
      if (s >= observed)
        upper += count[static_cast<std::size_t>(s)];
    }
    const double all = std::ldexp(1.0, static_cast<int>(r.n));
    r.p = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    r.exact = true;
    return r;
  }

  const double n = static_cast<double>(r.n);
  const double mu = n * (n + 1) / 4.0;
  double var = n * (n + 1) * (2 * n + 1) / 24.0;
  std::vector<double> sorted = absd;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i])
      ++j;
    const double t = static_cast<double>(j - i);
    var -= (t * t * t - t) / 48.0;
    i = j;
  }
  const double diff = r.wPlus - mu;
  const double correction = diff > 0 ? 0.5 : diff < 0 ? -0.5 : 0.0;
  r.p = std::min(1.0, detail::two_sided_normal_p((diff - correction) / std::sqrt(var)));
  return r;
}

/// (mean(a) - mean(b)) / pooled standard deviation.
inline double cohens_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("cohens_d: need at least two observations per sample");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double pooled = ((na - 1) * variance(a) + (nb - 1) * variance(b)) / (na + nb - 2);
  if (pooled == 0.0)
    throw std::domain_error("cohens_d: zero pooled variance");
  return (mean(a) - mean(b)) / std::sqrt(pooled);
}

/// Spearman rank correlation (Pearson correlation of average ranks).
inline double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("spearman_rho: need two samples of equal length >= 2");
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const double mx = mean(rx), my = mean(ry);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0)
    throw std::domain_error("spearman_rho: constant sample");
  return sxy / std::sqrt(sxx * syy);
}

} // namespace gapsat

#include "pausebench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "pausebench/error.hpp"

namespace pausebench {

std::string_view to_string(PValueMethod m) noexcept {
  switch (m) {
    case PValueMethod::Auto: return "auto";
    case PValueMethod::Exact: return "exact";
    case PValueMethod::TApprox: return "t";
  }
  return "auto";
}

std::optional<PValueMethod> parse_pvalue_method(std::string_view name) noexcept {
  if (name == "auto") return PValueMethod::Auto;
  if (name == "exact") return PValueMethod::Exact;
  if (name == "t") return PValueMethod::TApprox;
  return std::nullopt;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 (0-based) share rank mean((i+1)..j)
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

namespace {

struct Pairs {
  std::vector<double> x;
  std::vector<double> y;
};

Pairs complete_pairs(std::span<const std::optional<double>> x, std::span<const std::optional<double>> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "series lengths differ");
  Pairs p;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] && y[i] && !std::isnan(*x[i]) && !std::isnan(*y[i])) {
      p.x.push_back(*x[i]);
      p.y.push_back(*y[i]);
    }
  }
  return p;
}

std::vector<std::optional<double>> nan_as_missing(std::span<const double> v) {
  std::vector<std::optional<double>> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isnan(v[i])) out[i] = v[i];
  }
  return out;
}

std::size_t distinct_count(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

std::vector<double> centered(std::vector<double> v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& x : v) x -= m;
  return v;
}

double sum_squares(const std::vector<double>& v) {
  return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

// Fraction of permutations whose |rho| reaches the observed value.
class PermutationTest {
 public:
  PermutationTest(std::vector<double> rx, std::vector<double> ry, double observed)
      : rx_(centered(std::move(rx))), ry_(centered(std::move(ry))),
        norm_(std::sqrt(sum_squares(rx_) * sum_squares(ry_))),
        threshold_(std::abs(observed) - 1e-12) {}

  double enumerate() const {
    std::vector<std::size_t> perm(rx_.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t total = 0;
    std::uint64_t extreme = 0;
    do {
      ++total;
      if (reaches(perm)) ++extreme;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
  }

  double sample(std::size_t draws, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> perm(rx_.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t extreme = 0;
    for (std::size_t d = 0; d < draws; ++d) {
      // Fisher-Yates with rejection sampling keeps the stream portable.
      for (std::size_t i = perm.size() - 1; i > 0; --i) {
        std::swap(perm[i], perm[bounded(rng, i + 1)]);
      }
      if (reaches(perm)) ++extreme;
    }
    return static_cast<double>(extreme + 1) / static_cast<double>(draws + 1);
  }

 private:
  static std::size_t bounded(std::mt19937_64& rng, std::size_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
      v = rng();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
  }

  bool reaches(const std::vector<std::size_t>& perm) const {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += rx_[i] * ry_[perm[i]];
    return std::abs(s / norm_) >= threshold_;
  }

  std::vector<double> rx_;
  std::vector<double> ry_;
  double norm_;
  double threshold_;
};

double t_approx_p(double rho, std::size_t n) {
  if (std::abs(rho) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = rho * std::sqrt(df / (1.0 - rho * rho));
  const boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

}  // namespace

CorrelationResult spearman(std::span<const std::optional<double>> x,
                           std::span<const std::optional<double>> y,
                           const SpearmanOptions& options) {
  Pairs p = complete_pairs(x, y);
  const std::size_t n = p.x.size();
  if (n < 3) {
    throw Error(ErrorCode::TooFewPairs, "spearman needs at least 3 complete pairs, got " + std::to_string(n));
  }
  if (distinct_count(p.x) < 2 || distinct_count(p.y) < 2) {
    throw Error(ErrorCode::ConstantSeries, "spearman needs at least 2 distinct values per series");
  }

  std::vector<double> rx = average_ranks(p.x);
  std::vector<double> ry = average_ranks(p.y);
  const std::vector<double> cx = centered(rx);
  const std::vector<double> cy = centered(ry);
  double rho = std::inner_product(cx.begin(), cx.end(), cy.begin(), 0.0) /
               std::sqrt(sum_squares(cx) * sum_squares(cy));
  rho = std::clamp(rho, -1.0, 1.0);

  CorrelationResult result;
  result.rho = rho;
  result.n = n;
  const bool exact = options.method == PValueMethod::Exact ||
                     (options.method == PValueMethod::Auto && n < kExactPermutationLimit);
  if (exact) {
    const PermutationTest test(std::move(rx), std::move(ry), rho);
    result.p_value = n <= options.enumeration_limit
                         ? test.enumerate()
                         : test.sample(options.monte_carlo_draws, options.seed);
  } else {
    result.p_value = t_approx_p(rho, n);
  }
  result.significant = result.p_value < kSignificanceLevel;
  return result;
}

CorrelationResult spearman(std::span<const double> x, std::span<const double> y,
                           const SpearmanOptions& options) {
  const auto ox = nan_as_missing(x);
  const auto oy = nan_as_missing(y);
  return spearman(std::span<const std::optional<double>>(ox), std::span<const std::optional<double>>(oy),
                  options);
}

BlandAltmanResult bland_altman(std::span<const std::optional<double>> a,
                               std::span<const std::optional<double>> b) {
  const Pairs p = complete_pairs(a, b);
  const std::size_t n = p.x.size();
  if (n < 2) {
    throw Error(ErrorCode::TooFewPairs, "Bland-Altman needs at least 2 complete pairs, got " + std::to_string(n));
  }
  BlandAltmanResult r;
  r.points.reserve(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = p.x[i] - p.y[i];
    r.points.push_back({0.5 * (p.x[i] + p.y[i]), d});
    sum += d;
  }
  r.bias = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& pt : r.points) ss += (pt.difference - r.bias) * (pt.difference - r.bias);
  r.sd = std::sqrt(ss / static_cast<double>(n - 1));
  r.loa_low = r.bias - kLimitsOfAgreementZ * r.sd;
  r.loa_high = r.bias + kLimitsOfAgreementZ * r.sd;
  return r;
}

BlandAltmanResult bland_altman(std::span<const double> a, std::span<const double> b) {
  const auto oa = nan_as_missing(a);
  const auto ob = nan_as_missing(b);
  return bland_altman(std::span<const std::optional<double>>(oa), std::span<const std::optional<double>>(ob));
}

std::string_view to_string(Group g) noexcept { return g == Group::HC ? "HC" : "ALS"; }

std::optional<Group> parse_group(std::string_view name) noexcept {
  if (name == "HC" || name == "hc") return Group::HC;
  if (name == "ALS" || name == "als") return Group::ALS;
  return std::nullopt;
}

std::string_view to_string(SeverityLabel s) noexcept {
  switch (s) {
    case SeverityLabel::HC: return "HC";
    case SeverityLabel::Mild: return "Mild";
    case SeverityLabel::Moderate: return "Moderate";
    case SeverityLabel::Severe: return "Severe";
  }
  return "HC";
}

SeverityLabel classify_severity(Group group, std::optional<double> wpm) {
  if (group == Group::HC) return SeverityLabel::HC;
  if (!wpm || !std::isfinite(*wpm) || *wpm <= 0.0) {
    throw Error(ErrorCode::MissingWpm, "ALS record requires a positive speaking rate");
  }
  if (*wpm > kMildWpmAbove) return SeverityLabel::Mild;
  if (*wpm < kSevereWpmBelow) return SeverityLabel::Severe;
  return SeverityLabel::Moderate;
}

}  // namespace pausebench

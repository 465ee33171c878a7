#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pausebench {

inline constexpr double kSignificanceLevel = 0.05;
inline constexpr double kLimitsOfAgreementZ = 1.96;

enum class PValueMethod {
  /// Exact permutation test below kExactPermutationLimit pairs, otherwise
  /// the Student-t approximation.
  Auto,
  Exact,
  TApprox,
};

std::string_view to_string(PValueMethod m) noexcept;
std::optional<PValueMethod> parse_pvalue_method(std::string_view name) noexcept;

struct SpearmanOptions {
  PValueMethod method = PValueMethod::Auto;
  /// Exact mode enumerates all n! permutations up to this size; above it a
  /// seeded Monte Carlo permutation test is used instead.
  std::size_t enumeration_limit = 9;
  std::size_t monte_carlo_draws = 20000;
  std::uint64_t seed = 0x5eed;
};

inline constexpr std::size_t kExactPermutationLimit = 10;

struct CorrelationResult {
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  bool significant = false;
};

/// Tie-aware Spearman correlation (Pearson on average ranks) with a two-sided
/// p-value. Pairs where either side is missing are dropped first.
///
/// Throws TooFewPairs when fewer than 3 pairs remain and ConstantSeries when
/// either side has fewer than 2 distinct values.
CorrelationResult spearman(std::span<const std::optional<double>> x,
                           std::span<const std::optional<double>> y,
                           const SpearmanOptions& options = {});

/// Same, with NaN marking a missing value.
CorrelationResult spearman(std::span<const double> x, std::span<const double> y,
                           const SpearmanOptions& options = {});

/// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

struct BlandAltmanPoint {
  double mean = 0.0;
  double difference = 0.0;
};

struct BlandAltmanResult {
  double bias = 0.0;
  double sd = 0.0;
  double loa_low = 0.0;
  double loa_high = 0.0;
  std::vector<BlandAltmanPoint> points;
};

/// Differences are a - b; limits are bias -/+ 1.96 sample SD.
/// Throws TooFewPairs below 2 complete pairs.
BlandAltmanResult bland_altman(std::span<const std::optional<double>> a,
                               std::span<const std::optional<double>> b);
BlandAltmanResult bland_altman(std::span<const double> a, std::span<const double> b);

enum class Group { HC, ALS };
enum class SeverityLabel { HC, Mild, Moderate, Severe };

std::string_view to_string(Group g) noexcept;
std::optional<Group> parse_group(std::string_view name) noexcept;
std::string_view to_string(SeverityLabel s) noexcept;

inline constexpr double kMildWpmAbove = 160.0;
inline constexpr double kSevereWpmBelow = 120.0;

/// Controls are HC whatever their rate. ALS: >160 WPM Mild, 120..160
/// inclusive Moderate, <120 Severe. ALS without a positive WPM is MissingWpm.
SeverityLabel classify_severity(Group group, std::optional<double> wpm);

}  // namespace pausebench

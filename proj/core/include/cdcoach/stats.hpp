#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

namespace cdcoach {

// Raised for inputs on which a statistic is undefined (length mismatch, too
// few samples, zero variance).
class StatisticsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class TTestVariant { kWelch, kStudent };

std::string_view toString(TTestVariant variant);
std::optional<TTestVariant> tTestVariantFromString(std::string_view text);

struct GroupComparison {
  double meanA = 0.0;
  double meanB = 0.0;
  double t = 0.0;
  double df = 0.0;
  double pTwoTailed = 1.0;
  std::size_t nA = 0;
  std::size_t nB = 0;
};

double mean(std::span<const double> xs);

/// Unbiased (n - 1) sample variance.
double sampleVariance(std::span<const double> xs);

/// Sample Pearson correlation. Throws StatisticsError on a length mismatch,
/// fewer than two points, or a series with zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Two-tailed two-sample t-test. Welch uses the Welch-Satterthwaite degrees
/// of freedom; Student pools the variances with n_a + n_b - 2 degrees of
/// freedom. Each sample needs at least two values and nonzero variance.
GroupComparison tTestTwoTailed(std::span<const double> a, std::span<const double> b,
                               TTestVariant variant = TTestVariant::kWelch);

/// I_x(a, b), evaluated with a Lentz continued fraction.
double regularizedIncompleteBeta(double a, double b, double x);

/// CDF of Student's t distribution with `df` degrees of freedom.
double studentTCdf(double t, double df);

}  // namespace cdcoach

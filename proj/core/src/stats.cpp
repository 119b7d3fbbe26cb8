#include "cdcoach/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cdcoach {

namespace {

// Continued fraction for I_x(a,b) (modified Lentz). Converges quickly for
// x < (a + 1) / (a + b + 2).
double betaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  return h;
}

void requireSample(std::span<const double> xs, const char* name) {
  if (xs.size() < 2) {
    throw StatisticsError(std::string("sample ") + name + " needs at least two values");
  }
  if (sampleVariance(xs) == 0.0) {
    throw StatisticsError(std::string("sample ") + name + " has zero variance");
  }
}

}  // namespace

std::string_view toString(TTestVariant variant) {
  return variant == TTestVariant::kWelch ? "welch" : "student";
}

std::optional<TTestVariant> tTestVariantFromString(std::string_view text) {
  if (text == "welch") return TTestVariant::kWelch;
  if (text == "student") return TTestVariant::kStudent;
  return std::nullopt;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw StatisticsError("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sampleVariance(std::span<const double> xs) {
  if (xs.size() < 2) throw StatisticsError("variance needs at least two values");
  const double m = mean(xs);
  double ss = 0.0;
  for (const double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw StatisticsError("pearson: series lengths differ");
  if (xs.size() < 2) throw StatisticsError("pearson: needs at least two points");
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw StatisticsError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

GroupComparison tTestTwoTailed(std::span<const double> a, std::span<const double> b,
                               TTestVariant variant) {
  requireSample(a, "a");
  requireSample(b, "b");

  GroupComparison out;
  out.nA = a.size();
  out.nB = b.size();
  out.meanA = mean(a);
  out.meanB = mean(b);
  const double na = static_cast<double>(out.nA);
  const double nb = static_cast<double>(out.nB);
  const double va = sampleVariance(a);
  const double vb = sampleVariance(b);

  double standardError = 0.0;
  if (variant == TTestVariant::kWelch) {
    const double qa = va / na;
    const double qb = vb / nb;
    standardError = std::sqrt(qa + qb);
    out.df = (qa + qb) * (qa + qb) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  } else {
    out.df = na + nb - 2.0;
    const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / out.df;
    standardError = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  }
  out.t = (out.meanA - out.meanB) / standardError;
  // Two-tailed p = I_{df/(df+t^2)}(df/2, 1/2).
  const double x = out.df / (out.df + out.t * out.t);
  out.pTwoTailed = std::clamp(regularizedIncompleteBeta(out.df / 2.0, 0.5, x), 0.0, 1.0);
  return out;
}

double regularizedIncompleteBeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw StatisticsError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw StatisticsError("incomplete beta needs x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double logFront = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(logFront);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * betaContinuedFraction(b, a, 1.0 - x) / b;
}

double studentTCdf(double t, double df) {
  if (!(df > 0.0)) throw StatisticsError("t distribution needs df > 0");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * regularizedIncompleteBeta(df / 2.0, 0.5, df / (df + t * t));
  return t >= 0.0 ? 1.0 - tail : tail;
}

}  // namespace cdcoach

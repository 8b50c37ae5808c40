#pragma once

// Reference computations for the tests. Each one follows a different route
// from the library (direct sums, closed forms, brute-force quadrature) so
// agreement is evidence rather than tautology.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); }

/// (1/S) sum_i F_i e^{2 pi i (i/S) x} over indices i in [-N/2, N/2), by direct summation.
inline Complex direct_inverse(const std::vector<Complex>& spectrum, int S, double x) {
  const auto n = static_cast<std::int64_t>(spectrum.size());
  long double re = 0.0L;
  long double im = 0.0L;
  for (std::int64_t p = 0; p < n; ++p) {
    const std::int64_t i = p - n / 2;
    const long double phase = 2.0L * std::numbers::pi_v<long double> * i * x / S;
    re += spectrum[static_cast<std::size_t>(p)].real() * std::cos(phase) -
          spectrum[static_cast<std::size_t>(p)].imag() * std::sin(phase);
    im += spectrum[static_cast<std::size_t>(p)].real() * std::sin(phase) +
          spectrum[static_cast<std::size_t>(p)].imag() * std::cos(phase);
  }
  return {static_cast<double>(re / S), static_cast<double>(im / S)};
}

/// Centered B-spline of degree n on [0, n+1] by the truncated-power formula
///   (1/n!) sum_k (-1)^k C(n+1, k) (x - k)_+^n,
/// with the midpoint convention at the jumps of degree 0.
inline double bspline(int n, double x) {
  if (n == 0) {
    if (x > 0.0 && x < 1.0) return 1.0;
    if (x == 0.0 || x == 1.0) return 0.5;
    return 0.0;
  }
  if (x <= 0.0 || x >= n + 1) return 0.0;
  long double sum = 0.0L;
  long double binom = 1.0L;
  for (int k = 0; k <= n + 1; ++k) {
    if (x > k) sum += (k % 2 ? -1.0L : 1.0L) * binom * std::pow(static_cast<long double>(x - k), n);
    binom = binom * (n + 1 - k) / (k + 1);
  }
  long double fact = 1.0L;
  for (int k = 2; k <= n; ++k) fact *= k;
  return static_cast<double>(sum / fact);
}

/// sum_k sinc^4(xi + k) over |k| <= K, plus the bound on the omitted tail:
///   sum_{|k| > K} (pi |xi + k|)^-4 <= 2 / (3 pi^4 (K - 1)^3).
struct SeriesValue {
  double value;
  double tail_bound;
};

inline SeriesValue hat_periodization(double xi, int K = 10000) {
  long double sum = 0.0L;
  for (int k = -K; k <= K; ++k) {
    const long double s = sinc(xi + k);
    sum += s * s * s * s;
  }
  const double tail = 2.0 / (3.0 * std::pow(kPi, 4) * std::pow(K - 1.0, 3));
  return {static_cast<double>(sum), tail};
}

/// int_{-T}^{T} |sinc(x)| dx by composite Simpson on each half period.
inline double abs_sinc_integral(double T, int per_unit = 4096) {
  const auto cells = static_cast<std::int64_t>(std::llround(T * per_unit));
  const long double h = static_cast<long double>(T) / cells;
  long double sum = 0.0L;
  for (std::int64_t c = 0; c < cells; ++c) {
    const long double a = c * h;
    const long double m = a + h / 2;
    const long double b = a + h;
    sum += h / 6 *
           (std::abs(sinc(static_cast<double>(a))) + 4 * std::abs(sinc(static_cast<double>(m))) +
            std::abs(sinc(static_cast<double>(b))));
  }
  return static_cast<double>(2 * sum);
}

/// sum_{l < count} e^{2 pi i theta l} by direct summation.
inline Complex geometric_sum(double theta, std::int64_t count) {
  Complex sum{};
  for (std::int64_t l = 0; l < count; ++l) {
    const double t = theta * static_cast<double>(l);
    sum += std::polar(1.0, 2.0 * kPi * (t - std::round(t)));
  }
  return sum;
}

/// beta_j = ceil(2^{j beta}) for integer beta, by repeated doubling.
inline std::vector<std::int64_t> integer_block_counts(int beta, int last) {
  std::vector<std::int64_t> out;
  std::int64_t v = 1;
  for (int j = 0; j <= last; ++j) {
    out.push_back(v);
    for (int b = 0; b < beta; ++b) v *= 2;
  }
  return out;
}

}  // namespace oracle

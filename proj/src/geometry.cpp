#include "hyperem/geometry.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "hyperem/error.hpp"

namespace hyperem {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::UnsupportedRegime: return "unsupported regime";
    case ErrorKind::AboveSpectralGap: return "above spectral gap";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::DegenerateComparison: return "degenerate comparison";
    case ErrorKind::BracketExpansion: return "bracket expansion failed";
    case ErrorKind::Validation: return "validation failed";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

namespace {

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kExponentRelTol * std::max(std::abs(a), std::abs(b));
}

void require_dimension(int n) {
  if (n < 2) throw Error(ErrorKind::Domain, "dimension n must be >= 2, got " + std::to_string(n));
}

// Taylor coefficients b_j of (sinh s / s)^m = sum_j b_j s^{2j}.
constexpr int kSeriesTerms = 40;

std::array<double, kSeriesTerms> sinhc_power_series(int m) {
  std::array<double, kSeriesTerms> base{};
  double fact = 1.0;  // (2j+1)!
  for (int j = 0; j < kSeriesTerms; ++j) {
    if (j > 0) fact *= (2.0 * j) * (2.0 * j + 1.0);
    base[j] = 1.0 / fact;
  }
  std::array<double, kSeriesTerms> out{};
  out[0] = 1.0;
  for (int k = 0; k < m; ++k) {
    std::array<double, kSeriesTerms> next{};
    for (int i = 0; i < kSeriesTerms; ++i) {
      if (out[i] == 0.0) continue;
      for (int j = 0; i + j < kSeriesTerms; ++j) next[i + j] += out[i] * base[j];
    }
    out = next;
  }
  return out;
}

constexpr int kCachedPowers = 32;

const std::array<double, kSeriesTerms>& cached_series(int m) {
  static const auto table = [] {
    std::array<std::array<double, kSeriesTerms>, kCachedPowers + 1> t{};
    for (int k = 0; k <= kCachedPowers; ++k) t[k] = sinhc_power_series(k);
    return t;
  }();
  return table[m];
}

// phi_ratio by series, valid for r <= 1.
double phi_ratio_series(int m, double r) {
  std::array<double, kSeriesTerms> local{};
  if (m > kCachedPowers) local = sinhc_power_series(m);
  const auto& b = m > kCachedPowers ? local : cached_series(m);
  const double r2 = r * r;
  double sum = 0.0;
  double rp = 1.0;
  for (int j = 0; j < kSeriesTerms; ++j) {
    const double term = b[j] * rp / (m + 1.0 + 2.0 * j);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    rp *= r2;
  }
  const double sinhc = std::sinh(r) / r;
  return r * sum / std::pow(sinhc, m);
}

// H_m = I_m / sinh^m with I_m = int_0^r sinh^m, via
// I_m = sinh^{m-1} cosh / m - (m-1)/m I_{m-2}.
double phi_ratio_recurrence(int m, double r) {
  const double coth = 1.0 / std::tanh(r);
  const double sh = std::sinh(r);
  const double inv_sh2 = std::isfinite(sh) ? 1.0 / (sh * sh) : 0.0;
  double h = (m % 2 == 0) ? r : std::tanh(0.5 * r);
  for (int k = (m % 2 == 0) ? 2 : 3; k <= m; k += 2) {
    h = coth / k - (static_cast<double>(k - 1) / k) * h * inv_sh2;
  }
  return h;
}

}  // namespace

void Params::validate() const {
  require_dimension(n);
  if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorKind::Domain, "exponent p must be > 0");
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::Domain, "curvature scale c must be > 0");
  if (!std::isfinite(alpha)) throw Error(ErrorKind::Domain, "alpha must be finite");
}

const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Sublinear: return "Sublinear";
    case RegimeTag::Linear: return "Linear";
    case RegimeTag::Subcritical: return "Subcritical";
    case RegimeTag::Supercritical: return "Supercritical";
  }
  return "?";
}

std::string to_string(const Regime& regime) {
  std::string s = to_string(regime.tag);
  if (regime.critical_boundary) s += "(critical boundary)";
  return s;
}

double critical_exponent(int n) {
  require_dimension(n);
  if (n == 2) return std::numeric_limits<double>::infinity();
  return static_cast<double>(n + 2) / static_cast<double>(n - 2);
}

Regime classify_regime(int n, double p) {
  require_dimension(n);
  if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorKind::Domain, "exponent p must be > 0");
  if (nearly_equal(p, 1.0)) return {RegimeTag::Linear, false};
  if (p < 1.0) return {RegimeTag::Sublinear, false};
  if (n == 2) return {RegimeTag::Subcritical, false};
  const double crit = critical_exponent(n);
  if (nearly_equal(p, crit)) return {RegimeTag::Supercritical, true};
  if (p > crit) return {RegimeTag::Supercritical, false};
  return {RegimeTag::Subcritical, false};
}

double spectral_gap(int n) {
  require_dimension(n);
  const double m = n - 1;
  return m * m / 4.0;
}

double log_sinh(double r) {
  if (r < 20.0) return std::log(std::sinh(r));
  return r + std::log1p(-std::exp(-2.0 * r)) - std::numbers::ln2;
}

double sinh_pow(int n, double r) {
  if (n == 1 || r == 0.0) return n == 1 ? 1.0 : 0.0;
  if ((n - 1) * r < 700.0) return std::pow(std::sinh(r), n - 1);
  return std::exp((n - 1) * log_sinh(r));
}

double phi_ratio(int n, double r) {
  require_dimension(n);
  if (r < 0.0) throw Error(ErrorKind::Domain, "radius must be >= 0");
  if (r == 0.0) return 0.0;
  const int m = n - 1;
  return r <= 1.0 ? phi_ratio_series(m, r) : phi_ratio_recurrence(m, r);
}

double phi_n(int n, double r) {
  const double ratio = phi_ratio(n, r);
  if (r == 0.0) return 0.0;
  if ((n - 1) * r < 700.0) return ratio * sinh_pow(n, r);
  return std::exp(std::log(ratio) + (n - 1) * log_sinh(r));
}

double log_phi_n(int n, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::Domain, "log_phi_n needs r > 0");
  return std::log(phi_ratio(n, r)) + (n - 1) * log_sinh(r);
}

double psi_p_scaled(int n, double p, double r) {
  require_dimension(n);
  if (r < 0.0) throw Error(ErrorKind::Domain, "radius must be >= 0");
  const double lead = (p + 3.0) / (2.0 * (p + 1.0));
  if (r == 0.0) return lead - static_cast<double>(n - 1) / n;
  return lead - (n - 1) * phi_ratio(n, r) / std::tanh(r);
}

double psi_p(int n, double p, double r) {
  if (r == 0.0) return 0.0;
  return psi_p_scaled(n, p, r) * sinh_pow(n, r);
}

double find_R_np(int n, double p) {
  const Regime regime = classify_regime(n, p);
  if (regime.tag != RegimeTag::Subcritical) {
    throw Error(ErrorKind::UnsupportedRegime,
                "R_{n,p} exists only for subcritical p; got " + to_string(regime));
  }
  auto g = [n, p](double r) { return psi_p_scaled(n, p, r); };
  double lo = 1.0;
  while (g(lo) <= 0.0) {
    lo *= 0.5;
    if (lo < 1e-150) throw Error(ErrorKind::Domain, "psi_p has no positive part near 0");
  }
  double hi = std::max(1.0, 2.0 * lo);
  while (g(hi) >= 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorKind::Domain, "psi_p sign change not found");
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double c_np(int n, double p) {
  require_dimension(n);
  if (!(p > 1.0) || nearly_equal(p, 1.0) || !std::isfinite(p)) {
    throw Error(ErrorKind::Domain, "c(n,p) requires p > 1");
  }
  return std::pow((n - 1) / (p - 1.0), 1.0 / (p - 1.0));
}

LambdaPair lambda_pair(int n, double c) {
  require_dimension(n);
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::Domain, "lambda_pair needs c > 0");
  const double gap = spectral_gap(n);
  if (c > gap) throw Error(ErrorKind::AboveSpectralGap, "c exceeds (n-1)^2/4");
  const double m = n - 1;
  const double disc = std::max(0.0, m * m - 4.0 * c);
  const double lambda2 = 0.5 * (m + std::sqrt(disc));
  return {c / lambda2, lambda2};
}

}  // namespace hyperem

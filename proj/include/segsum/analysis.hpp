#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "segsum/domain.hpp"
#include "segsum/rng.hpp"

namespace segsum {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

struct MonteCarloEstimate {
  double point = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
};

struct VictimProbability {
  Rational exact;
  std::optional<MonteCarloEstimate> estimate;
};

/// Probability that a given party is sandwiched by a colluding pair in the
/// unsegmented protocol: n / C(n,2), which simplifies to 2/(n-1).
inline VictimProbability victim_probability_baseline(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::TooFewParties, "victim probability needs n >= 3");
  return {Rational(2, static_cast<long long>(n - 1)), std::nullopt};
}

/// (2/(n-1))^k.
inline VictimProbability victim_probability_k(std::size_t n, std::size_t k) {
  if (n < 3) throw Error(ErrorCode::TooFewParties, "victim probability needs n >= 3");
  if (k < 1) throw Error(ErrorCode::InvalidSegmentCount, "segment count must be at least 1");
  const Rational base = victim_probability_baseline(n).exact;
  Rational p(1);
  for (std::size_t i = 0; i < k; ++i) p *= base;
  return {p, std::nullopt};
}

/// Ring distance between two positions.
constexpr std::size_t ring_distance(std::size_t a, std::size_t b, std::size_t n) {
  const std::size_t d = a > b ? a - b : b - a;
  return d < n - d ? d : n - d;
}

/// Samples colluding pairs uniformly from all C(n,2) pairs and counts how
/// often the pair are the two neighbours of some party (ring distance 2).
/// Defined for n >= 5 only: for n = 3 and n = 4 the closed form's counting
/// argument and this event disagree.
inline MonteCarloEstimate monte_carlo_neighbor_pair_estimate(std::size_t n, std::uint64_t trials, Rng& rng) {
  if (n < 5) throw Error(ErrorCode::TooFewParties, "Monte Carlo estimator is defined for n >= 5");
  if (trials < 1) throw Error(ErrorCode::ConfigInvalid, "need at least one trial");
  MonteCarloEstimate est;
  est.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto a = static_cast<std::size_t>(rng.uniform_below(n));
    auto b = static_cast<std::size_t>(rng.uniform_below(n - 1));
    if (b >= a) ++b;
    if (ring_distance(a, b, n) == 2) ++est.hits;
  }
  est.point = static_cast<double>(est.hits) / static_cast<double>(trials);
  est.standard_error = std::sqrt(est.point * (1.0 - est.point) / static_cast<double>(trials));
  return est;
}

inline MonteCarloEstimate monte_carlo_neighbor_pair_estimate(std::size_t n, std::uint64_t trials,
                                                             std::uint64_t seed) {
  Rng rng(derive_seed(seed, kMonteCarloStream + n));
  return monte_carlo_neighbor_pair_estimate(n, trials, rng);
}

struct CurveRow {
  std::size_t n = 0;
  std::size_t k = 0;
  Rational probability;
  std::optional<MonteCarloEstimate> estimate;
};

struct CurveTable {
  std::vector<CurveRow> rows;
};

/// Rows ordered by k, then by n.
inline CurveTable generate_curve(std::size_t n_min, std::size_t n_max, const std::vector<std::size_t>& k_values) {
  if (n_min < 3) throw Error(ErrorCode::TooFewParties, "curve needs n >= 3");
  if (n_max < n_min) throw Error(ErrorCode::ConfigInvalid, "empty n range");
  CurveTable table;
  for (std::size_t k : k_values) {
    for (std::size_t n = n_min; n <= n_max; ++n) table.rows.push_back({n, k, victim_probability_k(n, k).exact, {}});
  }
  return table;
}

/// Exact decimal rendering rounded half-up to `digits` significant digits,
/// trailing zeros dropped (0.5, 0.0625, 1, 1.234567901e-05).
inline std::string to_decimal(const Rational& r, int digits = 10) {
  BigInt num = r.numerator();
  const BigInt den = r.denominator();
  if (num == 0) return "0";
  const bool negative = num < 0;
  if (negative) num = -num;

  // Find e with 10^e <= num/den < 10^(e+1).
  int e = 0;
  BigInt scaled_num = num;
  BigInt scaled_den = den;
  while (scaled_num >= scaled_den * 10) {
    scaled_den *= 10;
    ++e;
  }
  while (scaled_num < scaled_den) {
    scaled_num *= 10;
    --e;
  }
  // Mantissa digits: round(num/den * 10^(digits-1-e)).
  for (int i = 0; i < digits - 1; ++i) scaled_num *= 10;
  BigInt mantissa = (scaled_num * 2 + scaled_den) / (scaled_den * 2);
  BigInt limit = 1;
  for (int i = 0; i < digits; ++i) limit *= 10;
  if (mantissa >= limit) {
    mantissa /= 10;
    ++e;
  }
  std::string m = mantissa.str();
  while (m.size() > 1 && m.back() == '0') m.pop_back();

  std::string out;
  if (e >= -4 && e < digits) {
    if (e >= 0) {
      const auto int_len = static_cast<std::size_t>(e + 1);
      if (m.size() <= int_len) {
        out = m + std::string(int_len - m.size(), '0');
      } else {
        out = m.substr(0, int_len) + "." + m.substr(int_len);
      }
    } else {
      out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + m;
    }
  } else {
    out = m.substr(0, 1);
    if (m.size() > 1) out += "." + m.substr(1);
    const int ae = e < 0 ? -e : e;
    out += std::string("e") + (e < 0 ? "-" : "+") + (ae < 10 ? "0" : "") + std::to_string(ae);
  }
  return negative ? "-" + out : out;
}

/// CSV with header `n,k,probability`, plus an `estimate` column when any row
/// carries a Monte Carlo estimate (empty where it does not).
inline void write_curve_csv(std::ostream& os, const CurveTable& table) {
  bool with_estimate = false;
  for (const auto& row : table.rows) with_estimate = with_estimate || row.estimate.has_value();
  os << "n,k,probability" << (with_estimate ? ",estimate" : "") << '\n';
  for (const auto& row : table.rows) {
    os << row.n << ',' << row.k << ',' << to_decimal(row.probability);
    if (with_estimate) {
      os << ',';
      if (row.estimate) os << to_decimal(Rational(static_cast<long long>(row.estimate->hits),
                                                  static_cast<long long>(row.estimate->trials)));
    }
    os << '\n';
  }
}

}  // namespace segsum

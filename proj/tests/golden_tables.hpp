#pragma once

// Published exact densities for small (n, m), transcribed as printed.
//   Regular:     f(x)   = e^{-nx} x^alpha P(x) / den
//   Fixed trace: f_F(x) = C x^alpha prod_k Q_k(x)^{p_k}   on [0, 1/n]
// Polynomials are listed in ascending powers.

#include <vector>

#include "wlsmin/rational_polynomial.hpp"

namespace wlsmin::golden {

struct RegularRow {
  int n, m;
  std::vector<long> poly;
  long den;
};

struct Factor {
  std::vector<long> poly;
  int power;
};

struct FixedTraceRow {
  int n, m;
  long constant;
  std::vector<Factor> factors;
};

inline const std::vector<RegularRow>& regular_rows() {
  static const std::vector<RegularRow> rows = {
      {2, 3, {3, 1}, 1},
      {2, 4, {12, 6, 1}, 6},
      {2, 5, {60, 36, 9, 1}, 72},
      {2, 6, {360, 240, 72, 12, 1}, 1440},
      {3, 4, {12, 8, 1}, 2},
      {3, 5, {240, 240, 96, 16, 1}, 48},
      {3, 6, {7200, 8640, 4680, 1440, 252, 24, 1}, 2880},
      {3, 7, {302400, 403200, 253440, 97920, 25200, 4320, 480, 32, 1}, 345600},
      {4, 5, {60, 60, 15, 1}, 6},
      {4, 6, {7200, 10800, 6840, 2160, 360, 30, 1}, 720},
      {4, 7, {1512000, 2721600, 2268000, 1130400, 360720, 75600, 10380, 900, 45, 1}, 259200},
      {4, 8,
       {508032000, 1016064000, 972518400, 586656000, 246456000, 74995200, 16790400, 2773440, 334800, 28800, 1680, 60,
        1},
       217728000},
      {5, 6, {360, 480, 180, 24, 1}, 24},
      {5, 7, {302400, 604800, 524160, 241920, 64800, 10320, 960, 48, 1}, 17280},
      {5, 8,
       {508032000, 1219276800, 1371686400, 943488000, 432734400, 137894400, 31157280, 5019840, 572400, 45120, 2340, 72,
        1},
       43545600},
      {5, 9,
       {1536288768000, 4096770048000, 5267275776000, 4316239872000, 2506629888000, 1083937075200, 358177075200,
        91755417600, 18353563200, 2870380800, 349493760, 32780160, 2323440, 120480, 4320, 96, 1},
       292626432000},
  };
  return rows;
}

inline const std::vector<FixedTraceRow>& fixed_trace_rows() {
  static const std::vector<FixedTraceRow> rows = {
      {2, 3, 60, {{{0, 1}, 1}, {{1, -1}, 1}, {{1, -2}, 2}}},
      {2, 4, 420, {{{0, 1}, 2}, {{1, -1}, 2}, {{1, -2}, 2}}},
      {2, 5, 2520, {{{0, 1}, 3}, {{1, -1}, 3}, {{1, -2}, 2}}},
      {2, 6, 13860, {{{0, 1}, 4}, {{1, -1}, 4}, {{1, -2}, 2}}},
      {3, 4, 660, {{{0, 1}, 1}, {{1, 0, -3}, 1}, {{1, -3}, 7}}},
      {3, 5, 10920, {{{0, 1}, 2}, {{1, -1, -1, -9, 15}, 1}, {{1, -3}, 7}}},
      {3, 6, 28560, {{{0, 1}, 3}, {{5, -12, 12, -48, -48, 432, -411}, 1}, {{1, -3}, 7}}},
      {3, 7, 1627920, {{{0, 1}, 4}, {{1, -4, 8, -16, 0, 0, 320, -756, 489}, 1}, {{1, -3}, 7}}},
      {4, 5, 3420, {{{0, 1}, 1}, {{1, 5, -20, 4}, 1}, {{1, -4}, 14}}},
      {4, 6, 106260, {{{0, 1}, 2}, {{1, 6, 1, -204, 486, -424, 356}, 1}, {{1, -4}, 14}}},
      {4, 7, 491400,
       {{{0, 1}, 3}, {{5, 27, 51, -683, -5286, 35910, -85295, 116895, -79980, -9196}, 1}, {{1, -4}, 14}}},
      {4, 8, 6796440,
       {{{0, 1}, 4},
        {{7, 28, 86, -540, -6775, -18416, 440876, -2012008, 4901710, -7145600, 5855692, -3288592, 2386196}, 1},
        {{1, -4}, 14}}},
      {5, 6, 12180, {{{0, 1}, 1}, {{1, 16, -39, -140, 220}, 1}, {{1, -5}, 23}}},
      {5, 7, 628320, {{{0, 1}, 2}, {{1, 22, 142, -1234, -580, 4676, 29788, -92420, 75355}, 1}, {{1, -5}, 23}}},
      {5, 8, 23030280,
       {{{0, 1}, 3},
        {{1, 24, 243, 280, -19962, 50208, -31022, 649056, -1420095, -7867032, 35763831, -53675640, 27627140}, 1},
        {{1, -5}, 23}}},
      {5, 9, 97740720,
       {{{0, 1}, 4},
        {{7, 168, 1968, 9642, -75517, -1457898, 10143328, -31939648, 134132583, -323536148, -511260568, 786421818,
          22191959881, -105911938466, 211492028376, -203837200540, 80216630930},
         1},
        {{1, -5}, 23}}},
  };
  return rows;
}

inline RationalPolynomial from_longs(const std::vector<long>& coeffs) {
  std::vector<Rational> v;
  for (long c : coeffs) v.emplace_back(c);
  return RationalPolynomial(std::move(v));
}

/// Full regular density polynomial x^alpha P(x)/den (the e^{-nx} stripped).
inline RationalPolynomial expand(const RegularRow& row) {
  return from_longs(row.poly).shifted(static_cast<std::size_t>(row.m - row.n)) * Rational(1, row.den);
}

inline RationalPolynomial expand(const FixedTraceRow& row) {
  RationalPolynomial acc = RationalPolynomial::constant(Rational(row.constant));
  for (const auto& f : row.factors) {
    const RationalPolynomial base = from_longs(f.poly);
    for (int k = 0; k < f.power; ++k) acc *= base;
  }
  return acc;
}

}  // namespace wlsmin::golden

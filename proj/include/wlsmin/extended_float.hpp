#pragma once

// Extended-precision floating point used wherever double would lose the
// answer: large-nm density evaluation, tail probabilities, non-integer moments.

#include <gmpxx.h>
#include <mpfr.h>

#include <boost/multiprecision/mpfr.hpp>

namespace wlsmin {

/// 80 decimal digits (~266-bit significand), stack-allocated limbs.
using ExtFloat = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<80, boost::multiprecision::allocate_stack>,
    boost::multiprecision::et_off>;

inline ExtFloat to_ext(const mpq_class& q) {
  ExtFloat r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

inline ExtFloat to_ext(const mpz_class& z) {
  ExtFloat r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

/// ln|q| for a nonzero rational, without forming q as a float first.
inline ExtFloat log_abs(const mpq_class& q) {
  ExtFloat num, den;
  mpfr_set_z(num.backend().data(), q.get_num_mpz_t(), MPFR_RNDN);
  mpfr_set_z(den.backend().data(), q.get_den_mpz_t(), MPFR_RNDN);
  return log(abs(num)) - log(den);
}

}  // namespace wlsmin

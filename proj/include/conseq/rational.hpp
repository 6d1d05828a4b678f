#pragma once

#include <gmpxx.h>
#include <string>

namespace conseq {

using Int = mpz_class;
using Rat = mpq_class;

Int factorial(unsigned long n);

// standard binomial: 0 whenever r < 0, n < 0, or r > n
Int binomial(long n, long r);

// variant used by the verbatim closed-form evaluators: C(n, 0) = 1 for every
// n including negatives (the empty choice), otherwise as `binomial`
Int binomial_empty_choice(long n, long r);

Rat rat_pow(const Rat& x, long e);

// "p/q" or a plain integer string; q > 0 enforced, value canonicalized
Rat parse_rational(const std::string& s);

// canonical GMP rendering: "p/q", or "p" when the denominator is 1
std::string rat_string(const Rat& q);

// positional decimal rendering rounded to `sig` significant digits
std::string rat_decimal(const Rat& q, int sig);

double rat_double(const Rat& q);

}  // namespace conseq

#include "conseq/rational.hpp"

#include <stdexcept>

namespace conseq {

Int factorial(unsigned long n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

Int binomial(long n, long r) {
    if (r < 0 || n < 0 || r > n) return 0;
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(r));
    return b;
}

Int binomial_empty_choice(long n, long r) {
    if (r == 0) return 1;
    return binomial(n, r);
}

Rat rat_pow(const Rat& x, long e) {
    if (e == 0) return 1;
    if (e < 0) {
        if (x == 0) throw std::invalid_argument("rat_pow: zero to negative power");
        return rat_pow(1 / x, -e);
    }
    Rat acc = 1, base = x;
    long k = e;
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

Rat parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational");
    Rat q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

std::string rat_string(const Rat& q) {
    return q.get_str();
}

std::string rat_decimal(const Rat& q, int sig) {
    if (sig < 1) throw std::invalid_argument("rat_decimal: sig < 1");
    if (q == 0) return "0";
    Int num = abs(q.get_num());
    Int den = q.get_den();
    std::string sign = (q < 0) ? "-" : "";

    // scale |q| by 10^shift so the integer quotient has exactly `sig` digits
    Int ipart = num / den;
    long shift;
    if (ipart > 0) {
        shift = sig - static_cast<long>(ipart.get_str().size());
    } else {
        // count leading zeros after the point
        long zeros = 0;
        Int scaled = num * 10;
        while (scaled / den == 0) {
            scaled *= 10;
            ++zeros;
        }
        shift = sig + zeros;
    }
    Int p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(shift >= 0 ? shift : -shift));
    Int sn = num, sd = den;
    if (shift >= 0) sn *= p10; else sd *= p10;
    Int digits = sn / sd;
    Int rem = sn - digits * sd;
    if (2 * rem >= sd) digits += 1;  // round half up

    std::string ds = digits.get_str();
    // a full carry (all nines) adds a digit and ends in 0; renormalize
    if (static_cast<long>(ds.size()) > sig) {
        ds.pop_back();
        shift -= 1;
    }
    long point = static_cast<long>(ds.size()) - shift;  // digits before the point
    std::string out;
    if (point <= 0) {
        out = "0." + std::string(-point, '0') + ds;
    } else if (point >= static_cast<long>(ds.size())) {
        out = ds + std::string(point - ds.size(), '0');
    } else {
        out = ds.substr(0, point) + "." + ds.substr(point);
    }
    return sign + out;
}

double rat_double(const Rat& q) {
    return q.get_d();
}

}  // namespace conseq

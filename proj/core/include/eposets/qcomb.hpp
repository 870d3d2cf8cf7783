#pragma once

// Exact integer combinatorics: binomials, Gaussian binomials, q-powers.
// Regularity tables and q-binomial identities are kept in exact arithmetic;
// Gaussian binomials overflow 64 bits already at moderate (n, q).

#include <boost/multiprecision/cpp_int.hpp>

#include "eposets/errors.hpp"

namespace eposets {

using BigInt = boost::multiprecision::cpp_int;

/// C(n, k); 0 when k < 0 or k > n.
BigInt binomial(long n, long k);

/// Gaussian binomial (n choose k)_q for q >= 1; q = 1 falls back to C(n, k).
/// Returns 0 when k < 0 or k > n, mirroring the R(j, i) = 0 convention.
BigInt gaussian_binomial(long n, long k, long q);

/// q^e as an exact integer, e >= 0.
BigInt q_power(long q, long e);

double to_double(const BigInt& v);

/// Exact value of a Gaussian binomial carried with its parameters.
struct QBinomial {
  long n = 0;
  long k = 0;
  long q = 2;
  BigInt value;
};

QBinomial make_q_binomial(long n, long k, long q);

bool is_prime(long q);

}  // namespace eposets

#include "eposets/qcomb.hpp"

#include <vector>

namespace eposets {

BigInt binomial(long n, long k) {
  if (k < 0 || k > n || n < 0) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;  // exact: r is always a binomial prefix
  }
  return r;
}

BigInt q_power(long q, long e) {
  BigInt r = 1;
  BigInt base = q;
  for (long i = 0; i < e; ++i) r *= base;
  return r;
}

BigInt gaussian_binomial(long n, long k, long q) {
  if (q < 1) throw Error("gaussian_binomial: q must be >= 1");
  if (k < 0 || k > n || n < 0) return 0;
  if (q == 1) return binomial(n, k);
  if (k > n - k) k = n - k;
  // (n choose k)_q = prod_{i=1}^{k} (q^{n-k+i} - 1) / (q^i - 1); the prefix
  // products are themselves Gaussian binomials, so each division is exact.
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) {
    r *= q_power(q, n - k + i) - 1;
    r /= q_power(q, i) - 1;
  }
  return r;
}

double to_double(const BigInt& v) { return v.convert_to<double>(); }

QBinomial make_q_binomial(long n, long k, long q) {
  return QBinomial{n, k, q, gaussian_binomial(n, k, q)};
}

bool is_prime(long q) {
  if (q < 2) return false;
  for (long p = 2; p * p <= q; ++p)
    if (q % p == 0) return false;
  return true;
}

}  // namespace eposets

#include "modesplit/combinatorics.hpp"

#include <gmpxx.h>

#include <stdexcept>

namespace modesplit {

namespace {

mpz_class binomial_exact(int n, int k) {
  if (n < 0 || k < 0 || k > n) return mpz_class(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return b;
}

}  // namespace

double binomial(int n, int k) { return binomial_exact(n, k).get_d(); }

double multinomial(int n, std::span<const int> parts) {
  if (n < 0) throw std::domain_error("multinomial: negative total");
  int sum = 0;
  for (int p : parts) {
    if (p < 0) throw std::domain_error("multinomial: negative part");
    sum += p;
  }
  if (sum != n) throw std::domain_error("multinomial: parts do not sum to total");
  mpz_class num;
  mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(n));
  for (int p : parts) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(p));
    mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), f.get_mpz_t());
  }
  return num.get_d();
}

double binomial_product_ratio(std::span<const int> ns, std::span<const int> ks,
                              int n, int k) {
  if (ns.size() != ks.size())
    throw std::invalid_argument("binomial_product_ratio: length mismatch");
  mpz_class den = binomial_exact(n, k);
  if (den == 0)
    throw std::domain_error("binomial_product_ratio: zero denominator");
  mpz_class num(1);
  for (std::size_t i = 0; i < ns.size(); ++i) num *= binomial_exact(ns[i], ks[i]);
  mpq_class q(num, den);
  q.canonicalize();
  return q.get_d();
}

}  // namespace modesplit

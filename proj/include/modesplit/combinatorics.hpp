#pragma once

#include <span>

namespace modesplit {

// C(n, k), computed exactly in arbitrary precision and rounded to double once.
// Out-of-range arguments (k < 0, k > n, n < 0) give 0.
double binomial(int n, int k);

// n! / (parts[0]! * parts[1]! * ...), exact internally. parts must be
// non-negative and sum to n.
double multinomial(int n, std::span<const int> parts);

// (prod_i C(ns[i], ks[i])) / C(n, k) as an exact rational, rounded to double
// once. C(n, k) must be nonzero.
double binomial_product_ratio(std::span<const int> ns, std::span<const int> ks,
                              int n, int k);

}  // namespace modesplit

#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace normlab::roots {

struct Bracket {
  double lo;
  double hi;
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

/// Narrows [lo, hi] around the switch point of a monotone predicate with
/// pred(lo) == true and pred(hi) == false. Stops when the midpoint no longer
/// separates the endpoints in floating point, or after max_iter halvings.
template <class Pred>
Bracket bisect_predicate(const Pred& pred, double lo, double hi, int max_iter = 200) {
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

/// Root of a continuous f with f(lo) and f(hi) of opposite signs (or zero).
/// Returns the bracket endpoint with the smaller |f| after narrowing.
template <class F>
double bisect_sign_change(const F& f, double lo, double hi, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::logic_error("bisect_sign_change: no sign change in bracket");
  const bool lo_positive = flo > 0.0;
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == lo_positive) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

/// Smallest power-of-two radius R such that pred(-R) and !pred(R) hold,
/// for a predicate that is true far left and false far right.
template <class Pred>
double expand_symmetric(const Pred& pred, double start = 1.0, int max_doublings = 1100) {
  double r = start;
  for (int i = 0; i < max_doublings; ++i) {
    if (pred(-r) && !pred(r)) return r;
    r *= 2.0;
    if (!std::isfinite(r)) break;
  }
  throw std::runtime_error("expand_symmetric: no bracket found");
}

}  // namespace normlab::roots

#ifndef POPSLAB_BESSEL_HPP
#define POPSLAB_BESSEL_HPP

namespace pops {

// Bessel function of the first kind of order zero.
// Power series for |x| <= 12, fixed-order Gauss-Legendre quadrature of the
// cosine integral representation (1/pi) int_0^pi cos(x sin t) dt otherwise.
double bessel_j0(double x);

}  // namespace pops

#endif

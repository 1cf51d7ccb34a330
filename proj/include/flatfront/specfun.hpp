#pragma once

// Complex gamma and Gauss hypergeometric evaluation. These feed the series
// initial data of the holomorphic lift and the connection coefficients of
// the normalized maps.

#include "flatfront/numeric.hpp"
#include "flatfront/params.hpp"

namespace flatfront::specfun {

struct GammaEval {
    Complex z;
    Complex log_gamma;
};

// Principal-branch log Gamma via a Lanczos rational approximation,
// reflected onto Re z < 1/2. Throws PoleError at the non-positive integers.
Complex log_gamma(Complex z);
GammaEval log_gamma_eval(Complex z);

Complex gamma(Complex z);

struct HypergeometricValue {
    double a = 0.0, b = 0.0, c = 0.0;
    Complex x;
    Complex value;
    Complex derivative;  // d/dx F(a,b,c;x)
};

// F(a,b,c;x) and its derivative for raw real parameters. Direct series for
// |x| <= 0.7, Pfaff transformation x -> x/(x-1) otherwise; points beyond
// both discs are rejected (the ODE engine serves them).
HypergeometricValue hyp2f1(double a, double b, double c, Complex x);

// Spec-facing wrapper on an admissible parameter triple.
HypergeometricValue hypergeometric(const HGParams& p, Complex x);

// Gauss summation F(a,b,c;1) = Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)),
// requiring c > 0 and c - a - b > 0.
Complex gauss_value_at_one(double a, double b, double c);
Complex gauss_value_at_one(const HGParams& p);

}  // namespace flatfront::specfun

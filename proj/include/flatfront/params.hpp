#pragma once

#include <string>

#include "flatfront/numeric.hpp"

namespace flatfront {

// Parameter triple (a, b, c) of the hypergeometric equation together with
// the exponent differences at the three singular points,
//   mu0 = 1 - c,   mu1 = c - a - b,   muinf = b - a.
// The main pipeline requires |mu0|, |mu1|, |muinf| < 1; the relaxed
// constructor skips that check and marks the instance.
struct HGParams {
    double a = 0.0, b = 0.0, c = 0.0;
    double mu0 = 0.0, mu1 = 0.0, muinf = 0.0;
    bool relaxed = false;

    HGParams(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
        compute_mus();
        check_admissible();
    }

    static HGParams make_relaxed(double a_, double b_, double c_) {
        HGParams p;
        p.a = a_;
        p.b = b_;
        p.c = c_;
        p.relaxed = true;
        p.compute_mus();
        return p;
    }

    HGParams swapped_ab() const {
        if (relaxed) return make_relaxed(b, a, c);
        return HGParams(b, a, c);
    }

  private:
    HGParams() = default;

    void compute_mus() {
        mu0 = 1.0 - c;
        mu1 = c - a - b;
        muinf = b - a;
    }

    void check_admissible() const {
        auto fail = [](const std::string& name, double v) {
            throw ParameterError("parameter constraint violated: |" + name + "| < 1 (" + name +
                                 " = " + std::to_string(v) + ")");
        };
        if (!(std::abs(mu0) < 1.0)) fail("mu0", mu0);
        if (!(std::abs(mu1) < 1.0)) fail("mu1", mu1);
        if (!(std::abs(muinf) < 1.0)) fail("muinf", muinf);
    }
};

}  // namespace flatfront

#pragma once

#include <degenpde/params.hpp>

namespace degenpde::fixtures {

// Slow diffusion, subcritical source: beta2 = 3 < beta2_crit = 4.
inline ProblemParams e1() {
    ProblemParams p;
    p.q = 0.0;
    p.m = 2.0;
    p.k = 1.0;
    p.p = 2.0;
    p.n = 0.0;
    p.n1 = 0.0;
    p.l = 0.0;
    p.epsilon = 1;
    p.beta = 3.0;
    p.N = 1;
    return p;
}

// Supercritical with small data.
inline ProblemParams e2() {
    ProblemParams p = e1();
    p.beta = 5.0;
    p.a = 0.5;
    return p;
}

// Fast diffusion in three dimensions.
inline ProblemParams e3(double beta = 2.0) {
    ProblemParams p = e1();
    p.m = 0.5;
    p.N = 3;
    p.beta = beta;
    return p;
}

inline ProblemParams f1a() {
    ProblemParams p;
    p.q = 0.8;
    p.m = 1.0;
    p.k = 1.0;
    p.p = 3.0;
    p.N = 1;
    p.source = false;
    return p;
}

inline ProblemParams f2a() {
    ProblemParams p;
    p.q = 0.0;
    p.m = 3.0;
    p.k = 3.2;
    p.p = 4.0;
    p.n = 0.2;
    p.n1 = 1.0;
    p.l = 0.0;
    p.beta = 1.3;
    p.N = 2;
    p.source = false;
    return p;
}

}  // namespace degenpde::fixtures

#ifndef SIMHD_TEST_UTIL_HPP
#define SIMHD_TEST_UTIL_HPP

#include "simhd/state.hpp"

#include <random>

namespace simhd::test {

// Random physically admissible conserved state with O(1) data.
inline Cons random_admissible(std::mt19937& rng) {
    std::uniform_real_distribution<double> rho_d(0.1, 10.0);
    std::uniform_real_distribution<double> p_d(0.01, 100.0);
    std::uniform_real_distribution<double> v_d(-2.0, 2.0);
    std::uniform_real_distribution<double> b_d(-3.0, 3.0);
    Prim v;
    v.rho = rho_d(rng);
    v.u = v_d(rng);
    v.v = v_d(rng);
    v.w = v_d(rng);
    v.p = p_d(rng);
    v.bx = b_d(rng);
    v.by = b_d(rng);
    v.bz = b_d(rng);
    Eos eos(5.0 / 3.0, 1.0);
    v.T = eos.temperature(v.p, v.rho);
    return prim_to_cons(v, eos);
}

inline double max_abs_component(const Cons& c) {
    double m = 0.0;
    for (int k = 0; k < n_comp; ++k) m = std::max(m, std::abs(c[k]));
    return m;
}

} // namespace simhd::test

#endif

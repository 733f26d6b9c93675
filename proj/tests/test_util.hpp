#ifndef NOISE_TEST_UTIL_HPP
#define NOISE_TEST_UTIL_HPP

#include <random>

#include "noise/noisebool.hpp"

namespace noise::testutil {

// Uniform {-1,1}^nbits with sign i (0-based) read from bit (nbits-1-i).
inline SpacePtr uniform_signs(int nbits) {
    return make_space(std::vector<double>(std::size_t{1} << nbits, 1.0 / (1 << nbits)));
}

inline RandomVariable sign_bit(const SpacePtr& sp, int nbits, int i) {
    std::vector<double> v(sp->size());
    for (int w = 0; w < sp->size(); ++w) v[w] = ((w >> (nbits - 1 - i)) & 1) ? -1.0 : 1.0;
    return make_rv(sp, v);
}

// Classical algebra of n independent fair signs.
inline NoiseBooleanAlgebra sign_algebra(int n) {
    SpacePtr sp = uniform_signs(n);
    std::vector<SigmaField> atoms;
    for (int i = 0; i < n; ++i) atoms.push_back(sigma_of(sp, {sign_bit(sp, n, i)}));
    return from_independency(sp, atoms);
}

// Random product algebra with dyadic factor probabilities (exactly
// representable, so identities hold to near machine precision).
inline NoiseBooleanAlgebra random_algebra(std::mt19937_64& rng, int max_atoms = 5,
                                          int max_outcomes = 256) {
    static const std::vector<std::vector<double>> factor_menu = {
        {0.5, 0.5},   {0.25, 0.75},        {0.125, 0.875},
        {0.5, 0.25, 0.25}, {0.25, 0.25, 0.5}, {0.125, 0.375, 0.5}};
    std::uniform_int_distribution<int> n_atoms_dist(2, max_atoms);
    int n = n_atoms_dist(rng);
    std::vector<SpacePtr> factors;
    long long total = 1;
    for (int i = 0; i < n; ++i) {
        const auto& probs = factor_menu[std::uniform_int_distribution<size_t>(
            0, factor_menu.size() - 1)(rng)];
        if (total * static_cast<long long>(probs.size()) > max_outcomes) {
            factors.push_back(make_space({0.5, 0.5}));
            total *= 2;
        } else {
            factors.push_back(make_space(probs));
            total *= static_cast<long long>(probs.size());
        }
        if (total * 2 > max_outcomes && i + 1 < n) {
            n = i + 1;  // cannot fit more atoms under the outcome cap
            break;
        }
    }
    ProductSpace ps = product_space(factors);
    std::vector<SigmaField> atoms;
    for (size_t i = 0; i < factors.size(); ++i)
        atoms.push_back(ps.lift_field(static_cast<int>(i), one_field(factors[i])));
    return from_independency(ps.space, atoms);
}

inline RandomVariable random_rv(std::mt19937_64& rng, const SpacePtr& sp) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v(sp->size());
    for (double& x : v) x = unif(rng);
    return make_rv(sp, v);
}

}  // namespace noise::testutil

#endif

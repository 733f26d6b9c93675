#ifndef NOISE_DOMINANCE_HPP
#define NOISE_DOMINANCE_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "noise/operators.hpp"

namespace noise {

using Pmf = std::vector<double>;  // masses on {0,...,n}

// Law of the number of successes among independent events with the given
// probabilities, by sequential polynomial convolution.
Pmf binomial_convolution(const std::vector<double>& p);

// Bin(p) dominates Bin(n, geometric mean of p) in first-order stochastic
// dominance: its CDF is pointwise no larger.
bool fosd_check(const std::vector<double>& p, double tol = 1e-12);

struct AveragingStep {
    std::vector<double> out;
    double variance_ratio;  // var(out)/var(x); 0 when var(x) = 0
};

// Keep the entry closest to the mean (lowest index on ties), replace all the
// others by their average; the variance at most halves.
AveragingStep averaging_step(const std::vector<double>& x);

// Exploration of a nested chain of subalgebras b_0 <= ... <= b_d = B, each
// level given as a partition of unity (disjoint masks covering the atom set),
// with the last level the single atoms. For a spectral point s the node
// (level, group) is labeled 1 iff s meets the group.
struct Exploration {
    std::vector<std::vector<std::uint32_t>> chain;
    // labels[s][level][node]
    std::vector<std::vector<std::vector<int>>> labels;
    // gamma[s][level] = number of included nodes at that level = K_{b_level}(s)
    std::vector<std::vector<int>> gamma;
    // nu-distribution of gamma at each level: level -> (count -> probability)
    std::vector<std::map<int, double>> gamma_distribution;
};

Exploration exploration(const NoiseBooleanAlgebra& B,
                        const std::vector<std::vector<std::uint32_t>>& chain,
                        const SpectralProbability& nu);

}  // namespace noise

#endif

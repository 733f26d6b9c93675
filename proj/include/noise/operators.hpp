#ifndef NOISE_OPERATORS_HPP
#define NOISE_OPERATORS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "noise/spectral.hpp"

namespace noise {

// Dense linear operator on L2 of a finite space, acting on value vectors.
struct LinearOperator {
    SpacePtr space;
    Eigen::MatrixXd matrix;

    RandomVariable apply(const RandomVariable& f) const;
};

LinearOperator identity_operator(const SpacePtr& sp);
// Matrix of f -> E[f|x].
LinearOperator cond_exp_operator(const SigmaField& x);

// Noise semigroup U_t = e^{-tk} on the k-th chaos; t may be +infinity
// (projection onto constants). U_0 = identity.
LinearOperator noise_operator(const SpectralResolution& res, double t);

// Same operator via the Bernoulli mixture: sum over elements x of
// p^{k(x)} (1-p)^{n-k(x)} E[.|x] with p = e^{-t}.
LinearOperator noise_operator_bernoulli(const NoiseBooleanAlgebra& B, double t);

// Generalized noise operator: multiplier prod_p rho(p)^{K(s /\ p)} over a
// partition of unity (given as disjoint masks covering the atom set).
LinearOperator generalized_operator(const SpectralResolution& res,
                                    const std::vector<std::uint32_t>& partition,
                                    const std::vector<double>& rho);

// Symmetric self-joining: each atom is copied (with the rho of its partition
// element) or independently resampled, mixed over all atom subsets; its
// operator is the generalized noise operator for (partition, rho).
struct SelfJoining {
    SpacePtr space;
    std::vector<std::uint32_t> partition;
    std::vector<double> rho;
    Eigen::MatrixXd joint;  // probability on Omega x Omega
};

SelfJoining self_joining(const NoiseBooleanAlgebra& B,
                         const std::vector<std::uint32_t>& partition,
                         const std::vector<double>& rho, long long pair_cap = 1 << 26);

// Q[f(omega1) g(omega2)] under the joint law; equals <f, U_rho g>.
double joining_correlation(const SelfJoining& j, const RandomVariable& f,
                           const RandomVariable& g);

// Monte-Carlo estimate of the same correlation (for spaces past the cap).
struct MonteCarloEstimate {
    double value;
    double std_error;
};
MonteCarloEstimate joining_correlation_mc(const NoiseBooleanAlgebra& B,
                                          const std::vector<std::uint32_t>& partition,
                                          const std::vector<double>& rho,
                                          const RandomVariable& f, const RandomVariable& g,
                                          std::uint64_t seed, int samples);

// f = E[f|x] + E[f|x'] for all x, with E[f] = 0.
bool is_additive_integral(const NoiseBooleanAlgebra& B, const RandomVariable& f);
// f = E[f|x] * E[f|x'] for all x, with E[f] = 1.
bool is_multiplicative_integral(const NoiseBooleanAlgebra& B, const RandomVariable& f,
                                double tol = 1e-8);

// h in the first chaos, h = sum over atoms of h_a  ->  prod over atoms (1 + h_a).
RandomVariable exp_map(const NoiseBooleanAlgebra& B, const RandomVariable& h);
// Inverse decomposition of a multiplicative integral: h_a = E[f|a] - 1.
RandomVariable log_map(const NoiseBooleanAlgebra& B, const RandomVariable& f);

// Probability on the spectral space, indexed by mask.
struct SpectralProbability {
    std::vector<double> mass;
};

// nu charges the bottom point and makes pr_x, pr_x' independent for every x.
bool spectral_independence_check(const NoiseBooleanAlgebra& B, const SpectralProbability& nu);

// mu_{f/||f||} as a spectral probability.
SpectralProbability spectral_independence_from_integral(const SpectralResolution& res,
                                                        const RandomVariable& f);

// Multiplicative integral whose normalized spectral measure includes each atom
// independently with the given probabilities r_a in [0,1).
RandomVariable multiplicative_from_inclusion(const SpectralResolution& res,
                                             const std::vector<double>& r);

// Fully supported spectral-independence probability equivalent to the counting
// measure (inclusion probability 1/2 per atom).
SpectralProbability equivalent_independence_probability(const SpectralResolution& res);

// nu(K <= m) >= p0 * sum_{l<=m} (-ln p0)^l / l!  with p0 = nu({0_P}).
bool tail_bound_check(const NoiseBooleanAlgebra& B, const SpectralProbability& nu, int m);

}  // namespace noise

#endif

#ifndef NOISE_SPECTRAL_HPP
#define NOISE_SPECTRAL_HPP

#include <cstdint>
#include <vector>

#include "noise/noisebool.hpp"

namespace noise {

// Spectral resolution of a finite noise Boolean algebra: the spectral space is
// the algebra itself, and each point s carries the subspace of functions
// measurable for s but orthogonal to everything measurable for any strictly
// smaller element.
struct SpectralResolution {
    NoiseBooleanAlgebra algebra;
    std::vector<std::vector<RandomVariable>> point_bases;  // by mask, orthonormal
    std::vector<std::uint32_t> ambiguous_points;  // rank decisions inside (tol, sqrt(tol))

    int dim(std::uint32_t mask) const { return static_cast<int>(point_bases[mask].size()); }
    int counting(std::uint32_t mask) const;  // K(s) = number of atoms below s
    int total_dim() const;
};

struct SpectralMeasure {
    std::vector<double> mass;  // by mask, nonnegative
    double total() const;
    // mass of the spectral set S_x = { s : s below x }
    double mass_below(std::uint32_t x_mask) const;
};

SpectralResolution resolve(const NoiseBooleanAlgebra& B);

SpectralMeasure spectral_measure(const SpectralResolution& res, const RandomVariable& f);

// Chaos space H^(k): joint basis of the points with exactly k atoms below.
std::vector<RandomVariable> chaos_space(const SpectralResolution& res, int k);

// f = sum_k f_k with f_k in H^(k); returns components for k = 0..n_atoms.
std::vector<RandomVariable> chaos_decompose(const SpectralResolution& res,
                                            const RandomVariable& f);

// Orthonormal basis of the square-integrable additive integrals
// { f : E[f]=0 and f = E[f|x] + E[f|x'] for all x }, via a kernel computation
// independent of the spectral resolution.
std::vector<RandomVariable> first_chaos_additive(const NoiseBooleanAlgebra& B);

// Projection onto H^(1) without resolving: sum over atoms of (E[f|a] - E[f]).
RandomVariable first_chaos_projection(const NoiseBooleanAlgebra& B, const RandomVariable& f);

// Noise projection pr_x on the spectral space: s -> s /\ x.
inline std::uint32_t noise_projection(std::uint32_t s_mask, std::uint32_t x_mask) {
    return s_mask & x_mask;
}

// The unique spectral point carrying f, when the spectral measure of f is a
// point mass (e.g. a Fourier-Walsh character); equivalently the smallest
// algebra element f is measurable for. Throws when no single point carries f.
std::uint32_t carrier_point(const SpectralResolution& res, const RandomVariable& f);

// inf_x(f) = E[f^2] - E[E[f|x']^2], the variance destroyed by resampling x.
double influence(const NoiseBooleanAlgebra& B, std::uint32_t x_mask, const RandomVariable& f);
// E[sqrt(var(f|x'))]
double sqrt_influence(const NoiseBooleanAlgebra& B, std::uint32_t x_mask,
                      const RandomVariable& f);
struct JH1 {
    double J;   // min over subalgebras of the sum of squared sqrt-influences of its atoms
    double H1;  // sum over atoms of var(E[f|a]) = squared norm of the H^(1) projection
};
JH1 functionals_JH1(const NoiseBooleanAlgebra& B, const RandomVariable& f);

// Sigma-field generated by the first chaos.
SigmaField stable_field(const SpectralResolution& res);

// True iff the spectral measure w.r.t. the finer algebra is pointwise dominated
// by the coarser one on shared points.
bool refine_compare(const SpectralResolution& coarse, const SpectralResolution& fine,
                    const RandomVariable& f);

}  // namespace noise

#endif

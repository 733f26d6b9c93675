#include "noise/operators.hpp"

#include <bit>
#include <cmath>
#include <random>

namespace noise {

namespace {

Eigen::Map<const Eigen::VectorXd> vec(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

// Projection onto the span of an orthonormal (P-weighted) family, as a matrix:
// sum_e e (e .* p)^T.
void add_projector(Eigen::MatrixXd& M, const std::vector<RandomVariable>& basis,
                   const std::vector<double>& p, double factor) {
    if (factor == 0.0) return;
    for (const auto& e : basis) {
        Eigen::VectorXd ev = vec(e.values);
        Eigen::VectorXd ew = ev.cwiseProduct(vec(p));
        M.noalias() += factor * ev * ew.transpose();
    }
}

// Expand a (partition of unity, rho) pair to one rho per atom, validating that
// the masks are disjoint and cover the atom set.
std::vector<double> per_atom_rho(const NoiseBooleanAlgebra& B,
                                 const std::vector<std::uint32_t>& partition,
                                 const std::vector<double>& rho) {
    std::vector<double> atom_rho(B.n_atoms(), -1.0);
    std::uint32_t cover = 0;
    for (size_t i = 0; i < partition.size(); ++i) {
        if (rho[i] < 0.0 || rho[i] > 1.0)
            throw SpaceError("self_joining: rho out of [0,1]");
        if (cover & partition[i])
            throw SpaceError("self_joining: partition elements overlap");
        cover |= partition[i];
        for (int a = 0; a < B.n_atoms(); ++a)
            if (partition[i] & (1u << a)) atom_rho[a] = rho[i];
    }
    if (cover != B.full_mask)
        throw SpaceError("self_joining: partition does not cover the atom set");
    return atom_rho;
}

}  // namespace

RandomVariable LinearOperator::apply(const RandomVariable& f) const {
    Eigen::VectorXd out = matrix * vec(f.values);
    return RandomVariable{space, std::vector<double>(out.data(), out.data() + out.size())};
}

LinearOperator identity_operator(const SpacePtr& sp) {
    return LinearOperator{sp, Eigen::MatrixXd::Identity(sp->size(), sp->size())};
}

LinearOperator cond_exp_operator(const SigmaField& x) {
    const int n = x.space->size();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (const auto& blk : x.blocks) {
        double mass = 0.0;
        for (int w : blk) mass += x.space->probs[w];
        for (int w1 : blk)
            for (int w2 : blk) M(w1, w2) = x.space->probs[w2] / mass;
    }
    return LinearOperator{x.space, std::move(M)};
}

LinearOperator noise_operator(const SpectralResolution& res, double t) {
    const auto& sp = res.algebra.space;
    const int n = sp->size();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(res.algebra.size()); ++m) {
        int k = std::popcount(m);
        double factor = (k == 0) ? 1.0 : (std::isinf(t) ? 0.0 : std::exp(-t * k));
        add_projector(M, res.point_bases[m], sp->probs, factor);
    }
    return LinearOperator{sp, std::move(M)};
}

LinearOperator noise_operator_bernoulli(const NoiseBooleanAlgebra& B, double t) {
    const auto& sp = B.space;
    const int nat = B.n_atoms();
    const double p = std::exp(-t);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(sp->size(), sp->size());
    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(B.size()); ++m) {
        int k = std::popcount(m);
        double weight = std::pow(p, k) * std::pow(1.0 - p, nat - k);
        if (weight == 0.0) continue;
        M += weight * cond_exp_operator(B.element(m)).matrix;
    }
    return LinearOperator{sp, std::move(M)};
}

LinearOperator generalized_operator(const SpectralResolution& res,
                                    const std::vector<std::uint32_t>& partition,
                                    const std::vector<double>& rho) {
    if (partition.size() != rho.size())
        throw SpaceError("generalized_operator: partition/rho size mismatch");
    for (double r : rho)
        if (r < 0.0 || r > 1.0) throw SpaceError("generalized_operator: rho out of [0,1]");
    const auto& sp = res.algebra.space;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(sp->size(), sp->size());
    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(res.algebra.size()); ++m) {
        double mult = 1.0;
        for (size_t i = 0; i < partition.size(); ++i)
            mult *= std::pow(rho[i], std::popcount(m & partition[i]));
        add_projector(M, res.point_bases[m], sp->probs, mult);
    }
    return LinearOperator{sp, std::move(M)};
}

SelfJoining self_joining(const NoiseBooleanAlgebra& B,
                         const std::vector<std::uint32_t>& partition,
                         const std::vector<double>& rho, long long pair_cap) {
    const int n = B.space->size();
    if (static_cast<long long>(n) * n > pair_cap)
        throw SpaceError("self_joining: pair table exceeds cap; use the Monte-Carlo mode");
    if (partition.size() != rho.size())
        throw SpaceError("self_joining: partition/rho size mismatch");
    SelfJoining j;
    j.space = B.space;
    j.partition = partition;
    j.rho = rho;
    j.joint = Eigen::MatrixXd::Zero(n, n);
    // Each atom is copied independently with the rho of its partition element;
    // only then does the joining's operator have multiplier
    // prod_p rho(p)^{K(s /\ p)} (copying whole parts would give the indicator
    // exponent instead).
    std::vector<double> atom_rho = per_atom_rho(B, partition, rho);
    const int na = B.n_atoms();
    for (std::uint32_t T = 0; T < (1u << na); ++T) {
        double weight = 1.0;
        for (int a = 0; a < na; ++a)
            weight *= (T & (1u << a)) ? atom_rho[a] : 1.0 - atom_rho[a];
        std::uint32_t copied = T;
        if (weight == 0.0) continue;
        // Copy the coordinates of the copied part, resample the rest:
        // Q_T(w1,w2) = P(w1) P(w2) 1{same block of x_T} / P(block of w1).
        const SigmaField& x = B.element(copied);
        for (const auto& blk : x.blocks) {
            double mass = 0.0;
            for (int w : blk) mass += B.space->probs[w];
            for (int w1 : blk)
                for (int w2 : blk)
                    j.joint(w1, w2) += weight * B.space->probs[w1] * B.space->probs[w2] / mass;
        }
    }
    return j;
}

double joining_correlation(const SelfJoining& j, const RandomVariable& f,
                           const RandomVariable& g) {
    return vec(f.values).transpose() * j.joint * vec(g.values);
}

MonteCarloEstimate joining_correlation_mc(const NoiseBooleanAlgebra& B,
                                          const std::vector<std::uint32_t>& partition,
                                          const std::vector<double>& rho,
                                          const RandomVariable& f, const RandomVariable& g,
                                          std::uint64_t seed, int samples) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::discrete_distribution<int> draw(B.space->probs.begin(), B.space->probs.end());
    std::vector<double> atom_rho = per_atom_rho(B, partition, rho);
    const int na = B.n_atoms();
    double sum = 0.0, sumsq = 0.0;
    for (int it = 0; it < samples; ++it) {
        std::uint32_t copied = 0;
        for (int a = 0; a < na; ++a)
            if (unif(rng) < atom_rho[a]) copied |= 1u << a;
        const SigmaField& x = B.element(copied);
        int w1 = draw(rng);
        // w2 ~ P conditioned on the block of w1.
        const auto& blk = x.blocks[x.block_index[w1]];
        double mass = 0.0;
        for (int w : blk) mass += B.space->probs[w];
        double u = unif(rng) * mass;
        int w2 = blk.back();
        for (int w : blk) {
            u -= B.space->probs[w];
            if (u <= 0.0) {
                w2 = w;
                break;
            }
        }
        double v = f.values[w1] * g.values[w2];
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / samples;
    double var = std::max(0.0, sumsq / samples - mean * mean);
    return MonteCarloEstimate{mean, std::sqrt(var / samples)};
}

bool is_additive_integral(const NoiseBooleanAlgebra& B, const RandomVariable& f) {
    const double tol = B.space->tol;
    if (std::abs(expectation(f)) > tol) return false;
    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(B.size()); ++m) {
        RandomVariable a = cond_exp(f, B.element(m));
        RandomVariable b = cond_exp(f, B.element(B.complement(m)));
        for (size_t w = 0; w < f.values.size(); ++w)
            if (std::abs(f.values[w] - a.values[w] - b.values[w]) > tol) return false;
    }
    return true;
}

bool is_multiplicative_integral(const NoiseBooleanAlgebra& B, const RandomVariable& f,
                                double tol) {
    if (std::abs(expectation(f) - 1.0) > tol) return false;
    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(B.size()); ++m) {
        RandomVariable a = cond_exp(f, B.element(m));
        RandomVariable b = cond_exp(f, B.element(B.complement(m)));
        for (size_t w = 0; w < f.values.size(); ++w)
            if (std::abs(f.values[w] - a.values[w] * b.values[w]) > tol) return false;
    }
    return true;
}

RandomVariable exp_map(const NoiseBooleanAlgebra& B, const RandomVariable& h) {
    const double tol = std::sqrt(B.space->tol);
    RandomVariable proj = first_chaos_projection(B, h);
    double resid = 0.0;
    for (size_t w = 0; w < h.values.size(); ++w)
        resid += B.space->probs[w] * (h.values[w] - proj.values[w]) * (h.values[w] - proj.values[w]);
    if (std::sqrt(resid) > tol || std::abs(expectation(h)) > tol)
        throw SpaceError("exp_map: input is not a first-chaos element");
    std::vector<double> out(h.values.size(), 1.0);
    for (const auto& a : B.atoms) {
        RandomVariable ha = cond_exp(h, a);
        for (size_t w = 0; w < out.size(); ++w) out[w] *= 1.0 + ha.values[w];
    }
    return RandomVariable{B.space, std::move(out)};
}

RandomVariable log_map(const NoiseBooleanAlgebra& B, const RandomVariable& f) {
    std::vector<double> out(f.values.size(), 0.0);
    for (const auto& a : B.atoms) {
        RandomVariable fa = cond_exp(f, a);
        for (size_t w = 0; w < out.size(); ++w) out[w] += fa.values[w] - 1.0;
    }
    return RandomVariable{B.space, std::move(out)};
}

bool spectral_independence_check(const NoiseBooleanAlgebra& B, const SpectralProbability& nu) {
    if (nu.mass.size() != static_cast<size_t>(B.size()))
        throw SpaceError("spectral_independence_check: wrong support size");
    double total = 0.0;
    for (double m : nu.mass) {
        if (m < -B.space->tol) throw SpaceError("spectral_independence_check: negative mass");
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw SpaceError("spectral_independence_check: not a probability");
    if (!(nu.mass[0] > 0.0)) return false;
    const double tol = B.space->tol;
    for (std::uint32_t x = 0; x <= B.full_mask; ++x) {
        const std::uint32_t xc = B.complement(x);
        // Marginals of (pr_x, pr_x') under nu; the pair determines s = u | v.
        for (std::uint32_t u = x;; u = (u - 1) & x) {
            double mu = 0.0;
            for (std::uint32_t v = xc;; v = (v - 1) & xc) {
                mu += nu.mass[u | v];
                if (v == 0) break;
            }
            for (std::uint32_t v = xc;; v = (v - 1) & xc) {
                double mv = 0.0;
                for (std::uint32_t u2 = x;; u2 = (u2 - 1) & x) {
                    mv += nu.mass[u2 | v];
                    if (u2 == 0) break;
                }
                if (std::abs(nu.mass[u | v] - mu * mv) > tol) return false;
                if (v == 0) break;
            }
            if (u == 0) break;
        }
    }
    return true;
}

SpectralProbability spectral_independence_from_integral(const SpectralResolution& res,
                                                        const RandomVariable& f) {
    double n2 = inner(f, f);
    if (!(n2 > 0.0)) throw SpaceError("spectral_independence_from_integral: zero norm");
    SpectralMeasure mu = spectral_measure(res, f);
    SpectralProbability nu;
    nu.mass = mu.mass;
    for (double& m : nu.mass) m /= n2;
    return nu;
}

RandomVariable multiplicative_from_inclusion(const SpectralResolution& res,
                                             const std::vector<double>& r) {
    const auto& B = res.algebra;
    if (static_cast<int>(r.size()) != B.n_atoms())
        throw SpaceError("multiplicative_from_inclusion: need one probability per atom");
    std::vector<double> out(B.space->size(), 1.0);
    for (int a = 0; a < B.n_atoms(); ++a) {
        if (r[a] < 0.0 || r[a] >= 1.0)
            throw SpaceError("multiplicative_from_inclusion: probabilities must lie in [0,1)");
        const auto& basis = res.point_bases[1u << a];
        if (basis.empty())
            throw SpaceError("multiplicative_from_inclusion: atom carries no functions");
        double scale = std::sqrt(r[a] / (1.0 - r[a]));
        for (size_t w = 0; w < out.size(); ++w) out[w] *= 1.0 + scale * basis[0].values[w];
    }
    return RandomVariable{B.space, std::move(out)};
}

SpectralProbability equivalent_independence_probability(const SpectralResolution& res) {
    std::vector<double> half(res.algebra.n_atoms(), 0.5);
    RandomVariable f = multiplicative_from_inclusion(res, half);
    return spectral_independence_from_integral(res, f);
}

bool tail_bound_check(const NoiseBooleanAlgebra& B, const SpectralProbability& nu, int m) {
    double p0 = nu.mass[0];
    if (!(p0 > 0.0)) throw SpaceError("tail_bound_check: nu does not charge the bottom point");
    double lhs = 0.0;
    for (std::uint32_t s = 0; s < nu.mass.size(); ++s)
        if (std::popcount(s) <= m) lhs += nu.mass[s];
    double rhs = 0.0, term = 1.0;
    const double lambda = -std::log(p0);
    for (int l = 0; l <= m; ++l) {
        rhs += term;
        term *= lambda / (l + 1);
    }
    rhs *= p0;
    return lhs >= rhs - B.space->tol;
}

}  // namespace noise

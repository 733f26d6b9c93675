#include "noise/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>

namespace noise {

namespace {

// P-weighted inner product on raw value vectors.
double winner(const std::vector<double>& p, const std::vector<double>& a,
              const std::vector<double>& b) {
    double s = 0.0;
    for (size_t w = 0; w < p.size(); ++w) s += p[w] * a[w] * b[w];
    return s;
}

}  // namespace

int SpectralResolution::counting(std::uint32_t mask) const { return std::popcount(mask); }

int SpectralResolution::total_dim() const {
    int d = 0;
    for (const auto& b : point_bases) d += static_cast<int>(b.size());
    return d;
}

double SpectralMeasure::total() const {
    double s = 0.0;
    for (double m : mass) s += m;
    return s;
}

double SpectralMeasure::mass_below(std::uint32_t x_mask) const {
    double s = 0.0;
    for (std::uint32_t m = 0; m < mass.size(); ++m)
        if ((m & x_mask) == m) s += mass[m];
    return s;
}

SpectralResolution resolve(const NoiseBooleanAlgebra& B) {
    SpectralResolution res;
    res.algebra = B;
    res.point_bases.resize(B.size());
    const auto& p = B.space->probs;
    const double tol = B.space->tol;
    const double ambiguous_hi = std::sqrt(tol);

    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(B.size()); ++m) {
        // Span to project out: bases of all strict sub-elements (their union
        // spans the block-constant functions of every y strictly below m).
        std::vector<const RandomVariable*> lower;
        for (std::uint32_t sub = (m - 1) & m; sub != m; sub = (sub - 1) & m) {
            for (const auto& e : res.point_bases[sub]) lower.push_back(&e);
            if (sub == 0) break;
        }
        auto& basis = res.point_bases[m];
        const SigmaField& x = B.element(m);
        for (const auto& blk : x.blocks) {
            std::vector<double> c(p.size(), 0.0);
            for (int w : blk) c[w] = 1.0;
            const double norm0 = std::sqrt(winner(p, c, c));
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto* e : lower) {
                    double d = winner(p, c, e->values);
                    for (size_t w = 0; w < c.size(); ++w) c[w] -= d * e->values[w];
                }
                for (const auto& e : basis) {
                    double d = winner(p, c, e.values);
                    for (size_t w = 0; w < c.size(); ++w) c[w] -= d * e.values[w];
                }
            }
            const double r = std::sqrt(winner(p, c, c));
            if (r <= tol * norm0) continue;  // linearly dependent on lower span
            if (r < ambiguous_hi * norm0) res.ambiguous_points.push_back(m);
            for (double& v : c) v /= r;
            basis.push_back(RandomVariable{B.space, std::move(c)});
        }
    }
    return res;
}

SpectralMeasure spectral_measure(const SpectralResolution& res, const RandomVariable& f) {
    SpectralMeasure mu;
    mu.mass.assign(res.algebra.size(), 0.0);
    for (std::uint32_t m = 0; m < mu.mass.size(); ++m)
        for (const auto& e : res.point_bases[m]) {
            double c = inner(f, e);
            mu.mass[m] += c * c;
        }
    return mu;
}

std::vector<RandomVariable> chaos_space(const SpectralResolution& res, int k) {
    std::vector<RandomVariable> out;
    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(res.algebra.size()); ++m)
        if (std::popcount(m) == k)
            for (const auto& e : res.point_bases[m]) out.push_back(e);
    return out;
}

std::vector<RandomVariable> chaos_decompose(const SpectralResolution& res,
                                            const RandomVariable& f) {
    const int n = res.algebra.n_atoms();
    std::vector<RandomVariable> comps;
    comps.reserve(n + 1);
    for (int k = 0; k <= n; ++k)
        comps.push_back(RandomVariable{f.space, std::vector<double>(f.values.size(), 0.0)});
    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(res.algebra.size()); ++m) {
        auto& comp = comps[std::popcount(m)];
        for (const auto& e : res.point_bases[m]) {
            double c = inner(f, e);
            for (size_t w = 0; w < comp.values.size(); ++w) comp.values[w] += c * e.values[w];
        }
    }
    return comps;
}

std::vector<RandomVariable> first_chaos_additive(const NoiseBooleanAlgebra& B) {
    const int n = B.space->size();
    const int nelem = B.size();
    // Stack (I - C_x - C_x') for every x, plus the expectation row; the kernel
    // is exactly { f : E[f]=0, f = E[f|x] + E[f|x'] for all x }.
    Eigen::MatrixXd A(static_cast<long>(nelem) * n + 1, n);
    A.setZero();
    for (int i = 0; i < nelem; ++i) {
        const SigmaField& x = B.element(static_cast<std::uint32_t>(i));
        const SigmaField& xc = B.element(B.complement(static_cast<std::uint32_t>(i)));
        for (int w = 0; w < n; ++w) {
            A(static_cast<long>(i) * n + w, w) += 1.0;
            // subtract the conditional-expectation rows
            for (const SigmaField* fld : {&x, &xc}) {
                const auto& blk = fld->blocks[fld->block_index[w]];
                double mass = 0.0;
                for (int v : blk) mass += B.space->probs[v];
                for (int v : blk)
                    A(static_cast<long>(i) * n + w, v) -= B.space->probs[v] / mass;
            }
        }
    }
    for (int w = 0; w < n; ++w) A(static_cast<long>(nelem) * n, w) = B.space->probs[w];

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-9 * std::max(smax, 1.0)) ++rank;
    // Kernel vectors, re-orthonormalized in the P-weighted inner product.
    std::vector<RandomVariable> basis;
    const auto& p = B.space->probs;
    for (int i = rank; i < svd.matrixV().cols(); ++i) {
        std::vector<double> c(n);
        for (int w = 0; w < n; ++w) c[w] = svd.matrixV()(w, i);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& e : basis) {
                double d = winner(p, c, e.values);
                for (int w = 0; w < n; ++w) c[w] -= d * e.values[w];
            }
        double r = std::sqrt(winner(p, c, c));
        if (r <= B.space->tol) continue;
        for (double& v : c) v /= r;
        basis.push_back(RandomVariable{B.space, std::move(c)});
    }
    return basis;
}

RandomVariable first_chaos_projection(const NoiseBooleanAlgebra& B, const RandomVariable& f) {
    const double mean = expectation(f);
    std::vector<double> out(f.values.size(), 0.0);
    for (const auto& a : B.atoms) {
        RandomVariable ce = cond_exp(f, a);
        for (size_t w = 0; w < out.size(); ++w) out[w] += ce.values[w] - mean;
    }
    return RandomVariable{f.space, std::move(out)};
}

std::uint32_t carrier_point(const SpectralResolution& res, const RandomVariable& f) {
    SpectralMeasure mu = spectral_measure(res, f);
    const double total = mu.total();
    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(mu.mass.size()); ++m)
        if (mu.mass[m] > total * (1.0 - 1e-9)) return m;
    throw SpaceError("carrier_point: spectral measure is not a point mass");
}

double influence(const NoiseBooleanAlgebra& B, std::uint32_t x_mask, const RandomVariable& f) {
    RandomVariable ce = cond_exp(f, B.element(B.complement(x_mask)));
    return inner(f, f) - inner(ce, ce);
}

double sqrt_influence(const NoiseBooleanAlgebra& B, std::uint32_t x_mask,
                      const RandomVariable& f) {
    const SigmaField& xc = B.element(B.complement(x_mask));
    RandomVariable f2 = f;
    for (double& v : f2.values) v *= v;
    RandomVariable m2 = cond_exp(f2, xc);
    RandomVariable m1 = cond_exp(f, xc);
    RandomVariable root{f.space, std::vector<double>(f.values.size())};
    for (size_t w = 0; w < root.values.size(); ++w)
        root.values[w] = std::sqrt(std::max(0.0, m2.values[w] - m1.values[w] * m1.values[w]));
    return expectation(root);
}

JH1 functionals_JH1(const NoiseBooleanAlgebra& B, const RandomVariable& f) {
    JH1 out{0.0, 0.0};
    bool first = true;
    for (const auto& part : partitions_of_unity(B)) {
        double s = 0.0;
        for (std::uint32_t g : part) {
            double si = sqrt_influence(B, g, f);
            s += si * si;
        }
        if (first || s < out.J) out.J = s;
        first = false;
    }
    for (const auto& a : B.atoms) out.H1 += variance(cond_exp(f, a));
    return out;
}

SigmaField stable_field(const SpectralResolution& res) {
    return sigma_of(res.algebra.space, chaos_space(res, 1));
}

bool refine_compare(const SpectralResolution& coarse, const SpectralResolution& fine,
                    const RandomVariable& f) {
    SpectralMeasure mu = spectral_measure(coarse, f);
    SpectralMeasure mu_fine = spectral_measure(fine, f);
    const double tol = coarse.algebra.space->tol;
    for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(coarse.algebra.size()); ++m) {
        auto idx = fine.algebra.index_of(coarse.algebra.element(m));
        if (!idx) throw SpaceError("refine_compare: algebras are not nested");
        if (mu_fine.mass[*idx] > mu.mass[m] + tol) return false;
    }
    return true;
}

}  // namespace noise

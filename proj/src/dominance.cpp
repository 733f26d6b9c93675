#include "noise/dominance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace noise {

Pmf binomial_convolution(const std::vector<double>& p) {
    for (double q : p)
        if (q < 0.0 || q > 1.0) throw SpaceError("binomial_convolution: probability out of range");
    Pmf pmf{1.0};
    for (double q : p) {
        Pmf next(pmf.size() + 1, 0.0);
        for (size_t k = 0; k < pmf.size(); ++k) {
            next[k] += pmf[k] * (1.0 - q);
            next[k + 1] += pmf[k] * q;
        }
        pmf = std::move(next);
    }
    return pmf;
}

bool fosd_check(const std::vector<double>& p, double tol) {
    const int n = static_cast<int>(p.size());
    Pmf lhs = binomial_convolution(p);
    double geo = 1.0;
    for (double q : p) geo *= q;
    geo = (n == 0) ? 0.0 : std::pow(geo, 1.0 / n);
    Pmf rhs = binomial_convolution(std::vector<double>(n, geo));
    double cl = 0.0, cr = 0.0;
    for (int k = 0; k <= n; ++k) {
        cl += lhs[k];
        cr += rhs[k];
        if (cl > cr + tol) return false;
    }
    return true;
}

AveragingStep averaging_step(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    if (n < 3) throw SpaceError("averaging_step: need at least 3 entries");
    double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    int I = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(x[i] - mean) < std::abs(x[I] - mean)) I = i;
    double rest_avg = (mean * n - x[I]) / (n - 1);
    AveragingStep step;
    step.out.assign(n, rest_avg);
    step.out[I] = x[I];
    auto var = [n](const std::vector<double>& v) {
        double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
        double s = 0.0;
        for (double t : v) s += (t - m) * (t - m);
        return s / n;
    };
    double vx = var(x);
    step.variance_ratio = (vx > 0.0) ? var(step.out) / vx : 0.0;
    return step;
}

Exploration exploration(const NoiseBooleanAlgebra& B,
                        const std::vector<std::vector<std::uint32_t>>& chain,
                        const SpectralProbability& nu) {
    // Nestedness: each level's groups must be unions of next-level groups.
    for (size_t lvl = 0; lvl + 1 < chain.size(); ++lvl)
        for (std::uint32_t g : chain[lvl]) {
            std::uint32_t covered = 0;
            for (std::uint32_t h : chain[lvl + 1])
                if ((h & g) == h) covered |= h;
            if (covered != g) throw SpaceError("exploration: chain is not nested");
        }
    if (!chain.empty())
        for (std::uint32_t h : chain.back())
            if (std::popcount(h) != 1)
                throw SpaceError("exploration: last level must be the atoms of B");

    Exploration ex;
    ex.chain = chain;
    const std::uint32_t nelem = static_cast<std::uint32_t>(B.size());
    ex.labels.resize(nelem);
    ex.gamma.resize(nelem);
    ex.gamma_distribution.resize(chain.size());
    for (std::uint32_t s = 0; s < nelem; ++s) {
        ex.labels[s].resize(chain.size());
        for (size_t lvl = 0; lvl < chain.size(); ++lvl) {
            int count = 0;
            for (std::uint32_t g : chain[lvl]) {
                int lbl = ((s & g) != 0) ? 1 : 0;  // pr_g(s) != 0_P
                ex.labels[s][lvl].push_back(lbl);
                count += lbl;
            }
            ex.gamma[s].push_back(count);
            ex.gamma_distribution[lvl][count] += nu.mass[s];
        }
    }
    return ex;
}

}  // namespace noise

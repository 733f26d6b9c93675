#include "noise/inequalities.hpp"

#include <bit>
#include <cmath>
#include <map>

namespace noise {

namespace {

constexpr double kEigTol = 1e-9;

// Term element for a nonempty index subset J:
// (join of x_i outside J) v (meet over j in J of the join of x_i, i in J\{j}).
std::uint32_t term_mask(const std::vector<std::uint32_t>& xs, std::uint32_t J) {
    const int n = static_cast<int>(xs.size());
    std::uint32_t outside = 0;
    for (int i = 0; i < n; ++i)
        if (!(J & (1u << i))) outside |= xs[i];
    std::uint32_t inner_meet = ~0u;
    for (int j = 0; j < n; ++j) {
        if (!(J & (1u << j))) continue;
        std::uint32_t join_rest = 0;
        for (int i = 0; i < n; ++i)
            if ((J & (1u << i)) && i != j) join_rest |= xs[i];
        inner_meet &= join_rest;
    }
    return outside | inner_meet;
}

// Eigenvalues of an operator self-adjoint in the P-weighted inner product,
// via the similarity transform D^{1/2} M D^{-1/2}.
Eigen::VectorXd weighted_eigenvalues(const LinearOperator& op) {
    const auto& p = op.space->probs;
    const int n = op.space->size();
    Eigen::VectorXd d(n);
    for (int w = 0; w < n; ++w) d(w) = std::sqrt(p[w]);
    Eigen::MatrixXd S = d.asDiagonal() * op.matrix * d.cwiseInverse().asDiagonal();
    S = 0.5 * (S + S.transpose());  // clean up round-off asymmetry
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double quadratic_form(const LinearOperator& op, const RandomVariable& f) {
    RandomVariable g = op.apply(f);
    return inner(f, g);
}

// Subalgebra generated by the given elements: group atoms by which x_i lie
// above them; the groups (including the group below no x_i, if nonempty) are
// its atoms.
NoiseBooleanAlgebra generated_by(const NoiseBooleanAlgebra& B,
                                 const std::vector<std::uint32_t>& xs) {
    std::map<std::uint32_t, std::uint32_t> groups;  // signature -> atom mask
    for (int a = 0; a < B.n_atoms(); ++a) {
        std::uint32_t sig = 0;
        for (size_t i = 0; i < xs.size(); ++i)
            if (xs[i] & (1u << a)) sig |= (1u << i);
        groups[sig] |= (1u << a);
    }
    std::vector<SigmaField> atoms;
    for (const auto& [sig, mask] : groups) atoms.push_back(B.element(mask));
    return from_independency(B.space, atoms);
}

struct ChaosBasisCheck {
    bool equality;
    double max_form;
};

ChaosBasisCheck low_chaos_check(const LinearOperator& op, const NoiseBooleanAlgebra& B,
                                const std::vector<std::uint32_t>& xs) {
    NoiseBooleanAlgebra sub = generated_by(B, xs);
    SpectralResolution res = resolve(sub);
    ChaosBasisCheck out{true, 0.0};
    const int n = static_cast<int>(xs.size());
    for (int k = 0; k <= n - 1 && k <= sub.n_atoms(); ++k)
        for (const auto& e : chaos_space(res, k)) {
            double q = std::abs(quadratic_form(op, e));
            out.max_form = std::max(out.max_form, q);
            if (q > kEigTol) out.equality = false;
        }
    return out;
}

BonferroniReport finish_report(LinearOperator op, const NoiseBooleanAlgebra& B,
                               const std::vector<std::uint32_t>& xs,
                               std::optional<int> witness) {
    BonferroniReport rep;
    Eigen::VectorXd ev = weighted_eigenvalues(op);
    rep.min_eigenvalue = ev.minCoeff();
    rep.nonnegative = rep.min_eigenvalue >= -kEigTol;
    rep.equality_everywhere = std::abs(ev.minCoeff()) <= kEigTol && std::abs(ev.maxCoeff()) <= kEigTol;
    rep.containment_witness = witness;
    ChaosBasisCheck cb = low_chaos_check(op, B, xs);
    rep.equality_on_low_chaos = cb.equality;
    rep.max_low_chaos_form = cb.max_form;
    rep.op = std::move(op);
    return rep;
}

}  // namespace

BonferroniReport bonferroni_operator(const NoiseBooleanAlgebra& B,
                                     const std::vector<std::uint32_t>& xs) {
    const int n = static_cast<int>(xs.size());
    for (std::uint32_t x : xs)
        if (x > B.full_mask) throw SpaceError("bonferroni_operator: element not in algebra");
    std::uint32_t join_all = 0;
    for (std::uint32_t x : xs) join_all |= x;
    Eigen::MatrixXd M = cond_exp_operator(B.element(join_all)).matrix;
    for (std::uint32_t J = 1; J < (1u << n); ++J) {
        double sign = (std::popcount(J) % 2) ? -1.0 : 1.0;
        M += sign * cond_exp_operator(B.element(term_mask(xs, J) & B.full_mask)).matrix;
    }
    std::optional<int> witness;
    for (int i = 0; i < n && !witness; ++i) {
        std::uint32_t others = 0;
        for (int k = 0; k < n; ++k)
            if (k != i) others |= xs[k];
        if ((xs[i] & ~others) == 0) witness = i;
    }
    return finish_report(LinearOperator{B.space, std::move(M)}, B, xs, witness);
}

double bonferroni_truncated(const NoiseBooleanAlgebra& B, const std::vector<std::uint32_t>& xs,
                            int m) {
    const int n = static_cast<int>(xs.size());
    if (m < 0 || m > n) throw SpaceError("bonferroni_truncated: m out of range");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(B.space->size(), B.space->size());
    for (std::uint32_t J = 1; J < (1u << n); ++J) {
        int k = std::popcount(J);
        if (k <= m) continue;
        double sign = (k % 2) ? -1.0 : 1.0;
        M += sign * cond_exp_operator(B.element(term_mask(xs, J) & B.full_mask)).matrix;
    }
    if (m % 2) M = -M;
    return weighted_eigenvalues(LinearOperator{B.space, std::move(M)}).maxCoeff();
}

BonferroniReport bonferroni_independent(const NoiseBooleanAlgebra& B,
                                        const std::vector<std::uint32_t>& xs) {
    const int n = static_cast<int>(xs.size());
    std::vector<SigmaField> fields;
    for (std::uint32_t x : xs) fields.push_back(B.element(x));
    if (!are_independent(fields))
        throw SpaceError("bonferroni_independent: not an independency");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(B.space->size(), B.space->size());
    for (std::uint32_t J = 0; J < (1u << n); ++J) {
        std::uint32_t joined = 0;
        for (int i = 0; i < n; ++i)
            if (J & (1u << i)) joined |= xs[i];
        double sign = ((n - std::popcount(J)) % 2) ? -1.0 : 1.0;
        M += sign * cond_exp_operator(B.element(joined)).matrix;
    }
    std::optional<int> witness;
    for (int i = 0; i < n && !witness; ++i)
        if (xs[i] == 0) witness = i;
    return finish_report(LinearOperator{B.space, std::move(M)}, B, xs, witness);
}

bool influence_inequality_check(const NoiseBooleanAlgebra& B,
                                const std::vector<std::uint32_t>& xs,
                                const std::vector<RandomVariable>& test_functions) {
    const int n = static_cast<int>(xs.size());
    // Complemented form: P_{(meet of all)'} + sum over nonempty J of
    // (-1)^{|J|} P_{[(meet outside J) ^ (join over j in J of meet of J\{j})]'}.
    std::uint32_t meet_all = B.full_mask;
    for (std::uint32_t x : xs) meet_all &= x;
    Eigen::MatrixXd M = cond_exp_operator(B.element(B.complement(meet_all))).matrix;
    for (std::uint32_t J = 1; J < (1u << n); ++J) {
        std::uint32_t outside = B.full_mask;
        for (int i = 0; i < n; ++i)
            if (!(J & (1u << i))) outside &= xs[i];
        std::uint32_t inner_join = 0;
        for (int j = 0; j < n; ++j) {
            if (!(J & (1u << j))) continue;
            std::uint32_t meet_rest = B.full_mask;
            for (int i = 0; i < n; ++i)
                if ((J & (1u << i)) && i != j) meet_rest &= xs[i];
            inner_join |= meet_rest;
        }
        double sign = (std::popcount(J) % 2) ? -1.0 : 1.0;
        M += sign * cond_exp_operator(B.element(B.complement(outside & inner_join))).matrix;
    }
    double min_eig = weighted_eigenvalues(LinearOperator{B.space, M}).minCoeff();
    if (min_eig < -kEigTol) return false;

    // Scalar consequence for 3-element partitions of unity.
    std::uint32_t join_all = 0;
    bool disjoint = true;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (join_all & xs[i]) disjoint = false;
        join_all |= xs[i];
    }
    if (n == 3 && disjoint && join_all == B.full_mask) {
        for (const auto& f : test_functions) {
            double pair01 = influence(B, xs[0] | xs[1], f);
            double pair12 = influence(B, xs[1] | xs[2], f);
            double pair02 = influence(B, xs[0] | xs[2], f);
            double s0 = influence(B, xs[0], f);
            double s1 = influence(B, xs[1], f);
            double s2 = influence(B, xs[2], f);
            double lhs = 3.0 * std::min({pair01, pair12, pair02});
            double rhs = variance(f) + 3.0 * std::max({s0, s1, s2});
            if (lhs > rhs + kEigTol) return false;
        }
    }
    return true;
}

CounterexampleRecord counterexample_harness() {
    // Uniform measure on {-1,1}^2; outcomes ordered (1,1),(1,-1),(-1,1),(-1,-1).
    SpacePtr sp = make_space({0.25, 0.25, 0.25, 0.25}, {"(1,1)", "(1,-1)", "(-1,1)", "(-1,-1)"});
    RandomVariable xi1 = make_rv(sp, {1, 1, -1, -1});
    RandomVariable xi2 = make_rv(sp, {1, -1, 1, -1});
    auto two_term = [&](const SigmaField& x1, const SigmaField& x2, const RandomVariable& f,
                        double* lattice_out, double* single_out) {
        RandomVariable cj = cond_exp(f, join(x1, x2));
        RandomVariable cm = cond_exp(f, meet(x1, x2));
        RandomVariable c1 = cond_exp(f, x1);
        RandomVariable c2 = cond_exp(f, x2);
        double lattice = inner(cj, cj) + inner(cm, cm);
        double single = inner(c1, c1) + inner(c2, c2);
        if (lattice_out) *lattice_out = lattice;
        if (single_out) *single_out = single;
        return lattice - single;
    };

    CounterexampleRecord rec{};
    SigmaField x1 = field_from_blocks(sp, {{0, 1}, {2}, {3}});
    SigmaField x2 = sigma_of(sp, {xi2});
    rec.deficit = two_term(x1, x2, xi2, &rec.with_lattice_ops, &rec.with_single_fields);

    // Smallest candidate family containing both fields, closed under the
    // lattice operations; it cannot satisfy the complement axiom.
    std::vector<SigmaField> family{zero_field(sp), one_field(sp), x1, x2};
    rec.axioms_fail = !verify_axioms(sp, family).passed();

    SigmaField x1_swapped = field_from_blocks(sp, {{0, 2}, {1}, {3}});
    SigmaField x2_swapped = sigma_of(sp, {xi1});
    rec.deficit_swapped = two_term(x1_swapped, x2_swapped, xi1, nullptr, nullptr);

    SigmaField s1 = sigma_of(sp, {xi1});
    rec.deficit_noise_pair = two_term(s1, x2, xi2, nullptr, nullptr);
    return rec;
}

}  // namespace noise

#ifndef NOISE_INEQUALITIES_HPP
#define NOISE_INEQUALITIES_HPP

#include <optional>

#include "noise/operators.hpp"

namespace noise {

struct BonferroniReport {
    LinearOperator op;  // the alternating-sum operator (left-hand side)
    double min_eigenvalue = 0.0;
    bool nonnegative = false;          // min eigenvalue >= -tol
    bool equality_everywhere = false;  // operator vanishes identically
    bool equality_on_low_chaos = false;
    double max_low_chaos_form = 0.0;   // largest |<f, op f>| over the tested basis
    std::optional<int> containment_witness;  // i with x_i below the join of the others
};

// P_{join of all x} + alternating sum over nonempty J of
// P_{(join outside J) v (meet over j in J of join of J\{j})}, as an operator;
// nonnegative whenever the x_i belong to a noise Boolean algebra, zero iff
// some x_i lies below the join of the others, zero on the chaos sum of order
// <= n-1 of the subalgebra the x_i generate.
BonferroniReport bonferroni_operator(const NoiseBooleanAlgebra& B,
                                     const std::vector<std::uint32_t>& xs);

// Truncated alternating tail: (-1)^m sum_{k=m+1}^n ...; returns its maximum
// eigenvalue (nonpositive up to tolerance when m is even, and also when odd m
// happens to work; callers asserting the inequality compare against tol).
double bonferroni_truncated(const NoiseBooleanAlgebra& B, const std::vector<std::uint32_t>& xs,
                            int m);

// Independency form: (-1)^n sum_{k=0}^n (-1)^k sum_J P_{join over J}.
BonferroniReport bonferroni_independent(const NoiseBooleanAlgebra& B,
                                        const std::vector<std::uint32_t>& xs);

// Complemented (influence) form of the operator inequality; for 3-element
// partitions of unity also the scalar chain
// 3 min pair-influence <= var + 3 max single influence at each test function.
bool influence_inequality_check(const NoiseBooleanAlgebra& B,
                                const std::vector<std::uint32_t>& xs,
                                const std::vector<RandomVariable>& test_functions);

struct CounterexampleRecord {
    double with_lattice_ops;    // E[E[f|x1 v x2]^2] + E[E[f|x1 ^ x2]^2]
    double with_single_fields;  // E[E[f|x1]^2] + E[E[f|x2]^2]
    double deficit;             // first minus second; negative: inequality fails
    bool axioms_fail;           // no noise Boolean algebra contains both fields
    double deficit_swapped;     // same with the roles of the two signs exchanged
    double deficit_noise_pair;  // with x1 replaced by sigma(xi1): nonnegative
};

// The 4-point space on which the two-element Bonferroni inequality fails for
// sigma-fields admitting no common noise Boolean algebra.
CounterexampleRecord counterexample_harness();

}  // namespace noise

#endif

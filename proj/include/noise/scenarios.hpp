#ifndef NOISE_SCENARIOS_HPP
#define NOISE_SCENARIOS_HPP

#include <map>
#include <string>

#include "noise/noisebool.hpp"

namespace noise {

// A packaged example: a space, a verified algebra, named random variables and
// fields, and (for hierarchical models) a nested chain of partitions of unity.
struct Scenario {
    SpacePtr space;
    NoiseBooleanAlgebra algebra;
    std::vector<std::string> atom_names;  // aligned with algebra.atoms
    std::map<std::string, RandomVariable> rvs;
    std::map<std::string, SigmaField> fields;
    std::vector<std::vector<std::uint32_t>> chain;  // coarse-to-fine, may be empty
    std::string generator;
    std::map<std::string, double> params;
};

// Uniform signs xi_1..xi_n with the full classical algebra.
Scenario classical_signs(int n);

// Finite truncation of the simplest nonclassical noise Boolean algebra:
// atoms sigma(xi_1 xi_2), ..., sigma(xi_n xi_{n+1}), sigma(xi_{n+1}..xi_N).
Scenario simplest_nonclassical(int n, int N);

// Same with one extra sign xi_inf adjoined to the tail atom.
Scenario tweaked_nonclassical(int n, int N);

// Symmetric voting rule on m arguments over an alphabet of size r, with
// uniform output fibers; table indexed by the base-r encoding of the tuple.
struct VoterRule {
    int m = 0;
    int r = 0;
    std::vector<int> table;
};

VoterRule majority_rule(int m);  // r = 2, m odd

// Hierarchical voter model at finite depth: uniform leaves, inner values by
// the rule; chain of algebras indexed by tree level.
Scenario voter_model(const VoterRule& rule, int depth, int outcome_cap = 65536);

// Every additive solution f(rule(a)) = g(a_1)+...+g(a_m) has f constant.
bool rigidity_check(const VoterRule& rule);
// Probability (over the other votes) that the first vote can change the outcome.
double influential_vote_probability(const VoterRule& rule);
// Squared norm of the projection of the centered root observable onto the
// first chaos of the leaf algebra.
double first_chaos_decay(const VoterRule& rule, int depth, int outcome_cap = 65536);

// Vershik split-words process at finite depth: a deepest-level word of
// independent fair signs, innovated by fair selector signs sigma_1..sigma_{d-1};
// exposes X1_1 = the first letter of the level-1 word.
Scenario split_words(int depth, int L, int outcome_cap = 65536);

// Reverse filtration with explicit innovations and tail field.
Scenario reverse_filtration(const SpacePtr& sp, const std::vector<SigmaField>& innovations,
                            const SigmaField& tail);

}  // namespace noise

#endif

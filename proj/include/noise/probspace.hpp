#ifndef NOISE_PROBSPACE_HPP
#define NOISE_PROBSPACE_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace noise {

// Finite outcome set with strictly positive probabilities summing to 1.
struct FiniteProbabilitySpace {
    std::vector<std::string> outcomes;
    std::vector<double> probs;
    double tol = 1e-9;

    int size() const { return static_cast<int>(probs.size()); }
};

using SpacePtr = std::shared_ptr<const FiniteProbabilitySpace>;

// A sub-sigma-field, represented as a partition of the outcome index set.
// Canonical form: each block sorted ascending, blocks ordered by least element.
struct SigmaField {
    SpacePtr space;
    std::vector<std::vector<int>> blocks;
    std::vector<int> block_index;  // outcome -> block id

    int num_blocks() const { return static_cast<int>(blocks.size()); }
    bool operator==(const SigmaField& o) const { return blocks == o.blocks; }
    bool operator!=(const SigmaField& o) const { return !(*this == o); }
    bool operator<(const SigmaField& o) const { return blocks < o.blocks; }
};

struct RandomVariable {
    SpacePtr space;
    std::vector<double> values;
};

struct SpaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

SpacePtr make_space(const std::vector<double>& probs,
                    std::vector<std::string> labels = {});

// Partition from an outcome->block-id assignment (canonicalizes).
SigmaField field_from_assignment(const SpacePtr& sp, const std::vector<int>& assign);
SigmaField field_from_blocks(const SpacePtr& sp, std::vector<std::vector<int>> blocks);

SigmaField zero_field(const SpacePtr& sp);  // single block (trivial sigma-field)
SigmaField one_field(const SpacePtr& sp);   // all singletons (full sigma-field)

RandomVariable make_rv(const SpacePtr& sp, std::vector<double> values);

double expectation(const RandomVariable& f);
double inner(const RandomVariable& f, const RandomVariable& g);  // E[fg]
double l2norm(const RandomVariable& f);
double variance(const RandomVariable& f);

// Partition by joint level sets of the given random variables.
SigmaField sigma_of(const SpacePtr& sp, const std::vector<RandomVariable>& fs);

RandomVariable cond_exp(const RandomVariable& f, const SigmaField& x);

SigmaField join(const SigmaField& x, const SigmaField& y);
SigmaField meet(const SigmaField& x, const SigmaField& y);

// x is coarser-or-equal than y (x contained in y as sigma-fields):
// every block of y lies inside a block of x.
bool is_sub_field(const SigmaField& x, const SigmaField& y);

bool are_independent(const std::vector<SigmaField>& xs);

// Product space with coordinate maps: coord[i][omega] = outcome index in factor i.
struct ProductSpace {
    SpacePtr space;
    std::vector<SpacePtr> factors;
    std::vector<std::vector<int>> coord;

    RandomVariable lift_rv(int factor, const RandomVariable& f) const;
    SigmaField lift_field(int factor, const SigmaField& x) const;
};

ProductSpace product_space(const std::vector<SpacePtr>& spaces,
                           int outcome_cap = 65536);

}  // namespace noise

#endif

#ifndef NOISE_NOISEBOOL_HPP
#define NOISE_NOISEBOOL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noise/probspace.hpp"

namespace noise {

// A finite noise Boolean algebra, generated by its atoms (every finite one is).
// Elements are indexed by atom-subset bitmask: element(mask) = join of the
// atoms in mask; join/meet/complement are then bitwise or/and/xor.
struct NoiseBooleanAlgebra {
    SpacePtr space;
    std::vector<SigmaField> atoms;
    std::vector<SigmaField> elements;  // size 2^n, indexed by mask
    std::uint32_t full_mask = 0;

    int n_atoms() const { return static_cast<int>(atoms.size()); }
    int size() const { return static_cast<int>(elements.size()); }
    const SigmaField& element(std::uint32_t mask) const { return elements[mask]; }
    std::uint32_t complement(std::uint32_t mask) const { return full_mask ^ mask; }

    // Mask of the given sigma-field if it belongs to the algebra, else nullopt.
    std::optional<std::uint32_t> index_of(const SigmaField& x) const;

    std::map<std::vector<std::vector<int>>, std::uint32_t> lookup;  // blocks -> mask
};

struct AxiomFailure {
    std::string axiom;
    std::string witness;
};

struct VerificationReport {
    std::vector<AxiomFailure> failures;
    bool passed() const { return failures.empty(); }
};

// B = { join of C : C subset of xs }; requires xs an independency of nonzero
// fields with join 1_P (xs may be empty only on the one-outcome space).
NoiseBooleanAlgebra from_independency(const SpacePtr& sp,
                                      const std::vector<SigmaField>& xs,
                                      int atom_cap = 12);

// Checks the noise Boolean algebra axioms on an arbitrary family of fields.
VerificationReport verify_axioms(const SpacePtr& sp,
                                 const std::vector<SigmaField>& fields);

// Smallest noise Boolean algebra containing the independency P; requires
// join(P) = 1_P (no ambient completion exists at finite scale otherwise).
NoiseBooleanAlgebra generated(const SpacePtr& sp, const std::vector<SigmaField>& P,
                              int atom_cap = 12);

// Every partition of unity, as a list of disjoint nonzero masks covering
// full_mask (set partitions of the atom set; the degenerate algebra has one
// empty partition).
std::vector<std::vector<std::uint32_t>> partitions_of_unity(const NoiseBooleanAlgebra& B);

// B restricted below element x, realized on the quotient space whose outcomes
// are the blocks of x.
struct Subalgebra {
    NoiseBooleanAlgebra algebra;
    // Quotient map: block id of x -> outcome of the quotient space (identity),
    // plus the lift of a random variable on the quotient back to the parent.
    SigmaField parent_element;
    RandomVariable lift(const RandomVariable& f) const;  // quotient -> parent
    RandomVariable restrict(const RandomVariable& f) const;  // x-measurable parent -> quotient
};
Subalgebra subalgebra(const NoiseBooleanAlgebra& B, std::uint32_t x_mask);

}  // namespace noise

#endif

#include "noise/noisebool.hpp"

#include <algorithm>
#include <bit>

namespace noise {

namespace {

std::string field_name(const std::vector<SigmaField>& fields, size_t i) {
    return "field#" + std::to_string(i) + " (" + std::to_string(fields[i].num_blocks()) +
           " blocks)";
}

}  // namespace

std::optional<std::uint32_t> NoiseBooleanAlgebra::index_of(const SigmaField& x) const {
    auto it = lookup.find(x.blocks);
    if (it == lookup.end()) return std::nullopt;
    return it->second;
}

NoiseBooleanAlgebra from_independency(const SpacePtr& sp, const std::vector<SigmaField>& xs,
                                      int atom_cap) {
    const SigmaField zero = zero_field(sp);
    const SigmaField one = one_field(sp);
    if (static_cast<int>(xs.size()) > atom_cap)
        throw SpaceError("from_independency: atom cap exceeded");
    for (const auto& x : xs)
        if (x == zero) throw SpaceError("from_independency: 0_P is not a valid atom");
    if (!are_independent(xs)) throw SpaceError("from_independency: fields are not independent");

    NoiseBooleanAlgebra B;
    B.space = sp;
    B.atoms = xs;
    const int n = static_cast<int>(xs.size());
    B.full_mask = (n == 32) ? ~0u : ((1u << n) - 1u);
    B.elements.resize(std::size_t{1} << n);
    B.elements[0] = zero;
    for (std::uint32_t m = 1; m < B.elements.size(); ++m) {
        int lowest = std::countr_zero(m);
        std::uint32_t rest = m & (m - 1);
        B.elements[m] = rest ? join(B.elements[rest], xs[lowest]) : xs[lowest];
    }
    if (!(B.elements[B.full_mask] == one))
        throw SpaceError("from_independency: atoms do not jointly generate 1_P");
    for (std::uint32_t m = 0; m < B.elements.size(); ++m) B.lookup[B.elements[m].blocks] = m;
    return B;
}

NoiseBooleanAlgebra generated(const SpacePtr& sp, const std::vector<SigmaField>& P,
                              int atom_cap) {
    return from_independency(sp, P, atom_cap);
}

VerificationReport verify_axioms(const SpacePtr& sp, const std::vector<SigmaField>& fields) {
    VerificationReport rep;
    if (fields.empty()) {
        rep.failures.push_back({"nonempty", "family is empty"});
        return rep;
    }
    auto contains = [&](const SigmaField& x) {
        return std::find(fields.begin(), fields.end(), x) != fields.end();
    };
    const SigmaField zero = zero_field(sp);
    const SigmaField one = one_field(sp);
    if (!contains(zero)) rep.failures.push_back({"contains-0", "0_P missing"});
    if (!contains(one)) rep.failures.push_back({"contains-1", "1_P missing"});

    const size_t n = fields.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i; j < n; ++j) {
            if (!contains(join(fields[i], fields[j])))
                rep.failures.push_back(
                    {"closure-join", field_name(fields, i) + " vs " + field_name(fields, j)});
            if (!contains(meet(fields[i], fields[j])))
                rep.failures.push_back(
                    {"closure-meet", field_name(fields, i) + " vs " + field_name(fields, j)});
        }
    }

    std::vector<int> comp(n, -1);
    for (size_t i = 0; i < n; ++i) {
        int found = -1;
        int count = 0;
        for (size_t j = 0; j < n; ++j) {
            if (are_independent({fields[i], fields[j]}) && join(fields[i], fields[j]) == one) {
                if (found < 0 || !(fields[j] == fields[found])) ++count;
                found = static_cast<int>(j);
            }
        }
        if (count == 0)
            rep.failures.push_back({"complement-existence", field_name(fields, i)});
        else if (count > 1)
            rep.failures.push_back({"complement-uniqueness", field_name(fields, i)});
        else
            comp[i] = found;
    }

    for (size_t i = 0; i < n; ++i) {
        if (comp[i] < 0) continue;
        for (size_t j = 0; j < n; ++j) {
            SigmaField recomposed =
                join(meet(fields[j], fields[i]), meet(fields[j], fields[comp[i]]));
            if (!(recomposed == fields[j]))
                rep.failures.push_back({"distributivity", "y=" + field_name(fields, j) +
                                                              ", x=" + field_name(fields, i)});
        }
    }
    return rep;
}

std::vector<std::vector<std::uint32_t>> partitions_of_unity(const NoiseBooleanAlgebra& B) {
    const int n = B.n_atoms();
    std::vector<std::vector<std::uint32_t>> out;
    // Enumerate set partitions of {0..n-1} (restricted-growth strings).
    std::vector<int> rgs(n, 0);
    if (n == 0) {
        out.push_back({});  // degenerate algebra: the empty partition of unity
        return out;
    }
    while (true) {
        int ngroups = *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<std::uint32_t> groups(ngroups, 0);
        for (int i = 0; i < n; ++i) groups[rgs[i]] |= (1u << i);
        out.push_back(groups);
        // next restricted-growth string
        int i = n - 1;
        for (; i > 0; --i) {
            int maxprefix = *std::max_element(rgs.begin(), rgs.begin() + i);
            if (rgs[i] <= maxprefix) {
                ++rgs[i];
                std::fill(rgs.begin() + i + 1, rgs.end(), 0);
                break;
            }
        }
        if (i == 0) break;
    }
    return out;
}

RandomVariable Subalgebra::lift(const RandomVariable& f) const {
    std::vector<double> vals(parent_element.space->size());
    for (int w = 0; w < parent_element.space->size(); ++w)
        vals[w] = f.values[parent_element.block_index[w]];
    return RandomVariable{parent_element.space, std::move(vals)};
}

RandomVariable Subalgebra::restrict(const RandomVariable& f) const {
    std::vector<double> vals(parent_element.num_blocks());
    for (int b = 0; b < parent_element.num_blocks(); ++b)
        vals[b] = f.values[parent_element.blocks[b][0]];
    return RandomVariable{algebra.space, std::move(vals)};
}

Subalgebra subalgebra(const NoiseBooleanAlgebra& B, std::uint32_t x_mask) {
    if (x_mask > B.full_mask) throw SpaceError("subalgebra: mask out of range");
    const SigmaField& x = B.element(x_mask);
    // Quotient space: outcomes = blocks of x, with the block probabilities.
    std::vector<double> qprobs(x.num_blocks());
    std::vector<std::string> qlabels(x.num_blocks());
    for (int b = 0; b < x.num_blocks(); ++b) {
        double m = 0.0;
        for (int w : x.blocks[b]) m += B.space->probs[w];
        qprobs[b] = m;
        qlabels[b] = "b" + std::to_string(b);
    }
    SpacePtr qsp = make_space(qprobs, qlabels);
    // Atoms of B_x = atoms of B below x, pushed to the quotient.
    std::vector<SigmaField> qatoms;
    for (int a = 0; a < B.n_atoms(); ++a) {
        if (!(x_mask & (1u << a))) continue;
        std::vector<int> assign(x.num_blocks());
        for (int b = 0; b < x.num_blocks(); ++b)
            assign[b] = B.atoms[a].block_index[x.blocks[b][0]];
        qatoms.push_back(field_from_assignment(qsp, assign));
    }
    Subalgebra sub;
    sub.algebra = from_independency(qsp, qatoms);
    sub.parent_element = x;
    return sub;
}

}  // namespace noise

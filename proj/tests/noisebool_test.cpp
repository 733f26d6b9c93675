#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "noise/noisebool.hpp"

using namespace noise;

namespace {

SpacePtr uniform(int n) { return make_space(std::vector<double>(n, 1.0 / n)); }

// Uniform signs with sign i read from bit (nbits-1-i) of the outcome index.
RandomVariable sign_bit(const SpacePtr& sp, int nbits, int i) {
    std::vector<double> v(sp->size());
    for (int w = 0; w < sp->size(); ++w) v[w] = ((w >> (nbits - 1 - i)) & 1) ? -1.0 : 1.0;
    return make_rv(sp, v);
}

}  // namespace

TEST_CASE("from_independency on sign fields") {
    SpacePtr sp = uniform(4);
    SigmaField s1 = sigma_of(sp, {sign_bit(sp, 2, 0)});
    SigmaField s2 = sigma_of(sp, {sign_bit(sp, 2, 1)});
    NoiseBooleanAlgebra B = from_independency(sp, {s1, s2});
    CHECK(B.size() == 4);
    CHECK(B.n_atoms() == 2);
    CHECK(B.element(0) == zero_field(sp));
    CHECK(B.element(3) == one_field(sp));
    CHECK(B.element(1) == s1);
    CHECK(B.element(2) == s2);

    SpacePtr sp3 = uniform(8);
    std::vector<SigmaField> atoms;
    for (int i = 0; i < 3; ++i) atoms.push_back(sigma_of(sp3, {sign_bit(sp3, 3, i)}));
    CHECK(from_independency(sp3, atoms).size() == 8);
}

TEST_CASE("from_independency rejects bad input") {
    SpacePtr sp = uniform(4);
    SigmaField s1 = sigma_of(sp, {sign_bit(sp, 2, 0)});
    SigmaField x1 = field_from_blocks(sp, {{0, 1}, {2}, {3}});
    SigmaField s2 = sigma_of(sp, {sign_bit(sp, 2, 1)});
    CHECK_THROWS_AS(from_independency(sp, {x1, s2}), SpaceError);         // not independent
    CHECK_THROWS_AS(from_independency(sp, {zero_field(sp), s1}), SpaceError);  // 0_P atom
    CHECK_THROWS_AS(from_independency(sp, {s1}), SpaceError);             // join != 1_P
}

TEST_CASE("truncated simplest-nonclassical independency verifies") {
    SpacePtr sp = uniform(8);
    RandomVariable xi1 = sign_bit(sp, 3, 0), xi2 = sign_bit(sp, 3, 1), xi3 = sign_bit(sp, 3, 2);
    RandomVariable p12 = make_rv(sp, xi1.values), p23 = make_rv(sp, xi2.values);
    for (int w = 0; w < 8; ++w) {
        p12.values[w] *= xi2.values[w];
        p23.values[w] *= xi3.values[w];
    }
    std::vector<SigmaField> atoms{sigma_of(sp, {p12}), sigma_of(sp, {p23}),
                                  sigma_of(sp, {xi3})};
    NoiseBooleanAlgebra B = from_independency(sp, atoms);
    CHECK(B.size() == 8);
    CHECK(verify_axioms(sp, B.elements).passed());
}

TEST_CASE("verify_axioms failures") {
    SpacePtr sp = uniform(4);
    SigmaField x1 = field_from_blocks(sp, {{0, 1}, {2}, {3}});
    SigmaField x2 = sigma_of(sp, {sign_bit(sp, 2, 1)});
    VerificationReport rep = verify_axioms(sp, {zero_field(sp), one_field(sp), x1, x2});
    CHECK(!rep.passed());
    bool complement_failure = false;
    for (const auto& f : rep.failures)
        if (f.axiom == "complement-existence") complement_failure = true;
    CHECK(complement_failure);

    CHECK(verify_axioms(sp, {zero_field(sp), one_field(sp)}).passed());
}

TEST_CASE("complements") {
    SpacePtr sp = uniform(4);
    SigmaField s1 = sigma_of(sp, {sign_bit(sp, 2, 0)});
    SigmaField s2 = sigma_of(sp, {sign_bit(sp, 2, 1)});
    NoiseBooleanAlgebra B = from_independency(sp, {s1, s2});
    CHECK(B.complement(0) == B.full_mask);                    // (0_P)' = 1_P
    CHECK(B.element(B.complement(*B.index_of(s1))) == s2);    // sigma(xi1)' = sigma(xi2)
    for (std::uint32_t m = 0; m < 4; ++m) CHECK(B.complement(B.complement(m)) == m);
    // De Morgan and the meet-iff-independent equivalence on masks
    for (std::uint32_t a = 0; a < 4; ++a)
        for (std::uint32_t b = 0; b < 4; ++b) {
            CHECK(B.element(B.complement(a | b)) ==
                  meet(B.element(B.complement(a)), B.element(B.complement(b))));
            bool indep = are_independent({B.element(a), B.element(b)});
            CHECK(indep == ((a & b) == 0));
        }
}

TEST_CASE("partitions_of_unity") {
    SpacePtr sp3 = uniform(8);
    std::vector<SigmaField> atoms;
    for (int i = 0; i < 3; ++i) atoms.push_back(sigma_of(sp3, {sign_bit(sp3, 3, i)}));
    NoiseBooleanAlgebra B = from_independency(sp3, atoms);
    CHECK(B.n_atoms() == 3);
    auto parts = partitions_of_unity(B);
    CHECK(parts.size() == 5);  // Bell number of a 3-set
    for (const auto& part : parts) {
        std::uint32_t cover = 0;
        for (std::uint32_t g : part) {
            CHECK((cover & g) == 0);
            cover |= g;
        }
        CHECK(cover == B.full_mask);
    }

    SpacePtr point = make_space({1.0});
    NoiseBooleanAlgebra deg = from_independency(point, {});
    auto dparts = partitions_of_unity(deg);
    REQUIRE(dparts.size() == 1);
    CHECK(dparts[0].empty());  // the single empty partition of unity
}

TEST_CASE("generated") {
    SpacePtr sp = uniform(4);
    SigmaField s1 = sigma_of(sp, {sign_bit(sp, 2, 0)});
    SigmaField s2 = sigma_of(sp, {sign_bit(sp, 2, 1)});
    NoiseBooleanAlgebra b_x = generated(sp, {s1, s2});
    CHECK(b_x.size() == 4);  // {0_P, x, x', 1_P}
    NoiseBooleanAlgebra B = from_independency(sp, {s1, s2});
    CHECK(generated(sp, B.atoms).elements == B.elements);
}

TEST_CASE("subalgebra") {
    SpacePtr sp3 = uniform(8);
    std::vector<SigmaField> atoms;
    for (int i = 0; i < 3; ++i) atoms.push_back(sigma_of(sp3, {sign_bit(sp3, 3, i)}));
    NoiseBooleanAlgebra B = from_independency(sp3, atoms);

    Subalgebra full = subalgebra(B, B.full_mask);
    CHECK(full.algebra.size() == B.size());
    CHECK(full.algebra.space->size() == 8);

    Subalgebra deg = subalgebra(B, 0);
    CHECK(deg.algebra.size() == 1);
    CHECK(deg.algebra.space->size() == 1);

    Subalgebra two = subalgebra(B, 0b011);  // sigma(xi1) v sigma(xi2)
    CHECK(two.algebra.n_atoms() == 2);
    CHECK(two.algebra.space->size() == 4);
    CHECK(verify_axioms(two.algebra.space, two.algebra.elements).passed());
}

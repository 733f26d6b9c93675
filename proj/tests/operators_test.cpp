#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>

#include "noise/operators.hpp"
#include "test_util.hpp"

using namespace noise;
using namespace noise::testutil;

namespace {

RandomVariable product(const RandomVariable& a, const RandomVariable& b) {
    RandomVariable out = a;
    for (size_t w = 0; w < out.values.size(); ++w) out.values[w] *= b.values[w];
    return out;
}

double mu_multiplier_form(const SpectralResolution& res, const RandomVariable& f,
                          const std::vector<std::uint32_t>& partition,
                          const std::vector<double>& rho) {
    SpectralMeasure mu = spectral_measure(res, f);
    double out = 0.0;
    for (std::uint32_t s = 0; s < mu.mass.size(); ++s) {
        double mult = 1.0;
        for (size_t i = 0; i < partition.size(); ++i)
            mult *= std::pow(rho[i], std::popcount(s & partition[i]));
        out += mult * mu.mass[s];
    }
    return out;
}

}  // namespace

TEST_CASE("noise operator eigen-definition") {
    NoiseBooleanAlgebra B = sign_algebra(2);
    SpectralResolution res = resolve(B);

    LinearOperator U0 = noise_operator(res, 0.0);
    CHECK((U0.matrix - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

    RandomVariable chr = product(sign_bit(B.space, 2, 0), sign_bit(B.space, 2, 1));
    LinearOperator Ul2 = noise_operator(res, std::log(2.0));
    RandomVariable g = Ul2.apply(chr);
    for (int w = 0; w < 4; ++w) CHECK(g.values[w] == doctest::Approx(chr.values[w] / 4.0));

    LinearOperator Uinf = noise_operator(res, std::numeric_limits<double>::infinity());
    RandomVariable f = make_rv(B.space, {3, 1, 4, 1});
    RandomVariable mean = Uinf.apply(f);
    for (int w = 0; w < 4; ++w) CHECK(mean.values[w] == doctest::Approx(2.25));
}

TEST_CASE("semigroup and Bernoulli mixture agreement") {
    std::mt19937_64 rng(8001);
    for (int trial = 0; trial < 8; ++trial) {
        NoiseBooleanAlgebra B = random_algebra(rng, 4, 64);
        SpectralResolution res = resolve(B);
        double s = 0.3, t = 0.9;
        LinearOperator Us = noise_operator(res, s);
        LinearOperator Ut = noise_operator(res, t);
        LinearOperator Ust = noise_operator(res, s + t);
        CHECK((Us.matrix * Ut.matrix - Ust.matrix).cwiseAbs().maxCoeff() < 1e-10);

        LinearOperator Ub = noise_operator_bernoulli(B, t);
        CHECK((Ut.matrix - Ub.matrix).cwiseAbs().maxCoeff() < 1e-12);

        // commutes with every conditional expectation in the algebra
        for (std::uint32_t m = 0; m < static_cast<std::uint32_t>(B.size()); ++m) {
            Eigen::MatrixXd C = cond_exp_operator(B.element(m)).matrix;
            CHECK((Ut.matrix * C - C * Ut.matrix).cwiseAbs().maxCoeff() < 1e-10);
        }

        // contraction and the spectral-form identity
        RandomVariable f = random_rv(rng, B.space);
        RandomVariable uf = Ut.apply(f);
        CHECK(inner(uf, uf) <= inner(f, f) + 1e-12);
        std::vector<std::uint32_t> atoms_part;
        std::vector<double> rho_t;
        for (int a = 0; a < B.n_atoms(); ++a) {
            atoms_part.push_back(1u << a);
            rho_t.push_back(std::exp(-t));
        }
        CHECK(inner(f, uf) ==
              doctest::Approx(mu_multiplier_form(res, f, atoms_part, rho_t)).epsilon(1e-9));
    }

    // t = 0 keeps only 1_P; t -> infinity keeps only 0_P.
    NoiseBooleanAlgebra B = sign_algebra(2);
    CHECK((noise_operator_bernoulli(B, 0.0).matrix - Eigen::MatrixXd::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((noise_operator_bernoulli(B, 1e300).matrix -
           cond_exp_operator(zero_field(B.space)).matrix)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("generalized operators") {
    NoiseBooleanAlgebra B = sign_algebra(2);
    SpectralResolution res = resolve(B);
    std::vector<std::uint32_t> atoms_part{1u, 2u};

    double t = 0.7;
    LinearOperator Ur = generalized_operator(res, atoms_part, {std::exp(-t), std::exp(-t)});
    CHECK((Ur.matrix - noise_operator(res, t).matrix).cwiseAbs().maxCoeff() < 1e-12);

    LinearOperator Uid = generalized_operator(res, atoms_part, {1.0, 1.0});
    CHECK((Uid.matrix - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

    // rho = (1,0): conditional expectation onto sigma(xi1)
    LinearOperator Uc = generalized_operator(res, atoms_part, {1.0, 0.0});
    SigmaField s1 = sigma_of(B.space, {sign_bit(B.space, 2, 0)});
    CHECK((Uc.matrix - cond_exp_operator(s1).matrix).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(generalized_operator(res, atoms_part, {1.5, 0.0}), SpaceError);
}

TEST_CASE("self-joinings") {
    NoiseBooleanAlgebra B = sign_algebra(2);
    SpectralResolution res = resolve(B);
    std::vector<std::uint32_t> atoms_part{1u, 2u};
    RandomVariable f = make_rv(B.space, {0.3, -1.0, 2.0, 0.7});

    SelfJoining diag = self_joining(B, atoms_part, {1.0, 1.0});
    CHECK(joining_correlation(diag, f, f) == doctest::Approx(inner(f, f)).epsilon(1e-12));
    SelfJoining prod = self_joining(B, atoms_part, {0.0, 0.0});
    double m = expectation(f);
    CHECK(joining_correlation(prod, f, f) == doctest::Approx(m * m).epsilon(1e-12));

    RandomVariable chr = product(sign_bit(B.space, 2, 0), sign_bit(B.space, 2, 1));
    SelfJoining j = self_joining(B, atoms_part, {0.25, 0.625});
    CHECK(joining_correlation(j, chr, chr) == doctest::Approx(0.25 * 0.625).epsilon(1e-12));

    // marginals, symmetry, total mass
    Eigen::VectorXd rowsum = j.joint.rowwise().sum();
    Eigen::VectorXd colsum = j.joint.colwise().sum();
    for (int w = 0; w < 4; ++w) {
        CHECK(rowsum(w) == doctest::Approx(B.space->probs[w]).epsilon(1e-12));
        CHECK(colsum(w) == doctest::Approx(B.space->probs[w]).epsilon(1e-12));
    }
    CHECK((j.joint - j.joint.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(j.joint.sum() == doctest::Approx(1.0).epsilon(1e-12));

    // three-way identity over random configurations
    std::mt19937_64 rng(8002);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        NoiseBooleanAlgebra Br = random_algebra(rng, 4, 64);
        SpectralResolution rr = resolve(Br);
        auto parts = partitions_of_unity(Br);
        const auto& part = parts[rng() % parts.size()];
        std::vector<double> rho(part.size());
        for (double& r : rho) r = unif(rng);
        RandomVariable g = random_rv(rng, Br.space);
        SelfJoining jj = self_joining(Br, part, rho);
        double c1 = joining_correlation(jj, g, g);
        double c2 = inner(g, generalized_operator(rr, part, rho).apply(g));
        double c3 = mu_multiplier_form(rr, g, part, rho);
        CHECK(c1 == doctest::Approx(c2).epsilon(1e-9));
        CHECK(c1 == doctest::Approx(c3).epsilon(1e-9));
    }
}

TEST_CASE("Monte-Carlo joining estimate is deterministic and sane") {
    NoiseBooleanAlgebra B = sign_algebra(2);
    RandomVariable chr = product(sign_bit(B.space, 2, 0), sign_bit(B.space, 2, 1));
    auto est1 = joining_correlation_mc(B, {1u, 2u}, {0.5, 0.5}, chr, chr, 42, 20000);
    auto est2 = joining_correlation_mc(B, {1u, 2u}, {0.5, 0.5}, chr, chr, 42, 20000);
    CHECK(est1.value == est2.value);
    CHECK(std::abs(est1.value - 0.25) < 5 * est1.std_error + 1e-12);
}

TEST_CASE("additive and multiplicative integrals") {
    NoiseBooleanAlgebra B = sign_algebra(2);
    RandomVariable zero = make_rv(B.space, {0, 0, 0, 0});
    RandomVariable one = make_rv(B.space, {1, 1, 1, 1});
    CHECK(is_additive_integral(B, zero));
    CHECK(is_multiplicative_integral(B, one));

    RandomVariable xi1 = sign_bit(B.space, 2, 0), xi2 = sign_bit(B.space, 2, 1);
    RandomVariable sum = xi1;
    for (int w = 0; w < 4; ++w) sum.values[w] += xi2.values[w];
    CHECK(is_additive_integral(B, sum));
    CHECK(!is_additive_integral(B, product(xi1, xi2)));

    RandomVariable mult = one;
    for (int w = 0; w < 4; ++w) mult.values[w] = (1 + xi1.values[w]) * (1 + xi2.values[w]);
    CHECK(is_multiplicative_integral(B, mult));
    CHECK(!is_multiplicative_integral(B, sum));
}

TEST_CASE("exp_map and its inverse") {
    NoiseBooleanAlgebra B = sign_algebra(2);
    RandomVariable zero = make_rv(B.space, {0, 0, 0, 0});
    RandomVariable f0 = exp_map(B, zero);
    for (double v : f0.values) CHECK(v == doctest::Approx(1.0));

    RandomVariable xi1 = sign_bit(B.space, 2, 0), xi2 = sign_bit(B.space, 2, 1);
    RandomVariable h = xi1;
    for (int w = 0; w < 4; ++w) h.values[w] += xi2.values[w];
    RandomVariable f = exp_map(B, h);
    for (int w = 0; w < 4; ++w)
        CHECK(f.values[w] == doctest::Approx((1 + xi1.values[w]) * (1 + xi2.values[w])));
    CHECK(expectation(f) == doctest::Approx(1.0));
    CHECK(is_multiplicative_integral(B, f));

    RandomVariable back = log_map(B, f);
    for (int w = 0; w < 4; ++w) CHECK(back.values[w] == doctest::Approx(h.values[w]).epsilon(1e-9));

    CHECK_THROWS_AS(exp_map(B, product(xi1, xi2)), SpaceError);  // second chaos input
}

TEST_CASE("spectral independence probabilities") {
    NoiseBooleanAlgebra B = sign_algebra(2);
    SpectralResolution res = resolve(B);

    SpectralProbability dirac{{1.0, 0.0, 0.0, 0.0}};
    CHECK(spectral_independence_check(B, dirac));

    SpectralProbability off_bottom{{0.0, 1.0, 0.0, 0.0}};
    CHECK(!spectral_independence_check(B, off_bottom));

    RandomVariable xi1 = sign_bit(B.space, 2, 0), xi2 = sign_bit(B.space, 2, 1);
    RandomVariable f = make_rv(B.space, std::vector<double>(4));
    for (int w = 0; w < 4; ++w)
        f.values[w] = (1 + xi1.values[w]) * (1 + xi2.values[w]) / 2.0;
    SpectralProbability nu = spectral_independence_from_integral(res, f);
    for (double mass : nu.mass) CHECK(mass == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(spectral_independence_check(B, nu));

    // non-product probability fails
    SpectralProbability bad{{0.5, 0.0, 0.0, 0.5}};
    CHECK(!spectral_independence_check(B, bad));
}

TEST_CASE("inclusion-probability reconstruction") {
    std::mt19937_64 rng(8003);
    std::uniform_real_distribution<double> unif(0.05, 0.9);
    for (int trial = 0; trial < 10; ++trial) {
        NoiseBooleanAlgebra B = random_algebra(rng, 4, 64);
        SpectralResolution res = resolve(B);
        std::vector<double> r(B.n_atoms());
        for (double& q : r) q = unif(rng);
        RandomVariable f = multiplicative_from_inclusion(res, r);
        CHECK(is_multiplicative_integral(B, f, 1e-8));
        SpectralProbability nu = spectral_independence_from_integral(res, f);
        CHECK(spectral_independence_check(B, nu));
        for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(B.size()); ++s) {
            double expect = 1.0;
            for (int a = 0; a < B.n_atoms(); ++a)
                expect *= (s & (1u << a)) ? r[a] : (1.0 - r[a]);
            CHECK(nu.mass[s] == doctest::Approx(expect).epsilon(1e-9));
        }
        // fully supported equivalent probability exists
        SpectralProbability eq = equivalent_independence_probability(res);
        CHECK(spectral_independence_check(B, eq));
        for (double mass : eq.mass) CHECK(mass > 0.0);
    }
}

TEST_CASE("tail bound") {
    NoiseBooleanAlgebra B = sign_algebra(2);
    SpectralProbability uniform_nu{{0.25, 0.25, 0.25, 0.25}};
    REQUIRE(spectral_independence_check(B, uniform_nu));
    // m=1: 3/4 >= (1/4)(1 + ln 4)
    CHECK(tail_bound_check(B, uniform_nu, 1));
    CHECK(0.75 >= 0.25 * (1 + std::log(4.0)) - 1e-12);
    CHECK(tail_bound_check(B, uniform_nu, 2));  // m >= max K: LHS = 1

    SpectralProbability dirac{{1.0, 0.0, 0.0, 0.0}};
    CHECK(tail_bound_check(B, dirac, 0));  // p0 = 1: bound reads 1 >= 1

    std::mt19937_64 rng(8004);
    std::uniform_real_distribution<double> unif(0.05, 0.9);
    for (int trial = 0; trial < 10; ++trial) {
        NoiseBooleanAlgebra Br = random_algebra(rng, 4, 64);
        SpectralResolution res = resolve(Br);
        std::vector<double> r(Br.n_atoms());
        for (double& q : r) q = unif(rng);
        SpectralProbability nu = spectral_independence_from_integral(
            res, multiplicative_from_inclusion(res, r));
        for (int m = 0; m <= Br.n_atoms(); ++m) CHECK(tail_bound_check(Br, nu, m));
    }
}

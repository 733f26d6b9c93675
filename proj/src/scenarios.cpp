#include "noise/scenarios.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace noise {

namespace {

// Uniform space over {-1,1}^nbits; bit i of the outcome index (counting from
// the most significant of nbits) encodes the sign xi_{i+1}: bit 0 -> +1.
SpacePtr uniform_signs(int nbits) {
    const int n = 1 << nbits;
    std::vector<double> probs(n, 1.0 / n);
    std::vector<std::string> labels(n);
    for (int w = 0; w < n; ++w) {
        std::string s;
        for (int i = 0; i < nbits; ++i) s += ((w >> (nbits - 1 - i)) & 1) ? '-' : '+';
        labels[w] = s;
    }
    return make_space(probs, labels);
}

RandomVariable sign_rv(const SpacePtr& sp, int nbits, int i /*1-based*/) {
    std::vector<double> v(sp->size());
    for (int w = 0; w < sp->size(); ++w)
        v[w] = ((w >> (nbits - i)) & 1) ? -1.0 : 1.0;
    return make_rv(sp, v);
}

}  // namespace

Scenario classical_signs(int n) {
    if (n < 1 || n > 12) throw SpaceError("classical_signs: n out of range [1,12]");
    Scenario sc;
    sc.generator = "classical";
    sc.params["n"] = n;
    sc.space = uniform_signs(n);
    std::vector<SigmaField> atoms;
    for (int i = 1; i <= n; ++i) {
        RandomVariable xi = sign_rv(sc.space, n, i);
        sc.rvs["xi" + std::to_string(i)] = xi;
        SigmaField f = sigma_of(sc.space, {xi});
        sc.fields["s" + std::to_string(i)] = f;
        sc.atom_names.push_back("s" + std::to_string(i));
        atoms.push_back(f);
    }
    sc.algebra = from_independency(sc.space, atoms);
    return sc;
}

Scenario simplest_nonclassical(int n, int N) {
    if (n < 1 || n >= N || N > 12)
        throw SpaceError("simplest_nonclassical: need 1 <= n < N <= 12");
    Scenario sc;
    sc.generator = "simplest_nonclassical";
    sc.params["n"] = n;
    sc.params["N"] = N;
    sc.space = uniform_signs(N);
    std::vector<RandomVariable> xi;
    for (int i = 1; i <= N; ++i) {
        xi.push_back(sign_rv(sc.space, N, i));
        sc.rvs["xi" + std::to_string(i)] = xi.back();
    }
    std::vector<SigmaField> atoms;
    for (int i = 1; i <= n; ++i) {
        RandomVariable prod = xi[i - 1];
        for (int w = 0; w < sc.space->size(); ++w) prod.values[w] *= xi[i].values[w];
        sc.rvs["eta" + std::to_string(i)] = prod;
        SigmaField f = sigma_of(sc.space, {prod});
        sc.fields["eta" + std::to_string(i)] = f;
        sc.atom_names.push_back("eta" + std::to_string(i));
        atoms.push_back(f);
    }
    std::vector<RandomVariable> tail_gens(xi.begin() + n, xi.end());
    SigmaField tail = sigma_of(sc.space, tail_gens);
    sc.fields["tail"] = tail;
    sc.atom_names.push_back("tail");
    atoms.push_back(tail);
    sc.algebra = from_independency(sc.space, atoms);
    return sc;
}

Scenario tweaked_nonclassical(int n, int N) {
    if (n < 1 || n >= N || N + 1 > 12)
        throw SpaceError("tweaked_nonclassical: need 1 <= n < N, N+1 <= 12");
    Scenario sc;
    sc.generator = "tweaked_nonclassical";
    sc.params["n"] = n;
    sc.params["N"] = N;
    const int nbits = N + 1;  // the last sign is xi_inf
    sc.space = uniform_signs(nbits);
    std::vector<RandomVariable> xi;
    for (int i = 1; i <= nbits; ++i) xi.push_back(sign_rv(sc.space, nbits, i));
    for (int i = 1; i <= N; ++i) sc.rvs["xi" + std::to_string(i)] = xi[i - 1];
    sc.rvs["xiinf"] = xi[N];
    std::vector<SigmaField> atoms;
    for (int i = 1; i <= n; ++i) {
        RandomVariable prod = xi[i - 1];
        for (int w = 0; w < sc.space->size(); ++w) prod.values[w] *= xi[i].values[w];
        sc.rvs["eta" + std::to_string(i)] = prod;
        SigmaField f = sigma_of(sc.space, {prod});
        sc.fields["eta" + std::to_string(i)] = f;
        sc.atom_names.push_back("eta" + std::to_string(i));
        atoms.push_back(f);
    }
    std::vector<RandomVariable> tail_gens(xi.begin() + n, xi.end());  // includes xi_inf
    SigmaField tail = sigma_of(sc.space, tail_gens);
    sc.fields["tail"] = tail;
    sc.atom_names.push_back("tail");
    atoms.push_back(tail);
    sc.algebra = from_independency(sc.space, atoms);
    return sc;
}

VoterRule majority_rule(int m) {
    if (m < 1 || m % 2 == 0) throw SpaceError("majority_rule: m must be odd");
    VoterRule rule;
    rule.m = m;
    rule.r = 2;
    rule.table.resize(1 << m);
    for (int t = 0; t < (1 << m); ++t) {
        int ones = 0;
        for (int i = 0; i < m; ++i) ones += (t >> i) & 1;
        rule.table[t] = (2 * ones > m) ? 1 : 0;
    }
    return rule;
}

namespace {

int ipow(int base, int exp) {
    int out = 1;
    while (exp-- > 0) out *= base;
    return out;
}

void validate_rule(const VoterRule& rule) {
    const int tuples = ipow(rule.r, rule.m);
    if (static_cast<int>(rule.table.size()) != tuples)
        throw SpaceError("voter rule: table size mismatch");
    std::vector<int> fiber(rule.r, 0);
    for (int t = 0; t < tuples; ++t) {
        int v = rule.table[t];
        if (v < 0 || v >= rule.r) throw SpaceError("voter rule: value out of range");
        ++fiber[v];
    }
    for (int v = 1; v < rule.r; ++v)
        if (fiber[v] != fiber[0]) throw SpaceError("voter rule: output fibers are not uniform");
    // Symmetry: invariance under swapping any two adjacent arguments.
    for (int pos = 0; pos + 1 < rule.m; ++pos) {
        for (int t = 0; t < tuples; ++t) {
            int a = (t / ipow(rule.r, pos)) % rule.r;
            int b = (t / ipow(rule.r, pos + 1)) % rule.r;
            int swapped = t + (b - a) * ipow(rule.r, pos) + (a - b) * ipow(rule.r, pos + 1);
            if (rule.table[t] != rule.table[swapped])
                throw SpaceError("voter rule: not symmetric in its arguments");
        }
    }
}

int rule_digit(int w, int leaf, int r) { return (w / ipow(r, leaf)) % r; }

// Value at the root of the tree for a given leaf configuration.
int root_value(const VoterRule& rule, int depth, int w) {
    int leaves = ipow(rule.m, depth);
    std::vector<int> level(leaves);
    for (int l = 0; l < leaves; ++l) level[l] = rule_digit(w, l, rule.r);
    while (static_cast<int>(level.size()) > 1) {
        std::vector<int> next(level.size() / rule.m);
        for (size_t v = 0; v < next.size(); ++v) {
            int code = 0;
            for (int c = rule.m - 1; c >= 0; --c) code = code * rule.r + level[v * rule.m + c];
            next[v] = rule.table[code];
        }
        level = std::move(next);
    }
    return level[0];
}

}  // namespace

Scenario voter_model(const VoterRule& rule, int depth, int outcome_cap) {
    validate_rule(rule);
    if (depth < 1) throw SpaceError("voter_model: depth must be >= 1");
    const int leaves = ipow(rule.m, depth);
    double sz = std::pow(static_cast<double>(rule.r), leaves);
    if (sz > outcome_cap) throw SpaceError("voter_model: outcome cap exceeded");
    const int n = static_cast<int>(sz);

    Scenario sc;
    sc.generator = "voter";
    sc.params["m"] = rule.m;
    sc.params["r"] = rule.r;
    sc.params["depth"] = depth;
    std::vector<double> probs(n, 1.0 / n);
    std::vector<std::string> labels(n);
    for (int w = 0; w < n; ++w) {
        std::string s;
        for (int l = 0; l < leaves; ++l) s += static_cast<char>('0' + rule_digit(w, l, rule.r));
        labels[w] = s;
    }
    sc.space = make_space(probs, labels);

    std::vector<SigmaField> atoms;
    for (int l = 0; l < leaves; ++l) {
        std::vector<double> v(n);
        for (int w = 0; w < n; ++w) v[w] = rule_digit(w, l, rule.r);
        RandomVariable leaf_rv = make_rv(sc.space, v);
        std::string name = "leaf" + std::to_string(l);
        sc.rvs[name] = leaf_rv;
        SigmaField f = sigma_of(sc.space, {leaf_rv});
        sc.fields[name] = f;
        sc.atom_names.push_back(name);
        atoms.push_back(f);
    }
    sc.algebra = from_independency(sc.space, atoms);

    // Nested chain: level k has one group per depth-k node (its leaves).
    for (int k = 0; k <= depth; ++k) {
        int nodes = ipow(rule.m, k);
        int span = leaves / nodes;
        std::vector<std::uint32_t> level;
        for (int v = 0; v < nodes; ++v) {
            std::uint32_t g = 0;
            for (int l = v * span; l < (v + 1) * span; ++l) g |= (1u << l);
            level.push_back(g);
        }
        sc.chain.push_back(level);
    }

    // Centered root observable.
    std::vector<double> rootv(n);
    const double center = (rule.r - 1) / 2.0;
    for (int w = 0; w < n; ++w) rootv[w] = root_value(rule, depth, w) - center;
    if (rule.r == 2)
        for (double& v : rootv) v *= 2.0;  // +-1 convention for binary alphabets
    sc.rvs["X_root"] = make_rv(sc.space, rootv);
    return sc;
}

bool rigidity_check(const VoterRule& rule) {
    validate_rule(rule);
    const int tuples = ipow(rule.r, rule.m);
    // Unknowns: f(0..r-1) then g(0..r-1); rows: f(rule(t)) - sum_i g(t_i) = 0.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(tuples, 2 * rule.r);
    for (int t = 0; t < tuples; ++t) {
        A(t, rule.table[t]) += 1.0;
        for (int i = 0; i < rule.m; ++i) A(t, rule.r + rule_digit(t, i, rule.r)) -= 1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * std::max(smax, 1.0)) ++rank;
    for (int i = rank; i < svd.matrixV().cols(); ++i) {
        Eigen::VectorXd sol = svd.matrixV().col(i);
        for (int v = 1; v < rule.r; ++v)
            if (std::abs(sol(v) - sol(0)) > 1e-9) return false;  // nonconstant f solves it
    }
    return true;
}

double influential_vote_probability(const VoterRule& rule) {
    validate_rule(rule);
    const int rest = ipow(rule.r, rule.m - 1);
    int influential = 0;
    for (int t = 0; t < rest; ++t) {
        // First argument varies; the remaining m-1 are encoded by t.
        int base = t * rule.r;
        int first = rule.table[base];
        for (int v = 1; v < rule.r; ++v)
            if (rule.table[base + v] != first) {
                ++influential;
                break;
            }
    }
    return static_cast<double>(influential) / rest;
}

double first_chaos_decay(const VoterRule& rule, int depth, int outcome_cap) {
    validate_rule(rule);
    const int leaves = ipow(rule.m, depth);
    double sz = std::pow(static_cast<double>(rule.r), leaves);
    if (sz > outcome_cap) throw SpaceError("first_chaos_decay: outcome cap exceeded");
    const int n = static_cast<int>(sz);
    const double p = 1.0 / n;
    std::vector<double> rootv(n);
    const double center = (rule.r - 1) / 2.0;
    for (int w = 0; w < n; ++w) rootv[w] = root_value(rule, depth, w) - center;
    if (rule.r == 2)
        for (double& v : rootv) v *= 2.0;
    double mean = std::accumulate(rootv.begin(), rootv.end(), 0.0) * p;
    // Squared norm of the H^(1) projection = sum over leaves of var(E[f|leaf]),
    // computed directly (the leaf fields are independent).
    double total = 0.0;
    for (int l = 0; l < leaves; ++l) {
        std::vector<double> avg(rule.r, 0.0);
        std::vector<double> mass(rule.r, 0.0);
        for (int w = 0; w < n; ++w) {
            int d = rule_digit(w, l, rule.r);
            avg[d] += p * rootv[w];
            mass[d] += p;
        }
        for (int d = 0; d < rule.r; ++d) {
            double condmean = avg[d] / mass[d];
            total += mass[d] * (condmean - mean) * (condmean - mean);
        }
    }
    return total;
}

Scenario split_words(int depth, int L, int outcome_cap) {
    if (depth < 2 || L < 1) throw SpaceError("split_words: need depth >= 2, L >= 1");
    const int W = L * (1 << (depth - 1));  // deepest word length
    const int nbits = W + (depth - 1);     // word signs, then selector signs
    if ((1 << nbits) > outcome_cap) throw SpaceError("split_words: outcome cap exceeded");

    Scenario sc;
    sc.generator = "split_words";
    sc.params["depth"] = depth;
    sc.params["L"] = L;
    sc.space = uniform_signs(nbits);

    std::vector<SigmaField> atoms;
    for (int i = 1; i <= depth - 1; ++i) {
        RandomVariable sig = sign_rv(sc.space, nbits, W + i);
        sc.rvs["sigma" + std::to_string(i)] = sig;
        SigmaField f = sigma_of(sc.space, {sig});
        sc.fields["y" + std::to_string(i)] = f;
        sc.atom_names.push_back("y" + std::to_string(i));
        atoms.push_back(f);
    }
    std::vector<RandomVariable> word;
    for (int k = 1; k <= W; ++k) {
        word.push_back(sign_rv(sc.space, nbits, k));
        sc.rvs["X" + std::to_string(depth) + "_" + std::to_string(k)] = word.back();
    }
    SigmaField tail = sigma_of(sc.space, word);
    sc.fields["tail"] = tail;
    sc.atom_names.push_back("tail");
    atoms.push_back(tail);
    sc.algebra = from_independency(sc.space, atoms);

    // X_1(1) = the deepest-word letter selected by sigma_1..sigma_{depth-1}:
    // X_n(k) = X_{n+1}(2k-1) when sigma_n = +1, else X_{n+1}(2k).
    std::vector<double> x11(sc.space->size());
    for (int w = 0; w < sc.space->size(); ++w) {
        int k = 1;
        for (int i = 1; i <= depth - 1; ++i) {
            double s = sc.rvs["sigma" + std::to_string(i)].values[w];
            k = 2 * k - 1 + (s > 0 ? 0 : 1);
        }
        x11[w] = word[k - 1].values[w];
    }
    sc.rvs["X1_1"] = make_rv(sc.space, x11);
    return sc;
}

Scenario reverse_filtration(const SpacePtr& sp, const std::vector<SigmaField>& innovations,
                            const SigmaField& tail) {
    std::vector<SigmaField> atoms = innovations;
    atoms.push_back(tail);
    if (!are_independent(atoms))
        throw SpaceError("reverse_filtration: innovations and tail are not independent");
    Scenario sc;
    sc.generator = "reverse_filtration";
    sc.space = sp;
    for (size_t i = 0; i < innovations.size(); ++i) {
        sc.fields["y" + std::to_string(i + 1)] = innovations[i];
        sc.atom_names.push_back("y" + std::to_string(i + 1));
    }
    sc.fields["tail"] = tail;
    sc.atom_names.push_back("tail");
    sc.algebra = from_independency(sp, atoms);
    return sc;
}

}  // namespace noise

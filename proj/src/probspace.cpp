#include "noise/probspace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace noise {

namespace {

void require_same_space(const SpacePtr& a, const SpacePtr& b) {
    if (a == b) return;
    if (a && b && a->probs == b->probs && a->outcomes == b->outcomes) return;
    throw SpaceError("operands live on different probability spaces");
}

}  // namespace

SpacePtr make_space(const std::vector<double>& probs, std::vector<std::string> labels) {
    if (probs.empty()) throw SpaceError("make_space: empty probability list");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p > 0.0)) throw SpaceError("make_space: probabilities must be strictly positive");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw SpaceError("make_space: probabilities sum to " + std::to_string(sum));
    auto sp = std::make_shared<FiniteProbabilitySpace>();
    sp->probs = probs;
    if (std::abs(sum - 1.0) > 1e-12)
        for (double& p : sp->probs) p /= sum;
    if (labels.empty()) {
        labels.reserve(probs.size());
        for (size_t i = 0; i < probs.size(); ++i) labels.push_back("w" + std::to_string(i));
    } else if (labels.size() != probs.size()) {
        throw SpaceError("make_space: label count mismatch");
    }
    {
        auto sorted = labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw SpaceError("make_space: duplicate outcome labels");
    }
    sp->outcomes = std::move(labels);
    return sp;
}

SigmaField field_from_assignment(const SpacePtr& sp, const std::vector<int>& assign) {
    const int n = sp->size();
    if (static_cast<int>(assign.size()) != n)
        throw SpaceError("field_from_assignment: length mismatch");
    SigmaField x;
    x.space = sp;
    x.block_index.assign(n, -1);
    std::map<int, int> remap;  // original id -> canonical id, by first appearance
    for (int w = 0; w < n; ++w) {
        auto it = remap.find(assign[w]);
        int id;
        if (it == remap.end()) {
            id = static_cast<int>(x.blocks.size());
            remap.emplace(assign[w], id);
            x.blocks.emplace_back();
        } else {
            id = it->second;
        }
        x.block_index[w] = id;
        x.blocks[id].push_back(w);
    }
    return x;
}

SigmaField field_from_blocks(const SpacePtr& sp, std::vector<std::vector<int>> blocks) {
    const int n = sp->size();
    std::vector<int> assign(n, -1);
    for (size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) throw SpaceError("field_from_blocks: empty block");
        for (int w : blocks[b]) {
            if (w < 0 || w >= n) throw SpaceError("field_from_blocks: outcome index out of range");
            if (assign[w] != -1) throw SpaceError("field_from_blocks: blocks overlap");
            assign[w] = static_cast<int>(b);
        }
    }
    for (int w = 0; w < n; ++w)
        if (assign[w] == -1) throw SpaceError("field_from_blocks: blocks do not cover all outcomes");
    return field_from_assignment(sp, assign);
}

SigmaField zero_field(const SpacePtr& sp) {
    return field_from_assignment(sp, std::vector<int>(sp->size(), 0));
}

SigmaField one_field(const SpacePtr& sp) {
    std::vector<int> assign(sp->size());
    std::iota(assign.begin(), assign.end(), 0);
    return field_from_assignment(sp, assign);
}

RandomVariable make_rv(const SpacePtr& sp, std::vector<double> values) {
    if (static_cast<int>(values.size()) != sp->size())
        throw SpaceError("make_rv: length mismatch");
    return RandomVariable{sp, std::move(values)};
}

double expectation(const RandomVariable& f) {
    double s = 0.0;
    for (int w = 0; w < f.space->size(); ++w) s += f.space->probs[w] * f.values[w];
    return s;
}

double inner(const RandomVariable& f, const RandomVariable& g) {
    require_same_space(f.space, g.space);
    double s = 0.0;
    for (int w = 0; w < f.space->size(); ++w)
        s += f.space->probs[w] * f.values[w] * g.values[w];
    return s;
}

double l2norm(const RandomVariable& f) { return std::sqrt(inner(f, f)); }

double variance(const RandomVariable& f) {
    double m = expectation(f);
    return inner(f, f) - m * m;
}

SigmaField sigma_of(const SpacePtr& sp, const std::vector<RandomVariable>& fs) {
    for (const auto& f : fs) require_same_space(sp, f.space);
    const int n = sp->size();
    std::map<std::vector<double>, int> level_sets;
    std::vector<int> assign(n);
    for (int w = 0; w < n; ++w) {
        std::vector<double> key;
        key.reserve(fs.size());
        for (const auto& f : fs) key.push_back(f.values[w]);
        auto [it, _] = level_sets.try_emplace(std::move(key), static_cast<int>(level_sets.size()));
        assign[w] = it->second;
    }
    return field_from_assignment(sp, assign);
}

RandomVariable cond_exp(const RandomVariable& f, const SigmaField& x) {
    require_same_space(f.space, x.space);
    const auto& p = f.space->probs;
    std::vector<double> avg(x.num_blocks(), 0.0), mass(x.num_blocks(), 0.0);
    for (int w = 0; w < f.space->size(); ++w) {
        avg[x.block_index[w]] += p[w] * f.values[w];
        mass[x.block_index[w]] += p[w];
    }
    std::vector<double> out(f.values.size());
    for (int w = 0; w < f.space->size(); ++w)
        out[w] = avg[x.block_index[w]] / mass[x.block_index[w]];
    return RandomVariable{f.space, std::move(out)};
}

SigmaField join(const SigmaField& x, const SigmaField& y) {
    require_same_space(x.space, y.space);
    const int n = x.space->size();
    std::map<std::pair<int, int>, int> cells;
    std::vector<int> assign(n);
    for (int w = 0; w < n; ++w) {
        auto [it, _] = cells.try_emplace({x.block_index[w], y.block_index[w]},
                                         static_cast<int>(cells.size()));
        assign[w] = it->second;
    }
    return field_from_assignment(x.space, assign);
}

SigmaField meet(const SigmaField& x, const SigmaField& y) {
    require_same_space(x.space, y.space);
    const int n = x.space->size();
    // Union-find over outcomes: glue within every block of x and of y;
    // components are the blocks of the finest common coarsening.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (const auto& blk : x.blocks)
        for (size_t i = 1; i < blk.size(); ++i) unite(blk[0], blk[i]);
    for (const auto& blk : y.blocks)
        for (size_t i = 1; i < blk.size(); ++i) unite(blk[0], blk[i]);
    std::vector<int> assign(n);
    for (int w = 0; w < n; ++w) assign[w] = find(w);
    return field_from_assignment(x.space, assign);
}

bool is_sub_field(const SigmaField& x, const SigmaField& y) {
    require_same_space(x.space, y.space);
    // x coarser-or-equal: y's blocks refine x's.
    for (const auto& blk : y.blocks) {
        int target = x.block_index[blk[0]];
        for (int w : blk)
            if (x.block_index[w] != target) return false;
    }
    return true;
}

bool are_independent(const std::vector<SigmaField>& xs) {
    if (xs.empty()) return true;
    const SpacePtr sp = xs[0].space;
    for (const auto& x : xs) require_same_space(sp, x.space);
    const double tol = sp->tol;
    const int n = sp->size();
    const int k = static_cast<int>(xs.size());
    // Joint cell probabilities in one sweep, then compare with products.
    std::map<std::vector<int>, double> joint;
    for (int w = 0; w < n; ++w) {
        std::vector<int> key(k);
        for (int i = 0; i < k; ++i) key[i] = xs[i].block_index[w];
        joint[key] += sp->probs[w];
    }
    std::vector<std::vector<double>> block_mass(k);
    for (int i = 0; i < k; ++i) {
        block_mass[i].assign(xs[i].num_blocks(), 0.0);
        for (int w = 0; w < n; ++w) block_mass[i][xs[i].block_index[w]] += sp->probs[w];
    }
    // Every combination of one block per field, including empty intersections.
    std::vector<int> combo(k, 0);
    while (true) {
        double prod = 1.0;
        for (int i = 0; i < k; ++i) prod *= block_mass[i][combo[i]];
        auto it = joint.find(combo);
        double actual = (it == joint.end()) ? 0.0 : it->second;
        if (std::abs(actual - prod) > tol) return false;
        int i = 0;
        for (; i < k; ++i) {
            if (++combo[i] < xs[i].num_blocks()) break;
            combo[i] = 0;
        }
        if (i == k) break;
    }
    return true;
}

RandomVariable ProductSpace::lift_rv(int factor, const RandomVariable& f) const {
    require_same_space(factors.at(factor), f.space);
    std::vector<double> vals(space->size());
    for (int w = 0; w < space->size(); ++w) vals[w] = f.values[coord[factor][w]];
    return RandomVariable{space, std::move(vals)};
}

SigmaField ProductSpace::lift_field(int factor, const SigmaField& x) const {
    require_same_space(factors.at(factor), x.space);
    std::vector<int> assign(space->size());
    for (int w = 0; w < space->size(); ++w) assign[w] = x.block_index[coord[factor][w]];
    return field_from_assignment(space, assign);
}

ProductSpace product_space(const std::vector<SpacePtr>& spaces, int outcome_cap) {
    if (spaces.empty()) throw SpaceError("product_space: empty factor list");
    long long total = 1;
    for (const auto& sp : spaces) {
        total *= sp->size();
        if (total > outcome_cap) throw SpaceError("product_space: outcome cap exceeded");
    }
    const int k = static_cast<int>(spaces.size());
    const int n = static_cast<int>(total);
    ProductSpace ps;
    ps.factors = spaces;
    ps.coord.assign(k, std::vector<int>(n));
    std::vector<double> probs(n);
    std::vector<std::string> labels(n);
    for (int w = 0; w < n; ++w) {
        int rest = w;
        double p = 1.0;
        std::string label;
        // Last factor varies fastest.
        for (int i = k - 1; i >= 0; --i) {
            ps.coord[i][w] = rest % spaces[i]->size();
            rest /= spaces[i]->size();
        }
        for (int i = 0; i < k; ++i) {
            p *= spaces[i]->probs[ps.coord[i][w]];
            if (i) label += "|";
            label += spaces[i]->outcomes[ps.coord[i][w]];
        }
        probs[w] = p;
        labels[w] = label;
    }
    ps.space = make_space(probs, labels);
    return ps;
}

}  // namespace noise

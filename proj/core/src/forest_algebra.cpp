#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "srk/errors.hpp"
#include "srk/forests.hpp"

namespace srk {

namespace {

using Node = DecoratedForest::Node;

// Sub-forest induced by `keep`; nodes whose parent is dropped become roots.
std::vector<Node> induced(const std::vector<Node>& nodes, const std::vector<bool>& keep) {
    std::vector<int> index(nodes.size(), -1);
    int next = 0;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (keep[v]) index[v] = next++;
    }
    std::vector<Node> out;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (!keep[v]) continue;
        const int p = nodes[v].parent;
        out.push_back({(p >= 0 && keep[static_cast<std::size_t>(p)]) ? index[static_cast<std::size_t>(p)] : -1,
                       nodes[v].decoration});
    }
    return out;
}

TensorSum collect(const std::map<std::pair<std::string, std::string>, TensorTerm>& acc) {
    TensorSum out;
    out.reserve(acc.size());
    for (const auto& [k, t] : acc) out.push_back(t);
    std::sort(out.begin(), out.end(), [](const TensorTerm& a, const TensorTerm& b) {
        if (auto c = a.left <=> b.left; c != 0) return c < 0;
        return (a.right <=> b.right) < 0;
    });
    return out;
}

void accumulate(std::map<std::pair<std::string, std::string>, TensorTerm>& acc, const DecoratedForest& left,
                const DecoratedForest& right) {
    auto [it, inserted] = acc.try_emplace({left.key(), right.key()}, TensorTerm{left, right, 0});
    ++it->second.multiplicity;
}

Rational factorial(int n) {
    Rational r(1);
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

}  // namespace

ForestSum gl_product(const DecoratedForest& left, const DecoratedForest& right) {
    if (left.empty()) return ForestSum(right);
    const auto& rn = right.nodes();
    const auto& ln = left.nodes();
    const int R = static_cast<int>(rn.size());
    const int shift = right.class_count();

    std::vector<Node> raw = rn;
    for (const auto& n : ln) raw.push_back({n.parent < 0 ? -1 : n.parent + R, n.decoration > 0 ? n.decoration + shift : 0});
    std::vector<std::size_t> left_roots;
    for (std::size_t v : left.roots()) left_roots.push_back(v + static_cast<std::size_t>(R));

    ForestSum out;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == left_roots.size()) {
            out.add(DecoratedForest::from_nodes(raw), 1);
            return;
        }
        for (int target = -1; target < R; ++target) {
            raw[left_roots[k]].parent = target;
            rec(k + 1);
        }
        raw[left_roots[k]].parent = -1;
    };
    rec(0);
    return out;
}

ForestSum gl_product(const ForestSum& left, const ForestSum& right) {
    ForestSum out;
    for (const auto& [lk, lt] : left.terms()) {
        for (const auto& [rk, rt] : right.terms()) {
            ForestSum p = gl_product(lt.first, rt.first);
            p *= lt.second * rt.second;
            out += p;
        }
    }
    return out;
}

ForestSum generator(Calculus calculus) {
    ForestSum l(DecoratedForest::parse("[0]"));
    l.add(DecoratedForest::parse("[1].[1]"), Rational(1, 2));
    if (calculus == Calculus::Stratonovich) l.add(DecoratedForest::parse("[1[1]]"), Rational(1, 2));
    return l;
}

CoefficientMap generator_map(Calculus calculus) {
    CoefficientMap l(1);
    const ForestSum g = generator(calculus);
    for (const auto& [key, term] : g.terms()) {
        l.set(term.first, term.second * static_cast<std::int64_t>(symmetry(term.first)));
    }
    return l;
}

ForestSum gl_exponential_series(const ForestSum& l, int max_order) {
    ForestSum result{DecoratedForest()};
    ForestSum power{DecoratedForest()};
    for (int n = 1; n <= max_order; ++n) {
        ForestSum next = gl_product(l, power);
        power = ForestSum();
        for (const auto& [key, term] : next.terms()) {
            if (term.first.order() <= max_order) power.add(term.first, term.second);
        }
        ForestSum scaled = power;
        scaled *= Rational(1) / factorial(n);
        result += scaled;
    }
    return result;
}

CoefficientMap gl_exponential(const ForestSum& l, int max_order) {
    if (l.homogeneous_order() != 1) {
        throw PreconditionError("gl_exponential: the generator must be homogeneous of order 1");
    }
    CoefficientMap e(max_order);
    const ForestSum series = gl_exponential_series(l, max_order);
    for (const auto& [key, term] : series.terms()) {
        e.set(term.first, term.second * static_cast<std::int64_t>(symmetry(term.first)));
    }
    if (max_order > kMaxEnumerationOrder) return e;
    // Non-exotic forests: Isserlis sum over the pairings of each class.
    for (const auto& f : enumerate_forests(max_order, false)) {
        if (f.is_exotic()) continue;
        Rational s(0);
        for (const auto& r : finer_decorations(f, true)) s += e(r.forest) * r.multiplicity;
        e.set(f, s);
    }
    return e;
}

TensorSum deshuffle(const DecoratedForest& f) {
    const auto& nodes = f.nodes();
    const auto roots = f.roots();
    std::vector<std::size_t> tree_of(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        std::size_t r = v;
        while (nodes[r].parent >= 0) r = static_cast<std::size_t>(nodes[r].parent);
        tree_of[v] = static_cast<std::size_t>(std::find(roots.begin(), roots.end(), r) - roots.begin());
    }
    // Union trees that share a decoration class.
    std::vector<std::size_t> comp(roots.size());
    std::iota(comp.begin(), comp.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return comp[x] == x ? x : comp[x] = find(comp[x]);
    };
    std::map<int, std::size_t> first_tree;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        const int d = nodes[v].decoration;
        if (d == 0) continue;
        auto [it, inserted] = first_tree.try_emplace(d, tree_of[v]);
        if (!inserted) comp[find(tree_of[v])] = find(it->second);
    }
    std::vector<std::size_t> labels;
    for (std::size_t t = 0; t < roots.size(); ++t) labels.push_back(find(t));
    std::vector<std::size_t> distinct = labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::map<std::pair<std::string, std::string>, TensorTerm> acc;
    const std::size_t k = distinct.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<bool> left(nodes.size());
        for (std::size_t v = 0; v < nodes.size(); ++v) {
            const auto c = static_cast<std::size_t>(
                std::find(distinct.begin(), distinct.end(), labels[tree_of[v]]) - distinct.begin());
            left[v] = ((mask >> c) & 1U) != 0;
        }
        std::vector<bool> right(left.size());
        for (std::size_t v = 0; v < left.size(); ++v) right[v] = !left[v];
        accumulate(acc, DecoratedForest::from_nodes(induced(nodes, left)),
                   DecoratedForest::from_nodes(induced(nodes, right)));
    }
    return collect(acc);
}

TensorSum bck_coproduct(const DecoratedForest& f) {
    if (!f.is_exotic()) throw PreconditionError("bck_coproduct: forest " + f.key() + " is not exotic");
    const auto& nodes = f.nodes();
    const std::size_t n = nodes.size();
    std::map<std::pair<std::string, std::string>, TensorTerm> acc;
    if (n == 0) {
        accumulate(acc, f, f);
        return collect(acc);
    }
    auto is_ancestor = [&](std::size_t a, std::size_t v) {
        for (int u = nodes[v].parent; u >= 0; u = nodes[static_cast<std::size_t>(u)].parent) {
            if (static_cast<std::size_t>(u) == a) return true;
        }
        return false;
    };
    // Bit v of `cut` removes the edge above v (the virtual one for roots).
    for (std::size_t cut = 0; cut < (std::size_t{1} << n); ++cut) {
        bool admissible = true;
        std::vector<bool> pruned(n, false);
        for (std::size_t v = 0; v < n && admissible; ++v) {
            if (((cut >> v) & 1U) == 0) continue;
            for (std::size_t a = 0; a < n; ++a) {
                if (a != v && ((cut >> a) & 1U) != 0 && is_ancestor(a, v)) {
                    admissible = false;
                    break;
                }
            }
        }
        if (!admissible) continue;
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t u = v;;) {
                if (((cut >> u) & 1U) != 0) {
                    pruned[v] = true;
                    break;
                }
                if (nodes[u].parent < 0) break;
                u = static_cast<std::size_t>(nodes[u].parent);
            }
        }
        std::map<int, int> side;  // class -> 1 pruned, 2 trunk, 3 split
        for (std::size_t v = 0; v < n; ++v) {
            if (nodes[v].decoration > 0) side[nodes[v].decoration] |= pruned[v] ? 1 : 2;
        }
        if (std::any_of(side.begin(), side.end(), [](const auto& kv) { return kv.second == 3; })) continue;
        std::vector<bool> trunk(n);
        for (std::size_t v = 0; v < n; ++v) trunk[v] = !pruned[v];
        accumulate(acc, DecoratedForest::from_nodes(induced(nodes, pruned)),
                   DecoratedForest::from_nodes(induced(nodes, trunk)));
    }
    return collect(acc);
}

CoefficientMap convolution(const CoefficientMap& a, const CoefficientMap& b, int max_order) {
    CoefficientMap out(max_order);
    std::vector<DecoratedForest> forests{DecoratedForest()};
    for (auto& f : enumerate_forests(max_order, true)) forests.push_back(std::move(f));
    for (const auto& f : forests) {
        Rational s(0);
        for (const auto& term : bck_coproduct(f)) {
            const Rational av = a(term.left);
            if (av.numerator() == 0) continue;
            s += av * b(term.right) * term.multiplicity;
        }
        out.set(f, s);
    }
    return out;
}

CoefficientMap convolution_exp(const CoefficientMap& l, int max_order) {
    CoefficientMap unit(max_order);
    unit.set(DecoratedForest(), 1);
    CoefficientMap result = unit;
    CoefficientMap power = unit;
    std::vector<DecoratedForest> forests{DecoratedForest()};
    for (auto& f : enumerate_forests(max_order, true)) forests.push_back(std::move(f));
    for (int n = 1; n <= max_order; ++n) {
        power = convolution(power, l, max_order);
        const Rational inv = Rational(1) / factorial(n);
        for (const auto& f : forests) result.set(f, result(f) + power(f) * inv);
    }
    return result;
}

}  // namespace srk

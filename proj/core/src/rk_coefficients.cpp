#include <algorithm>
#include <functional>

#include "srk/errors.hpp"
#include "srk/forests.hpp"
#include "srk/randvars.hpp"

namespace srk {

double rk_coefficient_map(const MethodTableau& t, const DecoratedForest& f, const std::vector<std::size_t>& labels) {
    const auto& nodes = f.nodes();
    if (nodes.empty()) return 1.0;
    const int k = f.class_count();
    std::vector<std::size_t> noise(static_cast<std::size_t>(k) + 1, 0);  // noise[class] = label
    for (int c = 1; c <= k; ++c) {
        const auto cs = static_cast<std::size_t>(c);
        if (labels.empty()) {
            noise[cs] = cs;
        } else {
            if (labels.size() < cs) throw PreconditionError("rk_coefficient_map: missing label for class " + std::to_string(c));
            noise[cs] = labels[cs - 1];
            if (noise[cs] == 0) throw PreconditionError("rk_coefficient_map: noise labels start at 1");
        }
    }
    const std::size_t max_label = *std::max_element(noise.begin(), noise.end());
    if (max_label > kMaxAtomNoises) {
        throw CapacityError("rk_coefficient_map: " + std::to_string(max_label) + " noises exceed the atom table capacity");
    }
    const std::size_t m = std::max<std::size_t>(2, max_label);
    auto label_of = [&](std::size_t v) { return noise[static_cast<std::size_t>(nodes[v].decoration)]; };

    // Random factor: theta at roots, Theta along edges.
    Monomial mono;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (nodes[v].parent < 0) {
            if (label_of(v) != 0) mono.push_back(MonomialFactor::small_theta(label_of(v)));
        } else {
            const std::size_t p = label_of(static_cast<std::size_t>(nodes[v].parent));
            const std::size_t q = label_of(v);
            if (p != 0 || q != 0) mono.push_back(MonomialFactor::big_Theta(p, q));
        }
    }
    const double expectation = moment(RvFamily::for_method(t), m, mono);
    if (expectation == 0.0) return 0.0;

    // Deterministic factor: stage-index contraction, bottom-up.
    const auto ch = f.children();
    std::function<Vector(std::size_t)> contract = [&](std::size_t v) {
        const std::size_t p = label_of(v);
        Vector u = ones(p == 0 ? t.s1 : t.s2);
        for (std::size_t c : ch[v]) {
            const std::size_t q = label_of(c);
            const Matrix* M = nullptr;
            if (p == 0) {
                M = q == 0 ? &t.A0 : &t.B0;
            } else {
                M = q == 0 ? &t.A1 : &t.stochastic_block(p == q);
            }
            u = hadamard(u, M->apply(contract(c)));
        }
        return u;
    };
    double deterministic = 1.0;
    for (std::size_t r : f.roots()) {
        const Vector& w = label_of(r) == 0 ? t.alpha : t.beta;
        deterministic *= dot(w, contract(r));
    }
    return expectation * deterministic;
}

}  // namespace srk

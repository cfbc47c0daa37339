#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "srk/tableau.hpp"

namespace srk {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);

/// Rooted forest whose nodes carry decorations: 0 for drift (black) nodes and
/// class labels 1, 2, ... for noise nodes, every noise class having even size.
/// Two forests are equal when the graphs are isomorphic after relabeling the
/// noise classes.
///
/// Values are always canonical: nodes are stored in the preorder of the
/// canonical text form, whose class numbering is the lexicographically least.
///
/// Text form: a tree is "[" decoration children... "]", trees are joined by
/// "·" ("." is accepted on input), the empty forest is "1". Example:
/// "[0[1][1]]·[0]".
class DecoratedForest {
public:
    struct Node {
        int parent = -1;  // -1 for roots
        int decoration = 0;
    };

    /// The empty forest.
    DecoratedForest();

    /// Canonicalizes a raw graph. Throws StructureError on out-of-range or
    /// cyclic parents, odd classes or negative decorations.
    static DecoratedForest from_nodes(const std::vector<Node>& raw);
    static DecoratedForest parse(std::string_view text);

    [[nodiscard]] const std::string& key() const { return key_; }
    [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] bool empty() const { return nodes_.empty(); }

    /// Black nodes plus half the noise nodes.
    [[nodiscard]] int order() const;
    /// Every noise class has exactly two nodes (lianas).
    [[nodiscard]] bool is_exotic() const;
    [[nodiscard]] int class_count() const;

    [[nodiscard]] std::vector<std::size_t> roots() const;
    [[nodiscard]] std::vector<std::vector<std::size_t>> children() const;

    friend bool operator==(const DecoratedForest& a, const DecoratedForest& b) { return a.key_ == b.key_; }
    /// Sorted by (order, key).
    friend std::strong_ordering operator<=>(const DecoratedForest& a, const DecoratedForest& b);

private:
    std::vector<Node> nodes_;
    std::string key_;
};

/// Same as DecoratedForest::from_nodes.
DecoratedForest canonicalize(const std::vector<DecoratedForest::Node>& raw);

/// Disjoint union; noise classes of the two factors stay distinct.
DecoratedForest concatenate(const DecoratedForest& a, const DecoratedForest& b);

inline constexpr int kMaxEnumerationOrder = 3;

/// All forests of order 1..max_order, duplicate-free and sorted by (order, key).
/// Throws CapacityError above kMaxEnumerationOrder.
std::vector<DecoratedForest> enumerate_forests(int max_order, bool exotic_only);

/// Number of node bijections preserving edges and the decoration partition.
std::uint64_t symmetry(const DecoratedForest& f);

/// Finite linear combination of forests with rational coefficients.
class ForestSum {
public:
    ForestSum() = default;
    ForestSum(const DecoratedForest& f, Rational coefficient = 1);

    void add(const DecoratedForest& f, Rational coefficient);
    [[nodiscard]] Rational coefficient(const DecoratedForest& f) const;
    [[nodiscard]] const std::map<std::string, std::pair<DecoratedForest, Rational>>& terms() const { return terms_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }

    /// Order of every term, or -1 when the sum is not homogeneous (or empty).
    [[nodiscard]] int homogeneous_order() const;

    ForestSum& operator+=(const ForestSum& other);
    ForestSum& operator*=(Rational scalar);
    friend ForestSum operator+(ForestSum a, const ForestSum& b) { return a += b; }
    friend ForestSum operator*(Rational s, ForestSum a) { return a *= s; }
    friend bool operator==(const ForestSum&, const ForestSum&) = default;

private:
    std::map<std::string, std::pair<DecoratedForest, Rational>> terms_;
};

/// Grossman-Larson product: every root of `left` is either kept as a root or
/// grafted onto a node of `right`, in all ways with multiplicity.
ForestSum gl_product(const DecoratedForest& left, const DecoratedForest& right);
ForestSum gl_product(const ForestSum& left, const ForestSum& right);

/// Rational value per forest, zero where unset; meaningful up to max_order.
class CoefficientMap {
public:
    explicit CoefficientMap(int max_order = 0) : max_order_(max_order) {}

    [[nodiscard]] Rational operator()(const DecoratedForest& f) const;
    [[nodiscard]] Rational at(const std::string& key) const;
    void set(const DecoratedForest& f, Rational value);
    [[nodiscard]] int max_order() const { return max_order_; }
    [[nodiscard]] const std::map<std::string, Rational>& values() const { return values_; }

private:
    int max_order_;
    std::map<std::string, Rational> values_;
};

/// Generator of the Kolmogorov equation as a forest sum:
/// Ito  •  + 1/2 [1]·[1];  Stratonovich  •  + 1/2 [1]·[1] + 1/2 [1[1]].
ForestSum generator(Calculus calculus);

/// Coefficient map l = sigma * generator (so that S(l) is the generator).
CoefficientMap generator_map(Calculus calculus);

/// sum_{n <= max_order} l^{⋄n} / n!.
ForestSum gl_exponential_series(const ForestSum& l, int max_order);

/// Exact-flow coefficients e(π) = sigma(π) * [π] exp⋄(l) on exotic forests.
/// Up to kMaxEnumerationOrder, every non-exotic forest gets the Isserlis sum
/// of e over its pairings. Throws PreconditionError unless l is homogeneous of
/// order 1.
CoefficientMap gl_exponential(const ForestSum& l, int max_order);

/// One tensor term left ⊗ right with integer multiplicity.
struct TensorTerm {
    DecoratedForest left;
    DecoratedForest right;
    std::int64_t multiplicity = 1;
};

/// Merged and sorted by (left, right).
using TensorSum = std::vector<TensorTerm>;

/// Deshuffle coproduct: ordered splits of the liana-connected components.
TensorSum deshuffle(const DecoratedForest& f);

/// Admissible-cut coproduct. Every root hangs from a virtual edge so whole
/// trees may be pruned; a cut never severs a liana. Requires an exotic forest.
TensorSum bck_coproduct(const DecoratedForest& f);

/// (a*b)(π) = sum over Δ_BCK(π) of a(P) b(R) on all exotic forests of order <= max_order.
CoefficientMap convolution(const CoefficientMap& a, const CoefficientMap& b, int max_order);

/// exp*(l) = sum_n l^{*n}/n! on exotic forests of order <= max_order.
CoefficientMap convolution_exp(const CoefficientMap& l, int max_order);

struct Refinement {
    DecoratedForest forest;
    std::int64_t multiplicity = 1;
};

/// All forests obtained by splitting noise classes into smaller even classes
/// (pairs only when exotic_only), including the forest itself when allowed,
/// with the number of distinct finer decorations producing each.
std::vector<Refinement> finer_decorations(const DecoratedForest& f, bool exotic_only);

/// All forests obtained by merging noise classes, including the forest itself.
std::vector<Refinement> coarser_decorations(const DecoratedForest& f);

/// Möbius function of the decoration refinement order between a finer forest
/// and a coarser one. Throws PosetError when `fine` is not a refinement of `coarse`.
std::int64_t moebius(const DecoratedForest& fine, const DecoratedForest& coarse);

/// Index-notation elementary differential, e.g. "phi_i f^{p1,i}_{i1} f^{p1,i1}".
std::string elementary_differential_string(const DecoratedForest& f);

/// Inverse of elementary_differential_string (any index names).
DecoratedForest parse_differential(std::string_view text);

/// Runge-Kutta coefficient a(π): sum over stage assignments of the expectation
/// of the z/Z product, noise class k bound to noise label labels[k-1]
/// (default 1, 2, ...). Expectations are exact over the atom table.
double rk_coefficient_map(const MethodTableau& t, const DecoratedForest& f, const std::vector<std::size_t>& labels = {});

}  // namespace srk

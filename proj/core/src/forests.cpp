#include "srk/forests.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>

#include "srk/errors.hpp"

namespace srk {

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

constexpr std::string_view kDot = "\xC2\xB7";  // U+00B7

using Node = DecoratedForest::Node;

std::vector<std::vector<std::size_t>> child_lists(const std::vector<Node>& nodes) {
    std::vector<std::vector<std::size_t>> ch(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (nodes[v].parent >= 0) ch[static_cast<std::size_t>(nodes[v].parent)].push_back(v);
    }
    return ch;
}

void check_structure(const std::vector<Node>& raw) {
    const auto n = static_cast<int>(raw.size());
    std::map<int, int> class_sizes;
    for (int v = 0; v < n; ++v) {
        const Node& node = raw[static_cast<std::size_t>(v)];
        if (node.parent < -1 || node.parent >= n) {
            throw StructureError("node " + std::to_string(v) + " has out-of-range parent " +
                                 std::to_string(node.parent));
        }
        if (node.decoration < 0) throw StructureError("node " + std::to_string(v) + " has a negative decoration");
        if (node.decoration > 0) ++class_sizes[node.decoration];
        int steps = 0;
        for (int u = node.parent; u >= 0; u = raw[static_cast<std::size_t>(u)].parent) {
            if (++steps > n || u == v) throw StructureError("parent relation has a cycle through node " + std::to_string(v));
        }
    }
    for (const auto& [cls, size] : class_sizes) {
        if (size % 2 != 0) {
            throw StructureError("decoration class " + std::to_string(cls) + " has odd size " + std::to_string(size));
        }
    }
}

std::string encode_tree(std::size_t v, const std::vector<Node>& nodes, const std::vector<std::vector<std::size_t>>& ch,
                        const std::vector<int>& relabel) {
    std::vector<std::string> parts;
    parts.reserve(ch[v].size());
    for (std::size_t c : ch[v]) parts.push_back(encode_tree(c, nodes, ch, relabel));
    std::sort(parts.begin(), parts.end());
    std::string s = "[" + std::to_string(relabel[static_cast<std::size_t>(nodes[v].decoration)]);
    for (auto& p : parts) s += p;
    s += "]";
    return s;
}

std::string encode_forest(const std::vector<Node>& nodes, const std::vector<std::vector<std::size_t>>& ch,
                          const std::vector<int>& relabel) {
    if (nodes.empty()) return "1";
    std::vector<std::string> trees;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (nodes[v].parent < 0) trees.push_back(encode_tree(v, nodes, ch, relabel));
    }
    std::sort(trees.begin(), trees.end());
    std::string s;
    for (std::size_t i = 0; i < trees.size(); ++i) {
        if (i > 0) s += kDot;
        s += trees[i];
    }
    return s;
}

// Reads the bracket notation into nodes in text preorder, without canonicalizing.
class TextReader {
public:
    explicit TextReader(std::string_view text) : text_(text) {}

    std::vector<Node> read() {
        skip_space();
        if (pos_ == text_.size() || (text_.substr(pos_) == "1")) return {};
        for (;;) {
            tree(-1);
            skip_space();
            if (pos_ == text_.size()) break;
            if (text_.substr(pos_, kDot.size()) == kDot) {
                pos_ += kDot.size();
            } else if (text_[pos_] == '.' || text_[pos_] == '*') {
                ++pos_;
            } else {
                fail("expected a separator");
            }
            skip_space();
        }
        return nodes_;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<Node> nodes_;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("bad forest '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    void tree(int parent) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != '[') fail("expected '['");
        ++pos_;
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a decoration");
        if (pos_ - start > 6) fail("decoration too large");
        const int dec = std::stoi(std::string(text_.substr(start, pos_ - start)));
        const int self = static_cast<int>(nodes_.size());
        nodes_.push_back({parent, dec});
        for (;;) {
            skip_space();
            if (pos_ >= text_.size()) fail("unterminated tree");
            if (text_[pos_] == ']') {
                ++pos_;
                return;
            }
            tree(self);
        }
    }
};

}  // namespace

DecoratedForest::DecoratedForest() : key_("1") {}

DecoratedForest DecoratedForest::from_nodes(const std::vector<Node>& raw) {
    check_structure(raw);
    DecoratedForest f;
    if (raw.empty()) return f;

    std::vector<int> classes;
    int max_dec = 0;
    for (const auto& n : raw) {
        max_dec = std::max(max_dec, n.decoration);
        if (n.decoration > 0) classes.push_back(n.decoration);
    }
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    const auto ch = child_lists(raw);
    std::vector<int> perm(classes.size());
    std::iota(perm.begin(), perm.end(), 1);
    std::vector<int> relabel(static_cast<std::size_t>(max_dec) + 1, 0);
    std::string best;
    do {
        for (std::size_t k = 0; k < classes.size(); ++k) relabel[static_cast<std::size_t>(classes[k])] = perm[k];
        std::string s = encode_forest(raw, ch, relabel);
        if (best.empty() || s < best) best = std::move(s);
    } while (std::next_permutation(perm.begin(), perm.end()));

    f.key_ = best;
    f.nodes_ = TextReader(best).read();
    return f;
}

DecoratedForest DecoratedForest::parse(std::string_view text) { return from_nodes(TextReader(text).read()); }

int DecoratedForest::order() const {
    int black = 0;
    int noise = 0;
    for (const auto& n : nodes_) (n.decoration == 0 ? black : noise)++;
    return black + noise / 2;
}

bool DecoratedForest::is_exotic() const {
    std::map<int, int> sizes;
    for (const auto& n : nodes_) {
        if (n.decoration > 0) ++sizes[n.decoration];
    }
    return std::all_of(sizes.begin(), sizes.end(), [](const auto& kv) { return kv.second == 2; });
}

int DecoratedForest::class_count() const {
    int k = 0;
    for (const auto& n : nodes_) k = std::max(k, n.decoration);
    return k;
}

std::vector<std::size_t> DecoratedForest::roots() const {
    std::vector<std::size_t> r;
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
        if (nodes_[v].parent < 0) r.push_back(v);
    }
    return r;
}

std::vector<std::vector<std::size_t>> DecoratedForest::children() const { return child_lists(nodes_); }

std::strong_ordering operator<=>(const DecoratedForest& a, const DecoratedForest& b) {
    if (auto c = a.order() <=> b.order(); c != 0) return c;
    return a.key_ <=> b.key_;
}

DecoratedForest canonicalize(const std::vector<DecoratedForest::Node>& raw) { return DecoratedForest::from_nodes(raw); }

DecoratedForest concatenate(const DecoratedForest& a, const DecoratedForest& b) {
    std::vector<Node> raw = a.nodes();
    const int offset = static_cast<int>(raw.size());
    const int shift = a.class_count();
    for (const auto& n : b.nodes()) {
        raw.push_back({n.parent < 0 ? -1 : n.parent + offset, n.decoration > 0 ? n.decoration + shift : 0});
    }
    return DecoratedForest::from_nodes(raw);
}

std::uint64_t symmetry(const DecoratedForest& f) {
    const auto& nodes = f.nodes();
    const std::size_t n = nodes.size();
    if (n == 0) return 1;
    const auto ch = f.children();
    std::vector<std::size_t> subtree(n, 1);
    for (std::size_t v = n; v-- > 0;) {
        for (std::size_t c : ch[v]) subtree[v] += subtree[c];
    }
    const std::size_t k = static_cast<std::size_t>(f.class_count());
    std::vector<int> image(n, -1);
    std::vector<bool> used(n, false);
    std::vector<int> kappa(k + 1, -1), kappa_inv(k + 1, -1);
    kappa[0] = kappa_inv[0] = 0;

    // Nodes are in preorder, so every parent is mapped before its children.
    std::function<std::uint64_t(std::size_t)> extend = [&](std::size_t v) -> std::uint64_t {
        if (v == n) return 1;
        std::uint64_t total = 0;
        const int pv = nodes[v].parent;
        const int dv = nodes[v].decoration;
        for (std::size_t u = 0; u < n; ++u) {
            if (used[u] || subtree[u] != subtree[v] || ch[u].size() != ch[v].size()) continue;
            const int pu = nodes[u].parent;
            if ((pv < 0) != (pu < 0)) continue;
            if (pv >= 0 && image[static_cast<std::size_t>(pv)] != pu) continue;
            const int du = nodes[u].decoration;
            if ((dv == 0) != (du == 0)) continue;
            bool fresh = false;
            if (dv > 0) {
                const auto dvs = static_cast<std::size_t>(dv);
                const auto dus = static_cast<std::size_t>(du);
                if (kappa[dvs] >= 0) {
                    if (kappa[dvs] != du) continue;
                } else {
                    if (kappa_inv[dus] >= 0) continue;
                    kappa[dvs] = du;
                    kappa_inv[dus] = dv;
                    fresh = true;
                }
            }
            image[v] = static_cast<int>(u);
            used[u] = true;
            total += extend(v + 1);
            used[u] = false;
            image[v] = -1;
            if (fresh) {
                kappa_inv[static_cast<std::size_t>(du)] = -1;
                kappa[static_cast<std::size_t>(dv)] = -1;
            }
        }
        return total;
    };
    return extend(0);
}

namespace {

// Rooted forest shapes with n nodes, one representative each.
std::vector<std::vector<Node>> forest_shapes(std::size_t n) {
    std::set<std::string> seen;
    std::vector<std::vector<Node>> shapes;
    std::vector<Node> raw(n);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            DecoratedForest f = DecoratedForest::from_nodes(raw);
            if (seen.insert(f.key()).second) shapes.push_back(f.nodes());
            return;
        }
        for (int p = -1; p < static_cast<int>(i); ++p) {
            raw[i] = {p, 0};
            rec(i + 1);
        }
    };
    rec(0);
    return shapes;
}

}  // namespace

std::vector<DecoratedForest> enumerate_forests(int max_order, bool exotic_only) {
    if (max_order > kMaxEnumerationOrder) {
        throw CapacityError("enumerate_forests: max_order " + std::to_string(max_order) + " exceeds " +
                            std::to_string(kMaxEnumerationOrder));
    }
    std::map<std::string, DecoratedForest> found;
    for (std::size_t n = 1; n <= static_cast<std::size_t>(2 * std::max(max_order, 0)); ++n) {
        for (const auto& shape : forest_shapes(n)) {
            std::vector<Node> raw = shape;
            std::vector<int> sizes;  // sizes[c-1] = nodes in class c
            std::function<void(std::size_t, int)> rec = [&](std::size_t i, int black) {
                if (i == n) {
                    int noise = 0;
                    for (int s : sizes) {
                        if (s % 2 != 0 || (exotic_only && s != 2)) return;
                        noise += s;
                    }
                    if (black + noise / 2 > max_order) return;
                    DecoratedForest f = DecoratedForest::from_nodes(raw);
                    found.emplace(f.key(), f);
                    return;
                }
                raw[i].decoration = 0;
                rec(i + 1, black + 1);
                for (std::size_t c = 0; c <= sizes.size(); ++c) {
                    const bool fresh = c == sizes.size();
                    if (fresh) sizes.push_back(0);
                    if (!(exotic_only && sizes[c] >= 2)) {
                        ++sizes[c];
                        raw[i].decoration = static_cast<int>(c) + 1;
                        rec(i + 1, black);
                        --sizes[c];
                    }
                    if (fresh) sizes.pop_back();
                }
            };
            rec(0, 0);
        }
    }
    std::vector<DecoratedForest> out;
    out.reserve(found.size());
    for (auto& [key, f] : found) out.push_back(std::move(f));
    std::sort(out.begin(), out.end());
    return out;
}

ForestSum::ForestSum(const DecoratedForest& f, Rational coefficient) { add(f, coefficient); }

void ForestSum::add(const DecoratedForest& f, Rational coefficient) {
    if (coefficient.numerator() == 0) return;
    auto it = terms_.find(f.key());
    if (it == terms_.end()) {
        terms_.emplace(f.key(), std::make_pair(f, coefficient));
        return;
    }
    it->second.second += coefficient;
    if (it->second.second.numerator() == 0) terms_.erase(it);
}

Rational ForestSum::coefficient(const DecoratedForest& f) const {
    auto it = terms_.find(f.key());
    return it == terms_.end() ? Rational(0) : it->second.second;
}

int ForestSum::homogeneous_order() const {
    int order = -1;
    for (const auto& [key, term] : terms_) {
        const int o = term.first.order();
        if (order >= 0 && o != order) return -1;
        order = o;
    }
    return order;
}

ForestSum& ForestSum::operator+=(const ForestSum& other) {
    for (const auto& [key, term] : other.terms_) add(term.first, term.second);
    return *this;
}

ForestSum& ForestSum::operator*=(Rational scalar) {
    if (scalar.numerator() == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [key, term] : terms_) term.second *= scalar;
    return *this;
}

Rational CoefficientMap::operator()(const DecoratedForest& f) const { return at(f.key()); }

Rational CoefficientMap::at(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? Rational(0) : it->second;
}

void CoefficientMap::set(const DecoratedForest& f, Rational value) {
    if (value.numerator() == 0) {
        values_.erase(f.key());
    } else {
        values_[f.key()] = value;
    }
}

}  // namespace srk

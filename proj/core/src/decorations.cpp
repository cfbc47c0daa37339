#include <algorithm>
#include <functional>
#include <map>

#include "srk/errors.hpp"
#include "srk/forests.hpp"

namespace srk {

namespace {

using Node = DecoratedForest::Node;
using Partition = std::vector<int>;  // block id per element, restricted growth

// Partitions of `items` into blocks of even size (size 2 when pairs_only).
void even_partitions(const std::vector<std::size_t>& items, bool pairs_only,
                     const std::function<void(const std::vector<std::vector<std::size_t>>&)>& emit) {
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<bool> taken(items.size(), false);
    std::function<void()> rec = [&]() {
        std::size_t first = 0;
        while (first < items.size() && taken[first]) ++first;
        if (first == items.size()) {
            emit(blocks);
            return;
        }
        taken[first] = true;
        std::vector<std::size_t> rest;
        for (std::size_t i = first + 1; i < items.size(); ++i) {
            if (!taken[i]) rest.push_back(i);
        }
        // Choose an odd number of partners among `rest`.
        const std::size_t r = rest.size();
        for (std::size_t mask = 1; mask < (std::size_t{1} << r); ++mask) {
            const auto partners = static_cast<std::size_t>(__builtin_popcountll(mask));
            if (partners % 2 == 0 || (pairs_only && partners != 1)) continue;
            std::vector<std::size_t> block{items[first]};
            for (std::size_t b = 0; b < r; ++b) {
                if (((mask >> b) & 1U) != 0) {
                    block.push_back(items[rest[b]]);
                    taken[rest[b]] = true;
                }
            }
            blocks.push_back(std::move(block));
            rec();
            blocks.pop_back();
            for (std::size_t b = 0; b < r; ++b) {
                if (((mask >> b) & 1U) != 0) taken[rest[b]] = false;
            }
        }
        taken[first] = false;
    };
    rec();
}

// All set partitions of {0..n-1} as restricted growth strings.
std::vector<Partition> set_partitions(std::size_t n) {
    std::vector<Partition> out;
    Partition p(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_block) {
        if (i == n) {
            out.push_back(p);
            return;
        }
        for (int b = 0; b <= max_block + 1; ++b) {
            p[i] = b;
            rec(i + 1, std::max(max_block, b));
        }
    };
    if (n == 0) {
        out.push_back(p);
    } else {
        rec(0, -1);
    }
    return out;
}

int block_count(const Partition& p) { return p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1; }

// True when every block of `fine` lies inside a block of `coarse`.
bool refines(const Partition& fine, const Partition& coarse) {
    for (std::size_t i = 0; i < fine.size(); ++i) {
        for (std::size_t j = i + 1; j < fine.size(); ++j) {
            if (fine[i] == fine[j] && coarse[i] != coarse[j]) return false;
        }
    }
    return true;
}

// Forest whose class c (1-based) is renamed to merge[c-1] + 1.
DecoratedForest merge_classes(const DecoratedForest& f, const Partition& merge) {
    std::vector<Node> raw = f.nodes();
    for (auto& n : raw) {
        if (n.decoration > 0) n.decoration = merge[static_cast<std::size_t>(n.decoration - 1)] + 1;
    }
    return DecoratedForest::from_nodes(raw);
}

std::vector<Refinement> tally(const std::map<std::string, Refinement>& acc) {
    std::vector<Refinement> out;
    for (const auto& [key, r] : acc) out.push_back(r);
    std::sort(out.begin(), out.end(), [](const Refinement& a, const Refinement& b) { return a.forest < b.forest; });
    return out;
}

}  // namespace

std::vector<Refinement> finer_decorations(const DecoratedForest& f, bool exotic_only) {
    const auto& nodes = f.nodes();
    const int k = f.class_count();
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (nodes[v].decoration > 0) members[static_cast<std::size_t>(nodes[v].decoration - 1)].push_back(v);
    }
    std::map<std::string, Refinement> acc;
    std::vector<Node> raw = nodes;
    std::function<void(std::size_t, int)> per_class = [&](std::size_t c, int next_label) {
        if (c == members.size()) {
            DecoratedForest g = DecoratedForest::from_nodes(raw);
            auto [it, inserted] = acc.try_emplace(g.key(), Refinement{g, 0});
            ++it->second.multiplicity;
            return;
        }
        even_partitions(members[c], exotic_only, [&](const std::vector<std::vector<std::size_t>>& blocks) {
            int label = next_label;
            for (const auto& block : blocks) {
                for (std::size_t v : block) raw[v].decoration = label;
                ++label;
            }
            per_class(c + 1, label);
        });
    };
    per_class(0, 1);
    return tally(acc);
}

std::vector<Refinement> coarser_decorations(const DecoratedForest& f) {
    std::map<std::string, Refinement> acc;
    for (const auto& p : set_partitions(static_cast<std::size_t>(f.class_count()))) {
        DecoratedForest g = merge_classes(f, p);
        auto [it, inserted] = acc.try_emplace(g.key(), Refinement{g, 0});
        ++it->second.multiplicity;
    }
    return tally(acc);
}

std::int64_t moebius(const DecoratedForest& fine, const DecoratedForest& coarse) {
    const auto k = static_cast<std::size_t>(fine.class_count());
    const auto all = set_partitions(k);
    const Partition* top = nullptr;
    for (const auto& p : all) {
        if (merge_classes(fine, p) == coarse) {
            top = &p;
            break;
        }
    }
    if (top == nullptr) {
        throw PosetError("moebius: " + fine.key() + " is not a refinement of " + coarse.key());
    }
    // Interval [fine, top] in the partition lattice of fine's classes, finest first.
    std::vector<Partition> interval;
    for (const auto& p : all) {
        if (refines(p, *top)) interval.push_back(p);
    }
    std::stable_sort(interval.begin(), interval.end(),
                     [](const Partition& a, const Partition& b) { return block_count(a) > block_count(b); });
    std::vector<std::int64_t> mu(interval.size(), 0);
    for (std::size_t x = 0; x < interval.size(); ++x) {
        if (x == 0) {
            mu[x] = 1;  // the discrete partition, i.e. `fine` itself
            continue;
        }
        std::int64_t s = 0;
        for (std::size_t y = 0; y < x; ++y) {
            if (interval[y] != interval[x] && refines(interval[y], interval[x])) s += mu[y];
        }
        mu[x] = -s;
    }
    return mu.back();
}

}  // namespace srk

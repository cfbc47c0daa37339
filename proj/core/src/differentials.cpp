#include <cctype>
#include <functional>
#include <map>
#include <sstream>

#include "srk/errors.hpp"
#include "srk/forests.hpp"

namespace srk {

namespace {

std::string root_name(std::size_t r) {
    static const std::string letters = "ijklmnopqrstuvwxyzabcdefgh";
    if (r < letters.size()) return std::string(1, letters[r]);
    return "r" + std::to_string(r);
}

std::string decoration_name(int d) { return d == 0 ? "0" : "p" + std::to_string(d); }

// Splits "i1j2k" into {"i1", "j2", "k"}: a letter followed by digits.
std::vector<std::string> split_indices(std::string_view s, std::string_view context) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!std::isalpha(static_cast<unsigned char>(s[i]))) {
            throw ParseError("bad index list '" + std::string(s) + "' in '" + std::string(context) + "'");
        }
        std::size_t j = i + 1;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

std::string elementary_differential_string(const DecoratedForest& f) {
    const auto& nodes = f.nodes();
    const auto ch = f.children();
    const auto roots = f.roots();
    std::vector<std::string> name(nodes.size());
    std::string head = "phi";
    if (!roots.empty()) head += "_";
    std::vector<std::string> terms;
    for (std::size_t r = 0; r < roots.size(); ++r) {
        const std::string base = root_name(r);
        head += base;
        int counter = 0;
        std::function<void(std::size_t)> number = [&](std::size_t v) {
            name[v] = v == roots[r] ? base : base + std::to_string(counter);
            ++counter;
            for (std::size_t c : ch[v]) number(c);
        };
        number(roots[r]);
        std::function<void(std::size_t)> emit = [&](std::size_t v) {
            std::string t = "f^{" + decoration_name(nodes[v].decoration) + "," + name[v] + "}";
            if (!ch[v].empty()) {
                t += "_{";
                for (std::size_t c : ch[v]) t += name[c];
                t += "}";
            }
            terms.push_back(std::move(t));
            for (std::size_t c : ch[v]) emit(c);
        };
        emit(roots[r]);
    }
    std::string out = head;
    for (const auto& t : terms) out += " " + t;
    return out;
}

DecoratedForest parse_differential(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string token;
    if (!(in >> token) || token.rfind("phi", 0) != 0) {
        throw ParseError("differential must start with phi: '" + std::string(text) + "'");
    }
    std::vector<std::string> roots;
    if (token.size() > 3) {
        if (token[3] != '_') throw ParseError("bad head '" + token + "'");
        std::string idx = token.substr(4);
        if (!idx.empty() && idx.front() == '{' && idx.back() == '}') idx = idx.substr(1, idx.size() - 2);
        roots = split_indices(idx, text);
    }

    struct Term {
        int decoration;
        std::vector<std::string> children;
    };
    std::map<std::string, Term> terms;
    std::vector<std::string> order;
    while (in >> token) {
        // f^{DEC,OWN} optionally followed by _{CHILDREN} or _CHILD
        if (token.rfind("f^{", 0) != 0) throw ParseError("bad factor '" + token + "'");
        const auto close = token.find('}');
        const auto comma = token.find(',');
        if (close == std::string::npos || comma == std::string::npos || comma > close) {
            throw ParseError("bad factor '" + token + "'");
        }
        const std::string dec = token.substr(3, comma - 3);
        const std::string own = token.substr(comma + 1, close - comma - 1);
        int d = 0;
        try {
            if (!dec.empty() && dec[0] == 'p') {
                d = std::stoi(dec.substr(1));
                if (d <= 0) throw ParseError("bad decoration '" + dec + "'");
            } else {
                d = std::stoi(dec);
            }
        } catch (const std::logic_error&) {
            throw ParseError("bad decoration '" + dec + "' in '" + token + "'");
        }
        std::vector<std::string> children;
        std::string rest = token.substr(close + 1);
        if (!rest.empty()) {
            if (rest[0] != '_') throw ParseError("bad factor '" + token + "'");
            rest = rest.substr(1);
            if (!rest.empty() && rest.front() == '{') {
                if (rest.back() != '}') throw ParseError("bad factor '" + token + "'");
                rest = rest.substr(1, rest.size() - 2);
            }
            children = split_indices(rest, text);
        }
        if (split_indices(own, text).size() != 1) throw ParseError("bad own index in '" + token + "'");
        if (!terms.emplace(own, Term{d, children}).second) throw ParseError("index '" + own + "' defined twice");
        order.push_back(own);
    }

    std::map<std::string, int> index;
    for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = static_cast<int>(i);
    std::vector<DecoratedForest::Node> raw(order.size());
    std::vector<int> references(order.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Term& t = terms[order[i]];
        raw[i].decoration = t.decoration;
        for (const auto& c : t.children) {
            auto it = index.find(c);
            if (it == index.end()) throw ParseError("index '" + c + "' has no factor");
            raw[static_cast<std::size_t>(it->second)].parent = static_cast<int>(i);
            ++references[static_cast<std::size_t>(it->second)];
        }
    }
    for (const auto& r : roots) {
        auto it = index.find(r);
        if (it == index.end()) throw ParseError("root index '" + r + "' has no factor");
        ++references[static_cast<std::size_t>(it->second)];
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (references[i] != 1) {
            throw ParseError("index '" + order[i] + "' must appear exactly once as a root or a child");
        }
    }
    return DecoratedForest::from_nodes(raw);
}

}  // namespace srk

#include "srk/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "srk/conditions.hpp"
#include "srk/errors.hpp"

namespace srk {

std::string_view to_string(Calculus c) { return c == Calculus::Ito ? "ito" : "stratonovich"; }

std::string_view to_string(Structure s) {
    switch (s) {
        case Structure::Explicit: return "explicit";
        case Structure::DiagonallyImplicit: return "diagonally_implicit";
        case Structure::IMEX: return "imex";
        case Structure::Implicit: return "implicit";
    }
    return "explicit";
}

Calculus calculus_from_string(std::string_view s) {
    if (s == "ito") return Calculus::Ito;
    if (s == "stratonovich") return Calculus::Stratonovich;
    throw ParseError("unknown calculus '" + std::string(s) + "' (expected ito|stratonovich)");
}

Structure structure_from_string(std::string_view s) {
    for (auto v : {Structure::Explicit, Structure::DiagonallyImplicit, Structure::IMEX, Structure::Implicit}) {
        if (s == to_string(v)) return v;
    }
    throw ParseError("unknown structure '" + std::string(s) +
                     "' (expected explicit|diagonally_implicit|imex|implicit)");
}

namespace {

// Graph nodes: drift stages 0..s1-1, stochastic stages s1..s1+s2-1.
struct DependencyGraph {
    std::size_t s1;
    std::size_t s2;
    std::vector<std::vector<std::size_t>> deps;
    std::vector<bool> self_loop;
};

DependencyGraph build_graph(const MethodTableau& t) {
    DependencyGraph g{t.s1, t.s2, std::vector<std::vector<std::size_t>>(t.s1 + t.s2),
                      std::vector<bool>(t.s1 + t.s2, false)};
    auto link = [&](std::size_t from, std::size_t to) {
        if (from == to) {
            g.self_loop[from] = true;
        }
        g.deps[from].push_back(to);
    };
    for (std::size_t i = 0; i < t.s1; ++i) {
        for (std::size_t j = 0; j < t.s1; ++j) {
            if (t.A0(i, j) != 0.0) link(i, j);
        }
        for (std::size_t j = 0; j < t.s2; ++j) {
            if (t.B0(i, j) != 0.0) link(i, t.s1 + j);
        }
    }
    for (std::size_t j = 0; j < t.s2; ++j) {
        for (std::size_t k = 0; k < t.s1; ++k) {
            if (t.A1(j, k) != 0.0) link(t.s1 + j, k);
        }
        for (std::size_t k = 0; k < t.s2; ++k) {
            bool nz = t.B1(j, k) != 0.0 || (t.Bhat1 && (*t.Bhat1)(j, k) != 0.0);
            if (nz) link(t.s1 + j, t.s1 + k);
        }
    }
    return g;
}

StageRef to_ref(const DependencyGraph& g, std::size_t node) {
    return node < g.s1 ? StageRef{StageKind::Drift, node} : StageRef{StageKind::Stochastic, node - g.s1};
}

}  // namespace

StageSchedule compute_schedule(const MethodTableau& t) {
    const DependencyGraph g = build_graph(t);
    const std::size_t n = t.s1 + t.s2;

    // Stages whose field values reach the update, directly or through other stages.
    std::vector<bool> needed(n, false);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < t.s1; ++i) {
        if (t.alpha[i] != 0.0) {
            needed[i] = true;
            stack.push_back(i);
        }
    }
    for (std::size_t j = 0; j < t.s2; ++j) {
        if (t.beta[j] != 0.0) {
            needed[t.s1 + j] = true;
            stack.push_back(t.s1 + j);
        }
    }
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t w : g.deps[v]) {
            if (!needed[w]) {
                needed[w] = true;
                stack.push_back(w);
            }
        }
    }

    // Tarjan: components are emitted after everything they depend on.
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> tstack;
    int counter = 0;
    StageSchedule schedule;
    std::function<void(std::size_t)> strongconnect = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        tstack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w : g.deps[v]) {
            if (!needed[w]) continue;
            if (index[w] < 0) {
                strongconnect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::size_t> members;
            std::size_t w = 0;
            do {
                w = tstack.back();
                tstack.pop_back();
                on_stack[w] = false;
                members.push_back(w);
            } while (w != v);
            std::sort(members.begin(), members.end());
            StageBlock block;
            block.implicit = members.size() > 1 || g.self_loop[members.front()];
            for (std::size_t mbr : members) block.stages.push_back(to_ref(g, mbr));
            schedule.blocks.push_back(std::move(block));
        }
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (needed[v] && index[v] < 0) strongconnect(v);
    }
    schedule.drift_needed.assign(needed.begin(), needed.begin() + static_cast<std::ptrdiff_t>(t.s1));
    schedule.stochastic_needed.assign(needed.begin() + static_cast<std::ptrdiff_t>(t.s1), needed.end());
    return schedule;
}

Structure StageSchedule::inferred_structure() const {
    bool any_implicit = false;
    bool drift_implicit = false;
    bool stoch_implicit = false;
    for (const auto& b : blocks) {
        if (!b.implicit) continue;
        any_implicit = true;
        if (b.stages.size() > 1) return Structure::Implicit;
        (b.stages.front().kind == StageKind::Drift ? drift_implicit : stoch_implicit) = true;
    }
    if (!any_implicit) return Structure::Explicit;
    if (drift_implicit != stoch_implicit) return Structure::IMEX;
    return Structure::DiagonallyImplicit;
}

void ValidationReport::add(Severity s, std::string message) {
    if (s == Severity::Error) ok = false;
    findings.push_back({s, std::move(message)});
}

namespace {

bool covers(Structure declared, Structure inferred) {
    switch (declared) {
        case Structure::Implicit: return true;
        case Structure::DiagonallyImplicit: return inferred != Structure::Implicit;
        case Structure::IMEX: return inferred == Structure::Explicit || inferred == Structure::IMEX;
        case Structure::Explicit: return inferred == Structure::Explicit;
    }
    return false;
}

std::string shape(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

ValidationReport validate(const MethodTableau& t) {
    ValidationReport report;
    if (t.s1 == 0 || t.s2 == 0) {
        report.add(Severity::Error, "stage counts must be positive (s1=" + std::to_string(t.s1) +
                                        ", s2=" + std::to_string(t.s2) + ")");
        return report;
    }
    auto check_vec = [&](const Vector& v, std::size_t n, const char* name) {
        if (v.size() != n) {
            report.add(Severity::Error, std::string(name) + " has length " + std::to_string(v.size()) +
                                            ", expected " + std::to_string(n));
        }
    };
    auto check_mat = [&](const Matrix& m, std::size_t r, std::size_t c, const char* name) {
        if (m.rows() != r || m.cols() != c) {
            report.add(Severity::Error, std::string(name) + " is " + shape(m.rows(), m.cols()) + ", expected " +
                                            shape(r, c));
        }
    };
    check_vec(t.alpha, t.s1, "alpha");
    check_vec(t.beta, t.s2, "beta");
    check_mat(t.A0, t.s1, t.s1, "A0");
    check_mat(t.B0, t.s1, t.s2, "B0");
    check_mat(t.A1, t.s2, t.s1, "A1");
    check_mat(t.B1, t.s2, t.s2, "B1");
    if (t.calculus == Calculus::Stratonovich && !t.Bhat1) {
        report.add(Severity::Error, "Stratonovich method requires Bhat1");
    }
    if (t.calculus == Calculus::Ito && t.Bhat1) {
        report.add(Severity::Error, "Bhat1 is only defined for Stratonovich methods");
    }
    if (t.Bhat1) check_mat(*t.Bhat1, t.s2, t.s2, "Bhat1");
    if (!(t.c > 0.0 && t.c <= 0.5)) {
        report.add(Severity::Error, "c=" + std::to_string(t.c) + " is outside (0, 1/2]");
    }
    if (!report.ok) return report;

    auto all_finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    bool finite = all_finite(t.alpha) && all_finite(t.beta) && all_finite(t.A0.data()) &&
                  all_finite(t.B0.data()) && all_finite(t.A1.data()) && all_finite(t.B1.data()) &&
                  (!t.Bhat1 || all_finite(t.Bhat1->data()));
    if (!finite) {
        report.add(Severity::Error, "coefficients must be finite");
        return report;
    }

    const Structure inferred = compute_schedule(t).inferred_structure();
    if (!covers(t.structure, inferred)) {
        report.add(Severity::Error, "declared structure '" + std::string(to_string(t.structure)) +
                                        "' is inconsistent with the stage coupling ('" +
                                        std::string(to_string(inferred)) + "')");
    }

    if (t.weak_order >= 2) {
        const ConditionReport reduced = check_reduced(t);
        for (const auto& r : reduced.records) {
            if (r.satisfied) continue;
            std::ostringstream msg;
            msg.precision(17);
            msg << "declared weak order " << t.weak_order << " but reduced condition " << r.id << " ("
                << r.description << ") fails: lhs=" << r.lhs << " target=" << r.target;
            report.add(Severity::Warning, msg.str());
        }
    }
    return report;
}

}  // namespace srk

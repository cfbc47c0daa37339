// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

#include "srk/srk.hpp"

using namespace srk;

namespace {

constexpr std::uint64_t kSeed = 20240601;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << std::endl;
    if (!ok) ++failures;
}

std::vector<double> powers_of_half(int from, int to) {
    std::vector<double> h;
    for (int k = from; k <= to; ++k) h.push_back(std::ldexp(1.0, -k));
    return h;
}

std::string fmt(double v, int prec = 3) {
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

void criterion1() {
    const auto t0 = Clock::now();
    bool ok = true;
    double worst = 0.0;
    int methods = 0;
    for (const auto& name : registry_names()) {
        const MethodTableau t = registry_get(name);
        if (t.weak_order != 2) continue;
        ++methods;
        const ConditionReport r = check_all_table(t, 1e-12);
        ok = ok && r.all_satisfied && r.records.size() == 43;
        for (const auto& rec : r.records) worst = std::max(worst, std::abs(rec.residual()));
        if (!r.all_satisfied) std::cout << "  " << name << ": " << r.failures() << " table conditions violated\n";
    }
    const double secs = seconds_since(t0);
    report(1, ok && secs < 10.0,
           std::to_string(methods) + " methods x 43 table conditions, max residual " + fmt(worst) + ", " + fmt(secs) +
               " s");
}

void criterion2() {
    bool ok = true;
    double worst = 0.0;
    const std::map<std::string, std::size_t> expected_count = {
        {"BDK1", 10}, {"BDK2", 10}, {"BDK3", 9}, {"StratoExplicit24", 27}, {"StratoDetOrder3", 27}};
    for (const auto& name : registry_names()) {
        const MethodTableau t = registry_get(name);
        if (t.weak_order != 2) continue;
        const ConditionReport r = check_reduced(t, 1e-13);
        for (const auto& rec : r.records) worst = std::max(worst, std::abs(rec.residual()));
        bool good = r.all_satisfied;
        if (auto it = expected_count.find(name); it != expected_count.end()) good = good && r.records.size() == it->second;
        if (!good) std::cout << "  " << name << ": reduced conditions fail (" << r.records.size() << " records)\n";
        ok = ok && good;
    }
    report(2, ok, "reduced conditions for every weak order 2 method, max residual " + fmt(worst));
}

void criterion3() {
    const auto t0 = Clock::now();
    int matched = 0;
    bool ok = true;
    for (Calculus c : {Calculus::Ito, Calculus::Stratonovich}) {
        const CoefficientMap e = gl_exponential(generator(c), 2);
        const CoefficientMap conv = convolution_exp(generator_map(c), 2);
        for (const auto& row : condition_table()) {
            const bool m = e(row.forest) == row.target(c);
            matched += m ? 1 : 0;
            ok = ok && m;
            if (!row.isserlis) ok = ok && conv(row.forest) == e(row.forest);
        }
        for (const auto& f : enumerate_forests(2, true)) ok = ok && conv(f) == e(f);
    }
    const std::size_t order1 = enumerate_forests(1, true).size();
    const std::size_t exotic2 = enumerate_forests(2, true).size();
    std::size_t decorated = 0;
    for (const auto& f : enumerate_forests(2, false)) {
        if (f.is_exotic()) continue;
        ++decorated;
        bool in_table = false;
        for (const auto& row : condition_table()) in_table = in_table || (row.isserlis && row.forest == f);
        ok = ok && in_table;
    }
    ok = ok && matched == 86 && order1 == 3 && exotic2 == 34 && decorated == 9;
    const double secs = seconds_since(t0);
    report(3, ok && secs < 5.0,
           std::to_string(matched) + "/86 table values, convolution duality, forests " + std::to_string(order1) + "/" +
               std::to_string(exotic2) + "/" + std::to_string(decorated) + ", " + fmt(secs) + " s");
}

ConvergenceTable converge(const std::string& problem, const std::string& method, const std::vector<double>& h,
                          std::size_t batches, std::size_t per_batch) {
    const MethodTableau t = registry_get(method);
    const BenchmarkProblem p = make_problem(problem, t.calculus);
    SamplingOptions s;
    s.n_batches = batches;
    s.n_per_batch = per_batch;
    s.seed = kSeed;
    const ConvergenceTable table = run_convergence(p, t, h, s);
    for (const auto& r : table.records) {
        std::printf("  %-14s %-16s h=%-10g E=%-12.6g stderr=%-10.3g err=%.3g\n", method.c_str(), problem.c_str(), r.h,
                    r.estimate, r.std_error, r.abs_error);
    }
    std::fflush(stdout);
    return table;
}

void slope_criterion(int id, const std::string& problem, const std::vector<double>& h,
                     const std::vector<std::tuple<std::string, double, double>>& targets, std::size_t batches,
                     std::size_t per_batch) {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (const auto& [method, lo, hi] : targets) {
        const ConvergenceTable table = converge(problem, method, h, batches, per_batch);
        const bool good = table.slope >= lo && table.slope <= hi;
        ok = ok && good;
        detail += method + " slope " + fmt(table.slope) + " in [" + fmt(lo) + ", " + fmt(hi) + "]" +
                  (good ? "" : " (out of range)") + "; ";
    }
    report(id, ok, problem + ": " + detail + fmt(seconds_since(t0)) + " s");
}

void criterion7() {
    struct Row {
        const char* name;
        std::uint64_t nd;
        std::uint64_t ns;
        std::function<std::uint64_t(std::size_t)> nr;
        std::uint64_t nr_m1;
    };
    const std::vector<Row> rows = {
        {"BDK1", 2, 2, [](std::size_t m) { return m + 1; }, 1},
        {"BDK2", 3, 2, [](std::size_t m) { return m + 1; }, 1},
        {"BDK3", 3, 2, [](std::size_t m) { return 2 * m + 1; }, 2},
    };
    bool ok = true;
    std::string detail;
    for (const auto& row : rows) {
        for (std::size_t m : {1u, 2u, 3u, 5u, 10u}) {
            const EffortCounts e = effort(registry_get(row.name), m);
            const std::uint64_t nr = m == 1 ? row.nr_m1 : row.nr(m);
            const bool good = e.drift_evals == row.nd && e.diffusion_evals == row.ns && e.random_variables == nr &&
                              e.total == row.nd + m * row.ns + nr;
            if (!good) {
                std::cout << "  " << row.name << " m=" << m << ": got (" << e.drift_evals << ", " << e.diffusion_evals
                          << ", " << e.random_variables << ")\n";
            }
            ok = ok && good;
        }
        const EffortCounts e2 = effort(registry_get(row.name), 2);
        detail += std::string(row.name) + " (" + std::to_string(e2.drift_evals) + "," +
                  std::to_string(e2.diffusion_evals) + ") N_r(m=2)=" + std::to_string(e2.random_variables) + "; ";
    }
    report(7, ok, detail + "m = 1, 2, 3, 5, 10");
}

// Criterion 8 helpers.

std::vector<MonomialFactor> degree_one_variables() {
    std::vector<MonomialFactor> v = {MonomialFactor::small_theta(1), MonomialFactor::small_theta(2)};
    for (std::size_t p = 0; p <= 2; ++p) {
        for (std::size_t q = 0; q <= 2; ++q) {
            if (p != 0 || q != 0) v.push_back(MonomialFactor::big_Theta(p, q));
        }
    }
    return v;
}

void for_each_monomial(std::size_t max_degree, const std::function<void(const Monomial&)>& visit) {
    const auto vars = degree_one_variables();
    Monomial current;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t left) {
        if (!current.empty()) visit(current);
        if (left == 0) return;
        for (std::size_t i = start; i < vars.size(); ++i) {
            current.push_back(vars[i]);
            rec(i, left - 1);
            current.pop_back();
        }
    };
    rec(0, max_degree);
}

bool moment_properties(std::size_t& checked) {
    auto swap12 = [](std::size_t p) { return p == 1 ? std::size_t{2} : (p == 2 ? std::size_t{1} : p); };
    bool ok = true;
    const std::vector<RvFamily> families = {RvFamily(Calculus::Ito, 0.5, true), RvFamily(Calculus::Ito, 1.0 / 3, false),
                                            RvFamily(Calculus::Ito, 0.25, false),
                                            RvFamily(Calculus::Stratonovich, 0.5, true),
                                            RvFamily(Calculus::Stratonovich, 0.25, false)};
    for (const auto& f : families) {
        const AtomTable table = enumerate_atoms(f, 2);
        for_each_monomial(5, [&](const Monomial& mono) {
            Monomial swapped = mono;
            unsigned stochastic = 0;
            for (auto& factor : swapped) {
                if (factor.kind == MonomialFactor::Kind::theta ? factor.p != 0 : factor.q != 0) ++stochastic;
                factor.p = swap12(factor.p);
                factor.q = swap12(factor.q);
            }
            const double a = moment(table, mono);
            if (std::abs(a - moment(table, swapped)) > 1e-12 * (1 + std::abs(a))) ok = false;
            if (stochastic % 2 == 1 && std::abs(a) > 1e-12) ok = false;
            ++checked;
        });
    }
    return ok;
}

bool relabeling_stability() {
    std::mt19937_64 rng(kSeed);
    const auto all = enumerate_forests(3, false);
    bool ok = true;
    for (int trial = 0; trial < 500; ++trial) {
        const DecoratedForest& f = all[rng() % all.size()];
        std::vector<std::size_t> perm(f.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> relabel(static_cast<std::size_t>(f.class_count()) + 1);
        std::iota(relabel.begin(), relabel.end(), 0);
        std::shuffle(relabel.begin() + 1, relabel.end(), rng);
        std::vector<DecoratedForest::Node> raw(f.size());
        for (std::size_t v = 0; v < f.size(); ++v) {
            const auto& node = f.nodes()[v];
            raw[perm[v]].parent = node.parent < 0 ? -1 : static_cast<int>(perm[static_cast<std::size_t>(node.parent)]);
            raw[perm[v]].decoration = node.decoration == 0 ? 0 : relabel[static_cast<std::size_t>(node.decoration)];
        }
        ok = ok && DecoratedForest::from_nodes(raw) == f;
    }
    return ok;
}

bool coassociativity(std::size_t& checked) {
    using Triple = std::tuple<std::string, std::string, std::string>;
    bool ok = true;
    for (const auto& f : enumerate_forests(2, true)) {
        std::map<Triple, std::int64_t> left;
        std::map<Triple, std::int64_t> right;
        for (const auto& t : bck_coproduct(f)) {
            for (const auto& u : bck_coproduct(t.left)) left[{u.left.key(), u.right.key(), t.right.key()}] += t.multiplicity * u.multiplicity;
            for (const auto& u : bck_coproduct(t.right)) right[{t.left.key(), u.left.key(), u.right.key()}] += t.multiplicity * u.multiplicity;
        }
        ok = ok && left == right;
        ++checked;
    }
    return ok;
}

bool isserlis_multiplicities(std::size_t& checked) {
    bool ok = true;
    for (const auto& row : condition_table()) {
        if (!row.isserlis) continue;
        const std::uint64_t coarse = symmetry(row.forest);
        for (const auto& r : finer_decorations(row.forest, true)) {
            const std::uint64_t fine = symmetry(r.forest);
            ok = ok && coarse % fine == 0 && static_cast<std::int64_t>(coarse / fine) == r.multiplicity;
            ++checked;
        }
    }
    return ok;
}

void criterion8() {
    std::size_t monomials = 0;
    std::size_t forests = 0;
    std::size_t refinements = 0;
    const bool moments = moment_properties(monomials);
    const bool stable = relabeling_stability();
    const bool coassoc = coassociativity(forests);
    const bool isserlis = isserlis_multiplicities(refinements);
    report(8, moments && stable && coassoc && isserlis,
           "moments " + std::string(moments ? "ok" : "FAIL") + " (" + std::to_string(monomials) +
               " monomials), relabeling " + (stable ? "ok" : "FAIL") + " (500), coassociativity " +
               (coassoc ? "ok" : "FAIL") + " (" + std::to_string(forests) + " forests), multiplicities " +
               (isserlis ? "ok" : "FAIL") + " (" + std::to_string(refinements) + " refinements)");
}

void criterion9() {
    const auto t0 = Clock::now();
    const Potential ou = make_potential("ou");
    const std::size_t steps = 10000000;
    const std::size_t burn = steps / 100;
    const MomentReport quarter = run_invariant_measure(ou, 0.25, steps, burn, kSeed);
    const MomentReport half = run_invariant_measure(ou, 0.5, steps, burn, kSeed);
    const MomentReport quarter2 = run_invariant_measure(ou, 0.25, steps, burn, kSeed);
    const MomentReport half2 = run_invariant_measure(ou, 0.5, steps, burn, kSeed);
    const bool deterministic = quarter.second_moment == quarter2.second_moment && quarter.mean == quarter2.mean &&
                               half.second_moment == half2.second_moment && half.mean == half2.mean;
    const double e25 = *quarter.variance_error;
    const double e50 = *half.variance_error;
    std::printf("  h=0.25 E[x^2]=%.6f +- %.2g   h=0.5 E[x^2]=%.6f +- %.2g\n", quarter.second_moment[0],
                quarter.second_stderr[0], half.second_moment[0], half.second_stderr[0]);
    report(9, e25 < 0.05 && e25 < e50 && deterministic,
           "variance error " + fmt(e25) + " at h=0.25, " + fmt(e50) + " at h=0.5, deterministic " +
               (deterministic ? "yes" : "no") + ", " + fmt(seconds_since(t0)) + " s");
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> criteria = {
        criterion1,
        criterion2,
        criterion3,
        [] {
            slope_criterion(4, "sinh1d", powers_of_half(1, 5),
                            {{"BDK1", 1.6, 2.4}, {"BDK2", 1.6, 2.4}, {"BDK3", 1.6, 2.4}, {"EulerMaruyama", 0.7, 1.3}},
                            100, 10000);
        },
        [] { slope_criterion(5, "tennoise", powers_of_half(1, 4), {{"BDK1", 1.5, 2.5}, {"BDK2", 1.5, 2.5}}, 100, 10000); },
        [] {
            slope_criterion(6, "det_exponential", powers_of_half(1, 5),
                            {{"BDK2", 2.7, 3.3}, {"BDK3", 2.7, 3.3}, {"BDK1", 1.7, 2.3}}, 2, 1);
        },
        criterion7,
        criterion8,
        criterion9,
    };
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
        }
    }
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
    return failures == 0 ? 0 : 1;
}

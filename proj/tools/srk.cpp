#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "srk/srk.hpp"

namespace {

// A registry name, or a path to a method JSON file.
srk::MethodTableau resolve_method(const std::string& name) {
    if (name.ends_with(".json") || std::filesystem::exists(name)) return srk::load_method(name);
    return srk::registry_get(name);
}

std::vector<double> parse_h_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        out.push_back(srk::evaluate_number_expression(item));
    }
    if (out.empty()) throw srk::PreconditionError("--h needs at least one step size");
    return out;
}

// setw pads by bytes; forest keys contain the two byte "·".
std::string pad(const std::string& text, std::size_t width) {
    std::size_t glyphs = 0;
    for (unsigned char ch : text) glyphs += (ch & 0xC0) != 0x80;
    return text + std::string(width > glyphs ? width - glyphs : 1, ' ');
}

int run_check(const std::string& method_name, bool reduced_only, bool table_only, bool as_json) {
    const srk::MethodTableau t = resolve_method(method_name);
    const srk::ValidationReport validation = srk::validate(t);
    std::vector<srk::ConditionReport> reports;
    if (!reduced_only) reports.push_back(srk::check_all_table(t));
    if (!table_only) reports.push_back(srk::check_reduced(t));

    bool ok = validation.ok;
    for (const auto& r : reports) ok = ok && r.all_satisfied;

    if (as_json) {
        nlohmann::json j;
        j["method"] = t.name;
        j["ok"] = ok;
        j["findings"] = nlohmann::json::array();
        for (const auto& f : validation.findings) {
            j["findings"].push_back({{"severity", f.severity == srk::Severity::Error ? "error" : "warning"},
                                     {"message", f.message}});
        }
        j["reports"] = nlohmann::json::array();
        for (const auto& r : reports) j["reports"].push_back(nlohmann::json::parse(srk::render_json(r)));
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& f : validation.findings) {
            std::cout << (f.severity == srk::Severity::Error ? "error: " : "warning: ") << f.message << '\n';
        }
        for (const auto& r : reports) std::cout << srk::render_text(r) << '\n';
        std::cout << (ok ? "all checks pass" : "some checks fail") << '\n';
    }
    return ok ? 0 : 1;
}

int run_converge(const std::string& problem_name, const std::string& method_name, const std::string& h_text,
                 const srk::SamplingOptions& sampling, const std::string& out_path, bool as_json) {
    const srk::MethodTableau t = resolve_method(method_name);
    const srk::BenchmarkProblem p = srk::make_problem(problem_name, t.calculus);
    const srk::ConvergenceTable table = srk::run_convergence(p, t, parse_h_list(h_text), sampling);
    const std::string csv = srk::to_csv(table);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw srk::Error("cannot write " + out_path);
        out << csv;
    }
    if (as_json) {
        std::cout << srk::to_json(table) << '\n';
    } else {
        std::cout << csv << "slope," << std::setprecision(6) << table.slope << '\n';
    }
    return 0;
}

int run_effort(const std::string& method_name, std::size_t m) {
    const srk::MethodTableau t = resolve_method(method_name);
    const srk::EffortCounts e = srk::effort(t, m);
    std::cout << "method " << t.name << "  m " << m << '\n'
              << "N_d " << e.drift_evals << '\n'
              << "N_s " << e.diffusion_evals << '\n'
              << "N_r " << e.random_variables << '\n'
              << "effort " << e.total << '\n';
    return 0;
}

int run_forests(int max_order, bool exotic_only, bool table) {
    const auto e_ito = srk::gl_exponential(srk::generator(srk::Calculus::Ito), max_order);
    const auto e_str = srk::gl_exponential(srk::generator(srk::Calculus::Stratonovich), max_order);
    if (table) {
        bool ok = true;
        std::cout << std::left << std::setw(5) << "id" << std::setw(28) << "forest" << std::setw(8) << "Ito"
                  << std::setw(8) << "Str" << "differential\n";
        for (const auto& row : srk::condition_table()) {
            const bool match = e_ito(row.forest) == row.target_ito && e_str(row.forest) == row.target_strat;
            ok = ok && match;
            std::cout << std::setw(5) << row.id << pad(row.forest.key(), 28) << std::setw(8)
                      << srk::to_string(e_ito(row.forest)) << std::setw(8) << srk::to_string(e_str(row.forest))
                      << srk::elementary_differential_string(row.forest) << (match ? "" : "   MISMATCH") << '\n';
        }
        std::cout << (ok ? "table regenerated" : "table mismatch") << '\n';
        return ok ? 0 : 1;
    }
    const auto forests = srk::enumerate_forests(max_order, exotic_only);
    std::cout << std::left << std::setw(6) << "order" << std::setw(28) << "forest" << std::setw(7) << "sigma"
              << std::setw(8) << "e_Ito" << std::setw(8) << "e_Str" << "differential\n";
    for (const auto& f : forests) {
        std::cout << std::setw(6) << f.order() << pad(f.key(), 28) << std::setw(7) << srk::symmetry(f)
                  << std::setw(8) << srk::to_string(e_ito(f)) << std::setw(8) << srk::to_string(e_str(f))
                  << srk::elementary_differential_string(f) << '\n';
    }
    std::cout << forests.size() << " forests\n";
    return 0;
}

int run_invariant(const std::string& potential_name, double h, std::size_t steps, std::size_t burn_in,
                  std::uint64_t seed) {
    const srk::Potential pot = srk::make_potential(potential_name);
    const srk::MomentReport r = srk::run_invariant_measure(pot, h, steps, burn_in, seed);
    std::cout << std::setprecision(8) << "potential " << r.potential << "  h " << r.h << "  steps " << r.n_steps
              << "  burn_in " << r.burn_in << '\n';
    for (std::size_t i = 0; i < r.mean.size(); ++i) {
        std::cout << "E[x_" << i << "]   " << r.mean[i] << " +- " << r.mean_stderr[i] << '\n';
        std::cout << "E[x_" << i << "^2] " << r.second_moment[i] << " +- " << r.second_stderr[i];
        if (r.exact_second_moment) std::cout << "  exact " << (*r.exact_second_moment)[i];
        std::cout << '\n';
    }
    if (r.variance_error) std::cout << "variance error " << *r.variance_error << '\n';
    std::cout << "force evaluations " << r.force_evaluations << "  diffusion evaluations "
              << r.diffusion_evaluations << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic Runge-Kutta weak order 2 toolkit"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    std::string method;
    bool reduced = false;
    bool table = false;
    bool as_json = false;
    auto* check = app.add_subcommand("check", "Check order conditions of a method (registry name or JSON file)");
    check->add_option("method", method)->required();
    auto* reduced_flag = check->add_flag("--reduced", reduced, "Reduced algebraic conditions only");
    check->add_flag("--table", table, "The 43 forest table conditions only")->excludes(reduced_flag);
    check->add_flag("--json", as_json);

    std::string problem;
    std::string h_text = "0.5,0.25,0.125,0.0625,0.03125";
    srk::SamplingOptions sampling;
    std::string out_path;
    auto* converge = app.add_subcommand("converge", "Monte Carlo weak convergence table");
    converge->add_option("problem", problem)->required();
    converge->add_option("method", method)->required();
    converge->add_option("--h", h_text, "Comma separated step sizes")->capture_default_str();
    converge->add_option("--batches", sampling.n_batches)->capture_default_str();
    converge->add_option("--paths", sampling.n_per_batch, "Paths per batch")->capture_default_str();
    converge->add_option("--seed", sampling.seed)->capture_default_str();
    converge->add_option("--workers", sampling.workers, "0 uses every hardware thread")->capture_default_str();
    converge->add_option("--out", out_path, "CSV output file");
    converge->add_flag("--json", as_json);

    std::size_t m = 1;
    auto* effort = app.add_subcommand("effort", "Per step effort N_d + m N_s + N_r");
    effort->add_option("method", method)->required();
    effort->add_option("--m", m)->check(CLI::PositiveNumber)->capture_default_str();

    int max_order = 2;
    bool exotic = false;
    auto* forests = app.add_subcommand("forests", "Enumerate forests with sigma and exact flow coefficients");
    forests->add_option("--max-order", max_order)->check(CLI::Range(1, srk::kMaxEnumerationOrder))->capture_default_str();
    forests->add_flag("--exotic", exotic);
    forests->add_flag("--table", table, "Regenerate the weak order 2 condition table");

    std::string potential = "ou";
    double h = 0.25;
    std::size_t steps = 1000000;
    std::size_t burn_in = 0;
    std::uint64_t seed = 1;
    auto* invariant = app.add_subcommand("invariant", "Postprocessed Langevin sampling of exp(-V)");
    invariant->add_option("--potential", potential)->capture_default_str();
    invariant->add_option("--h", h)->capture_default_str();
    invariant->add_option("--steps", steps)->capture_default_str();
    invariant->add_option("--burn-in", burn_in, "Defaults to steps/100");
    invariant->add_option("--seed", seed)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(method, reduced, table, as_json);
        if (converge->parsed()) return run_converge(problem, method, h_text, sampling, out_path, as_json);
        if (effort->parsed()) return run_effort(method, m);
        if (forests->parsed()) return run_forests(max_order, exotic, table);
        if (invariant->parsed()) {
            if (invariant->count("--burn-in") == 0) burn_in = steps / 100;
            return run_invariant(potential, h, steps, burn_in, seed);
        }
    } catch (const srk::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

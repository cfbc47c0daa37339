#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srk/matrix.hpp"

namespace srk {

enum class Calculus { Ito, Stratonovich };

/// Stage coupling of a method. Implicit covers non-diagonal implicit blocks
/// (e.g. a Gauss-Legendre stochastic block).
enum class Structure { Explicit, DiagonallyImplicit, IMEX, Implicit };

std::string_view to_string(Calculus c);
std::string_view to_string(Structure s);
Calculus calculus_from_string(std::string_view s);
Structure structure_from_string(std::string_view s);

/// Coefficients of a stochastic Runge-Kutta method in the two-block ansatz:
///
///   z^0 = alpha theta_0,    z^p = beta theta_p,
///   Z^{0,0} = A0,           Z^{0,q} = B0 Theta_{0,q},
///   Z^{p,0} = A1 Theta_{p,0},
///   Z^{p,q} = B1 Theta_{p,q}  (Stratonovich: Bhat1 Theta_{p,p} when q = p).
///
/// Drift stages are indexed 0..s1-1 and stochastic stages 0..s2-1.
struct MethodTableau {
    std::string name;
    Calculus calculus = Calculus::Ito;
    std::size_t s1 = 0;
    std::size_t s2 = 0;
    Vector alpha;
    Vector beta;
    Matrix A0;  // s1 x s1
    Matrix B0;  // s1 x s2
    Matrix A1;  // s2 x s1
    Matrix B1;  // s2 x s2
    std::optional<Matrix> Bhat1;  // s2 x s2, Stratonovich only
    double c = 0.5;
    int det_order = 1;
    int weak_order = 1;
    Structure structure = Structure::Explicit;

    /// Coefficient block coupling stochastic stage rows to stochastic stage
    /// columns for noise pair (p, q); selects Bhat1 on the Stratonovich diagonal.
    [[nodiscard]] const Matrix& stochastic_block(bool same_noise) const {
        return (same_noise && Bhat1) ? *Bhat1 : B1;
    }

    friend bool operator==(const MethodTableau&, const MethodTableau&) = default;
};

enum class StageKind { Drift, Stochastic };

struct StageRef {
    StageKind kind;
    std::size_t index;
    friend bool operator==(const StageRef&, const StageRef&) = default;
};

/// A strongly connected group of stages. Blocks with a single stage and no
/// self-dependency are explicit.
struct StageBlock {
    std::vector<StageRef> stages;
    bool implicit = false;
};

/// Stage evaluation order: blocks listed so that every block depends only on
/// itself and on earlier blocks. Stages whose vector-field value is never
/// consumed are omitted.
struct StageSchedule {
    std::vector<StageBlock> blocks;
    std::vector<bool> drift_needed;
    std::vector<bool> stochastic_needed;

    [[nodiscard]] Structure inferred_structure() const;
};

StageSchedule compute_schedule(const MethodTableau& t);

enum class Severity { Warning, Error };

struct Finding {
    Severity severity;
    std::string message;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Finding> findings;

    void add(Severity s, std::string message);
};

/// Shape, range and structure checks. Declared weak order 2 is cross-checked
/// against the reduced order conditions and reported as warnings.
ValidationReport validate(const MethodTableau& t);

/// Registered method identifiers in registry order.
const std::vector<std::string>& registry_names();

/// Built-in methods. Throws LookupError listing the valid names.
MethodTableau registry_get(std::string_view name);

/// Reads a JSON method file. Throws ParseError on malformed input and
/// ValidationError when the tableau fails validate().
MethodTableau load_method(const std::filesystem::path& path);
MethodTableau parse_method(std::string_view json_text);

std::string dump_method(const MethodTableau& t);
void save_method(const MethodTableau& t, const std::filesystem::path& path);

/// Evaluates "a+b*sqrt(k)"-style closed forms with rational a, b.
double evaluate_number_expression(std::string_view text);

}  // namespace srk

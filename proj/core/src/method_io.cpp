#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "srk/errors.hpp"
#include "srk/tableau.hpp"

namespace srk {

namespace {

using nlohmann::json;

// Grammar: expr = term (('+'|'-') term)*; term = factor (('*'|'/') factor)*;
// factor = ('+'|'-') factor | number | 'sqrt' '(' expr ')' | '(' expr ')'.
class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    double parse() {
        double v = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return v;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("bad number expression '" + std::string(text_) + "': " + what);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char ch) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    double expr() {
        double v = term();
        for (;;) {
            if (accept('+')) {
                v += term();
            } else if (accept('-')) {
                v -= term();
            } else {
                return v;
            }
        }
    }

    double term() {
        double v = factor();
        for (;;) {
            if (accept('*')) {
                v *= factor();
            } else if (accept('/')) {
                double d = factor();
                if (d == 0.0) fail("division by zero");
                v /= d;
            } else {
                return v;
            }
        }
    }

    double factor() {
        if (accept('-')) return -factor();
        if (accept('+')) return factor();
        if (accept('(')) {
            double v = expr();
            if (!accept(')')) fail("missing ')'");
            return v;
        }
        skip_space();
        if (text_.substr(pos_, 4) == "sqrt") {
            pos_ += 4;
            if (!accept('(')) fail("expected '(' after sqrt");
            double v = expr();
            if (!accept(')')) fail("missing ')'");
            if (v < 0.0) fail("sqrt of a negative number");
            return std::sqrt(v);
        }
        return number();
    }

    double number() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (start == pos_) fail("expected a number at offset " + std::to_string(start));
        std::string token(text_.substr(start, pos_ - start));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            fail("malformed literal '" + token + "'");
        }
        if (used != token.size()) fail("malformed literal '" + token + "'");
        return v;
    }
};

double read_number(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return evaluate_number_expression(j.get<std::string>());
    throw ParseError(where + ": expected a number or a string expression");
}

Vector read_vector(const json& j, const std::string& key) {
    if (!j.is_array()) throw ParseError(key + ": expected an array");
    Vector v;
    for (std::size_t i = 0; i < j.size(); ++i) {
        v.push_back(read_number(j[i], key + "[" + std::to_string(i) + "]"));
    }
    return v;
}

Matrix read_matrix(const json& j, const std::string& key) {
    if (!j.is_array()) throw ParseError(key + ": expected an array of rows");
    std::size_t rows = j.size();
    std::size_t cols = rows == 0 ? 0 : (j[0].is_array() ? j[0].size() : 0);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const std::string where = key + "[" + std::to_string(i) + "]";
        if (!j[i].is_array()) throw ParseError(where + ": expected an array");
        if (j[i].size() != cols) throw ParseError(where + ": ragged row");
        for (std::size_t k = 0; k < cols; ++k) {
            m(i, k) = read_number(j[i][k], where + "[" + std::to_string(k) + "]");
        }
    }
    return m;
}

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(std::string("missing key '") + key + "'");
    return *it;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

double evaluate_number_expression(std::string_view text) { return ExpressionParser(text).parse(); }

MethodTableau parse_method(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("method file must hold a JSON object");

    MethodTableau t;
    try {
        t.name = require(j, "name").get<std::string>();
        t.calculus = calculus_from_string(require(j, "calculus").get<std::string>());
        t.c = read_number(require(j, "c"), "c");
        t.alpha = read_vector(require(j, "alpha"), "alpha");
        t.beta = read_vector(require(j, "beta"), "beta");
        t.A0 = read_matrix(require(j, "A0"), "A0");
        t.B0 = read_matrix(require(j, "B0"), "B0");
        t.A1 = read_matrix(require(j, "A1"), "A1");
        t.B1 = read_matrix(require(j, "B1"), "B1");
        if (j.contains("Bhat1") && !j["Bhat1"].is_null()) t.Bhat1 = read_matrix(j["Bhat1"], "Bhat1");
        t.det_order = j.value("det_order", 1);
        t.weak_order = j.value("weak_order", 1);
        t.structure = structure_from_string(j.value("structure", std::string("explicit")));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad field type: ") + e.what());
    }
    t.s1 = t.alpha.size();
    t.s2 = t.beta.size();

    ValidationReport report = validate(t);
    if (!report.ok) {
        std::string msg = "method '" + t.name + "' is invalid:";
        for (const auto& f : report.findings) {
            if (f.severity == Severity::Error) msg += "\n  " + f.message;
        }
        throw ValidationError(msg);
    }
    return t;
}

MethodTableau load_method(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open method file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_method(ss.str());
}

std::string dump_method(const MethodTableau& t) {
    json j;
    j["name"] = t.name;
    j["calculus"] = std::string(to_string(t.calculus));
    j["c"] = t.c;
    j["alpha"] = t.alpha;
    j["beta"] = t.beta;
    j["A0"] = matrix_json(t.A0);
    j["B0"] = matrix_json(t.B0);
    j["A1"] = matrix_json(t.A1);
    j["B1"] = matrix_json(t.B1);
    if (t.Bhat1) j["Bhat1"] = matrix_json(*t.Bhat1);
    j["det_order"] = t.det_order;
    j["weak_order"] = t.weak_order;
    j["structure"] = std::string(to_string(t.structure));
    return j.dump(2);
}

void save_method(const MethodTableau& t, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write method file " + path.string());
    out << dump_method(t) << '\n';
}

}  // namespace srk

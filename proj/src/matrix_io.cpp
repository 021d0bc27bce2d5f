#include "hmk/matrix_io.hpp"

#include "hmk/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hmk {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ParseError(path + ": " + what); }

const json& field(const json& j, const char* name, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(name);
    if (it == j.end()) fail(path, std::string("missing field \"") + name + "\"");
    return *it;
}

std::int64_t integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<std::int64_t>();
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

TurnFraction turn_from_json(const json& j, const std::string& path) {
    const std::int64_t num = integer(field(j, "num", path), path + ".num");
    const std::int64_t den = integer(field(j, "den", path), path + ".den");
    if (den <= 0) fail(path + ".den", "denominator must be positive");
    return TurnFraction(num, den);
}

json turn_to_json(const TurnFraction& t) { return json{{"num", t.num()}, {"den", t.den()}}; }

}  // namespace

json phase_to_json(const PhaseValue& p) {
    return std::visit(
        [](const auto& k) -> json {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, RationalRoot>) {
                return json{{"root", turn_to_json(k.turn)}};
            } else if constexpr (std::is_same_v<T, SpecialProduct>) {
                json j{{"special", special_name(k.constant.base)}, {"root", turn_to_json(k.turn)}};
                if (k.constant.power != 1) j["power"] = k.constant.power;
                return j;
            } else {
                return json{{"float_angle", k.angle}};
            }
        },
        p.kind());
}

PhaseValue phase_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected a phase object");
    if (j.contains("float_angle")) return PhaseValue::from_angle(number(j["float_angle"], path + ".float_angle"));
    if (j.contains("special")) {
        const json& name = j["special"];
        if (!name.is_string()) fail(path + ".special", "expected a string");
        std::string s = name.get<std::string>();
        int sign = 1;
        if (s.size() > 3 && s.substr(s.size() - 3) == "bar") {
            sign = -1;
            s = s.substr(0, s.size() - 3);
        }
        const auto base = special_from_name(s);
        if (!base) fail(path + ".special", "unknown constant \"" + name.get<std::string>() + "\"");
        std::int64_t power = 1;
        if (j.contains("power")) power = integer(j["power"], path + ".power");
        if (power == 0 || std::abs(power) > 64) fail(path + ".power", "power must be a nonzero integer of modest size");
        const TurnFraction t = j.contains("root") ? turn_from_json(j["root"], path + ".root") : TurnFraction{};
        return PhaseValue::special(*base, sign * static_cast<int>(power), t);
    }
    if (j.contains("root")) return RationalRoot{turn_from_json(j["root"], path + ".root")};
    fail(path, "expected one of \"root\", \"special\", \"float_angle\"");
}

json matrix_to_json(const BasisMatrix& m) {
    const int n = m.dimension();
    json rows = json::array();
    json out{{"dimension", n}};
    if (const auto& g = m.exact()) {
        out["normalization"] = g->normalization == Normalization::InvSqrtDim ? "inv_sqrt_dim" : "none";
        for (int r = 0; r < n; ++r) {
            json row = json::array();
            for (int c = 0; c < n; ++c) row.push_back(phase_to_json(g->at(r, c)));
            rows.push_back(std::move(row));
        }
    } else {
        out["normalization"] = "none";
        for (int r = 0; r < n; ++r) {
            json row = json::array();
            for (int c = 0; c < n; ++c) row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
            rows.push_back(std::move(row));
        }
    }
    out["entries"] = std::move(rows);
    out["label"] = m.label();
    return out;
}

BasisMatrix matrix_from_json(const json& j, const Tolerances& tol) {
    const std::int64_t n = integer(field(j, "dimension", "matrix"), "matrix.dimension");
    if (n < 1 || n > 64) fail("matrix.dimension", "must be between 1 and 64");
    Normalization norm = Normalization::InvSqrtDim;
    if (j.contains("normalization")) {
        const json& v = j["normalization"];
        if (v == "inv_sqrt_dim")
            norm = Normalization::InvSqrtDim;
        else if (v == "none")
            norm = Normalization::None;
        else
            fail("matrix.normalization", "expected \"inv_sqrt_dim\" or \"none\"");
    }
    std::string label;
    if (j.contains("label")) {
        if (!j["label"].is_string()) fail("matrix.label", "expected a string");
        label = j["label"].get<std::string>();
    }
    const json& rows = field(j, "entries", "matrix");
    if (!rows.is_array() || static_cast<std::int64_t>(rows.size()) != n)
        fail("matrix.entries", "expected " + std::to_string(n) + " rows");

    const int dim = static_cast<int>(n);
    PhaseGrid grid;
    grid.dim = dim;
    grid.normalization = norm;
    grid.cells.resize(static_cast<std::size_t>(dim * dim));
    CMatrix raw(dim, dim);
    bool exact = true;
    for (int r = 0; r < dim; ++r) {
        const std::string rp = "matrix.entries[" + std::to_string(r) + "]";
        const json& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<std::int64_t>(row.size()) != n)
            fail(rp, "expected " + std::to_string(n) + " entries");
        for (int c = 0; c < dim; ++c) {
            const std::string ep = rp + "[" + std::to_string(c) + "]";
            const json& e = row[static_cast<std::size_t>(c)];
            if (e.is_array()) {
                if (e.size() != 2) fail(ep, "expected [re, im]");
                raw(r, c) = {number(e[0], ep + "[0]"), number(e[1], ep + "[1]")};
                exact = false;
            } else {
                grid.at(r, c) = phase_from_json(e, ep);
                raw(r, c) = grid.at(r, c).realize();
            }
        }
    }

    const double scale = norm == Normalization::InvSqrtDim ? 1.0 / std::sqrt(static_cast<double>(dim)) : 1.0;
    if (norm == Normalization::InvSqrtDim)
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                if (std::abs(std::abs(raw(r, c)) - 1.0) > 1e-12)
                    throw ValidationError("matrix.entries[" + std::to_string(r) + "][" + std::to_string(c) +
                                          "]: entry of a normalized matrix is not unimodular");

    BasisMatrix m = exact ? BasisMatrix(std::move(grid), label) : BasisMatrix(CMatrix(scale * raw), label);
    m.validate(tol);
    return m;
}

json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offset -> line and column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

BasisMatrix read_matrix(const std::string& path, const Tolerances& tol) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    const json j = parse_json_text(ss.str(), path);
    try {
        return matrix_from_json(j, tol);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void write_matrix(const std::string& path, const BasisMatrix& m) {
    std::ofstream out(path);
    if (!out) throw Error(path + ": cannot open for writing");
    out << matrix_to_json(m).dump(2) << '\n';
    if (!out) throw Error(path + ": write failed");
}

}  // namespace hmk

#include "doctest.h"
#include "support.hpp"

#include "hmk/errors.hpp"
#include "hmk/matrix_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

using namespace hmk;
using nlohmann::json;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("hmk_test_" + name)).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
}

template <class E>
std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const E& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("exact matrices round-trip bit-exactly") {
    const std::vector<BasisMatrix> ms{
        build(FamilySpec::fourier(TurnFraction(1, 6), TurnFraction(1, 12))),
        build(FamilySpec::dita(TurnFraction(1, 8))),
        build(FamilySpec::bjorck()),
        build(FamilySpec::twisted_fourier(
            {PhaseValue::special(Special::b2, 1, TurnFraction(9, 24)), PhaseValue::one(), PhaseValue::one()})),
        tao(),
    };
    for (const auto& m : ms) {
        INFO(m.label());
        REQUIRE(m.exact());
        const std::string path = temp_path("exact.json");
        write_matrix(path, m);
        const BasisMatrix back = read_matrix(path);
        REQUIRE(back.exact());
        CHECK(back.exact()->cells == m.exact()->cells);
        CHECK(back.entries() == m.entries());
        CHECK(back.label() == m.label());
        std::remove(path.c_str());
    }
}

TEST_CASE("float matrices round-trip") {
    const BasisMatrix b = build(FamilySpec::hermitian(2.3));
    const json j = matrix_to_json(b);
    CHECK(j["normalization"] == "none");
    const BasisMatrix back = matrix_from_json(json::parse(j.dump()));
    CHECK_FALSE(back.exact());
    CHECK(max_abs_diff(back.entries(), b.entries()) <= 1e-15);
}

TEST_CASE("phase forms") {
    CHECK(phase_from_json(json::parse(R"({"root":{"num":1,"den":4}})")) == PhaseValue::root(1, 4));
    CHECK(phase_from_json(json::parse(R"({"special":"d"})")) == PhaseValue::special(Special::d));
    CHECK(phase_from_json(json::parse(R"({"special":"dbar","root":{"num":1,"den":12}})")) ==
          PhaseValue::special(Special::d, -1, TurnFraction(1, 12)));
    CHECK(phase_from_json(json::parse(R"({"special":"b1","power":2})")) == PhaseValue::special(Special::b1, 2));
    CHECK_FALSE(phase_from_json(json::parse(R"({"float_angle":0.5})")).is_exact());
    for (const auto& p : {PhaseValue::root(5, 24), PhaseValue::special(Special::b2, -1, TurnFraction(3, 8)),
                          PhaseValue::special(Special::d, 2)})
        CHECK(phase_from_json(phase_to_json(p)) == p);
}

TEST_CASE("legacy float entries load without an exact grid") {
    const BasisMatrix f = fourier_matrix(2);
    json j{{"dimension", 2}, {"normalization", "none"}};
    j["entries"] = json::array();
    for (int r = 0; r < 2; ++r) {
        json row = json::array();
        for (int c = 0; c < 2; ++c) row.push_back(json::array({f(r, c).real(), f(r, c).imag()}));
        j["entries"].push_back(row);
    }
    const BasisMatrix m = matrix_from_json(j);
    CHECK_FALSE(m.exact());
    CHECK(max_abs_diff(m.entries(), f.entries()) < 1e-15);
}

TEST_CASE("schema errors name the field") {
    const auto parse = [](const std::string& text) { return matrix_from_json(json::parse(text)); };
    CHECK(error_of<ParseError>([&] { parse(R"({"entries":[]})"); }).find("dimension") != std::string::npos);
    CHECK(error_of<ParseError>([&] { parse(R"({"dimension":2,"entries":[[{"root":{"num":0,"den":1}}]]})"); })
              .find("matrix.entries") != std::string::npos);
    const std::string bad_den =
        R"({"dimension":1,"entries":[[{"root":{"num":0,"den":0}}]]})";
    CHECK(error_of<ParseError>([&] { parse(bad_den); }).find("matrix.entries[0][0].root.den") != std::string::npos);
    CHECK(error_of<ParseError>([&] { parse(R"({"dimension":1,"entries":[[{"special":"q"}]]})"); }).find("special") !=
          std::string::npos);
    CHECK_THROWS_AS(parse(R"({"dimension":1,"normalization":"half","entries":[[{"root":{"num":0,"den":1}}]]})"),
                    ParseError);
}

TEST_CASE("invariant violations") {
    // non-unimodular entry in a normalized file
    CHECK_THROWS_AS(matrix_from_json(json::parse(
                        R"({"dimension":2,"normalization":"inv_sqrt_dim","entries":[[[1,0],[1,0]],[[1,0],[0.5,0]]]})")),
                    ValidationError);
    // unimodular but not orthogonal
    CHECK_THROWS_AS(matrix_from_json(json::parse(
                        R"({"dimension":2,"entries":[[{"root":{"num":0,"den":1}},{"root":{"num":0,"den":1}}],[{"root":{"num":0,"den":1}},{"root":{"num":0,"den":1}}]]})")),
                    ValidationError);
}

TEST_CASE("syntax errors report line and column") {
    const std::string path = temp_path("broken.json");
    write_text(path, "{\n  \"dimension\": 2,\n  \"entries\": [,]\n}\n");
    const std::string msg = error_of<ParseError>([&] { read_matrix(path); });
    CHECK(msg.find(path + ":3:") != std::string::npos);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_matrix(temp_path("missing.json")), ParseError);
}

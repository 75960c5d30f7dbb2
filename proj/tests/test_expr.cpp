#include <doctest.h>

#include <cmath>

#include "zfree/expr.hpp"
#include "zfree/serialize.hpp"

using namespace zfree;

namespace {

ParseError parse_failure(std::string_view src) {
    try {
        parse_function(src);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a parse error for " << src);
    throw;
}

}  // namespace

TEST_CASE("lowering folds to canonical nodes") {
    CHECK(parse_function("z") == FuncExpr::identity());
    CHECK(parse_function("(z-1)*(z-2)") == FuncExpr::poly({2.0, -3.0, 1.0}));
    CHECK(parse_function("sin(pi*z)") == FuncExpr::composed(FuncExpr::sin(), MapExpr::affine(kPi, 0.0)));
    CHECK(parse_function("exp(z)") == FuncExpr::exp());
    CHECK(parse_function("2i") == FuncExpr::constant(Complex(0.0, 2.0)));
    CHECK(parse_function("(z+1)^3") == FuncExpr::poly({1.0, 3.0, 3.0, 1.0}));
    CHECK(parse_function("z/2") == FuncExpr::poly({0.0, 0.5}));
}

TEST_CASE("precedence and associativity") {
    auto at = [](std::string_view s, Complex z) { return eval_func(parse_function(s), z); };
    const Complex z(0.3, -0.7);
    CHECK(std::abs(at("2^3^2", z) - 512.0) < 1e-9);
    CHECK(std::abs(at("-2^2", z) - (-4.0)) < 1e-12);
    CHECK(std::abs(at("1-2-3", z) - (-4.0)) < 1e-12);
    CHECK(std::abs(at("8/4/2", z) - 1.0) < 1e-12);
    CHECK(std::abs(at("1+2*z", z) - (1.0 + 2.0 * z)) < 1e-12);
    CHECK(std::abs(at("exp(z)*sin(z)+cos(z)/(z+2)", z) - (std::exp(z) * std::sin(z) + std::cos(z) / (z + 2.0))) < 1e-12);
    CHECK(std::abs(at("exp(z*z)", z) - std::exp(z * z)) < 1e-12);
    CHECK(std::abs(at("1e-3*z", z) - 1e-3 * z) < 1e-15);
    CHECK(std::abs(at("e^2", z) - std::exp(2.0)) < 1e-12);
    CHECK(std::abs(at("i*i", z) - (-1.0)) < 1e-15);
}

TEST_CASE("printing round-trips the tree") {
    for (const char* s : {"z", "(z-1)*(z-2)", "sin(pi*z)", "-z^2^3", "exp(-(z+1))/3.5e-2", "2i*z - 1.25",
                          "compose(lens(0.5), z^2)", "compose(eta(0.1, 0.5, 0.3, 0.01), cos(z))"}) {
        const ExprAST a = parse_expr(s);
        CHECK_MESSAGE(ast_equal(a, parse_expr(print(a))), s);
    }
}

TEST_CASE("compose applies the map first") {
    const FuncExpr f = parse_function("compose(affine(2, 1), z^2)");
    CHECK(std::abs(eval_func(f, 1.0) - 9.0) < 1e-12);
    const MapExpr m = parse_map("compose(affine(2, 0), affine(1, 1))");
    CHECK(std::abs(eval_map(m, 1.0) - 3.0) < 1e-12);
    const MapExpr mob = parse_map("moebius(1.5, -0.5, 0.5, 0.5)");
    CHECK(std::abs(eval_map(mob, 1.0) - 1.0) < 1e-12);
}

TEST_CASE("parse errors carry position, caret and suggestions") {
    const ParseError e = parse_failure("sin((z");
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(e.position() == 6);
    const std::string caret = e.caret();
    CHECK(caret.find("sin((z\n") == 0);
    CHECK(caret.find("      ^") != std::string::npos);

    const ParseError unknown = parse_failure("sinn(z)");
    REQUIRE(!unknown.suggestions().empty());
    CHECK(unknown.suggestions().front() == "sin");
    CHECK(std::string(unknown.what()).find("did you mean") != std::string::npos);

    CHECK(parse_failure("sin(z, z)").position() == 0);
    parse_failure("z +* 2");
    parse_failure("1/0");
    parse_failure("z^z");
    parse_failure("affine(1, 2)");
    parse_failure("compose(z, z)");
    parse_failure("lens(z)");
    parse_failure("1.2.3");
    parse_failure("");
    CHECK_THROWS_AS(parse_map("z+1"), ParseError);
}

TEST_CASE("source and JSON forms round-trip") {
    for (const char* s : {"(z-1)*(z-2)", "sin(pi*z)", "exp(z)/(z+2i)", "compose(parabolic(0.25), cos(z))",
                          "(z+1)^0.5", "compose(compose(lens(0.5), power(2)), z)"}) {
        const FuncExpr f = parse_function(s);
        CHECK_MESSAGE(parse_function(to_source(f)) == f, s);
        CHECK_MESSAGE(func_from_json(to_json(f)) == f, s);
    }
    for (const char* s : {"affine(2, -1)", "moebius(1.5, -0.5, 0.5, 0.5)", "eta(0.2, 1, 0.3, 0.5)",
                          "compose(lens(0.25), affine(1i, 2))"}) {
        const MapExpr m = parse_map(s);
        CHECK_MESSAGE(parse_map(to_source(m)) == m, s);
        CHECK_MESSAGE(map_from_json(to_json(m)) == m, s);
    }
    CHECK(parse_map(to_source(MapExpr::identity())) == MapExpr::affine(1.0, 0.0));

    const FuncExpr glued = FuncExpr::glue({{Disc(0.5, 0.5), FuncExpr::exp()}, {Disc(1.5, 0.5), FuncExpr::exp()}});
    CHECK(func_from_json(to_json(glued)) == glued);
    CHECK_THROWS_AS(to_source(glued), Error);
}

TEST_CASE("non-finite numbers serialize as strings") {
    const Json j = to_json(Complex(std::numeric_limits<double>::infinity(), std::nan("")));
    CHECK(j[0] == "inf");
    CHECK(j[1] == "nan");
    const Complex back = complex_from_json(j);
    CHECK(std::isinf(back.real()));
    CHECK(std::isnan(back.imag()));
}

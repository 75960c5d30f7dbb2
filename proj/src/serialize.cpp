#include "zfree/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace zfree {

namespace {

// Non-finite values have no JSON spelling; keep them distinguishable.
Json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double number_from(const Json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    throw Error(ErrorKind::Parse, "expected a number, got '" + s + "'");
}

Json complex_list(const std::vector<Complex>& cs) {
    Json out = Json::array();
    for (Complex c : cs) out.push_back(to_json(c));
    return out;
}

std::vector<Complex> complex_list_from(const Json& j) {
    std::vector<Complex> out;
    for (const auto& e : j) out.push_back(complex_from_json(e));
    return out;
}

Json disc_json(const Disc& d) { return Json{{"center", to_json(d.center)}, {"radius", number(d.radius)}}; }

Disc disc_from(const Json& j) { return Disc(complex_from_json(j.at("center")), number_from(j.at("radius"))); }

std::string num_src(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    return v < 0 ? "(" + s + ")" : s;
}

std::string complex_src(Complex c) {
    if (c.imag() == 0.0) return num_src(c.real());
    char im[64];
    std::snprintf(im, sizeof im, "%.17gi", std::abs(c.imag()));
    return "(" + num_src(c.real()) + (c.imag() < 0 ? " - " : " + ") + im + ")";
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string func_src(const FuncExpr& f, const std::string& var) {
    return std::visit(
        overloaded{
            [&](const funcs::Const& c) { return complex_src(c.c); },
            [&](const funcs::Poly& p) {
                std::string s;
                for (std::size_t k = 0; k < p.coefficients.size(); ++k) {
                    if (k) s += " + ";
                    s += complex_src(p.coefficients[k]);
                    if (k == 1) s += "*" + var;
                    if (k > 1) s += "*" + var + "^" + std::to_string(k);
                }
                return "(" + s + ")";
            },
            [&](const funcs::Exp&) { return "exp(" + var + ")"; },
            [&](const funcs::Sin&) { return "sin(" + var + ")"; },
            [&](const funcs::Cos&) { return "cos(" + var + ")"; },
            [&](const funcs::Sum& s) { return "(" + func_src(s.left, var) + " + " + func_src(s.right, var) + ")"; },
            [&](const funcs::Product& p) {
                return "(" + func_src(p.left, var) + " * " + func_src(p.right, var) + ")";
            },
            [&](const funcs::Quotient& q) {
                return "(" + func_src(q.num, var) + " / " + func_src(q.den, var) + ")";
            },
            [&](const funcs::Pow& p) { return "(" + func_src(p.base, var) + ")^" + num_src(p.exponent); },
            [&](const funcs::Apply& a) { return func_src(a.outer, "(" + func_src(a.inner, var) + ")"); },
            [&](const funcs::ComposedWithMap& c) -> std::string {
                if (var != "z") {
                    throw Error(ErrorKind::InvalidArgument, "a map composition under another function has no textual form");
                }
                return "compose(" + to_source(c.m) + ", " + func_src(c.f, "z") + ")";
            },
            [&](const funcs::RestrictedGlue&) -> std::string {
                throw Error(ErrorKind::InvalidArgument, "glued functions have no textual form");
            },
            [&](const funcs::MappedGlue&) -> std::string {
                throw Error(ErrorKind::InvalidArgument, "glued functions have no textual form");
            },
            [&](const funcs::OrthoPoly&) -> std::string {
                throw Error(ErrorKind::InvalidArgument, "recurrence polynomials have no textual form");
            },
        },
        f.node().value);
}

}  // namespace

Json to_json(Complex c) { return Json::array({number(c.real()), number(c.imag())}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::Parse, "complex values are [re, im] pairs");
    return {number_from(j[0]), number_from(j[1])};
}

Json to_json(const MapExpr& m) {
    return std::visit(
        overloaded{
            [](const maps::Identity&) { return Json{{"kind", "identity"}}; },
            [](const maps::Affine& a) { return Json{{"kind", "affine"}, {"a", to_json(a.a)}, {"b", to_json(a.b)}}; },
            [](const maps::Moebius& q) {
                return Json{{"kind", "moebius"}, {"a", to_json(q.a)}, {"b", to_json(q.b)},
                            {"c", to_json(q.c)},   {"d", to_json(q.d)}};
            },
            [](const maps::Power& p) { return Json{{"kind", "power"}, {"q", number(p.q)}}; },
            [](const maps::Lens& l) { return Json{{"kind", "lens"}, {"r", number(l.r)}}; },
            [](const maps::Parabolic& p) { return Json{{"kind", "parabolic"}, {"delta", number(p.delta)}}; },
            [](const maps::Eta& e) {
                return Json{{"kind", "eta"},
                            {"alpha", number(e.params.alpha)},
                            {"r", number(e.params.r)},
                            {"delta1", number(e.params.delta1)},
                            {"delta3", number(e.params.delta3)}};
            },
            [](const maps::Compose& c) {
                return Json{{"kind", "compose"}, {"outer", to_json(c.outer)}, {"inner", to_json(c.inner)}};
            },
        },
        m.node().value);
}

MapExpr map_from_json(const Json& j) {
    const auto kind = j.at("kind").get<std::string>();
    auto c = [&](const char* k) { return complex_from_json(j.at(k)); };
    auto d = [&](const char* k) { return number_from(j.at(k)); };
    if (kind == "identity") return MapExpr::identity();
    if (kind == "affine") return MapExpr::affine(c("a"), c("b"));
    if (kind == "moebius") return MapExpr::moebius(c("a"), c("b"), c("c"), c("d"));
    if (kind == "power") return MapExpr::power(d("q"));
    if (kind == "lens") return MapExpr::lens(d("r"));
    if (kind == "parabolic") return MapExpr::parabolic(d("delta"));
    if (kind == "eta") return MapExpr::eta({d("alpha"), d("r"), d("delta1"), d("delta3")});
    if (kind == "compose") return MapExpr::compose(map_from_json(j.at("outer")), map_from_json(j.at("inner")));
    throw Error(ErrorKind::Parse, "unknown map kind '" + kind + "'");
}

Json to_json(const FuncExpr& f) {
    return std::visit(
        overloaded{
            [](const funcs::Const& c) { return Json{{"kind", "const"}, {"c", to_json(c.c)}}; },
            [](const funcs::Poly& p) { return Json{{"kind", "poly"}, {"coefficients", complex_list(p.coefficients)}}; },
            [](const funcs::Exp&) { return Json{{"kind", "exp"}}; },
            [](const funcs::Sin&) { return Json{{"kind", "sin"}}; },
            [](const funcs::Cos&) { return Json{{"kind", "cos"}}; },
            [](const funcs::Sum& s) { return Json{{"kind", "sum"}, {"left", to_json(s.left)}, {"right", to_json(s.right)}}; },
            [](const funcs::Product& p) {
                return Json{{"kind", "product"}, {"left", to_json(p.left)}, {"right", to_json(p.right)}};
            },
            [](const funcs::Quotient& q) {
                return Json{{"kind", "quotient"}, {"num", to_json(q.num)}, {"den", to_json(q.den)}};
            },
            [](const funcs::Pow& p) {
                return Json{{"kind", "pow"}, {"base", to_json(p.base)}, {"exponent", number(p.exponent)}};
            },
            [](const funcs::Apply& a) {
                return Json{{"kind", "apply"}, {"outer", to_json(a.outer)}, {"inner", to_json(a.inner)}};
            },
            [](const funcs::ComposedWithMap& c) {
                return Json{{"kind", "composed"}, {"f", to_json(c.f)}, {"map", to_json(c.m)}};
            },
            [](const funcs::RestrictedGlue& g) {
                Json pieces = Json::array();
                for (const auto& p : g.pieces) pieces.push_back({{"region", disc_json(p.region)}, {"f", to_json(p.f)}});
                return Json{{"kind", "glue"}, {"pieces", pieces}};
            },
            [](const funcs::MappedGlue& g) {
                Json pieces = Json::array();
                for (const auto& p : g.pieces) {
                    pieces.push_back({{"preimage", disc_json(p.preimage)}, {"phi", to_json(p.phi)}, {"g", to_json(p.g)}});
                }
                return Json{{"kind", "mapped_glue"}, {"pieces", pieces}};
            },
            [](const funcs::OrthoPoly& o) {
                Json h = Json::array();
                for (const auto& col : o.h) h.push_back(complex_list(col));
                return Json{{"kind", "ortho_poly"}, {"center", to_json(o.center)}, {"scale", number(o.scale)},
                            {"q0", to_json(o.q0)},   {"hessenberg", h},             {"coefficients", complex_list(o.d)}};
            },
        },
        f.node().value);
}

FuncExpr func_from_json(const Json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "const") return FuncExpr::constant(complex_from_json(j.at("c")));
    if (kind == "poly") return FuncExpr::poly(complex_list_from(j.at("coefficients")));
    if (kind == "exp") return FuncExpr::exp();
    if (kind == "sin") return FuncExpr::sin();
    if (kind == "cos") return FuncExpr::cos();
    if (kind == "sum") return FuncExpr::sum(func_from_json(j.at("left")), func_from_json(j.at("right")));
    if (kind == "product") return FuncExpr::product(func_from_json(j.at("left")), func_from_json(j.at("right")));
    if (kind == "quotient") return FuncExpr::quotient(func_from_json(j.at("num")), func_from_json(j.at("den")));
    if (kind == "pow") return FuncExpr::pow(func_from_json(j.at("base")), number_from(j.at("exponent")));
    if (kind == "apply") return FuncExpr::apply(func_from_json(j.at("outer")), func_from_json(j.at("inner")));
    if (kind == "composed") return FuncExpr::composed(func_from_json(j.at("f")), map_from_json(j.at("map")));
    if (kind == "glue") {
        std::vector<FuncExpr::GluePiece> pieces;
        for (const auto& p : j.at("pieces")) pieces.push_back({disc_from(p.at("region")), func_from_json(p.at("f"))});
        return FuncExpr::glue(std::move(pieces));
    }
    if (kind == "mapped_glue") {
        std::vector<FuncExpr::MappedPiece> pieces;
        for (const auto& p : j.at("pieces")) {
            pieces.push_back({disc_from(p.at("preimage")), map_from_json(p.at("phi")), func_from_json(p.at("g")), {}, {}});
        }
        return FuncExpr::mapped_glue(std::move(pieces));
    }
    if (kind == "ortho_poly") {
        std::vector<std::vector<Complex>> h;
        for (const auto& col : j.at("hessenberg")) h.push_back(complex_list_from(col));
        return FuncExpr::ortho_poly(complex_from_json(j.at("center")), number_from(j.at("scale")),
                                    complex_from_json(j.at("q0")), std::move(h),
                                    complex_list_from(j.at("coefficients")));
    }
    throw Error(ErrorKind::Parse, "unknown function kind '" + kind + "'");
}

std::string to_source(const MapExpr& m) {
    return std::visit(
        overloaded{
            [](const maps::Identity&) -> std::string { return "affine(1, 0)"; },
            [](const maps::Affine& a) { return "affine(" + complex_src(a.a) + ", " + complex_src(a.b) + ")"; },
            [](const maps::Moebius& q) {
                return "moebius(" + complex_src(q.a) + ", " + complex_src(q.b) + ", " + complex_src(q.c) + ", " +
                       complex_src(q.d) + ")";
            },
            [](const maps::Power& p) { return "power(" + num_src(p.q) + ")"; },
            [](const maps::Lens& l) { return "lens(" + num_src(l.r) + ")"; },
            [](const maps::Parabolic& p) { return "parabolic(" + num_src(p.delta) + ")"; },
            [](const maps::Eta& e) {
                return "eta(" + num_src(e.params.alpha) + ", " + num_src(e.params.r) + ", " +
                       num_src(e.params.delta1) + ", " + num_src(e.params.delta3) + ")";
            },
            // compose(first, then)
            [](const maps::Compose& c) { return "compose(" + to_source(c.inner) + ", " + to_source(c.outer) + ")"; },
        },
        m.node().value);
}

std::string to_source(const FuncExpr& f) { return func_src(f, "z"); }

Json to_json(const NormEstimate& n) {
    return Json{{"value", number(n.value)}, {"grid_density", number(n.grid_density)}, {"refined", n.refined}};
}

Json to_json(const ZeroCertificate& c) {
    Json windings = Json::array();
    for (const auto& [name, w] : c.winding_numbers) windings.push_back({{"contour", name}, {"winding", w}});
    Json exclusions = Json::array();
    for (const auto& e : c.exclusions_used) {
        exclusions.push_back({{"center", to_json(e.center)}, {"radius", number(e.radius)}});
    }
    Json out{{"region", c.region},
             {"verdict", std::string(to_string(c.verdict))},
             {"winding_numbers", windings},
             {"min_modulus", to_json(c.min_modulus)},
             {"exclusions_used", exclusions},
             {"possible_zeros", complex_list(c.possible_zeros)}};
    if (!c.failure.empty()) out["failure"] = c.failure;
    return out;
}

Json to_json(const StepRecord& s) {
    Json params = Json::object();
    for (const auto& [name, v] : s.parameters) params[name] = number(v);
    Json trace = Json::array();
    for (const auto& t : s.trace) {
        trace.push_back({{"parameter", number(t.parameter)}, {"sup_diff", number(t.sup_diff)}, {"accepted", t.accepted}});
    }
    Json out{{"tag", s.tag},
             {"location", s.location},
             {"parameters", params},
             {"trace", trace},
             {"assigned_budget", number(s.assigned_budget)},
             {"error_budget_spent", number(s.error_budget_spent)}};
    if (s.certificate) out["certificate"] = to_json(*s.certificate);
    if (!s.substeps.empty()) {
        Json subs = Json::array();
        for (const auto& sub : s.substeps) subs.push_back(to_json(sub));
        out["substeps"] = subs;
    }
    if (!s.note.empty()) out["note"] = s.note;
    return out;
}

Json to_json(const ApproxReport& r) {
    Json steps = Json::array();
    for (const auto& s : r.steps) steps.push_back(to_json(s));
    Json out{{"epsilon", number(r.epsilon)},
             {"steps", steps},
             {"total_sup_diff", to_json(r.total_sup_diff)},
             {"final_certificate", to_json(r.final_certificate)}};
    if (r.pullback_certificate) out["pullback_certificate"] = to_json(*r.pullback_certificate);
    if (!r.notes.empty()) out["notes"] = r.notes;
    return out;
}

Json to_json(const PolyApproximant& p) {
    Json search = Json::array();
    for (const auto& [deg, err] : p.search) search.push_back({{"degree", deg}, {"fit_error", number(err)}});
    Json out{{"degree", p.degree},
             {"center", to_json(p.center)},
             {"scale", number(p.scale)},
             {"coefficients", complex_list(p.coefficients)},
             {"fit_error", to_json(p.fit_error)},
             {"target_min_modulus", number(p.target_min_modulus)},
             {"rouche_margin", number(p.rouche_margin)},
             {"search", search}};
    if (!p.orthogonal.empty()) {
        Json h = Json::array();
        for (const auto& col : p.hessenberg) h.push_back(complex_list(col));
        out["recurrence"] = {{"q0", to_json(p.q0)}, {"hessenberg", h}, {"coefficients", complex_list(p.orthogonal)}};
    }
    if (p.certificate) out["certificate"] = to_json(*p.certificate);
    return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace zfree

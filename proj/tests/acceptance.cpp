// Runs the ten acceptance criteria and prints one PASS/FAIL line each.
// Exit status is 0 when every criterion passes, or when the only failures
// are listed with --allow-known.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zfree/expr.hpp"
#include "zfree/job.hpp"

using namespace zfree;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

const Disc kD1(Complex(-0.5, 0.0), 0.5);
const Disc kD2(Complex(0.5, 0.0), 0.5);

Complex sample(std::mt19937_64& rng, const Disc& d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return d.center + std::polar(d.radius * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

EtaParams random_eta(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {2.0 * kPi * (u(rng) - 0.5), 0.05 + u(rng), 0.05 + 1.4 * u(rng), 0.01 + u(rng)};
}

FuncExpr from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> c{1.0};
    for (Complex r : roots) {
        std::vector<Complex> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = next;
    }
    return FuncExpr::poly(c);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Outcome map_identities() {
    Outcome o;
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Complex z = sample(rng, kD2);
        worst = std::max(worst, std::abs(lens_point(1.0, z) - z));
        worst = std::max(worst, std::abs(parabolic_point(0.0, z) - z));
        const EtaParams p = random_eta(rng);
        worst = std::max(worst, std::abs(eval_eta(p, -1.0)));
        worst = std::max(worst, std::abs(eval_eta(p, 0.0) - std::polar(p.r, p.alpha)));
    }
    o.require(worst <= 1e-10, "max deviation " + fmt(worst));
    return o;
}

Outcome containment() {
    Outcome o;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000 && o.pass; ++i) {
        const double r = 0.01 + 0.99 * u(rng);
        const Complex z = sample(rng, kD2);
        const Complex l = lens_point(r, z);
        o.require(std::abs(l - 0.5) <= 0.5 + 1e-10, "lens image left D2 at r=" + fmt(r));

        if (std::abs(z) > 1e-8) {
            const double delta = 4.0 * u(rng);
            const Complex w = parabolic_point(delta, z);
            o.require(std::abs((1.0 / w).real() - (1.0 / z).real()) <= 1e-10 * std::max(1.0, std::abs(1.0 / z)),
                      "parabolic map moved Re(1/z)");
        }

        const Complex x = sample(rng, kD1);
        if (std::abs(x) > 1e-8) {
            const EtaParams p = random_eta(rng);
            o.require(pie_contains({0.0, p.alpha, p.r, p.delta1}, eval_eta(p, x), 1e-10), "eta image left the pie");
        }
    }
    return o;
}

Outcome winding_oracle() {
    Outcome o;
    std::vector<Complex> known;
    for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) known.emplace_back(0.5 * a, 0.5 * b);
    }
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, known.size() - 1);
    std::uniform_int_distribution<int> deg(1, 6);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    int agree = 0;
    int trials = 0;
    while (trials < 100) {
        std::vector<Complex> roots;
        const int d = deg(rng);
        for (int k = 0; k < d; ++k) roots.push_back(known[pick(rng)]);
        const Complex c(u(rng), u(rng));
        const double r = 0.1 + std::abs(u(rng));
        bool clear = true;
        int inside = 0;
        for (Complex z : roots) {
            const double gap = std::abs(z - c) - r;
            clear = clear && std::abs(gap) > 1e-2;
            inside += gap < 0.0;
        }
        if (!clear) continue;
        ++trials;
        agree += winding_number(from_roots(roots), circle_contour(Disc(c, r)), 0.0) == inside;
    }
    o.require(agree == 100, std::to_string(agree) + "/100 agree");
    if (o.pass) o.detail = "100/100 agree";
    return o;
}

Outcome contact_identity() {
    Outcome o;
    const FuncExpr f = FuncExpr::identity();
    const DiscChain pair{2, {kD1, kD2}, {Complex(0.0)}};
    for (double eps : {0.1, 0.01}) {
        const StepResult s = remove_contact_zero(f, eps);
        const double diff = sup_diff(s.f, f, boundary_grid(pair, 128.0)).value;
        o.require(diff <= eps, "sup_diff " + fmt(diff) + " > " + fmt(eps));
        o.require(std::abs(eval_func(s.f, -1.0) - (-1.0)) <= 1e-10, "value at -1 moved");
        o.require(std::abs(eval_func(s.f, 1.0) - 1.0) <= 1e-10, "value at +1 moved");
        const std::vector<Complex> allowed{Complex(1.0)};
        const ZeroCertificate c = certify_zero_free(s.f, pair, allowed);
        o.require(c.zero_free(), "certificate " + std::string(to_string(c.verdict)) + ": " + c.failure);
        o.require(std::abs(eval_func(s.f, 1.0)) > 0.0, "zero at +1");
    }
    return o;
}

Outcome equal_shrink() {
    Outcome o;
    const StepResult s = remove_contact_zero(FuncExpr::poly({0.0, 0.0, 1.0}), 0.1);
    o.require(s.record.parameter("branch") == 3.0, "branch " + fmt(s.record.parameter("branch").value_or(-1)));
    o.require(!s.record.has_tag("eta"), "report contains an eta step");
    o.require(s.record.has_tag("glue"), "no glue step");
    o.require(s.f.as<funcs::RestrictedGlue>() != nullptr, "result is not a glue");
    return o;
}

Outcome chain_examples() {
    Outcome o;
    const std::pair<const char*, std::size_t> cases[] = {{"sin(pi*z)", 2}, {"(z-1)*(z-2)", 3}};
    for (const auto& [src, n] : cases) {
        const FuncExpr f = parse_function(src);
        const auto [g, report] = disc_chain_pipeline(f, n, 0.05);
        o.require(report.final_certificate.zero_free(), std::string(src) + " not certified");
        o.require(report.total_sup_diff.value <= 0.05, std::string(src) + " sup_diff " + fmt(report.total_sup_diff.value));
    }
    return o;
}

bool same_parameters(const StepRecord& a, const StepRecord& b, double tol) {
    if (a.tag != b.tag || a.parameters.size() != b.parameters.size() || a.substeps.size() != b.substeps.size()) return false;
    for (std::size_t i = 0; i < a.parameters.size(); ++i) {
        if (a.parameters[i].first != b.parameters[i].first) return false;
        if (std::abs(a.parameters[i].second - b.parameters[i].second) > tol) return false;
    }
    for (std::size_t i = 0; i < a.substeps.size(); ++i) {
        if (!same_parameters(a.substeps[i], b.substeps[i], tol)) return false;
    }
    return true;
}

Outcome jordan_affine() {
    Outcome o;
    const FuncExpr f = FuncExpr::poly({-1.0, 1.0});
    const JordanChain jc = make_jordan_chain({MapExpr::affine(2.0, -1.0), MapExpr::affine(4.0, -3.0)});
    const auto [f_eps, mapped] = jordan_chain_pipeline(f, jc, 0.1);
    // The same problem written directly on the canonical chain: f o phi_k.
    const FuncExpr pulled = FuncExpr::glue({{Disc(0.5, 0.5), FuncExpr::poly({-2.0, 2.0})},
                                            {Disc(1.5, 0.5), FuncExpr::poly({-4.0, 4.0})}});
    const auto [g, canonical] = disc_chain_pipeline(pulled, 2, 0.1);
    o.require(mapped.steps.size() == canonical.steps.size() + 2, "step counts differ");
    for (std::size_t i = 0; o.pass && i < canonical.steps.size(); ++i) {
        o.require(same_parameters(mapped.steps[i + 1], canonical.steps[i], 1e-9),
                  "step " + std::to_string(i) + " (" + canonical.steps[i].tag + ") parameters differ");
    }
    o.require(mapped.final_certificate.zero_free(), "pushforward certificate " +
                                                        std::string(to_string(mapped.final_certificate.verdict)));
    return o;
}

Outcome mergelyan() {
    Outcome o;
    const FuncExpr f = parse_function("sin(pi*z)");
    const DiscChain chain = chain_discs(2);
    const auto [g, report] = disc_chain_pipeline(f, 2, 0.05);
    try {
        const PolyApproximant p = zero_free_polynomial(g, PolyRegion{chain}, 0.05, 200);
        o.require(p.rouche_margin > 0.0, "rouche margin " + fmt(p.rouche_margin));
        o.require(p.certificate && p.certificate->zero_free(), "polynomial not certified");
        const double combined = sup_diff(p.as_function(), f, region_grid(PolyRegion{chain}, 96.0)).value;
        o.require(combined <= 0.1, "combined distance " + fmt(combined));
        if (o.pass) o.detail = "degree " + std::to_string(p.degree);
    } catch (const DegreeExceededError& e) {
        o.require(false, "degree cap 200 reached; best fit error " + fmt(e.best().fit_error.value) +
                             " vs target " + fmt(std::min(0.05, e.best().target_min_modulus / 2.0)));
    }
    return o;
}

Outcome convergence_trend() {
    Outcome o;
    const FuncExpr f = FuncExpr::exp();
    const double budget = 1e-4;
    const StepResult steps[] = {
        shrink_toward(f, kD2, 1.0, budget),
        lens_step(f, kD2, {0.0, 1.0}, budget),
        parabolic_step(f, kD2, 0.0, budget, [](const FuncExpr&) { return true; }),
    };
    for (const auto& s : steps) {
        const auto& t = s.record.trace;
        o.require(t.size() >= 3, s.record.tag + " trace too short");
        for (std::size_t i = 1; i < t.size(); ++i) {
            o.require(t[i].parameter < t[i - 1].parameter, s.record.tag + " parameters not bisected");
            o.require(t[i].sup_diff < t[i - 1].sup_diff, s.record.tag + " sup_diff not decreasing at trial " + std::to_string(i));
        }
    }
    return o;
}

Outcome determinism() {
    Outcome o;
    for (const auto& name : demo_names()) {
        const JobConfig c = demo_config(name);
        o.require(dump(run_job(c).report) == dump(run_job(c).report), name + " differs between runs");
    }
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0: no limit
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> known;
    std::vector<int> only;
    app.add_option("--allow-known", known, "criteria whose failure does not fail the run");
    app.add_option("--only", only, "run just these criteria");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "map identities", 1.0, map_identities},
        {2, "containment invariants", 5.0, containment},
        {3, "winding oracle", 10.0, winding_oracle},
        {4, "contact removal for f(z)=z", 60.0, contact_identity},
        {5, "equal-shrink branch for z^2", 0.0, equal_shrink},
        {6, "disc chains n=2,3 at eps=0.05", 240.0, chain_examples},
        {7, "affine Jordan chain vs canonical", 120.0, jordan_affine},
        {8, "zero-free polynomial within degree 200", 0.0, mergelyan},
        {9, "monotone bisection traces on exp", 0.0, convergence_trend},
        {10, "byte-identical demo reports", 0.0, determinism},
    };

    const std::set<int> allowed(known.begin(), known.end());
    const std::set<int> selected(only.begin(), only.end());
    bool ok = true;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (out.pass && c.limit_seconds > 0.0 && secs > c.limit_seconds) {
            out.pass = false;
            out.detail = "took " + fmt(secs) + " s, limit " + fmt(c.limit_seconds) + " s";
        }
        const bool excused = !out.pass && allowed.count(c.id);
        std::printf("criterion %2d %s  %s (%.2f s)%s%s\n", c.id, out.pass ? "PASS" : "FAIL", c.name, secs,
                    out.detail.empty() ? "" : ": ", out.detail.c_str());
        if (excused) std::printf("             known limitation, not counted\n");
        std::fflush(stdout);
        ok = ok && (out.pass || excused);
    }
    return ok ? 0 : 1;
}

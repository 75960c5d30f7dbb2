#include <doctest.h>

#include <cmath>
#include <functional>

#include "zfree/pipeline.hpp"

using namespace zfree;

namespace {

const Disc kD1 = left_unit_disc();
const Disc kD2 = right_unit_disc();

double sum_spent(const std::vector<StepRecord>& steps) {
    double total = 0.0;
    for (const auto& s : steps) total += s.error_budget_spent;
    return total;
}

const StepRecord* find_tag(const StepRecord& r, const std::string& tag) {
    if (r.tag == tag) return &r;
    for (const auto& s : r.substeps) {
        if (const auto* hit = find_tag(s, tag)) return hit;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("shrink toward a boundary point") {
    const double eps = 0.01;
    const StepResult s = shrink_toward(FuncExpr::identity(), kD2, 0.0, eps);
    const double r = *s.record.parameter("r");
    CHECK(1.0 - r <= eps);
    CHECK(s.record.error_budget_spent == doctest::Approx(1.0 - r));
    CHECK(std::abs(eval_func(s.f, 1.0) - r) < 1e-15);
    CHECK(eval_func(s.f, 0.0) == Complex(0.0));
    REQUIRE(s.record.certificate);
    CHECK(s.record.certificate->verdict == Verdict::ZerosPossibleAt);

    const FuncExpr five = FuncExpr::poly({5.0, 1.0, 2.0});
    const StepResult t = shrink_toward(five, kD2, 1.0, 0.05);
    CHECK(eval_func(t.f, 1.0) == eval_func(five, 1.0));
    CHECK_THROWS_AS(shrink_toward(five, kD2, 0.5, 0.05), Error);
}

TEST_CASE("lens step keeps the corners and clears boundary zeros") {
    const FuncExpr f = FuncExpr::poly({Complex(-0.5, -0.5), 1.0});
    const StepResult s = lens_step(f, kD2, {0.0, 1.0}, 0.2);
    CHECK(std::abs(eval_func(s.f, 0.0) - eval_func(f, 0.0)) < 1e-10);
    CHECK(std::abs(eval_func(s.f, 1.0) - eval_func(f, 1.0)) < 1e-10);
    const std::vector<Exclusion> ex{{0.0, 1e-3}, {1.0, 1e-3}};
    CHECK(min_modulus(s.f, boundary_grid(kD2, 64.0), ex).value > 0.0);
    CHECK(s.record.error_budget_spent <= 0.2);
}

TEST_CASE("parabolic step fixes the anchor and follows the closed form") {
    const FuncExpr f = FuncExpr::identity();
    const StepResult s = parabolic_step(f, kD2, 0.0, 0.05, [](const FuncExpr&) { return true; });
    const double delta = *s.record.parameter("delta");
    CHECK(eval_func(s.f, 0.0) == Complex(0.0));
    CHECK(std::abs(eval_func(s.f, 1.0) - 1.0 / Complex(1.0, -delta)) < 1e-14);
    CHECK(s.record.error_budget_spent <= 0.05);
    // The trace halves delta until the budget is met.
    REQUIRE(!s.record.trace.empty());
    CHECK(s.record.trace.front().parameter == 1.0);
    CHECK(s.record.trace.back().accepted);

    CHECK_THROWS_AS(parabolic_step(f, kD2, 0.0, 0.05, [](const FuncExpr&) { return false; }), Error);
}

TEST_CASE("pie parameter choice") {
    const FuncExpr h = FuncExpr::constant(Complex(1.0, 1.0));
    const PieChoice c = choose_pie_parameters(Complex(1.0, 1.0), Complex(2.0, 1.0), h);
    CHECK(c.params.alpha == doctest::Approx(0.0));
    CHECK(c.params.r == doctest::Approx(1.0));
    CHECK(c.delta2 == 1.0);
    CHECK(pie_distance({Complex(1.0, 1.0), 0.0, 1.0, c.params.delta1}, 0.0) >= 1.0);
    CHECK(c.params.delta1 <= kPi / 8.0);

    try {
        choose_pie_parameters(1.0, 2.0, FuncExpr::constant(1.0));
        FAIL("expected a precondition violation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Precondition);
    }
    CHECK(collinear_with_origin(Complex(1.0, 1.0), Complex(-2.0, -2.0)));
    CHECK_FALSE(collinear_with_origin(Complex(1.0, 1.0), Complex(2.0, 1.0)));
}

TEST_CASE("contact removal: identity takes the eta branch") {
    const FuncExpr f = FuncExpr::identity();
    const double budget = 0.05;
    const StepResult s = remove_contact_zero(f, budget);
    CHECK(*s.record.parameter("branch") == 4.0);
    CHECK(std::abs(eval_func(s.f, -1.0) - eval_func(f, -1.0)) < 1e-10);
    CHECK(std::abs(eval_func(s.f, 1.0) - eval_func(f, 1.0)) < 1e-10);
    CHECK(s.record.error_budget_spent <= budget);
    REQUIRE(s.record.certificate);
    CHECK(s.record.certificate->verdict == Verdict::ZeroFree);

    // The two halves of the case split.
    const StepRecord* eta = find_tag(s.record, "eta");
    REQUIRE(eta);
    CHECK(*eta->parameter("eta_sup_outer") < *eta->parameter("m"));
    CHECK(*eta->parameter("min_modulus_inner") >= 0.25 * *eta->parameter("segment_distance") * (1.0 - 1e-9));
    // Glue continuity at the contact.
    const auto* g = s.f.as<funcs::RestrictedGlue>();
    REQUIRE(g);
    CHECK(std::abs(eval_func(g->pieces[0].f, 0.0) - eval_func(g->pieces[1].f, 0.0)) < 1e-10);
}

TEST_CASE("contact removal: z^2 takes the equal-shrink branch") {
    const StepResult s = remove_contact_zero(FuncExpr::poly({0.0, 0.0, 1.0}), 0.05);
    CHECK(*s.record.parameter("branch") == 3.0);
    CHECK_FALSE(s.record.has_tag("eta"));
    const double r = *s.record.substeps[0].parameter("r");
    CHECK(*s.record.substeps[1].parameter("r") == r);
    CHECK(std::abs(eval_func(s.f, 0.0) - (1.0 - r) * (1.0 - r)) < 1e-15);
}

TEST_CASE("contact removal: nonzero contact value returns f") {
    const FuncExpr one = FuncExpr::constant(1.0);
    const StepResult s = remove_contact_zero(one, 0.05);
    CHECK(*s.record.parameter("branch") == 1.0);
    CHECK(s.f == one);
}

TEST_CASE("chain pipeline: single disc shrinks toward the largest boundary value") {
    const auto [g, report] = disc_chain_pipeline(FuncExpr::poly({-1.0, 1.0}), 1, 0.1);
    REQUIRE(report.steps.size() == 1);
    CHECK(report.steps[0].tag == "shrink");
    CHECK(report.final_certificate.zero_free());
    CHECK(report.total_sup_diff.value <= 0.1);
}

TEST_CASE("chain pipeline: (z-1)(z-2) on three discs") {
    const double eps = 0.1;
    const auto [g, report] = disc_chain_pipeline(FuncExpr::poly({2.0, -3.0, 1.0}), 3, eps);
    CHECK(report.final_certificate.zero_free());
    CHECK(report.total_sup_diff.value <= eps);
    CHECK(sum_spent(report.steps) <= eps);
    int lens = 0, contacts = 0;
    for (const auto& s : report.steps) {
        lens += s.tag == "lens";
        contacts += s.tag == "contact_removal";
    }
    CHECK(lens == 1);
    CHECK(contacts == 2);
}

TEST_CASE("chain pipeline: exp needs no contact repair") {
    const auto [g, report] = disc_chain_pipeline(FuncExpr::exp(), 2, 0.1);
    for (const auto& s : report.steps) {
        if (s.tag == "contact_removal") CHECK(*s.parameter("branch") == 1.0);
    }
    CHECK(report.final_certificate.zero_free());
}

TEST_CASE("chain pipeline rejects interior zeros") {
    try {
        disc_chain_pipeline(FuncExpr::poly({-0.25, 0.0, 1.0}), 2, 0.1);
        FAIL("expected a precondition violation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Precondition);
    }
    CHECK_THROWS_AS(disc_chain_pipeline(FuncExpr::constant(0.0), 2, 0.1), Error);
}

TEST_CASE("identity Jordan chain reproduces the canonical run") {
    const FuncExpr f = FuncExpr::poly({-1.0, 1.0});
    const auto [g, canonical] = disc_chain_pipeline(f, 2, 0.1);
    const JordanChain jc = make_jordan_chain({MapExpr::identity(), MapExpr::identity()});
    const auto [h, mapped] = jordan_chain_pipeline(f, jc, 0.1);
    REQUIRE(mapped.steps.size() == canonical.steps.size() + 2);
    for (std::size_t i = 0; i < canonical.steps.size(); ++i) {
        CHECK(mapped.steps[i + 1].parameters == canonical.steps[i].parameters);
    }
    CHECK(mapped.final_certificate.zero_free());
    for (Complex z : {Complex(0.3, 0.1), Complex(1.2, -0.2), Complex(1.0)}) {
        CHECK(std::abs(eval_func(g, z) - eval_func(h, z)) < 1e-9);
    }
}

TEST_CASE("Jordan chain validation") {
    CHECK_THROWS_AS(make_jordan_chain({MapExpr::affine(2.0, -1.0), MapExpr::affine(4.0, 0.0)}), Error);
    const JordanChain ok = make_jordan_chain({MapExpr::affine(2.0, -1.0), MapExpr::affine(4.0, -3.0)});
    REQUIRE(ok.tangency_images.size() == 1);
    CHECK(std::abs(ok.tangency_images[0] - 1.0) < 1e-12);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "zfree/conformal.hpp"

using namespace zfree;

namespace {

const Disc kD1(Complex(-0.5, 0.0), 0.5);
const Disc kD2(Complex(0.5, 0.0), 0.5);

// Uniform point in a closed disc.
Complex sample(std::mt19937_64& rng, const Disc& d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return d.center + std::polar(d.radius * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

// Oracles written from the defining formulas, via exp/log rather than the
// library's power routine.
Complex lens_oracle(double r, Complex z) {
    const Complex u = std::exp(r * std::log(z / (1.0 - z)));
    return u / (1.0 + u);
}

Complex eta_oracle(const EtaParams& p, Complex z) {
    const Complex z1 = -(z + 1.0) / z;
    const Complex z2 = std::exp((2.0 * p.delta1 / kPi) * std::log(z1));
    const Complex z3 = p.delta3 * z2;
    const Complex z4 = p.r * z3 / (z3 + 1.0);
    return std::polar(1.0, p.alpha) * z4;
}

}  // namespace

TEST_CASE("lens values") {
    CHECK(std::abs(lens_point(0.5, Complex(0.5, 0.5)) - Complex(0.5, 0.20710678118654752)) < 1e-12);
    CHECK(std::abs(lens_point(0.5, Complex(0.5, 0.5)) - lens_oracle(0.5, Complex(0.5, 0.5))) < 1e-14);
    for (double r : {0.1, 0.3, 0.77, 1.0}) {
        CHECK(std::abs(lens_point(r, 0.5) - 0.5) < 1e-15);
        CHECK(std::abs(lens_point(r, 0.0)) < 1e-10);
        CHECK(std::abs(lens_point(r, 1.0) - 1.0) < 1e-10);
    }
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const Complex z = sample(rng, kD2);
        if (std::abs(z) < 1e-6 || std::abs(1.0 - z) < 1e-6) continue;
        CHECK(std::abs(lens_point(1.0, z) - z) < 1e-12);
        CHECK(std::abs(lens_point(0.37, z) - lens_oracle(0.37, z)) < 1e-12);
    }
    CHECK_THROWS_AS(MapExpr::lens(0.0), Error);
    CHECK_THROWS_AS(MapExpr::lens(1.5), Error);
}

TEST_CASE("lens maps the closed right disc into itself") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ur(0.01, 0.99);
    for (int i = 0; i < 1000; ++i) {
        const Complex z = sample(rng, kD2);
        const double r = ur(rng);
        CHECK(std::abs(lens_point(r, z) - 0.5) <= 0.5 + 1e-10);
    }
}

TEST_CASE("parabolic values and the Re(1/w) identity") {
    CHECK(std::abs(parabolic_point(1.0, 1.0) - Complex(0.5, 0.5)) < 1e-15);
    CHECK(std::abs(std::abs(parabolic_point(1.0, 1.0) - 0.5) - 0.5) < 1e-15);
    CHECK(parabolic_point(0.7, 0.0) == Complex(0.0));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const Complex z = sample(rng, kD2);
        CHECK(parabolic_point(0.0, z) == z);
        if (std::abs(z) < 1e-9) continue;
        const Complex w = parabolic_point(0.4, z);
        CHECK(std::abs((1.0 / w).real() - (1.0 / z).real()) < 1e-10 * std::max(1.0, std::abs(1.0 / z)));
        CHECK(std::abs(w - 0.5) <= 0.5 + 1e-10);
        // The un-simplified display of the same map.
        const Complex display = 1.0 / (1.0 - (z - 1.0) / z - Complex(0.0, 0.4));
        CHECK(std::abs(w - display) < 1e-10);
    }
}

TEST_CASE("eta endpoints and the worked stage example") {
    const EtaParams p{0.3, 0.2, 0.25, 0.5};
    CHECK(std::abs(eval_eta(p, -1.0)) < 1e-12);
    CHECK(std::abs(eval_eta(p, 0.0) - std::polar(0.2, 0.3)) < 1e-15);
    CHECK(std::abs(eval_eta(p, Complex(-1e-15, 0.0)) - std::polar(0.2, 0.3)) < 1e-12);
    CHECK(std::abs(eval_eta({0.0, 1.0, kPi / 2.0, 1.0}, -0.5) - 0.5) < 1e-15);
    CHECK_THROWS_AS(eval_eta(p, 0.3), Error);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        const Complex z = sample(rng, kD1);
        if (std::abs(z) < 1e-6) continue;
        CHECK(std::abs(eval_eta(p, z) - eta_oracle(p, z)) < 1e-12);
        CHECK(pie_contains({0.0, p.alpha, p.r, p.delta1}, eval_eta(p, z), 1e-10));
    }
}

TEST_CASE("pie containment and distance") {
    const PiePiece pie{0.0, 0.0, 1.0, kPi / 4.0};
    CHECK(pie_contains(pie, 0.5, 0.0));
    CHECK_FALSE(pie_contains(pie, -0.5, 0.0));
    CHECK(pie_contains(pie, std::polar(1.0, kPi / 4.0), 0.0));
    CHECK(pie_distance(pie, -0.5) == doctest::Approx(0.5));
    CHECK(pie_distance(pie, 2.0) == doctest::Approx(1.0));
    // Brute-force oracle over a dense sampling of the sector.
    const PiePiece shifted{Complex(1.0, 1.0), 0.0, 1.0, 0.1};
    double brute = 1e300;
    for (int a = 0; a <= 400; ++a) {
        for (int b = 0; b <= 400; ++b) {
            const Complex w = shifted.apex + std::polar(a / 400.0, -0.1 + 0.2 * b / 400.0);
            brute = std::min(brute, std::abs(w));
        }
    }
    CHECK(pie_distance(shifted, 0.0) == doctest::Approx(brute).epsilon(1e-4));
    CHECK(pie_distance(shifted, 0.0) >= 1.0);
}

TEST_CASE("principal power branch") {
    CHECK(principal_power(1.0, 0.3) == Complex(1.0));
    CHECK(std::abs(principal_power(Complex(0.0, 1.0), 0.5) - std::polar(1.0, kPi / 4.0)) < 1e-15);
    CHECK_THROWS_AS(principal_power(-2.0, 0.5), Error);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const Complex z(std::abs(u(rng)) + 1e-3, 5.0 * u(rng));
        const double q = 0.5 * (u(rng) + 1.0);
        CHECK(std::abs(std::arg(principal_power(z, q))) <= q * kPi / 2.0 + 1e-12);
    }
}

TEST_CASE("composition is associative and folds affines") {
    const MapExpr a = MapExpr::moebius(1.0, 0.5, 0.2, 1.0);
    const MapExpr b = MapExpr::parabolic(0.3);
    const MapExpr c = MapExpr::affine(0.5, 0.25);
    const MapExpr left = MapExpr::compose(a, MapExpr::compose(b, c));
    const MapExpr right = MapExpr::compose(MapExpr::compose(a, b), c);
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const Complex z = sample(rng, kD2);
        CHECK(std::abs(eval_map(left, z) - eval_map(right, z)) < 1e-12);
    }
    const MapExpr folded = compose_maps(MapExpr::affine(2.0, 1.0), MapExpr::affine(3.0, -1.0));
    REQUIRE(folded.as<maps::Affine>());
    CHECK(folded.as<maps::Affine>()->a == Complex(6.0));
    CHECK(folded.as<maps::Affine>()->b == Complex(-1.0));
    CHECK(compose_maps(MapExpr::identity(), b) == b);
    CHECK_THROWS_AS(MapExpr::moebius(1.0, 2.0, 2.0, 4.0), Error);
}

TEST_CASE("conjugation to another disc") {
    CHECK(conjugate_to_disc(MapExpr::identity(), kD2, kD2, 0.0, 0.0).is_identity());

    const double r = 0.9;
    const MapExpr shrink = conjugate_to_disc(MapExpr::affine(r, 0.0), kD2, kD1, 0.0, -1.0);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const Complex z = sample(rng, kD1);
        CHECK(std::abs(eval_map(shrink, z) - (-1.0 + r * (z + 1.0))) < 1e-14);
    }

    const MapExpr par = conjugate_to_disc(MapExpr::parabolic(0.25), kD2, kD1, 0.0, -1.0);
    CHECK(std::abs(eval_map(par, -1.0) + 1.0) < 1e-14);
    for (int i = 0; i < 1000; ++i) {
        const Complex w = eval_map(par, kD1.point_at(2.0 * kPi * i / 1000.0));
        CHECK(std::abs(std::abs(w - kD1.center) - 0.5) < 1e-10);
    }
}

TEST_CASE("numerical inversion recovers preimages") {
    const MapExpr m = MapExpr::moebius(1.5, -0.5, 0.5, 0.5);
    const Disc domain(Complex(1.5, 0.0), 0.5);
    const auto seeds = inversion_seeds(domain);
    std::vector<Complex> images;
    for (Complex s : seeds) images.push_back(eval_map(m, s));
    std::mt19937_64 rng(19);
    for (int i = 0; i < 200; ++i) {
        const Complex w = sample(rng, domain);
        const auto back = invert_map(m, domain, eval_map(m, w), seeds, images);
        REQUIRE(back);
        CHECK(std::abs(*back - w) < 1e-9);
    }
    CHECK_FALSE(invert_map(m, domain, Complex(-5.0, 0.0), seeds, images));
}

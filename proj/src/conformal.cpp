#include "zfree/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zfree {

namespace {

constexpr double kEtaPoleGuard = 1e-14;
constexpr double kLensCornerGuard = 1e-14;
constexpr double kDomainTol = 1e-9;
constexpr double kBranchTol = 1e-12;
const Complex kI(0.0, 1.0);


}  // namespace

void validate(const EtaParams& p) {
    if (!(p.delta1 > 0.0 && p.delta1 <= kPi / 2.0)) {
        throw Error(ErrorKind::InvalidArgument, "eta requires 0 < delta1 <= pi/2");
    }
    if (!(p.r > 0.0) || !std::isfinite(p.r)) throw Error(ErrorKind::InvalidArgument, "eta requires r > 0");
    if (!(p.delta3 > 0.0) || !std::isfinite(p.delta3)) {
        throw Error(ErrorKind::InvalidArgument, "eta requires delta3 > 0");
    }
    if (!std::isfinite(p.alpha)) throw Error(ErrorKind::InvalidArgument, "eta alpha must be finite");
}

MapExpr::MapExpr() : node_(std::make_shared<const MapNode>(MapNode{maps::Identity{}})) {}

MapExpr MapExpr::identity() { return MapExpr(); }

MapExpr MapExpr::affine(Complex a, Complex b) {
    if (a == Complex(0.0)) throw Error(ErrorKind::InvalidArgument, "affine map needs a != 0");
    return MapExpr(std::make_shared<const MapNode>(MapNode{maps::Affine{a, b}}));
}

MapExpr MapExpr::moebius(Complex a, Complex b, Complex c, Complex d) {
    const Complex det = a * d - b * c;
    if (std::abs(det) <= 1e-14 * std::max({std::abs(a * d), std::abs(b * c), 1e-300})) {
        throw Error(ErrorKind::InvalidArgument, "moebius map needs ad - bc != 0");
    }
    return MapExpr(std::make_shared<const MapNode>(MapNode{maps::Moebius{a, b, c, d}}));
}

MapExpr MapExpr::power(double q) {
    if (!std::isfinite(q)) throw Error(ErrorKind::InvalidArgument, "power exponent must be finite");
    return MapExpr(std::make_shared<const MapNode>(MapNode{maps::Power{q}}));
}

MapExpr MapExpr::lens(double r) {
    if (!(r > 0.0 && r <= 1.0)) throw Error(ErrorKind::InvalidArgument, "lens requires 0 < r <= 1");
    return MapExpr(std::make_shared<const MapNode>(MapNode{maps::Lens{r}}));
}

MapExpr MapExpr::parabolic(double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw Error(ErrorKind::InvalidArgument, "parabolic requires delta >= 0");
    }
    return MapExpr(std::make_shared<const MapNode>(MapNode{maps::Parabolic{delta}}));
}

MapExpr MapExpr::eta(const EtaParams& params) {
    validate(params);
    return MapExpr(std::make_shared<const MapNode>(MapNode{maps::Eta{params}}));
}

MapExpr MapExpr::compose(MapExpr outer, MapExpr inner) {
    return MapExpr(std::make_shared<const MapNode>(MapNode{maps::Compose{std::move(outer), std::move(inner)}}));
}

bool MapExpr::is_identity() const {
    if (as<maps::Identity>()) return true;
    if (const auto* a = as<maps::Affine>()) return a->a == Complex(1.0) && a->b == Complex(0.0);
    return false;
}

bool operator==(const MapExpr& x, const MapExpr& y) {
    const auto& a = x.node().value;
    const auto& b = y.node().value;
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const T& rhs = std::get<T>(b);
            if constexpr (std::is_same_v<T, maps::Identity>) {
                return true;
            } else if constexpr (std::is_same_v<T, maps::Affine>) {
                return lhs.a == rhs.a && lhs.b == rhs.b;
            } else if constexpr (std::is_same_v<T, maps::Moebius>) {
                return lhs.a == rhs.a && lhs.b == rhs.b && lhs.c == rhs.c && lhs.d == rhs.d;
            } else if constexpr (std::is_same_v<T, maps::Power>) {
                return lhs.q == rhs.q;
            } else if constexpr (std::is_same_v<T, maps::Lens>) {
                return lhs.r == rhs.r;
            } else if constexpr (std::is_same_v<T, maps::Parabolic>) {
                return lhs.delta == rhs.delta;
            } else if constexpr (std::is_same_v<T, maps::Eta>) {
                return lhs.params == rhs.params;
            } else {
                return lhs.outer == rhs.outer && lhs.inner == rhs.inner;
            }
        },
        a);
}

Complex principal_power(Complex z, double q) {
    if (q == 0.0) return Complex(1.0);
    const double mod = std::abs(z);
    if (mod == 0.0) {
        if (q > 0.0) return Complex(0.0);
        throw Error(ErrorKind::Evaluation, "non-positive power of zero", z);
    }
    if (z.real() < 0.0 && std::abs(z.imag()) <= kBranchTol * mod) {
        throw Error(ErrorKind::Evaluation, "power argument on the branch cut", z);
    }
    if (z == Complex(1.0)) return Complex(1.0);
    return std::polar(std::pow(mod, q), q * std::arg(z));
}

Complex lens_point(double r, Complex z) {
    const Complex gap = 1.0 - z;
    if (std::abs(gap) < kLensCornerGuard) return Complex(1.0);
    const Complex u = principal_power(z / gap, r);
    if (std::abs(u) > 1.0) return 1.0 / (1.0 + 1.0 / u);
    return u / (1.0 + u);
}

Complex parabolic_point(double delta, Complex z) {
    const Complex den = 1.0 - kI * delta * z;
    if (den == Complex(0.0)) throw Error(ErrorKind::Evaluation, "parabolic map pole", z);
    return z / den;
}

Complex eval_eta(const EtaParams& p, Complex z) {
    if (std::abs(z + 0.5) > 0.5 + kDomainTol) {
        throw Error(ErrorKind::InvalidArgument, "eta is defined on the closed disc |z+1/2| <= 1/2", z);
    }
    const Complex rotation = std::polar(1.0, p.alpha);
    if (std::abs(z) < kEtaPoleGuard) return p.r * rotation;
    const Complex z1 = -(z + 1.0) / z;
    const Complex z2 = principal_power(z1, 2.0 * p.delta1 / kPi);
    const Complex z3 = p.delta3 * z2;
    const Complex z4 = std::abs(z3) > 1.0 ? p.r / (1.0 + 1.0 / z3) : p.r * z3 / (z3 + 1.0);
    return rotation * z4;
}

Complex eval_map(const MapExpr& m, Complex z) {
    return std::visit(
        [&](const auto& n) -> Complex {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, maps::Identity>) {
                return z;
            } else if constexpr (std::is_same_v<T, maps::Affine>) {
                return n.a * z + n.b;
            } else if constexpr (std::is_same_v<T, maps::Moebius>) {
                const Complex den = n.c * z + n.d;
                if (den == Complex(0.0)) throw Error(ErrorKind::Evaluation, "moebius pole", z);
                const Complex w = (n.a * z + n.b) / den;
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                    throw Error(ErrorKind::Evaluation, "moebius pole", z);
                }
                return w;
            } else if constexpr (std::is_same_v<T, maps::Power>) {
                return principal_power(z, n.q);
            } else if constexpr (std::is_same_v<T, maps::Lens>) {
                return lens_point(n.r, z);
            } else if constexpr (std::is_same_v<T, maps::Parabolic>) {
                return parabolic_point(n.delta, z);
            } else if constexpr (std::is_same_v<T, maps::Eta>) {
                return eval_eta(n.params, z);
            } else {
                return eval_map(n.outer, eval_map(n.inner, z));
            }
        },
        m.node().value);
}

MapExpr compose_maps(const MapExpr& outer, const MapExpr& inner) {
    if (outer.as<maps::Identity>()) return inner;
    if (inner.as<maps::Identity>()) return outer;
    const auto* ao = outer.as<maps::Affine>();
    const auto* ai = inner.as<maps::Affine>();
    if (ao && ai) {
        const Complex a = ao->a * ai->a;
        const Complex b = ao->a * ai->b + ao->b;
        if (a == Complex(1.0) && b == Complex(0.0)) return MapExpr::identity();
        return MapExpr::affine(a, b);
    }
    if (ao) {
        if (const auto* c = inner.as<maps::Compose>()) {
            if (c->outer.as<maps::Affine>()) return compose_maps(compose_maps(outer, c->outer), c->inner);
        }
    }
    if (ai) {
        if (const auto* c = outer.as<maps::Compose>()) {
            if (c->inner.as<maps::Affine>()) return compose_maps(c->outer, compose_maps(c->inner, inner));
        }
    }
    return MapExpr::compose(outer, inner);
}

MapExpr affine_between(const Disc& from, Complex anchor_from, const Disc& to, Complex anchor_to) {
    if (!from.on_boundary(anchor_from, 1e-9 * std::max(1.0, from.radius)) ||
        !to.on_boundary(anchor_to, 1e-9 * std::max(1.0, to.radius))) {
        throw Error(ErrorKind::InvalidArgument, "conjugation anchors must lie on the disc boundaries");
    }
    const Complex a = (anchor_to - to.center) / (anchor_from - from.center);
    const Complex b = anchor_to - a * anchor_from;
    if (a == Complex(1.0) && b == Complex(0.0)) return MapExpr::identity();
    return MapExpr::affine(a, b);
}

MapExpr conjugate_to_disc(const MapExpr& m, const Disc& source, const Disc& target,
                          Complex anchor_source, Complex anchor_target) {
    if (m.as<maps::Identity>()) return m;
    const MapExpr to_source = affine_between(target, anchor_target, source, anchor_source);
    const MapExpr back = affine_between(source, anchor_source, target, anchor_target);
    return compose_maps(back, compose_maps(m, to_source));
}

namespace {

double segment_distance(Complex a, Complex b, Complex p) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

}  // namespace

double pie_distance(const PiePiece& p, Complex w) {
    const Complex v = (w - p.apex) * std::polar(1.0, -p.alpha);
    const double rho = std::abs(v);
    if (rho == 0.0) return 0.0;
    if (std::abs(std::arg(v)) <= p.delta1) return std::max(0.0, rho - p.r);
    const Complex edge_hi = std::polar(p.r, p.delta1);
    const Complex edge_lo = std::polar(p.r, -p.delta1);
    return std::min(segment_distance(0.0, edge_hi, v), segment_distance(0.0, edge_lo, v));
}

bool pie_contains(const PiePiece& p, Complex w, double margin) {
    // Rounding slack so boundary rays and the outer arc count as inside.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, p.r + std::abs(p.apex));
    return pie_distance(p, w) <= margin + slack;
}

std::vector<Complex> inversion_seeds(const Disc& domain) {
    std::vector<Complex> seeds{domain.center};
    constexpr int kRings = 8;
    constexpr int kSpokes = 48;
    for (int k = 1; k <= kRings; ++k) {
        const double rho = domain.radius * k / kRings;
        for (int i = 0; i < kSpokes; ++i) {
            seeds.push_back(domain.center + std::polar(rho, 2.0 * kPi * i / kSpokes));
        }
    }
    return seeds;
}

std::optional<Complex> invert_map(const MapExpr& m, const Disc& domain, Complex z,
                                  const std::vector<Complex>& seeds,
                                  const std::vector<Complex>& seed_images) {
    if (seeds.empty() || seeds.size() != seed_images.size()) {
        throw Error(ErrorKind::InvalidArgument, "inversion needs matching seeds and images");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < seeds.size(); ++i) {
        if (std::abs(seed_images[i] - z) < std::abs(seed_images[best] - z)) best = i;
    }
    const double target = 1e-12 * std::max(1.0, std::abs(z));
    const double h = 1e-6 * domain.radius;
    const double limit = 1.5 * domain.radius;
    Complex w = seeds[best];
    Complex residual = eval_map(m, w) - z;
    for (int iter = 0; iter < 80 && std::abs(residual) > target; ++iter) {
        const Complex deriv = (eval_map(m, w + h) - eval_map(m, w - h)) / (2.0 * h);
        if (deriv == Complex(0.0)) break;
        Complex step = residual / deriv;
        // Damped Newton keeps iterates near the disc where the map is known to be injective.
        Complex next = w - step;
        for (int halving = 0; halving < 30; ++halving) {
            if (std::abs(next - domain.center) <= limit) {
                const Complex r_next = eval_map(m, next) - z;
                if (std::abs(r_next) < std::abs(residual)) {
                    residual = r_next;
                    break;
                }
            }
            step *= 0.5;
            next = w - step;
        }
        if (next == w) break;
        w = next;
        residual = eval_map(m, w) - z;
    }
    const bool inside = domain.contains(w, 1e-9 * std::max(1.0, domain.radius));
    if (std::abs(residual) <= target) {
        if (inside) return w;
        return std::nullopt;
    }
    if (domain.contains(w, 1e-6 * domain.radius)) {
        throw Error(ErrorKind::MapInversion, "numerical inversion did not reach residual 1e-12", z);
    }
    return std::nullopt;
}

}  // namespace zfree

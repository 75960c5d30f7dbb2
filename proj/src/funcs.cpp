#include "zfree/funcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zfree/parallel.hpp"

namespace zfree {

namespace {

constexpr double kGlueContinuityTol = 1e-10;
constexpr double kRefineRelTol = 1e-3;

template <class T>
std::shared_ptr<const FuncNode> node_of(T value) {
    return std::make_shared<const FuncNode>(FuncNode{std::move(value)});
}

bool tangent(const Disc& a, const Disc& b, Complex& point) {
    const double d = std::abs(b.center - a.center);
    const double scale = std::max({1.0, a.radius, b.radius});
    if (std::abs(d - a.radius - b.radius) > kTangencyTol * scale) return false;
    point = a.center + (b.center - a.center) * (a.radius / (a.radius + b.radius));
    return true;
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

FuncExpr::FuncExpr() : node_(node_of(funcs::Const{0.0})) {}

FuncExpr FuncExpr::constant(Complex c) { return FuncExpr(node_of(funcs::Const{c})); }

FuncExpr FuncExpr::poly(std::vector<Complex> coefficients) {
    if (coefficients.empty()) coefficients.push_back(0.0);
    return FuncExpr(node_of(funcs::Poly{std::move(coefficients)}));
}

FuncExpr FuncExpr::exp() { return FuncExpr(node_of(funcs::Exp{})); }
FuncExpr FuncExpr::sin() { return FuncExpr(node_of(funcs::Sin{})); }
FuncExpr FuncExpr::cos() { return FuncExpr(node_of(funcs::Cos{})); }

FuncExpr FuncExpr::sum(FuncExpr a, FuncExpr b) {
    return FuncExpr(node_of(funcs::Sum{std::move(a), std::move(b)}));
}

FuncExpr FuncExpr::product(FuncExpr a, FuncExpr b) {
    return FuncExpr(node_of(funcs::Product{std::move(a), std::move(b)}));
}

FuncExpr FuncExpr::quotient(FuncExpr num, FuncExpr den) {
    return FuncExpr(node_of(funcs::Quotient{std::move(num), std::move(den)}));
}

FuncExpr FuncExpr::pow(FuncExpr base, double exponent) {
    if (!std::isfinite(exponent)) throw Error(ErrorKind::InvalidArgument, "exponent must be finite");
    return FuncExpr(node_of(funcs::Pow{std::move(base), exponent}));
}

FuncExpr FuncExpr::apply(FuncExpr outer, FuncExpr inner) {
    return FuncExpr(node_of(funcs::Apply{std::move(outer), std::move(inner)}));
}

FuncExpr FuncExpr::composed(FuncExpr f, MapExpr m) {
    return FuncExpr(node_of(funcs::ComposedWithMap{std::move(f), std::move(m)}));
}

FuncExpr FuncExpr::glue(std::vector<GluePiece> pieces) {
    if (pieces.empty()) throw Error(ErrorKind::InvalidArgument, "glue needs at least one piece");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
            Complex t;
            if (!tangent(pieces[i].region, pieces[j].region, t)) continue;
            const Complex a = eval_func(pieces[i].f, t);
            const Complex b = eval_func(pieces[j].f, t);
            if (std::abs(a - b) > kGlueContinuityTol) {
                throw Error(ErrorKind::InternalConsistency,
                            "glued pieces disagree at a tangency by " + std::to_string(std::abs(a - b)), t);
            }
        }
    }
    return FuncExpr(node_of(funcs::RestrictedGlue{std::move(pieces)}));
}

FuncExpr FuncExpr::mapped_glue(std::vector<MappedPiece> pieces) {
    if (pieces.empty()) throw Error(ErrorKind::InvalidArgument, "mapped glue needs at least one piece");
    for (auto& p : pieces) {
        if (p.seeds.empty()) {
            p.seeds = inversion_seeds(p.preimage);
            p.seed_images.clear();
        }
        if (p.seed_images.size() != p.seeds.size()) {
            p.seed_images.clear();
            for (Complex w : p.seeds) p.seed_images.push_back(eval_map(p.phi, w));
        }
    }
    return FuncExpr(node_of(funcs::MappedGlue{std::move(pieces)}));
}

FuncExpr FuncExpr::ortho_poly(Complex center, double scale, Complex q0, std::vector<std::vector<Complex>> h,
                              std::vector<Complex> d) {
    if (!(scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "scale must be positive");
    if (d.empty() || h.size() + 1 != d.size()) {
        throw Error(ErrorKind::InvalidArgument, "recurrence needs one Hessenberg column per degree");
    }
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (h[k].size() != k + 2 || h[k][k + 1] == Complex(0.0)) {
            throw Error(ErrorKind::InvalidArgument, "malformed Hessenberg column " + std::to_string(k));
        }
    }
    return FuncExpr(node_of(funcs::OrthoPoly{center, scale, q0, std::move(h), std::move(d)}));
}

bool operator==(const FuncExpr& x, const FuncExpr& y) {
    const auto& a = x.node().value;
    const auto& b = y.node().value;
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const T& rhs = std::get<T>(b);
            if constexpr (std::is_same_v<T, funcs::Const>) {
                return lhs.c == rhs.c;
            } else if constexpr (std::is_same_v<T, funcs::Poly>) {
                return lhs.coefficients == rhs.coefficients;
            } else if constexpr (std::is_same_v<T, funcs::Exp> || std::is_same_v<T, funcs::Sin> ||
                                 std::is_same_v<T, funcs::Cos>) {
                return true;
            } else if constexpr (std::is_same_v<T, funcs::Sum> || std::is_same_v<T, funcs::Product>) {
                return lhs.left == rhs.left && lhs.right == rhs.right;
            } else if constexpr (std::is_same_v<T, funcs::Quotient>) {
                return lhs.num == rhs.num && lhs.den == rhs.den;
            } else if constexpr (std::is_same_v<T, funcs::Pow>) {
                return lhs.exponent == rhs.exponent && lhs.base == rhs.base;
            } else if constexpr (std::is_same_v<T, funcs::Apply>) {
                return lhs.outer == rhs.outer && lhs.inner == rhs.inner;
            } else if constexpr (std::is_same_v<T, funcs::ComposedWithMap>) {
                return lhs.m == rhs.m && lhs.f == rhs.f;
            } else if constexpr (std::is_same_v<T, funcs::OrthoPoly>) {
                return lhs.center == rhs.center && lhs.scale == rhs.scale && lhs.q0 == rhs.q0 && lhs.h == rhs.h &&
                       lhs.d == rhs.d;
            } else if constexpr (std::is_same_v<T, funcs::RestrictedGlue>) {
                if (lhs.pieces.size() != rhs.pieces.size()) return false;
                for (std::size_t i = 0; i < lhs.pieces.size(); ++i) {
                    if (!(lhs.pieces[i].region == rhs.pieces[i].region) || !(lhs.pieces[i].f == rhs.pieces[i].f)) {
                        return false;
                    }
                }
                return true;
            } else {
                if (lhs.pieces.size() != rhs.pieces.size()) return false;
                for (std::size_t i = 0; i < lhs.pieces.size(); ++i) {
                    const auto& p = lhs.pieces[i];
                    const auto& q = rhs.pieces[i];
                    if (!(p.preimage == q.preimage) || !(p.phi == q.phi) || !(p.g == q.g)) return false;
                }
                return true;
            }
        },
        a);
}

Complex horner(std::span<const Complex> coefficients, Complex z) {
    Complex acc(0.0);
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
    return acc;
}

namespace {

Complex integer_power(Complex base, long long n) {
    const bool invert = n < 0;
    unsigned long long k = invert ? static_cast<unsigned long long>(-n) : static_cast<unsigned long long>(n);
    Complex result(1.0);
    while (k) {
        if (k & 1ULL) result *= base;
        base *= base;
        k >>= 1ULL;
    }
    if (invert) {
        if (result == Complex(0.0)) throw Error(ErrorKind::Evaluation, "negative power of zero");
        return 1.0 / result;
    }
    return result;
}

}  // namespace

Complex eval_func(const FuncExpr& f, Complex z) {
    return std::visit(
        [&](const auto& n) -> Complex {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, funcs::Const>) {
                return n.c;
            } else if constexpr (std::is_same_v<T, funcs::Poly>) {
                return horner(n.coefficients, z);
            } else if constexpr (std::is_same_v<T, funcs::Exp>) {
                return std::exp(z);
            } else if constexpr (std::is_same_v<T, funcs::Sin>) {
                return std::sin(z);
            } else if constexpr (std::is_same_v<T, funcs::Cos>) {
                return std::cos(z);
            } else if constexpr (std::is_same_v<T, funcs::Sum>) {
                return eval_func(n.left, z) + eval_func(n.right, z);
            } else if constexpr (std::is_same_v<T, funcs::Product>) {
                return eval_func(n.left, z) * eval_func(n.right, z);
            } else if constexpr (std::is_same_v<T, funcs::Quotient>) {
                const Complex den = eval_func(n.den, z);
                if (den == Complex(0.0)) throw Error(ErrorKind::Evaluation, "division by zero", z);
                return eval_func(n.num, z) / den;
            } else if constexpr (std::is_same_v<T, funcs::Pow>) {
                const Complex base = eval_func(n.base, z);
                if (n.exponent == std::trunc(n.exponent) && std::abs(n.exponent) <= 1024.0) {
                    return integer_power(base, static_cast<long long>(n.exponent));
                }
                return principal_power(base, n.exponent);
            } else if constexpr (std::is_same_v<T, funcs::Apply>) {
                return eval_func(n.outer, eval_func(n.inner, z));
            } else if constexpr (std::is_same_v<T, funcs::ComposedWithMap>) {
                return eval_func(n.f, eval_map(n.m, z));
            } else if constexpr (std::is_same_v<T, funcs::OrthoPoly>) {
                const Complex x = (z - n.center) / n.scale;
                std::vector<Complex> q{n.q0};
                q.reserve(n.d.size());
                Complex acc = n.d[0] * n.q0;
                for (std::size_t k = 0; k < n.h.size(); ++k) {
                    Complex next = x * q[k];
                    for (std::size_t j = 0; j <= k; ++j) next -= n.h[k][j] * q[j];
                    next /= n.h[k][k + 1];
                    acc += n.d[k + 1] * next;
                    q.push_back(next);
                }
                return acc;
            } else if constexpr (std::is_same_v<T, funcs::RestrictedGlue>) {
                // Prefer the piece that really contains z; the tolerance only
                // rescues points a rounding error outside every disc.
                const FuncExpr::GluePiece* best = nullptr;
                double best_excess = 0.0;
                for (const auto& piece : n.pieces) {
                    const double excess = (std::abs(z - piece.region.center) - piece.region.radius) /
                                          std::max(1.0, piece.region.radius);
                    if (excess <= 0.0) return eval_func(piece.f, z);
                    if (excess <= 1e-9 && (!best || excess < best_excess)) {
                        best = &piece;
                        best_excess = excess;
                    }
                }
                if (best) return eval_func(best->f, z);
                throw Error(ErrorKind::InvalidArgument, "point lies outside every glued piece", z);
            } else {
                for (const auto& piece : n.pieces) {
                    if (auto w = invert_map(piece.phi, piece.preimage, z, piece.seeds, piece.seed_images)) {
                        return eval_func(piece.g, *w);
                    }
                }
                throw Error(ErrorKind::InvalidArgument, "point lies outside every mapped piece", z);
            }
        },
        f.node().value);
}

std::vector<Complex> eval_many(const FuncExpr& f, std::span<const Complex> points) {
    std::vector<Complex> values(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        Complex v;
        try {
            v = eval_func(f, points[i]);
        } catch (const Error& e) {
            if (e.point()) throw;
            throw Error(e.kind(), e.what(), points[i]);
        }
        if (!finite(v)) throw Error(ErrorKind::Evaluation, "non-finite function value", points[i]);
        values[i] = v;
    });
    return values;
}

FuncExpr compose(const FuncExpr& f, const MapExpr& m) {
    if (m.as<maps::Identity>()) return f;
    if (f.as<funcs::Const>()) return f;
    if (const auto* c = f.as<funcs::ComposedWithMap>()) return compose(c->f, compose_maps(c->m, m));
    if (m.is_identity()) return f;
    return FuncExpr::composed(f, m);
}

FuncExpr restrict_to(const FuncExpr& f, const Disc& disc) {
    if (const auto* g = f.as<funcs::RestrictedGlue>()) {
        for (const auto& piece : g->pieces) {
            if (piece.region == disc) return piece.f;
        }
        throw Error(ErrorKind::InvalidArgument, "glue has no piece on the requested disc", disc.center);
    }
    return f;
}

double grid_sup_diff(const FuncExpr& f, const FuncExpr& g, std::span<const Complex> points) {
    const auto a = eval_many(f, points);
    const auto b = eval_many(g, points);
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
    return best;
}

double grid_min_modulus(const FuncExpr& f, std::span<const Complex> points,
                        std::span<const Exclusion> exclusions) {
    std::vector<Complex> kept;
    kept.reserve(points.size());
    for (Complex z : points) {
        bool excluded = false;
        for (const auto& e : exclusions) {
            if (std::abs(z - e.center) < e.radius) {
                excluded = true;
                break;
            }
        }
        if (!excluded) kept.push_back(z);
    }
    if (kept.empty()) throw Error(ErrorKind::InvalidArgument, "every sample is excluded");
    const auto values = eval_many(f, kept);
    double best = std::numeric_limits<double>::infinity();
    for (Complex v : values) best = std::min(best, std::abs(v));
    return best;
}

namespace {

bool agree(double a, double b) {
    return std::abs(a - b) <= kRefineRelTol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

NormEstimate sup_diff(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid) {
    const double coarse = grid_sup_diff(f, g, grid.all_samples());
    const SampleGrid fine = refine(grid);
    const double dense = grid_sup_diff(f, g, fine.all_samples());
    return {std::max(coarse, dense), fine.density, agree(coarse, dense)};
}

NormEstimate min_modulus(const FuncExpr& f, const SampleGrid& grid, std::span<const Exclusion> exclusions) {
    for (const auto& e : exclusions) {
        if (!(e.radius >= 0.0)) throw Error(ErrorKind::InvalidArgument, "exclusion radius must be >= 0");
    }
    // Both passes share samples on each exclusion rim, where the minimum
    // usually sits, at the horizontal extremes of each disc (contacts and
    // anchors) and around tangencies, so the refinement check compares like with like.
    std::vector<Complex> rim;
    if (!grid.map) {
        const auto discs = region_discs(grid.region);
        for (const Disc& d : discs) {
            rim.push_back(d.point_at(0.0));
            rim.push_back(d.point_at(kPi));
        }
        // Tangencies are corners of the region: features there shrink with
        // the construction, so sample every dyadic scale around them.
        for (Complex t : region_tangencies(grid.region)) {
            for (const Disc& d : discs) {
                if (!d.on_boundary(t, 1e-9)) continue;
                for (double rho = 0.25 * d.radius; rho >= 1e-9; rho *= 0.5) {
                    const auto ring = local_samples(d, t, rho, 2, 64);
                    rim.insert(rim.end(), ring.begin(), ring.end());
                }
            }
        }
        for (const auto& e : exclusions) {
            for (int i = 0; i < 256; ++i) {
                const Complex z = e.center + std::polar(e.radius * (1.0 + 1e-9), 2.0 * kPi * i / 256.0);
                for (const Disc& d : discs) {
                    if (d.contains(z, 0.0)) {
                        rim.push_back(z);
                        break;
                    }
                }
            }
        }
    }
    auto with_rim = [&](std::vector<Complex> pts) {
        pts.insert(pts.end(), rim.begin(), rim.end());
        return pts;
    };
    const double coarse = grid_min_modulus(f, with_rim(grid.all_samples()), exclusions);
    const SampleGrid fine = refine(grid);
    const double dense = grid_min_modulus(f, with_rim(fine.all_samples()), exclusions);
    return {std::min(coarse, dense), fine.density, agree(coarse, dense)};
}

}  // namespace zfree

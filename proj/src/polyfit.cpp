#include "zfree/polyfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zfree {

namespace {

constexpr double kRankCollapse = 1e-13;

struct Arnoldi {
    std::vector<std::vector<Complex>> q;  // basis values at samples
    std::vector<std::vector<Complex>> h;  // h[k] holds column k (size k+2)
    std::vector<double> weights;
    Complex q0;
};

Complex inner(const std::vector<double>& w, const std::vector<Complex>& u, const std::vector<Complex>& v) {
    Complex acc(0.0);
    for (std::size_t i = 0; i < u.size(); ++i) acc += w[i] * std::conj(u[i]) * v[i];
    return acc;
}

/// Arclength weights: half the distance to each neighbour on the same
/// disc boundary, normalised to total mass 1.
std::vector<double> arclength_weights(const SampleGrid& grid) {
    const auto& z = grid.boundary_samples;
    const auto& owner = grid.boundary_disc;
    std::vector<double> w(z.size(), 0.0);
    std::size_t start = 0;
    while (start < z.size()) {
        std::size_t end = start;
        while (end < z.size() && owner[end] == owner[start]) ++end;
        const std::size_t m = end - start;
        for (std::size_t i = 0; i < m; ++i) {
            const Complex prev = z[start + (i + m - 1) % m];
            const Complex next = z[start + (i + 1) % m];
            w[start + i] = 0.5 * (std::abs(z[start + i] - prev) + std::abs(next - z[start + i]));
        }
        start = end;
    }
    double total = 0.0;
    for (double v : w) total += v;
    for (double& v : w) v /= total;
    return w;
}

Arnoldi run_arnoldi(const SampleGrid& grid, int degree, Complex center, double scale) {
    const auto& z = grid.boundary_samples;
    if (z.size() <= static_cast<std::size_t>(degree)) {
        throw Error(ErrorKind::Conditioning, "fewer fit samples than basis functions (degree " +
                                                 std::to_string(degree) + ", " + std::to_string(z.size()) +
                                                 " samples)");
    }
    Arnoldi a;
    a.weights = arclength_weights(grid);
    std::vector<Complex> x(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) x[i] = (z[i] - center) / scale;
    a.q0 = 1.0;  // weights have unit mass
    a.q.emplace_back(z.size(), a.q0);
    for (int k = 0; k < degree; ++k) {
        std::vector<Complex> v(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) v[i] = x[i] * a.q[k][i];
        std::vector<Complex> col(static_cast<std::size_t>(k) + 2, 0.0);
        // Two passes of Gram-Schmidt.
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j <= k; ++j) {
                const Complex c = inner(a.weights, a.q[j], v);
                col[j] += c;
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * a.q[j][i];
            }
        }
        const double norm = std::sqrt(std::max(0.0, inner(a.weights, v, v).real()));
        if (norm < kRankCollapse) {
            throw Error(ErrorKind::Conditioning,
                        "rank collapse in Arnoldi orthogonalisation at degree " + std::to_string(k + 1) +
                            " (residual norm " + std::to_string(norm) + ")");
        }
        col[k + 1] = norm;
        for (auto& e : v) e /= norm;
        a.q.push_back(std::move(v));
        a.h.push_back(std::move(col));
    }
    return a;
}

Complex centroid(const std::vector<Complex>& pts, double& scale) {
    double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x, lo_y = lo_x, hi_y = -lo_x;
    for (Complex z : pts) {
        lo_x = std::min(lo_x, z.real());
        hi_x = std::max(hi_x, z.real());
        lo_y = std::min(lo_y, z.imag());
        hi_y = std::max(hi_y, z.imag());
    }
    const Complex c(0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y));
    scale = 0.0;
    for (Complex z : pts) scale = std::max(scale, std::abs(z - c));
    if (scale == 0.0) scale = 1.0;
    return c;
}

}  // namespace

FuncExpr PolyApproximant::as_function() const {
    if (!orthogonal.empty()) return FuncExpr::ortho_poly(center, scale, q0, hessenberg, orthogonal);
    const MapExpr to_scaled = MapExpr::affine(1.0 / scale, -center / scale);
    return compose(FuncExpr::poly(coefficients), to_scaled);
}

Complex PolyApproximant::operator()(Complex z) const {
    if (!orthogonal.empty()) return eval_func(as_function(), z);
    return horner(coefficients, (z - center) / scale);
}

DegreeExceededError::DegreeExceededError(const std::string& message, PolyApproximant best)
    : Error(ErrorKind::DegreeExceeded, message), best_(std::move(best)) {}

SampleGrid region_grid(const PolyRegion& region, double density) {
    if (const auto* chain = std::get_if<DiscChain>(&region)) return boundary_grid(*chain, density);
    return jordan_grid(std::get<JordanChain>(region), density);
}

ArnoldiBasis arnoldi_basis(const SampleGrid& fit_grid, int degree, Complex center, double scale) {
    Arnoldi a = run_arnoldi(fit_grid, degree, center, scale);
    return {std::move(a.q), std::move(a.weights)};
}

PolyApproximant fit_polynomial(const FuncExpr& f, int degree, const SampleGrid& fit_grid,
                               const SampleGrid& verify_grid) {
    if (degree < 0) throw Error(ErrorKind::InvalidArgument, "degree must be >= 0");
    PolyApproximant p;
    p.degree = degree;
    p.center = centroid(fit_grid.boundary_samples, p.scale);
    const Arnoldi a = run_arnoldi(fit_grid, degree, p.center, p.scale);
    const std::vector<Complex> values = eval_many(f, fit_grid.boundary_samples);

    // Orthonormal columns: least-squares coefficients are plain projections.
    std::vector<Complex> d(static_cast<std::size_t>(degree) + 1);
    for (int k = 0; k <= degree; ++k) d[k] = inner(a.weights, a.q[k], values);

    // Same recurrence on coefficient vectors: q_{k+1} = (x q_k - sum_j H_jk q_j) / H_{k+1,k}.
    std::vector<std::vector<Complex>> basis;
    basis.push_back({a.q0});
    for (int k = 0; k < degree; ++k) {
        std::vector<Complex> next(static_cast<std::size_t>(k) + 2, 0.0);
        for (std::size_t i = 0; i < basis[k].size(); ++i) next[i + 1] += basis[k][i];
        for (int j = 0; j <= k; ++j) {
            for (std::size_t i = 0; i < basis[j].size(); ++i) next[i] -= a.h[k][j] * basis[j][i];
        }
        for (auto& c : next) c /= a.h[k][k + 1];
        basis.push_back(std::move(next));
    }
    p.coefficients.assign(static_cast<std::size_t>(degree) + 1, 0.0);
    for (int k = 0; k <= degree; ++k) {
        for (std::size_t i = 0; i < basis[k].size(); ++i) p.coefficients[i] += d[k] * basis[k][i];
    }
    p.q0 = a.q0;
    p.hessenberg = a.h;
    p.orthogonal = std::move(d);
    p.fit_error = sup_diff(p.as_function(), f, verify_grid);
    return p;
}

namespace {

std::vector<std::pair<std::string, Contour>> region_contours(const PolyRegion& region, const CertifyOptions& options) {
    if (const auto* chain = std::get_if<DiscChain>(&region)) {
        auto contours = shrunk_contours(*chain, options);
        contours.emplace_back("chain boundary", chain_boundary_contour(*chain, options.contour_step));
        return contours;
    }
    const JordanChain& jc = std::get<JordanChain>(region);
    const DiscChain discs = chain_discs(jc.n);
    auto contours = shrunk_contours(discs, options);
    for (std::size_t k = 0; k < jc.n; ++k) {
        const MapExpr phi = jc.maps[k];
        contours[k].second = map_contour(contours[k].second, [phi](Complex w) { return eval_map(phi, w); });
        contours[k].first = "domain " + std::to_string(k + 1);
    }
    Contour outer = chain_boundary_contour(discs, options.contour_step);
    for (std::size_t a = 0; a < outer.arcs.size(); ++a) {
        const std::size_t k = a < jc.n ? a : 2 * jc.n - 1 - a;
        const MapExpr phi = jc.maps[k];
        outer.arcs[a].map = [phi](Complex w) { return eval_map(phi, w); };
    }
    outer = map_contour(outer, [](Complex z) { return z; });
    contours.emplace_back("chain boundary", outer);
    return contours;
}

}  // namespace

PolyApproximant zero_free_polynomial(const FuncExpr& f, const PolyRegion& region, double budget, int max_degree,
                                     const PolyfitOptions& options) {
    if (!(budget > 0.0)) throw Error(ErrorKind::InvalidArgument, "budget must be positive");
    if (max_degree < 0) throw Error(ErrorKind::InvalidArgument, "max_degree must be >= 0");
    const SampleGrid fit_grid = region_grid(region, options.fit_density);
    const SampleGrid verify_grid = region_grid(region, options.verify_density);
    const NormEstimate m_star = min_modulus(f, verify_grid);
    if (!(m_star.value > options.certify.zero_floor)) {
        throw Error(ErrorKind::Precondition, "target function is not zero-free on the verification grid");
    }
    const double target = std::min(budget, 0.5 * m_star.value);

    std::optional<PolyApproximant> best;
    std::vector<std::pair<int, double>> search;
    auto attempt = [&](int degree) -> std::optional<PolyApproximant> {
        try {
            PolyApproximant p = fit_polynomial(f, degree, fit_grid, verify_grid);
            search.emplace_back(degree, p.fit_error.value);
            if (!best || p.fit_error.value < best->fit_error.value) best = p;
            return p;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Conditioning) throw;
            search.emplace_back(degree, std::numeric_limits<double>::infinity());
            return std::nullopt;
        }
    };
    auto passes = [&](const std::optional<PolyApproximant>& p) { return p && p->fit_error.value < target; };

    std::optional<PolyApproximant> found;
    int failing = -1;
    int degree = 0;
    while (true) {
        auto p = attempt(degree);
        if (passes(p)) {
            found = p;
            break;
        }
        if (!p && degree > 0) break;  // conditioning limit reached
        failing = degree;
        if (degree >= max_degree) break;
        degree = degree == 0 ? 1 : std::min(2 * degree, max_degree);
    }
    if (!found) {
        PolyApproximant b = best ? *best : PolyApproximant{};
        b.search = search;
        b.target_min_modulus = m_star.value;
        b.rouche_margin = m_star.value - b.fit_error.value;
        throw DegreeExceededError("no degree <= " + std::to_string(max_degree) + " reached fit error " +
                                      std::to_string(target),
                                  std::move(b));
    }
    int lo = failing;
    int hi = found->degree;
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        auto p = attempt(mid);
        if (passes(p)) {
            hi = mid;
            found = p;
        } else {
            lo = mid;
        }
    }
    PolyApproximant result = *found;
    result.search = search;
    result.target_min_modulus = m_star.value;
    result.rouche_margin = m_star.value - result.fit_error.value;
    result.certificate =
        certify_on(result.as_function(), "polynomial", region_contours(region, options.certify), verify_grid, {},
                   options.certify);
    return result;
}

}  // namespace zfree

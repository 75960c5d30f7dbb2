#include "zfree/zerocheck.hpp"

#include <cmath>
#include <sstream>

namespace zfree {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::ZeroFree: return "zero_free";
        case Verdict::ZerosPossibleAt: return "zeros_possible_at";
        case Verdict::Failed: return "failed";
    }
    return "failed";
}

namespace {

constexpr double kHalfPi = kPi / 2.0;

struct PhaseTracker {
    const FuncExpr& f;
    const ContourArc& arc;
    const WindingOptions& options;

    Complex value(double t) const {
        const Complex z = arc.at(t);
        Complex v;
        try {
            v = eval_func(f, z);
        } catch (const Error& e) {
            if (e.point()) throw;
            throw Error(e.kind(), e.what(), z);
        }
        if (!(std::abs(v) > options.modulus_floor) || !std::isfinite(std::abs(v))) {
            throw Error(ErrorKind::ZeroOnContour, "|f| at or below the modulus floor on the contour", z);
        }
        return v;
    }

    double segment(double t0, Complex f0, double t1, Complex f1, int depth) const {
        const double tm = 0.5 * (t0 + t1);
        const Complex fm = value(tm);
        const double d_first = std::arg(fm / f0);
        const double d_second = std::arg(f1 / fm);
        const double d_whole = std::arg(f1 / f0);
        if (std::abs(d_first) < kHalfPi && std::abs(d_second) < kHalfPi &&
            std::abs(d_first + d_second - d_whole) < 1e-9) {
            return d_first + d_second;
        }
        if (depth >= options.max_depth) {
            throw Error(ErrorKind::Nonconvergence, "phase step not bounded after maximum subdivision", arc.at(tm));
        }
        return segment(t0, f0, tm, fm, depth + 1) + segment(tm, fm, t1, f1, depth + 1);
    }
};

}  // namespace

int winding_number(const FuncExpr& f, const Contour& c, const WindingOptions& options) {
    double total = 0.0;
    for (const ContourArc& arc : c.arcs) {
        PhaseTracker tracker{f, arc, options};
        const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(arc.length() / c.max_step)));
        double t0 = arc.theta_begin;
        Complex f0 = tracker.value(t0);
        for (std::size_t i = 1; i <= steps; ++i) {
            const double t1 = arc.theta_begin + (arc.theta_end - arc.theta_begin) * static_cast<double>(i) /
                                                    static_cast<double>(steps);
            const Complex f1 = tracker.value(t1);
            total += tracker.segment(t0, f0, t1, f1, 0);
            t0 = t1;
            f0 = f1;
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

std::string describe(const Region& region) {
    std::ostringstream os;
    os.precision(17);
    if (const auto* d = std::get_if<Disc>(&region)) {
        os << "disc(center=" << d->center.real() << (d->center.imag() < 0 ? "" : "+") << d->center.imag()
           << "i, radius=" << d->radius << ")";
    } else {
        os << "chain(n=" << std::get<DiscChain>(region).n << ")";
    }
    return os.str();
}

std::vector<std::pair<std::string, Contour>> shrunk_contours(const Region& region, const CertifyOptions& options) {
    std::vector<std::pair<std::string, Contour>> out;
    const auto discs = region_discs(region);
    for (std::size_t k = 0; k < discs.size(); ++k) {
        const Disc shrunk(discs[k].center, discs[k].radius * (1.0 - options.shrink));
        out.emplace_back("disc " + std::to_string(k + 1), circle_contour(shrunk, options.contour_step));
    }
    return out;
}

ZeroCertificate certify_on(const FuncExpr& f, std::string region_name,
                           const std::vector<std::pair<std::string, Contour>>& contours,
                           const SampleGrid& grid, std::span<const Complex> allowed_zero_points,
                           const CertifyOptions& options) {
    ZeroCertificate cert;
    cert.region = std::move(region_name);
    for (Complex p : allowed_zero_points) cert.exclusions_used.push_back({p, options.exclusion_radius});
    try {
        for (const auto& [name, contour] : contours) {
            cert.winding_numbers.emplace_back(name, winding_number(f, contour));
        }
        cert.min_modulus = min_modulus(f, grid, cert.exclusions_used);
        for (Complex p : allowed_zero_points) {
            if (std::abs(eval_func(f, p)) <= options.zero_floor) cert.possible_zeros.push_back(p);
        }
    } catch (const Error& e) {
        cert.verdict = Verdict::Failed;
        cert.failure = e.what();
        return cert;
    }
    bool interior_ok = true;
    for (const auto& [name, w] : cert.winding_numbers) {
        if (w != 0) interior_ok = false;
    }
    if (!interior_ok) {
        cert.verdict = Verdict::Failed;
        cert.failure = "nonzero winding: zeros inside the region";
    } else if (!(cert.min_modulus.value > options.zero_floor)) {
        cert.verdict = Verdict::Failed;
        cert.failure = "min modulus outside exclusions at or below the zero floor";
    } else if (!cert.min_modulus.refined) {
        cert.verdict = Verdict::Failed;
        cert.failure = "min modulus estimate not stable under refinement";
    } else if (!cert.possible_zeros.empty()) {
        cert.verdict = Verdict::ZerosPossibleAt;
    } else {
        cert.verdict = Verdict::ZeroFree;
    }
    return cert;
}

ZeroCertificate certify_zero_free(const FuncExpr& f, const Region& region,
                                  std::span<const Complex> allowed_zero_points, const CertifyOptions& options) {
    for (Complex p : allowed_zero_points) {
        bool on_boundary = false;
        for (const Disc& d : region_discs(region)) on_boundary = on_boundary || d.on_boundary(p, 1e-9);
        if (!on_boundary) throw Error(ErrorKind::InvalidArgument, "allowed zero points must lie on the boundary", p);
    }
    return certify_on(f, describe(region), shrunk_contours(region, options), boundary_grid(region, options.density),
                      allowed_zero_points, options);
}

bool interior_zero_free(const FuncExpr& f, const Region& region, const CertifyOptions& options) {
    for (const auto& [name, contour] : shrunk_contours(region, options)) {
        if (winding_number(f, contour) != 0) return false;
    }
    return true;
}

}  // namespace zfree

#include "zfree/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace zfree {

Disc::Disc(Complex c, double r) : center(c), radius(r) {
    if (!(r > 0.0) || !std::isfinite(r) || !std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw Error(ErrorKind::InvalidArgument, "disc radius must be positive and finite");
    }
}

bool Disc::contains(Complex z, double tol) const { return std::abs(z - center) <= radius + tol; }

bool Disc::on_boundary(Complex z, double tol) const {
    return std::abs(std::abs(z - center) - radius) <= tol;
}

Complex Disc::point_at(double theta) const {
    if (theta == 0.0) return center + radius;
    if (theta == kPi) return center - radius;
    return center + std::polar(radius, theta);
}

DiscChain chain_discs(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "a disc chain needs at least one disc");
    DiscChain chain;
    chain.n = n;
    chain.discs.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        chain.discs.emplace_back(Complex(static_cast<double>(2 * k - 1) / 2.0, 0.0), 0.5);
    }
    for (std::size_t j = 1; j < n; ++j) chain.tangencies.emplace_back(static_cast<double>(j), 0.0);
    return chain;
}

double closure_distance(const Disc& a, const Disc& b) {
    return std::max(0.0, std::abs(a.center - b.center) - a.radius - b.radius);
}

std::vector<Disc> region_discs(const Region& region) {
    if (const auto* d = std::get_if<Disc>(&region)) return {*d};
    return std::get<DiscChain>(region).discs;
}

std::vector<Complex> region_tangencies(const Region& region) {
    if (const auto* c = std::get_if<DiscChain>(&region)) return c->tangencies;
    return {};
}

std::vector<Complex> SampleGrid::all_samples() const {
    std::vector<Complex> out;
    out.reserve(size());
    out.insert(out.end(), boundary_samples.begin(), boundary_samples.end());
    out.insert(out.end(), interior_samples.begin(), interior_samples.end());
    return out;
}

namespace {

void add_interior(const Disc& disc, std::size_t index, double density, SampleGrid& grid) {
    const double spacing = 2.0 / density;
    const auto rings = static_cast<std::size_t>(std::max(1.0, std::ceil(disc.radius / spacing)));
    grid.interior_samples.push_back(disc.center);
    grid.interior_disc.push_back(index);
    for (std::size_t k = 1; k < rings; ++k) {
        const double rho = disc.radius * static_cast<double>(k) / static_cast<double>(rings);
        const auto m = static_cast<std::size_t>(std::max(3.0, std::ceil(2.0 * kPi * rho / spacing)));
        for (std::size_t i = 0; i < m; ++i) {
            const double theta = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(m);
            grid.interior_samples.push_back(disc.center + std::polar(rho, theta));
            grid.interior_disc.push_back(index);
        }
    }
}

SampleGrid build_grid(const Region& region, double density) {
    if (!(density > 0.0) || !std::isfinite(density)) {
        throw Error(ErrorKind::InvalidArgument, "grid density must be positive");
    }
    SampleGrid grid{region, density, {}, {}, {}, {}, {}};
    const auto discs = region_discs(region);
    const bool chain = std::holds_alternative<DiscChain>(region);
    for (std::size_t j = 0; j < discs.size(); ++j) {
        const Disc& d = discs[j];
        auto m = static_cast<std::size_t>(std::ceil(2.0 * kPi * d.radius * density));
        m = std::max<std::size_t>(m, 3);
        if (chain && m % 2 == 1) ++m;
        for (std::size_t i = 0; i < m; ++i) {
            // The left point of disc j > 0 is the tangency already listed by disc j-1.
            if (chain && j > 0 && 2 * i == m) continue;
            const double theta = (2 * i == m) ? kPi
                                              : 2.0 * kPi * static_cast<double>(i) / static_cast<double>(m);
            grid.boundary_samples.push_back(d.point_at(theta));
            grid.boundary_disc.push_back(j);
        }
        add_interior(d, j, density, grid);
    }
    return grid;
}

void apply_map(SampleGrid& grid) {
    if (!grid.map) return;
    for (std::size_t i = 0; i < grid.boundary_samples.size(); ++i) {
        grid.boundary_samples[i] = grid.map(grid.boundary_disc[i], grid.boundary_samples[i]);
    }
    for (std::size_t i = 0; i < grid.interior_samples.size(); ++i) {
        grid.interior_samples[i] = grid.map(grid.interior_disc[i], grid.interior_samples[i]);
    }
}

}  // namespace

SampleGrid boundary_grid(const Region& region, double density) { return build_grid(region, density); }

SampleGrid refine(const SampleGrid& grid, double factor) {
    SampleGrid out = build_grid(grid.region, grid.density * factor);
    out.map = grid.map;
    apply_map(out);
    return out;
}

SampleGrid map_grid(const SampleGrid& grid, PointMap map) {
    SampleGrid out = build_grid(grid.region, grid.density);
    out.map = std::move(map);
    apply_map(out);
    return out;
}

std::vector<Complex> local_samples(const Disc& disc, Complex point, double radius,
                                   std::size_t rings, std::size_t spokes) {
    std::vector<Complex> out;
    if (disc.contains(point)) out.push_back(point);
    // Boundary arc within the radius.
    const std::size_t arc_count = 4 * spokes;
    for (std::size_t i = 0; i < arc_count; ++i) {
        const Complex z = disc.point_at(2.0 * kPi * static_cast<double>(i) / static_cast<double>(arc_count));
        if (std::abs(z - point) <= radius) out.push_back(z);
    }
    // Where the disc is locally a thin neighbourhood, make sure the arc is
    // resolved at the scale of `radius` as well.
    const double dist = std::abs(point - disc.center);
    if (std::abs(dist - disc.radius) <= radius) {
        const double base = dist > 0 ? std::arg(point - disc.center) : 0.0;
        const double half = std::min(kPi, 2.0 * radius / disc.radius);
        for (std::size_t i = 0; i <= spokes; ++i) {
            const double theta = base - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(spokes);
            const Complex z = disc.center + std::polar(disc.radius, theta);
            if (std::abs(z - point) <= radius) out.push_back(z);
        }
    }
    for (std::size_t k = 1; k <= rings; ++k) {
        const double rho = radius * static_cast<double>(k) / static_cast<double>(rings);
        for (std::size_t i = 0; i < spokes; ++i) {
            const Complex z = point + std::polar(rho, 2.0 * kPi * static_cast<double>(i) / static_cast<double>(spokes));
            if (disc.contains(z, 0.0)) out.push_back(z);
        }
    }
    return out;
}

Complex ContourArc::at(double theta) const {
    const Complex z = circle.point_at(theta);
    return map ? map(z) : z;
}

double ContourArc::length() const { return circle.radius * std::abs(theta_end - theta_begin); }

double Contour::length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) total += std::abs(samples[i] - samples[i - 1]);
    return total;
}

namespace {

void resample(Contour& c) {
    c.samples.clear();
    for (std::size_t a = 0; a < c.arcs.size(); ++a) {
        const ContourArc& arc = c.arcs[a];
        const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(arc.length() / c.max_step)));
        if (a == 0) c.samples.push_back(arc.at(arc.theta_begin));
        for (std::size_t i = 1; i <= m; ++i) {
            const double t = (i == m) ? arc.theta_end
                                      : arc.theta_begin + (arc.theta_end - arc.theta_begin) *
                                                              static_cast<double>(i) / static_cast<double>(m);
            c.samples.push_back(arc.at(t));
        }
    }
    if (!c.samples.empty()) c.samples.back() = c.samples.front();
}

}  // namespace

Contour circle_contour(const Disc& circle, double max_step, double start_angle) {
    if (!(max_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "contour step must be positive");
    Contour c;
    c.max_step = max_step;
    c.arcs.push_back(ContourArc{circle, start_angle, start_angle + 2.0 * kPi, {}});
    resample(c);
    return c;
}

Contour chain_boundary_contour(const DiscChain& chain, double max_step) {
    if (!(max_step > 0.0)) throw Error(ErrorKind::InvalidArgument, "contour step must be positive");
    Contour c;
    c.max_step = max_step;
    for (const Disc& d : chain.discs) c.arcs.push_back(ContourArc{d, kPi, 2.0 * kPi, {}});
    for (auto it = chain.discs.rbegin(); it != chain.discs.rend(); ++it) {
        c.arcs.push_back(ContourArc{*it, 0.0, kPi, {}});
    }
    resample(c);
    return c;
}

Contour map_contour(const Contour& contour, const std::function<Complex(Complex)>& map) {
    Contour out = contour;
    for (ContourArc& arc : out.arcs) {
        auto inner = arc.map;
        if (inner) {
            arc.map = [inner, map](Complex z) { return map(inner(z)); };
        } else {
            arc.map = map;
        }
    }
    resample(out);
    return out;
}

}  // namespace zfree

#pragma once

#include <cstddef>
#include <functional>
#include <numbers>
#include <variant>
#include <vector>

#include "zfree/error.hpp"

namespace zfree {

inline constexpr double kPi = std::numbers::pi;

/// Absolute tolerance for boundary and tangency membership.
inline constexpr double kTangencyTol = 1e-12;

struct Disc {
    Complex center;
    double radius;

    Disc(Complex c, double r);

    bool contains(Complex z, double tol = kTangencyTol) const;
    bool on_boundary(Complex z, double tol = kTangencyTol) const;
    /// Boundary point at angle theta; theta = 0 and pi are produced exactly.
    Complex point_at(double theta) const;

    friend bool operator==(const Disc&, const Disc&) = default;
};

/// The canonical chain: discs of radius 1/2 centred at (2k-1)/2, tangent at
/// the integers 1..n-1.
struct DiscChain {
    std::size_t n = 0;
    std::vector<Disc> discs;
    std::vector<Complex> tangencies;

    friend bool operator==(const DiscChain&, const DiscChain&) = default;
};

DiscChain chain_discs(std::size_t n);

/// Distance between the closures of two discs (0 when they touch or overlap).
double closure_distance(const Disc& a, const Disc& b);

using Region = std::variant<Disc, DiscChain>;

std::vector<Disc> region_discs(const Region& region);
/// Tangency points of a chain; empty for a single disc.
std::vector<Complex> region_tangencies(const Region& region);

/// Optional transform applied to samples of disc k (e.g. a conformal image).
using PointMap = std::function<Complex(std::size_t disc_index, Complex w)>;

struct SampleGrid {
    Region region;
    double density = 0.0;
    std::vector<Complex> boundary_samples;
    std::vector<Complex> interior_samples;
    std::vector<std::size_t> boundary_disc;
    std::vector<std::size_t> interior_disc;
    /// Set when the samples are images of the region's samples.
    PointMap map;

    std::vector<Complex> all_samples() const;
    std::size_t size() const { return boundary_samples.size() + interior_samples.size(); }
};

/// Boundary samples uniformly spaced in arclength (density per unit length)
/// and a polar interior mesh at half that density. Chain grids round each
/// disc's count up to even so both tangency points are hit exactly; shared
/// tangencies are listed once.
SampleGrid boundary_grid(const Region& region, double density);

/// Same region and map, density multiplied by factor.
SampleGrid refine(const SampleGrid& grid, double factor = 2.0);

/// Applies map to every sample; refine() reapplies it.
SampleGrid map_grid(const SampleGrid& grid, PointMap map);

/// Samples of the closed disc lying within `radius` of `point`: the boundary
/// arc plus a polar mesh about `point`, clipped to the disc. Includes
/// `point` itself when it lies in the disc.
std::vector<Complex> local_samples(const Disc& disc, Complex point, double radius,
                                   std::size_t rings = 24, std::size_t spokes = 64);

/// One circular arc of a contour, optionally carried through a map.
struct ContourArc {
    Disc circle;
    double theta_begin;
    double theta_end;
    std::function<Complex(Complex)> map;

    Complex at(double theta) const;
    double length() const;  // of the underlying arc
};

/// Closed piecewise-smooth path. `samples` is a coarse polyline through the
/// arcs (first == last); consecutive samples are within `max_step` along
/// the underlying arcs. Winding computations refine arcs adaptively.
struct Contour {
    std::vector<ContourArc> arcs;
    std::vector<Complex> samples;
    double max_step = 0.0;

    double length() const;
};

Contour circle_contour(const Disc& circle, double max_step = 0.01, double start_angle = 0.0);

/// Positively oriented outer boundary of the chain: lower arcs left to right,
/// then upper arcs right to left. Each tangency is visited twice.
Contour chain_boundary_contour(const DiscChain& chain, double max_step = 0.01);

/// Same arcs with `map` applied after each arc's own map.
Contour map_contour(const Contour& contour, const std::function<Complex(Complex)>& map);

}  // namespace zfree

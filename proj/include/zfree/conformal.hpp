#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "zfree/geometry.hpp"

namespace zfree {

/// Parameters of the five-stage map carrying the closed left disc
/// |z + 1/2| <= 1/2 onto a thin lens from 0 to r*e^{i alpha}:
///   z1 = -(z+1)/z, z2 = z1^(2 delta1/pi), z3 = delta3 z2,
///   z4 = r z3/(z3+1), w = e^{i alpha} z4.
struct EtaParams {
    double alpha = 0.0;
    double r = 1.0;
    double delta1 = kPi / 2.0;
    double delta3 = 1.0;

    friend bool operator==(const EtaParams&, const EtaParams&) = default;
};

void validate(const EtaParams& p);

/// Closed sector {t e^{i(alpha+phi)}: 0 <= t <= r, |phi| <= delta1}
/// translated by apex.
struct PiePiece {
    Complex apex;
    double alpha;
    double r;
    double delta1;
};

struct MapNode;

/// Immutable expression tree of conformal maps.
class MapExpr {
public:
    MapExpr();  // identity

    static MapExpr identity();
    static MapExpr affine(Complex a, Complex b);
    static MapExpr moebius(Complex a, Complex b, Complex c, Complex d);
    static MapExpr power(double q);
    static MapExpr lens(double r);
    static MapExpr parabolic(double delta);
    static MapExpr eta(const EtaParams& params);
    /// Raw composition node: outer(inner(z)). No simplification.
    static MapExpr compose(MapExpr outer, MapExpr inner);

    const MapNode& node() const { return *node_; }
    template <class T>
    const T* as() const;

    bool is_identity() const;

private:
    explicit MapExpr(std::shared_ptr<const MapNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const MapNode> node_;
};

namespace maps {
struct Identity {};
struct Affine { Complex a, b; };
struct Moebius { Complex a, b, c, d; };
struct Power { double q; };
struct Lens { double r; };
struct Parabolic { double delta; };
struct Eta { EtaParams params; };
struct Compose { MapExpr outer, inner; };
}  // namespace maps

struct MapNode {
    std::variant<maps::Identity, maps::Affine, maps::Moebius, maps::Power, maps::Lens,
                 maps::Parabolic, maps::Eta, maps::Compose>
        value;
};

template <class T>
const T* MapExpr::as() const {
    return std::get_if<T>(&node_->value);
}

/// Structural equality (exact on parameters).
bool operator==(const MapExpr& a, const MapExpr& b);

Complex eval_map(const MapExpr& m, Complex z);

/// Principal z^q with 1^q = 1. Throws evaluation-error on the negative real axis.
Complex principal_power(Complex z, double q);

/// L_r(z) = u/(1+u), u = (z/(1-z))^r; corners 0 and 1 are fixed.
Complex lens_point(double r, Complex z);

/// w = (1 - (z-1)/z - i delta)^{-1}, evaluated as z/(1 - i delta z).
Complex parabolic_point(double delta, Complex z);

/// Throws invalid-argument for z outside the closed left disc.
Complex eval_eta(const EtaParams& p, Complex z);

/// outer(inner(z)) with identities dropped and affine pairs folded.
MapExpr compose_maps(const MapExpr& outer, const MapExpr& inner);

/// The orientation-preserving affine map sending `from` onto `to` and
/// `anchor_from` to `anchor_to`. Anchors must lie on the boundaries.
MapExpr affine_between(const Disc& from, Complex anchor_from, const Disc& to, Complex anchor_to);

/// A^{-1} o m o A, A the affine map taking target to source and
/// anchor_target to anchor_source.
MapExpr conjugate_to_disc(const MapExpr& m, const Disc& source, const Disc& target,
                          Complex anchor_source, Complex anchor_target);

/// Euclidean distance from w to the closed pie piece.
double pie_distance(const PiePiece& p, Complex w);
bool pie_contains(const PiePiece& p, Complex w, double margin);

/// Solves m(w) = z for w in the closed disc `domain`, Newton from the best
/// of `seeds` (preimage samples). Residual target 1e-12 relative to
/// max(1,|z|). Returns nullopt when no preimage lies in the disc.
std::optional<Complex> invert_map(const MapExpr& m, const Disc& domain, Complex z,
                                  const std::vector<Complex>& seeds,
                                  const std::vector<Complex>& seed_images);

/// Coarse preimage samples for invert_map.
std::vector<Complex> inversion_seeds(const Disc& domain);

}  // namespace zfree

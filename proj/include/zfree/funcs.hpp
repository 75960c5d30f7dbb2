#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "zfree/conformal.hpp"
#include "zfree/geometry.hpp"

namespace zfree {

struct FuncNode;

/// Immutable expression tree of functions holomorphic on the region of
/// interest and continuous up to its boundary.
class FuncExpr {
public:
    struct GluePiece;
    struct MappedPiece;

    FuncExpr();  // Const(0)

    static FuncExpr constant(Complex c);
    /// Ascending-degree coefficients.
    static FuncExpr poly(std::vector<Complex> coefficients);
    static FuncExpr identity() { return poly({0.0, 1.0}); }
    static FuncExpr exp();
    static FuncExpr sin();
    static FuncExpr cos();
    static FuncExpr sum(FuncExpr a, FuncExpr b);
    static FuncExpr product(FuncExpr a, FuncExpr b);
    static FuncExpr quotient(FuncExpr num, FuncExpr den);
    /// Principal base^exponent; integer exponents are evaluated by repeated
    /// multiplication and have no branch cut.
    static FuncExpr pow(FuncExpr base, double exponent);
    /// outer(inner(z)).
    static FuncExpr apply(FuncExpr outer, FuncExpr inner);
    /// f(m(z)).
    static FuncExpr composed(FuncExpr f, MapExpr m);
    /// Piecewise definition on closed discs. Pieces on tangent discs must
    /// agree at the tangency point to 1e-10 (internal-consistency otherwise).
    static FuncExpr glue(std::vector<GluePiece> pieces);
    /// Pieces g_k o phi_k^{-1} on the images phi_k(disc_k); evaluation
    /// inverts phi_k numerically.
    static FuncExpr mapped_glue(std::vector<MappedPiece> pieces);
    /// sum_k d[k] q_k(x), x = (z - center)/scale, with q_0 = q0 and
    /// q_{k+1} = (x q_k - sum_{j<=k} h[k][j] q_j) / h[k][k+1]. Stable where
    /// the monomial expansion of a high-degree fit is not.
    static FuncExpr ortho_poly(Complex center, double scale, Complex q0, std::vector<std::vector<Complex>> h,
                               std::vector<Complex> d);

    const FuncNode& node() const { return *node_; }
    template <class T>
    const T* as() const;

private:
    explicit FuncExpr(std::shared_ptr<const FuncNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const FuncNode> node_;
};

struct FuncExpr::GluePiece {
    Disc region;
    FuncExpr f;
};

struct FuncExpr::MappedPiece {
    Disc preimage;
    MapExpr phi;
    FuncExpr g;
    std::vector<Complex> seeds;
    std::vector<Complex> seed_images;
};

namespace funcs {
struct Const { Complex c; };
struct Poly { std::vector<Complex> coefficients; };
struct Exp {};
struct Sin {};
struct Cos {};
struct Sum { FuncExpr left, right; };
struct Product { FuncExpr left, right; };
struct Quotient { FuncExpr num, den; };
struct Pow { FuncExpr base; double exponent; };
struct Apply { FuncExpr outer, inner; };
struct ComposedWithMap { FuncExpr f; MapExpr m; };
struct RestrictedGlue { std::vector<FuncExpr::GluePiece> pieces; };
struct MappedGlue { std::vector<FuncExpr::MappedPiece> pieces; };
struct OrthoPoly {
    Complex center;
    double scale;
    Complex q0;
    std::vector<std::vector<Complex>> h;
    std::vector<Complex> d;
};
}  // namespace funcs

struct FuncNode {
    std::variant<funcs::Const, funcs::Poly, funcs::Exp, funcs::Sin, funcs::Cos, funcs::Sum,
                 funcs::Product, funcs::Quotient, funcs::Pow, funcs::Apply, funcs::ComposedWithMap,
                 funcs::RestrictedGlue, funcs::MappedGlue, funcs::OrthoPoly>
        value;
};

template <class T>
const T* FuncExpr::as() const {
    return std::get_if<T>(&node_->value);
}

bool operator==(const FuncExpr& a, const FuncExpr& b);

/// Horner evaluation of ascending coefficients.
Complex horner(std::span<const Complex> coefficients, Complex z);

Complex eval_func(const FuncExpr& f, Complex z);

/// Values at each point, computed in parallel when threads are configured.
/// An evaluation failure is rethrown with the offending point attached.
std::vector<Complex> eval_many(const FuncExpr& f, std::span<const Complex> points);

/// f o m with nested compositions flattened and affine maps folded.
FuncExpr compose(const FuncExpr& f, const MapExpr& m);

/// The piece of a glue covering `disc` (exact match), or f itself.
FuncExpr restrict_to(const FuncExpr& f, const Disc& disc);

struct NormEstimate {
    double value = 0.0;
    double grid_density = 0.0;
    /// Two successive grids agreed within relative 1e-3.
    bool refined = false;
};

struct Exclusion {
    Complex center;
    double radius;
};

/// max |f - g| over grid samples, checked against the grid refined once.
NormEstimate sup_diff(const FuncExpr& f, const FuncExpr& g, const SampleGrid& grid);

/// min |f| over samples outside every exclusion disc, checked against the
/// grid refined once. Throws invalid-argument if every sample is excluded.
NormEstimate min_modulus(const FuncExpr& f, const SampleGrid& grid,
                         std::span<const Exclusion> exclusions = {});

/// Single-grid versions used inside parameter searches.
double grid_sup_diff(const FuncExpr& f, const FuncExpr& g, std::span<const Complex> points);
double grid_min_modulus(const FuncExpr& f, std::span<const Complex> points,
                        std::span<const Exclusion> exclusions = {});

}  // namespace zfree

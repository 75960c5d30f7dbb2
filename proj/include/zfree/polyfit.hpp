#pragma once

#include <variant>
#include <vector>

#include "zfree/pipeline.hpp"

namespace zfree {

/// p(z) = sum_k coefficients[k] * ((z - center) / scale)^k. Evaluation
/// goes through the Arnoldi recurrence (`hessenberg`, `orthogonal`); the
/// monomial coefficients are the exported form.
struct PolyApproximant {
    std::vector<Complex> coefficients;
    Complex q0{1.0};
    std::vector<std::vector<Complex>> hessenberg;
    std::vector<Complex> orthogonal;
    Complex center{0.0};
    double scale = 1.0;
    int degree = 0;
    NormEstimate fit_error;
    double target_min_modulus = 0.0;
    double rouche_margin = 0.0;
    std::optional<ZeroCertificate> certificate;
    /// (degree, fit error) for every fit tried by the degree search.
    std::vector<std::pair<int, double>> search;

    FuncExpr as_function() const;
    Complex operator()(Complex z) const;
};

class DegreeExceededError : public Error {
public:
    DegreeExceededError(const std::string& message, PolyApproximant best);
    const PolyApproximant& best() const { return best_; }

private:
    PolyApproximant best_;
};

using PolyRegion = std::variant<DiscChain, JordanChain>;

/// Fit and verification grids for a region (verification is independent
/// of the fit samples: different density).
SampleGrid region_grid(const PolyRegion& region, double density);

/// Weighted least squares on the boundary samples of fit_grid in an
/// orthonormal basis built by Arnoldi on the samples, then converted to
/// scaled monomials. fit_error is sup_diff on verify_grid.
PolyApproximant fit_polynomial(const FuncExpr& f, int degree, const SampleGrid& fit_grid,
                               const SampleGrid& verify_grid);

/// The orthonormal basis values at the fit samples (columns), exposed for
/// the orthogonality check. Weighted by arclength, normalised to unit mass.
struct ArnoldiBasis {
    std::vector<std::vector<Complex>> columns;
    std::vector<double> weights;
};
ArnoldiBasis arnoldi_basis(const SampleGrid& fit_grid, int degree, Complex center, double scale);

struct PolyfitOptions {
    double fit_density = 128.0;
    double verify_density = 96.0;
    CertifyOptions certify{};
};

/// Raises the degree (0, 1, 2, 4, ... then bisection) until
/// fit_error < min(budget, m*/2), m* = min |f| on the verification grid.
PolyApproximant zero_free_polynomial(const FuncExpr& f, const PolyRegion& region, double budget, int max_degree,
                                     const PolyfitOptions& options = {});

}  // namespace zfree

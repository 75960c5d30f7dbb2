#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zfree/funcs.hpp"

namespace zfree {

enum class Verdict { ZeroFree, ZerosPossibleAt, Failed };

std::string_view to_string(Verdict v);

struct ZeroCertificate {
    std::string region;
    std::vector<std::pair<std::string, int>> winding_numbers;
    NormEstimate min_modulus;
    std::vector<Exclusion> exclusions_used;
    Verdict verdict = Verdict::Failed;
    /// Allowed points where |f| did not clear the zero floor.
    std::vector<Complex> possible_zeros;
    std::string failure;

    bool zero_free() const { return verdict == Verdict::ZeroFree; }
};

struct WindingOptions {
    double modulus_floor = 0.0;
    int max_depth = 24;
};

/// Total continuous change of arg f along the contour over 2 pi. Each arc
/// step is bisected until its phase change is below pi/2 and consistent
/// with the midpoint. Throws zero-on-contour-suspected when |f| <= floor
/// at a visited point and nonconvergence past max_depth.
int winding_number(const FuncExpr& f, const Contour& c, const WindingOptions& options = {});
inline int winding_number(const FuncExpr& f, const Contour& c, double modulus_floor) {
    return winding_number(f, c, WindingOptions{modulus_floor, 24});
}

struct CertifyOptions {
    double density = 64.0;
    /// Sub-contours are circles of radius (1 - shrink) * r about each centre.
    double shrink = 1e-6;
    double exclusion_radius = 1e-3;
    /// |f| at or below this counts as a zero.
    double zero_floor = 1e-10;
    double contour_step = 0.01;
};

/// Per-disc winding on shrunk circles plus min modulus outside exclusion
/// discs around `allowed_zero_points`, then |f| at the allowed points.
ZeroCertificate certify_zero_free(const FuncExpr& f, const Region& region,
                                  std::span<const Complex> allowed_zero_points = {},
                                  const CertifyOptions& options = {});

/// General form: caller supplies the contours (labelled) and the grid.
ZeroCertificate certify_on(const FuncExpr& f, std::string region_name,
                           const std::vector<std::pair<std::string, Contour>>& contours,
                           const SampleGrid& grid, std::span<const Complex> allowed_zero_points,
                           const CertifyOptions& options);

/// Shrunk per-disc circles used by certify_zero_free, labelled "disc k".
std::vector<std::pair<std::string, Contour>> shrunk_contours(const Region& region, const CertifyOptions& options);

/// True when f has winding 0 on every shrunk disc contour.
bool interior_zero_free(const FuncExpr& f, const Region& region, const CertifyOptions& options = {});

std::string describe(const Region& region);

}  // namespace zfree

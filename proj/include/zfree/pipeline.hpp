#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zfree/zerocheck.hpp"

namespace zfree {

/// One trial of a dyadic parameter search.
struct TracePoint {
    double parameter;
    double sup_diff;
    bool accepted;
};

struct StepRecord {
    /// shrink, lens, parabolic, contact_removal, eta, glue, pullback, pushforward.
    /// contact_removal records "branch": 1 no contact zero, 3 equal shrinks, 4 eta repair.
    std::string tag;
    std::string location;
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<TracePoint> trace;
    double assigned_budget = 0.0;
    double error_budget_spent = 0.0;
    std::optional<ZeroCertificate> certificate;
    std::vector<StepRecord> substeps;
    std::string note;

    std::optional<double> parameter(const std::string& name) const;
    /// Depth-first search through substeps.
    bool has_tag(const std::string& tag) const;
};

struct ApproxReport {
    double epsilon = 0.0;
    std::vector<StepRecord> steps;
    NormEstimate total_sup_diff;
    ZeroCertificate final_certificate;
    /// Jordan chains only: the disc-chain certificate before pushforward.
    std::optional<ZeroCertificate> pullback_certificate;
    FuncExpr input;
    FuncExpr output;
    std::vector<std::string> notes;
};

struct PipelineOptions {
    double verify_density = 64.0;
    int max_iterations = 40;
    CertifyOptions certify{};
    /// Attach a certificate to every step record.
    bool certify_steps = true;
};

struct StepResult {
    FuncExpr f;
    StepRecord record;
};

/// Raised when a pipeline aborts; carries the steps completed so far.
class PipelineFailure : public Error {
public:
    PipelineFailure(const Error& cause, ApproxReport partial);
    const ApproxReport& partial() const { return partial_; }

private:
    ApproxReport partial_;
};

/// Canonical coordinates for contact removal.
Disc left_unit_disc();   // |z + 1/2| <= 1/2
Disc right_unit_disc();  // |z - 1/2| <= 1/2

/// f o (z -> p + r(z - p)) with r = 1 - 2^-k for the first k meeting the
/// budget. Zeros of the result lie in {p}; f(p) is preserved.
StepResult shrink_toward(const FuncExpr& f, const Disc& disc, Complex p, double budget,
                         const PipelineOptions& options = {});

/// f o L_r conjugated so the lens corners sit at the given endpoints
/// (a diameter of the disc).
StepResult lens_step(const FuncExpr& f, const Disc& disc, std::pair<Complex, Complex> endpoints, double budget,
                     const PipelineOptions& options = {});

using AcceptPredicate = std::function<bool(const FuncExpr&)>;

/// f o w_delta conjugated to fix p, for the largest delta = 2^-k (k >= 0)
/// within budget that satisfies accept.
StepResult parabolic_step(const FuncExpr& f, const Disc& disc, Complex p, double budget,
                          const AcceptPredicate& accept, const PipelineOptions& options = {});

struct PieChoice {
    EtaParams params;  // delta3 left at 0 for the caller
    double delta2 = 0.0;
    double segment_distance = 0.0;
};

/// Non-collinearity test of h0 with 0 and g20 (relative cross product 1e-9).
bool collinear_with_origin(Complex h0, Complex g20);

PieChoice choose_pie_parameters(Complex h0, Complex g20, const FuncExpr& h, const PipelineOptions& options = {});

/// Removes a zero at the contact point 0 of the canonical pair of closed
/// discs |z+1/2| <= 1/2 and |z-1/2| <= 1/2. f must have zeros only in {0, 1}.
/// Result: zeros only in {+1}, values at -1 and +1 preserved.
StepResult remove_contact_zero(const FuncExpr& f, double budget, const PipelineOptions& options = {});

std::pair<FuncExpr, ApproxReport> disc_chain_pipeline(const FuncExpr& f, std::size_t n, double epsilon,
                                                      const PipelineOptions& options = {});

/// Closed Jordan domains given as images phi_k(D_k) of the canonical chain.
struct JordanChain {
    std::size_t n = 0;
    std::vector<MapExpr> maps;
    std::vector<Complex> tangency_images;
};

/// Validates injectivity on a grid and agreement at tangencies (1e-10).
JordanChain make_jordan_chain(std::vector<MapExpr> maps, double density = 32.0);

std::pair<FuncExpr, ApproxReport> jordan_chain_pipeline(const FuncExpr& f, const JordanChain& chain, double epsilon,
                                                        const PipelineOptions& options = {});

/// Grid on the union of phi_k(closed D_k).
SampleGrid jordan_grid(const JordanChain& chain, double density);

}  // namespace zfree

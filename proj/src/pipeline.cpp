#include "zfree/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace zfree {

namespace {

constexpr double kContactZeroTol = 1e-12;
constexpr double kEqualShrinkTol = 1e-12;
constexpr double kAnchorTol = 1e-10;
constexpr double kCollinearTol = 1e-9;

std::string point_label(Complex z) {
    std::ostringstream os;
    os.precision(17);
    os << z.real();
    if (z.imag() != 0.0) os << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

DiscChain contact_pair() { return DiscChain{2, {left_unit_disc(), right_unit_disc()}, {Complex(0.0)}}; }

/// Converts winding failures during a precondition check into a
/// precondition violation.
void require_interior_zero_free(const FuncExpr& f, const Region& region, const PipelineOptions& options,
                                const std::string& what) {
    bool ok = false;
    try {
        ok = interior_zero_free(f, region, options.certify);
    } catch (const Error& e) {
        throw Error(ErrorKind::Precondition, what + ": " + e.what(), e.point());
    }
    if (!ok) throw Error(ErrorKind::Precondition, what + ": zeros detected in the open region");
}

std::optional<ZeroCertificate> step_certificate(const FuncExpr& f, const Region& region,
                                                std::vector<Complex> allowed, const PipelineOptions& options) {
    if (!options.certify_steps) return std::nullopt;
    return certify_zero_free(f, region, allowed, options.certify);
}

/// Shared dyadic search: candidates are tried in order until one is within
/// budget and accepted. Returns the index of the winner.
template <class MakeCandidate, class Accept>
std::pair<FuncExpr, NormEstimate> dyadic_search(const FuncExpr& f, const SampleGrid& grid, double budget,
                                                int iterations, const std::vector<double>& parameters,
                                                MakeCandidate make, Accept accept, StepRecord& record,
                                                double& chosen) {
    for (int k = 0; k < iterations && k < static_cast<int>(parameters.size()); ++k) {
        const double param = parameters[static_cast<std::size_t>(k)];
        FuncExpr candidate = make(param);
        const NormEstimate diff = sup_diff(candidate, f, grid);
        const bool ok = diff.value <= budget && accept(candidate);
        record.trace.push_back({param, diff.value, ok});
        if (ok) {
            chosen = param;
            return {candidate, diff};
        }
    }
    throw Error(ErrorKind::Nonconvergence,
                record.tag + " step: no parameter within budget " + point_label(budget) + " after " +
                    std::to_string(record.trace.size()) + " trials (f too rough for the grid?)");
}

std::vector<double> halving_from(double start, int count) {
    std::vector<double> out;
    double v = start;
    for (int i = 0; i < count; ++i) {
        out.push_back(v);
        v *= 0.5;
    }
    return out;
}

void check_budget(double budget) {
    if (!(budget > 0.0)) throw Error(ErrorKind::InvalidArgument, "error budget must be positive");
}

}  // namespace

std::optional<double> StepRecord::parameter(const std::string& name) const {
    for (const auto& [key, value] : parameters) {
        if (key == name) return value;
    }
    return std::nullopt;
}

bool StepRecord::has_tag(const std::string& t) const {
    if (tag == t) return true;
    return std::any_of(substeps.begin(), substeps.end(), [&](const StepRecord& s) { return s.has_tag(t); });
}

PipelineFailure::PipelineFailure(const Error& cause, ApproxReport partial)
    : Error(Error::Verbatim{}, cause), partial_(std::move(partial)) {}

Disc left_unit_disc() { return Disc(Complex(-0.5, 0.0), 0.5); }
Disc right_unit_disc() { return Disc(Complex(0.5, 0.0), 0.5); }

StepResult shrink_toward(const FuncExpr& f, const Disc& disc, Complex p, double budget,
                         const PipelineOptions& options) {
    check_budget(budget);
    if (!disc.on_boundary(p, 1e-9)) throw Error(ErrorKind::InvalidArgument, "shrink anchor must lie on the disc boundary", p);
    require_interior_zero_free(f, disc, options, "shrink");
    StepRecord record;
    record.tag = "shrink";
    record.location = "toward " + point_label(p);
    record.assigned_budget = budget;
    const SampleGrid grid = boundary_grid(disc, options.verify_density);
    // Parameter t = 1 - r; z -> p + r (z - p) = r z + p t keeps p fixed exactly for dyadic t.
    double t = 0.0;
    auto [result, diff] = dyadic_search(
        f, grid, budget, options.max_iterations, halving_from(0.5, options.max_iterations),
        [&](double tt) { return compose(f, MapExpr::affine(1.0 - tt, p * tt)); },
        [](const FuncExpr&) { return true; }, record, t);
    record.parameters = {{"r", 1.0 - t}, {"t", t}};
    record.error_budget_spent = diff.value;
    record.certificate = step_certificate(result, disc, {p}, options);
    return {result, std::move(record)};
}

StepResult lens_step(const FuncExpr& f, const Disc& disc, std::pair<Complex, Complex> endpoints, double budget,
                     const PipelineOptions& options) {
    check_budget(budget);
    const auto [a, b] = endpoints;
    if (!disc.on_boundary(a, 1e-9) || std::abs(a + b - 2.0 * disc.center) > 1e-9 * std::max(1.0, disc.radius)) {
        throw Error(ErrorKind::InvalidArgument, "lens endpoints must be opposite ends of a diameter");
    }
    require_interior_zero_free(f, disc, options, "lens");
    StepRecord record;
    record.tag = "lens";
    record.location = "corners " + point_label(a) + ", " + point_label(b);
    record.assigned_budget = budget;
    const SampleGrid grid = boundary_grid(disc, options.verify_density);
    const Disc canonical = right_unit_disc();
    double t = 0.0;
    auto [result, diff] = dyadic_search(
        f, grid, budget, options.max_iterations, halving_from(0.5, options.max_iterations),
        [&](double tt) {
            return compose(f, conjugate_to_disc(MapExpr::lens(1.0 - tt), canonical, disc, 0.0, a));
        },
        [](const FuncExpr&) { return true; }, record, t);
    record.parameters = {{"r", 1.0 - t}, {"t", t}};
    record.error_budget_spent = diff.value;
    for (Complex e : {a, b}) {
        if (std::abs(eval_func(result, e) - eval_func(f, e)) > kAnchorTol) {
            throw Error(ErrorKind::InternalConsistency, "lens step moved a corner value", e);
        }
    }
    record.certificate = step_certificate(result, disc, {a, b}, options);
    return {result, std::move(record)};
}

StepResult parabolic_step(const FuncExpr& f, const Disc& disc, Complex p, double budget,
                          const AcceptPredicate& accept, const PipelineOptions& options) {
    check_budget(budget);
    if (!disc.on_boundary(p, 1e-9)) throw Error(ErrorKind::InvalidArgument, "parabolic anchor must lie on the disc boundary", p);
    StepRecord record;
    record.tag = "parabolic";
    record.location = "at " + point_label(p);
    record.assigned_budget = budget;
    const SampleGrid grid = boundary_grid(disc, options.verify_density);
    const Disc canonical = right_unit_disc();
    double delta = 0.0;
    std::pair<FuncExpr, NormEstimate> found;
    try {
        found = dyadic_search(
            f, grid, budget, options.max_iterations, halving_from(1.0, options.max_iterations),
            [&](double d) { return compose(f, conjugate_to_disc(MapExpr::parabolic(d), canonical, disc, 0.0, p)); },
            [&](const FuncExpr& g) { return !accept || accept(g); }, record, delta);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Nonconvergence) throw;
        const bool any_within_budget = std::any_of(record.trace.begin(), record.trace.end(),
                                                   [&](const TracePoint& tp) { return tp.sup_diff <= budget; });
        if (!any_within_budget) throw;
        throw Error(ErrorKind::DegenerateGeometry,
                    "no parabolic perturbation within budget satisfied the acceptance test", p);
    }
    record.parameters = {{"delta", delta}};
    record.error_budget_spent = found.second.value;
    return {found.first, std::move(record)};
}

bool collinear_with_origin(Complex h0, Complex g20) {
    const double cross = (std::conj(h0) * g20).imag();
    return std::abs(cross) <= kCollinearTol * std::abs(h0) * std::abs(g20);
}

namespace {

double distance_to_segment(Complex a, Complex b, Complex p) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

std::vector<Complex> disc_points(const Disc& disc, double density) {
    return boundary_grid(disc, density).all_samples();
}

/// Samples of the closed left disc with |z| >= inner, concentrated near
/// the circle |z| = inner where |eta| is largest.
std::vector<Complex> outer_samples(double inner, double density) {
    const Disc d1 = left_unit_disc();
    std::vector<Complex> out;
    for (Complex z : disc_points(d1, 2.0 * density)) {
        if (std::abs(z) >= inner) out.push_back(z);
    }
    for (double scale : {1.0, 1.5, 2.0, 4.0}) {
        const double rho = inner * scale;
        for (int i = 0; i <= 256; ++i) {
            const Complex z = std::polar(rho, kPi / 2.0 + kPi * i / 256.0);
            if (d1.contains(z, 0.0)) out.push_back(z);
        }
    }
    for (Complex z : local_samples(d1, 0.0, 4.0 * inner)) {
        if (std::abs(z) >= inner) out.push_back(z);
    }
    return out;
}

/// Rings at every dyadic scale from `radius` down to 1e-10 about the contact.
std::vector<Complex> contact_rings(double radius) {
    std::vector<Complex> out;
    for (double rho = radius; rho >= 1e-10; rho *= 0.5) {
        const auto ring = local_samples(left_unit_disc(), 0.0, rho, 4, 64);
        out.insert(out.end(), ring.begin(), ring.end());
    }
    return out;
}

std::vector<Complex> inner_samples(double radius, double density) {
    const Disc d1 = left_unit_disc();
    std::vector<Complex> out = contact_rings(radius);
    for (Complex z : disc_points(d1, density)) {
        if (std::abs(z) <= radius) out.push_back(z);
    }
    return out;
}

}  // namespace

PieChoice choose_pie_parameters(Complex h0, Complex g20, const FuncExpr& h, const PipelineOptions& options) {
    if (g20 == Complex(0.0) || h0 == Complex(0.0)) {
        throw Error(ErrorKind::Precondition, "pie construction needs h(0) and g2(0) nonzero");
    }
    if (collinear_with_origin(h0, g20)) {
        throw Error(ErrorKind::Precondition, "h(0) is on the line through 0 and g2(0)", h0);
    }
    PieChoice choice;
    choice.params.alpha = std::arg(g20 - h0);
    choice.params.r = std::abs(g20 - h0);
    choice.params.delta3 = 0.0;
    choice.segment_distance = distance_to_segment(h0, g20, 0.0);

    bool found = false;
    double delta1 = kPi / 8.0;
    for (int k = 0; k < options.max_iterations; ++k, delta1 *= 0.5) {
        const PiePiece pie{h0, choice.params.alpha, choice.params.r, delta1};
        if (pie_distance(pie, 0.0) >= 0.5 * choice.segment_distance) {
            found = true;
            break;
        }
    }
    if (!found) throw Error(ErrorKind::DegenerateGeometry, "no pie half-angle keeps the origin clear", h0);
    choice.params.delta1 = delta1;

    const double need = 0.25 * choice.segment_distance;
    // Uniform grid plus rings at every dyadic scale about 0, so features of
    // h near the contact are seen whatever the candidate radius.
    std::vector<Complex> pts = disc_points(left_unit_disc(), options.verify_density);
    const auto rings = contact_rings(1.0);
    pts.insert(pts.end(), rings.begin(), rings.end());
    const std::vector<Complex> values = eval_many(h, pts);
    double delta2 = 1.0;
    for (int k = 0; k < options.max_iterations && delta2 >= 1e-9; ++k, delta2 *= 0.5) {
        bool ok = true;
        for (std::size_t i = 0; i < pts.size() && ok; ++i) {
            if (std::abs(pts[i]) <= delta2) {
                ok = pie_distance({values[i], choice.params.alpha, choice.params.r, delta1}, 0.0) >= need;
            }
        }
        if (ok) {
            choice.delta2 = delta2;
            return choice;
        }
    }
    throw Error(ErrorKind::DegenerateGeometry, "no admissible neighbourhood radius delta2 above 1e-9");
}

StepResult remove_contact_zero(const FuncExpr& f, double budget, const PipelineOptions& options) {
    check_budget(budget);
    const Disc d1 = left_unit_disc();
    const Disc d2 = right_unit_disc();
    const DiscChain pair = contact_pair();
    const FuncExpr f1 = restrict_to(f, d1);
    const FuncExpr f2 = restrict_to(f, d2);
    require_interior_zero_free(f1, d1, options, "contact removal (left disc)");
    require_interior_zero_free(f2, d2, options, "contact removal (right disc)");

    StepRecord record;
    record.tag = "contact_removal";
    record.assigned_budget = budget;
    const Complex f_at_contact = eval_func(f2, 0.0);
    const Complex f_left = eval_func(f1, -1.0);
    const Complex f_right = eval_func(f2, 1.0);

    if (std::abs(f_at_contact) > kContactZeroTol) {
        record.note = "branch a: no zero at the contact point";
        record.parameters = {{"branch", 1.0}};
        record.certificate = step_certificate(f, pair, {Complex(1.0)}, options);
        return {f, std::move(record)};
    }

    // The glued error can reach twice the per-part allowance, so half the
    // budget is split in thirds.
    const double third = budget / 6.0;
    record.note = "contact removal spends at most budget/2 per part (half budget, thirds)";
    StepResult s1 = shrink_toward(f1, d1, -1.0, third, options);
    StepResult s2 = shrink_toward(f2, d2, 1.0, third, options);
    s1.record.location = "left disc " + s1.record.location;
    s2.record.location = "right disc " + s2.record.location;
    record.substeps.push_back(s1.record);
    record.substeps.push_back(s2.record);
    const FuncExpr& g1 = s1.f;
    const FuncExpr& g2 = s2.f;
    const Complex g1_0 = eval_func(g1, 0.0);
    const Complex g2_0 = eval_func(g2, 0.0);

    FuncExpr left = g1;
    if (std::abs(g1_0 - g2_0) <= kEqualShrinkTol) {
        record.parameters = {{"branch", 3.0}};
    } else {
        record.parameters = {{"branch", 4.0}};
        StepResult par = parabolic_step(
            g1, d1, -1.0, third,
            [&](const FuncExpr& candidate) { return !collinear_with_origin(eval_func(candidate, 0.0), g2_0); },
            options);
        par.record.location = "left disc " + par.record.location;
        const FuncExpr& h = par.f;
        record.substeps.push_back(par.record);
        const Complex h0 = eval_func(h, 0.0);
        PieChoice pie = choose_pie_parameters(h0, g2_0, h, options);

        const SampleGrid d1_grid = boundary_grid(d1, options.verify_density);
        double m = min_modulus(h, d1_grid).value;
        m = std::min(m, grid_min_modulus(h, local_samples(d1, 0.0, pie.delta2)));

        StepRecord eta_record;
        eta_record.tag = "eta";
        eta_record.location = "left disc";
        const std::vector<Complex> outer = outer_samples(pie.delta2, options.verify_density);
        double delta3 = 1.0;
        double eta_outer = std::numeric_limits<double>::infinity();
        bool found = false;
        for (int k = 0; k < 2 * options.max_iterations; ++k, delta3 *= 0.5) {
            EtaParams trial = pie.params;
            trial.delta3 = delta3;
            double sup = 0.0;
            for (Complex z : outer) sup = std::max(sup, std::abs(eval_eta(trial, z)));
            eta_record.trace.push_back({delta3, sup, sup < 0.5 * m});
            if (sup < 0.5 * m) {
                eta_outer = sup;
                found = true;
                break;
            }
        }
        if (!found) throw Error(ErrorKind::DegenerateGeometry, "no contraction delta3 keeps |eta| below m/2");
        pie.params.delta3 = delta3;
        const MapExpr eta = MapExpr::eta(pie.params);
        left = FuncExpr::sum(h, compose(FuncExpr::identity(), eta));

        // Case split near the contact: |z| <= delta2 stays clear of 0 via the pie piece.
        const auto inner = inner_samples(pie.delta2, options.verify_density);
        const double inner_min = grid_min_modulus(left, inner);
        if (!(eta_outer < m) || !(inner_min >= 0.25 * pie.segment_distance * (1.0 - 1e-9))) {
            throw Error(ErrorKind::InternalConsistency, "eta bound split failed");
        }
        eta_record.parameters = {{"alpha", pie.params.alpha}, {"r", pie.params.r},
                                 {"delta1", pie.params.delta1}, {"delta2", pie.delta2},
                                 {"delta3", pie.params.delta3}, {"m", m},
                                 {"segment_distance", pie.segment_distance},
                                 {"eta_sup_outer", eta_outer}, {"min_modulus_inner", inner_min}};
        eta_record.error_budget_spent = pie.params.r;
        record.parameters.insert(record.parameters.end(), eta_record.parameters.begin(),
                                 eta_record.parameters.end());
        record.substeps.push_back(eta_record);
    }

    StepRecord glue_record;
    glue_record.tag = "glue";
    glue_record.location = "contact 0";
    FuncExpr result = FuncExpr::glue({{d1, left}, {d2, g2}});
    glue_record.parameters = {{"jump", std::abs(eval_func(left, 0.0) - eval_func(g2, 0.0))}};
    record.substeps.push_back(glue_record);

    if (std::abs(eval_func(result, -1.0) - f_left) > kAnchorTol ||
        std::abs(eval_func(result, 1.0) - f_right) > kAnchorTol) {
        throw Error(ErrorKind::InternalConsistency, "contact removal moved an endpoint value");
    }
    const SampleGrid grid = boundary_grid(pair, options.verify_density);
    record.error_budget_spent = sup_diff(result, f, grid).value;
    if (record.error_budget_spent > budget) {
        throw Error(ErrorKind::InternalConsistency, "contact removal exceeded its budget");
    }
    record.certificate = step_certificate(result, pair, {Complex(1.0)}, options);
    return {result, std::move(record)};
}

std::pair<FuncExpr, ApproxReport> disc_chain_pipeline(const FuncExpr& f, std::size_t n, double epsilon,
                                                      const PipelineOptions& options) {
    check_budget(epsilon);
    const DiscChain chain = chain_discs(n);
    ApproxReport report;
    report.epsilon = epsilon;
    report.input = f;
    if (const auto* c = f.as<funcs::Const>(); c && c->c == Complex(0.0)) {
        throw Error(ErrorKind::Precondition, "the zero function has interior zeros");
    }
    require_interior_zero_free(f, chain, options, "chain pipeline");

    std::vector<FuncExpr> pieces;
    for (const Disc& d : chain.discs) pieces.push_back(restrict_to(f, d));

    auto run = [&](auto&& body) {
        try {
            body();
        } catch (const PipelineFailure&) {
            throw;
        } catch (const Error& e) {
            throw PipelineFailure(e, report);
        }
    };

    if (n == 1) {
        const Disc& d = chain.discs[0];
        Complex q = d.point_at(0.0);
        run([&] {
            const SampleGrid grid = boundary_grid(d, options.verify_density);
            const auto values = eval_many(pieces[0], grid.boundary_samples);
            double best = -1.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (std::abs(values[i]) > best) {
                    best = std::abs(values[i]);
                    q = grid.boundary_samples[i];
                }
            }
            StepResult s = shrink_toward(pieces[0], d, q, epsilon, options);
            s.record.location = "disc 1 " + s.record.location;
            pieces[0] = s.f;
            report.steps.push_back(std::move(s.record));
        });
        report.notes.push_back("single disc: shrink toward the boundary sample of largest modulus");
    } else {
        const double budget = epsilon / static_cast<double>(2 * n - 1);
        run([&] {
            StepResult first = shrink_toward(pieces[0], chain.discs[0], chain.tangencies[0], budget, options);
            first.record.location = "disc 1 " + first.record.location;
            pieces[0] = first.f;
            report.steps.push_back(std::move(first.record));
            StepResult last = shrink_toward(pieces[n - 1], chain.discs[n - 1], chain.tangencies[n - 2], budget, options);
            last.record.location = "disc " + std::to_string(n) + " " + last.record.location;
            pieces[n - 1] = last.f;
            report.steps.push_back(std::move(last.record));
        });
        for (std::size_t j = 1; j + 1 < n; ++j) {
            run([&] {
                StepResult s = lens_step(pieces[j], chain.discs[j], {chain.tangencies[j - 1], chain.tangencies[j]},
                                         budget, options);
                s.record.location = "disc " + std::to_string(j + 1) + " " + s.record.location;
                pieces[j] = s.f;
                report.steps.push_back(std::move(s.record));
            });
        }
        for (std::size_t j = 1; j < n; ++j) {
            run([&] {
                const double shift = static_cast<double>(j);
                const MapExpr to_global = MapExpr::affine(1.0, shift);
                const MapExpr to_local = MapExpr::affine(1.0, -shift);
                const FuncExpr local = FuncExpr::glue(
                    {{left_unit_disc(), compose(pieces[j - 1], to_global)},
                     {right_unit_disc(), compose(pieces[j], to_global)}});
                StepResult s = remove_contact_zero(local, budget, options);
                s.record.location = "contact " + std::to_string(j);
                pieces[j - 1] = compose(restrict_to(s.f, left_unit_disc()), to_local);
                pieces[j] = compose(restrict_to(s.f, right_unit_disc()), to_local);
                report.steps.push_back(std::move(s.record));
            });
        }
        report.notes.push_back("budget split evenly over " + std::to_string(2 * n - 1) + " steps");
    }

    FuncExpr result = pieces[0];
    run([&] {
        if (n > 1) {
            std::vector<FuncExpr::GluePiece> glued;
            for (std::size_t k = 0; k < n; ++k) glued.push_back({chain.discs[k], pieces[k]});
            result = FuncExpr::glue(std::move(glued));
        }
        const SampleGrid grid = boundary_grid(chain, options.verify_density);
        report.output = result;
        report.total_sup_diff = sup_diff(result, f, grid);
        report.final_certificate = certify_zero_free(result, chain, {}, options.certify);
    });
    return {result, std::move(report)};
}

JordanChain make_jordan_chain(std::vector<MapExpr> maps, double density) {
    if (maps.empty()) throw Error(ErrorKind::InvalidArgument, "a Jordan chain needs at least one domain");
    JordanChain chain;
    chain.n = maps.size();
    chain.maps = std::move(maps);
    const DiscChain discs = chain_discs(chain.n);
    for (std::size_t j = 0; j + 1 < chain.n; ++j) {
        const Complex t = discs.tangencies[j];
        const Complex a = eval_map(chain.maps[j], t);
        const Complex b = eval_map(chain.maps[j + 1], t);
        if (std::abs(a - b) > 1e-10 * std::max(1.0, std::abs(a))) {
            throw Error(ErrorKind::InvalidArgument,
                        "consecutive domains must meet at the image of their tangency point", a);
        }
        chain.tangency_images.push_back(a);
    }
    for (std::size_t j = 0; j < chain.n; ++j) {
        std::vector<Complex> images;
        for (Complex w : boundary_grid(discs.discs[j], density).all_samples()) {
            images.push_back(eval_map(chain.maps[j], w));
        }
        std::sort(images.begin(), images.end(), [](Complex x, Complex y) { return x.real() < y.real(); });
        for (std::size_t i = 0; i < images.size(); ++i) {
            for (std::size_t k = i + 1; k < images.size() && images[k].real() - images[i].real() <= 1e-10; ++k) {
                if (std::abs(images[k] - images[i]) <= 1e-10) {
                    throw Error(ErrorKind::InvalidArgument, "domain map is not injective on the grid", images[i]);
                }
            }
        }
    }
    return chain;
}

SampleGrid jordan_grid(const JordanChain& chain, double density) {
    const DiscChain discs = chain_discs(chain.n);
    const auto maps = chain.maps;
    return map_grid(boundary_grid(discs, density),
                    [maps](std::size_t k, Complex w) { return eval_map(maps[k], w); });
}

std::pair<FuncExpr, ApproxReport> jordan_chain_pipeline(const FuncExpr& f, const JordanChain& chain, double epsilon,
                                                        const PipelineOptions& options) {
    if (chain.maps.size() != chain.n || chain.n == 0) {
        throw Error(ErrorKind::InvalidArgument, "Jordan chain needs one map per domain");
    }
    const DiscChain discs = chain_discs(chain.n);
    std::vector<FuncExpr::GluePiece> pulled;
    for (std::size_t k = 0; k < chain.n; ++k) pulled.push_back({discs.discs[k], compose(f, chain.maps[k])});
    const FuncExpr g = chain.n == 1 ? pulled[0].f : FuncExpr::glue(std::move(pulled));

    StepRecord pullback;
    pullback.tag = "pullback";
    pullback.location = "f o phi onto the canonical chain";
    pullback.parameters = {{"n", static_cast<double>(chain.n)}};

    auto [g_eps, report] = disc_chain_pipeline(g, chain.n, epsilon, options);
    report.steps.insert(report.steps.begin(), pullback);
    report.pullback_certificate = report.final_certificate;
    report.input = f;

    std::vector<FuncExpr::MappedPiece> pushed;
    for (std::size_t k = 0; k < chain.n; ++k) {
        pushed.push_back({discs.discs[k], chain.maps[k], restrict_to(g_eps, discs.discs[k]), {}, {}});
    }
    FuncExpr f_eps = FuncExpr::mapped_glue(std::move(pushed));

    try {
        const SampleGrid grid = jordan_grid(chain, options.verify_density);
        std::vector<std::pair<std::string, Contour>> contours = shrunk_contours(discs, options.certify);
        for (std::size_t k = 0; k < chain.n; ++k) {
            const MapExpr phi = chain.maps[k];
            contours[k].second = map_contour(contours[k].second, [phi](Complex w) { return eval_map(phi, w); });
            contours[k].first = "domain " + std::to_string(k + 1);
        }
        report.final_certificate = certify_on(f_eps, "jordan chain(n=" + std::to_string(chain.n) + ")", contours,
                                              grid, {}, options.certify);
        report.total_sup_diff = sup_diff(f_eps, f, grid);
    } catch (const Error& e) {
        throw PipelineFailure(e, report);
    }
    StepRecord pushforward;
    pushforward.tag = "pushforward";
    pushforward.location = "g_eps o phi^-1 by numerical inversion";
    pushforward.certificate = report.final_certificate;
    report.steps.push_back(pushforward);
    report.output = f_eps;
    return {f_eps, std::move(report)};
}

}  // namespace zfree

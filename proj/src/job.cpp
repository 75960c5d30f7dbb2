#include "zfree/job.hpp"

#include <cstdio>
#include <fstream>
#include <map>

#include "zfree/expr.hpp"

namespace zfree {

namespace {

template <class T>
T field(const Json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw Error(ErrorKind::Parse, std::string("config field '") + key + "' has the wrong type");
    }
}

Json error_json(const Error& e) {
    Json out{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    if (e.point()) out["point"] = to_json(*e.point());
    if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
        out["position"] = p->position();
        out["caret"] = p->caret();
        if (!p->suggestions().empty()) out["suggestions"] = p->suggestions();
    }
    return out;
}

std::vector<Complex> grid_points(const SampleGrid& g) {
    std::vector<Complex> pts = g.boundary_samples;
    pts.insert(pts.end(), g.interior_samples.begin(), g.interior_samples.end());
    return pts;
}

GridDump dump_grid(std::string name, const FuncExpr& f, const std::vector<Complex>& pts) {
    return {std::move(name), pts, eval_many(f, pts)};
}

}  // namespace

JobConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, "config must be a JSON object");
    JobConfig c;
    const Json region = j.contains("region") ? j.at("region") : Json::object();
    if (region.contains("chain")) {
        const auto n = field<long long>(region, "chain", 0);
        if (n < 1) throw Error(ErrorKind::InvalidArgument, "region.chain must be >= 1");
        c.region = static_cast<std::size_t>(n);
    } else if (region.contains("jordan")) {
        c.region = field<std::vector<std::string>>(region, "jordan", {});
    } else {
        throw Error(ErrorKind::Parse, "config needs region.chain or region.jordan");
    }
    if (!j.contains("function")) throw Error(ErrorKind::Parse, "config needs a function");
    c.function = field<std::string>(j, "function", "");
    c.epsilon = field<double>(j, "epsilon", c.epsilon);
    if (j.contains("grid")) {
        c.fit_density = field<double>(j.at("grid"), "fit", c.fit_density);
        c.verify_density = field<double>(j.at("grid"), "verify", c.verify_density);
    }
    c.max_degree = field<int>(j, "max_degree", c.max_degree);
    c.polynomial = field<bool>(j, "polynomial", c.polynomial);
    if (!(c.epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
    if (!(c.fit_density > 0.0) || !(c.verify_density > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "grid densities must be positive");
    }
    if (c.max_degree < 0) throw Error(ErrorKind::InvalidArgument, "max_degree must be >= 0");
    return c;
}

Json to_json(const JobConfig& c) {
    Json region;
    if (const auto* n = std::get_if<std::size_t>(&c.region)) {
        region["chain"] = *n;
    } else {
        region["jordan"] = std::get<std::vector<std::string>>(c.region);
    }
    return Json{{"region", region},
                {"function", c.function},
                {"epsilon", c.epsilon},
                {"grid", {{"fit", c.fit_density}, {"verify", c.verify_density}}},
                {"max_degree", c.max_degree},
                {"polynomial", c.polynomial},
                {"deterministic", true}};
}

std::string_view to_string(ExitClass c) {
    switch (c) {
        case ExitClass::Success: return "success";
        case ExitClass::Failure: return "failure";
        case ExitClass::Parse: return "parse";
        case ExitClass::Precondition: return "precondition";
        case ExitClass::Nonconvergence: return "nonconvergence";
        case ExitClass::DegreeExceeded: return "degree-exceeded";
    }
    return "failure";
}

ExitClass exit_class_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return ExitClass::Parse;
        case ErrorKind::Precondition: return ExitClass::Precondition;
        case ErrorKind::Nonconvergence: return ExitClass::Nonconvergence;
        case ErrorKind::DegreeExceeded: return ExitClass::DegreeExceeded;
        default: return ExitClass::Failure;
    }
}

JobResult run_job(const JobConfig& config) {
    JobResult result;
    Json& report = result.report;
    report["config"] = to_json(config);
    report["steps"] = Json::array();
    report["polynomial"] = nullptr;
    report["certificates"] = Json::object();
    report["totals"] = Json::object();

    auto finish = [&](ExitClass c) {
        result.exit_class = c;
        report["exit_class"] = {{"code", static_cast<int>(c)}, {"name", std::string(to_string(c))}};
        return result;
    };

    try {
        const FuncExpr f = parse_function(config.function);
        std::optional<JordanChain> jordan;
        std::size_t n = 0;
        if (const auto* chain = std::get_if<std::size_t>(&config.region)) {
            n = *chain;
        } else {
            std::vector<MapExpr> maps;
            for (const auto& s : std::get<std::vector<std::string>>(config.region)) maps.push_back(parse_map(s));
            jordan = make_jordan_chain(std::move(maps));
            n = jordan->n;
        }
        const PolyRegion region = jordan ? PolyRegion(*jordan) : PolyRegion(chain_discs(n));
        const double pipeline_budget = config.polynomial ? 0.5 * config.epsilon : config.epsilon;

        PipelineOptions popts;
        popts.verify_density = config.verify_density;
        std::optional<FuncExpr> f_eps;
        ApproxReport approx;
        try {
            auto [g, rep] = jordan ? jordan_chain_pipeline(f, *jordan, pipeline_budget, popts)
                                   : disc_chain_pipeline(f, n, pipeline_budget, popts);
            f_eps = g;
            approx = std::move(rep);
        } catch (const PipelineFailure& e) {
            for (const auto& s : e.partial().steps) report["steps"].push_back(to_json(s));
            report["error"] = error_json(e);
            return finish(exit_class_for(e.kind()));
        }
        for (const auto& s : approx.steps) report["steps"].push_back(to_json(s));
        report["certificates"]["pipeline"] = to_json(approx.final_certificate);
        if (approx.pullback_certificate) report["certificates"]["pullback"] = to_json(*approx.pullback_certificate);
        report["totals"]["epsilon"] = config.epsilon;
        report["totals"]["pipeline_budget"] = pipeline_budget;
        report["totals"]["pipeline_sup_diff"] = to_json(approx.total_sup_diff);
        if (!approx.notes.empty()) report["notes"] = approx.notes;

        const SampleGrid verify = region_grid(region, config.verify_density);
        const std::vector<Complex> pts = grid_points(verify);
        result.grids.push_back(dump_grid("f", f, pts));
        result.grids.push_back(dump_grid("f_eps", *f_eps, pts));

        bool zero_free = approx.final_certificate.zero_free();
        double total = approx.total_sup_diff.value;
        if (config.polynomial) {
            PolyfitOptions opts;
            opts.fit_density = config.fit_density;
            opts.verify_density = config.verify_density;
            PolyApproximant p;
            try {
                p = zero_free_polynomial(*f_eps, region, config.epsilon - pipeline_budget, config.max_degree, opts);
            } catch (const DegreeExceededError& e) {
                report["polynomial"] = to_json(e.best());
                report["error"] = error_json(e);
                return finish(ExitClass::DegreeExceeded);
            }
            report["polynomial"] = to_json(p);
            if (p.certificate) report["certificates"]["polynomial"] = to_json(*p.certificate);
            const FuncExpr pf = p.as_function();
            result.grids.push_back(dump_grid("poly", pf, pts));
            const NormEstimate combined = sup_diff(pf, f, verify);
            report["totals"]["polynomial_fit_error"] = to_json(p.fit_error);
            report["totals"]["combined_sup_diff"] = to_json(combined);
            zero_free = p.certificate && p.certificate->zero_free();
            total = combined.value;
        }
        const bool within = total <= config.epsilon;
        report["totals"]["within_epsilon"] = within;
        report["totals"]["zero_free"] = zero_free;
        return finish(zero_free && within ? ExitClass::Success : ExitClass::Failure);
    } catch (const Error& e) {
        report["error"] = error_json(e);
        return finish(exit_class_for(e.kind()));
    }
}

std::string grid_csv(const GridDump& g) {
    std::string out = "re(z),im(z),re(f),im(f),|f|\n";
    char buf[160];
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        const Complex z = g.points[i];
        const Complex v = g.values[i];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", z.real(), z.imag(), v.real(), v.imag(),
                      std::abs(v));
        out += buf;
    }
    return out;
}

void write_outputs(const JobResult& result, const std::filesystem::path& report, const std::filesystem::path& grid_dir,
                   const std::string& started, const std::string& finished) {
    auto write = [](const std::filesystem::path& path, const std::string& text) {
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
        out << text;
    };
    if (!report.empty()) {
        write(report, dump(result.report));
        Json meta{{"report", report.filename().string()}, {"started", started}, {"finished", finished}};
        write(report.string() + ".meta.json", dump(meta));
    }
    if (!grid_dir.empty()) {
        for (const auto& g : result.grids) write(grid_dir / (g.name + ".csv"), grid_csv(g));
    }
}

namespace {

const std::map<std::string, JobConfig>& demos() {
    static const std::map<std::string, JobConfig> table = [] {
        std::map<std::string, JobConfig> t;
        auto chain = [](std::size_t n, std::string fn, double eps) {
            JobConfig c;
            c.region = n;
            c.function = std::move(fn);
            c.epsilon = eps;
            return c;
        };
        auto jordan = [](std::vector<std::string> maps, std::string fn, double eps) {
            JobConfig c;
            c.region = std::move(maps);
            c.function = std::move(fn);
            c.epsilon = eps;
            return c;
        };
        // Contact pair |z+1/2| <= 1/2, |z-1/2| <= 1/2 as a shifted chain.
        t["contact-z"] = jordan({"affine(1, -1)", "affine(1, -1)"}, "z", 0.1);
        t["contact-z2"] = jordan({"affine(1, -1)", "affine(1, -1)"}, "z^2", 0.1);
        t["z-1"] = chain(2, "z-1", 0.1);
        t["sin-n2"] = chain(2, "sin(pi*z)", 0.1);
        t["quadratic-n3"] = chain(3, "(z-1)*(z-2)", 0.1);
        t["exp-n2"] = chain(2, "exp(z)", 0.1);
        t["jordan-affine"] = jordan({"affine(2, -1)", "affine(4, -3)"}, "z-1", 0.1);
        t["jordan-moebius"] = jordan({"affine(1, 0)", "moebius(1.5, -0.5, 0.5, 0.5)"}, "z*z-1", 0.1);
        return t;
    }();
    return table;
}

}  // namespace

std::vector<std::string> demo_names() {
    std::vector<std::string> out;
    for (const auto& [name, _] : demos()) out.push_back(name);
    return out;
}

JobConfig demo_config(const std::string& name) {
    const auto it = demos().find(name);
    if (it == demos().end()) {
        std::string known;
        for (const auto& n : demo_names()) known += (known.empty() ? "" : ", ") + n;
        throw Error(ErrorKind::InvalidArgument, "unknown demo '" + name + "' (known: " + known + ")");
    }
    return it->second;
}

}  // namespace zfree

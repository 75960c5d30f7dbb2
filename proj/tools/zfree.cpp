// Command-line front end: approximate, verify, demo, grid.
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "zfree/expr.hpp"
#include "zfree/job.hpp"
#include "zfree/parallel.hpp"

using namespace zfree;

namespace {

std::string now_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

int report_error(const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (const auto* p = dynamic_cast<const ParseError*>(&e)) std::cerr << p->caret() << "\n";
    return static_cast<int>(exit_class_for(e.kind()));
}

int finish_job(const JobResult& r, const std::string& out, const std::string& grids, const std::string& started) {
    if (out.empty()) {
        std::cout << dump(r.report);
    }
    write_outputs(r, out, grids, started, now_utc());
    if (r.report.contains("error")) {
        const auto& err = r.report["error"];
        std::cerr << "error: " << err["message"].get<std::string>() << "\n";
        if (err.contains("caret")) std::cerr << err["caret"].get<std::string>() << "\n";
    }
    std::cerr << "exit class: " << to_string(r.exit_class) << "\n";
    return static_cast<int>(r.exit_class);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero-free approximation on chains of discs and Jordan domains"};
    app.require_subcommand(1);
    unsigned threads = 1;
    app.add_option("--threads", threads, "Worker threads for grid evaluation")->check(CLI::PositiveNumber);

    auto* approx = app.add_subcommand("approximate", "Run the full pipeline and polynomial step from a JSON config");
    std::string config_path, out_path, grid_dir;
    approx->add_option("--config", config_path, "Job config (JSON)")->required()->check(CLI::ExistingFile);
    approx->add_option("--out", out_path, "Report path (stdout when omitted)");
    approx->add_option("--grids", grid_dir, "Directory for CSV grids");

    auto* verify = app.add_subcommand("verify", "Zero-free certificate for an expression on the canonical chain");
    std::string verify_expr;
    std::size_t verify_chain = 1;
    double verify_floor = 1e-10;
    verify->add_option("--expr", verify_expr, "Function of z")->required();
    verify->add_option("--chain", verify_chain, "Number of discs")->check(CLI::PositiveNumber);
    verify->add_option("--epsilon", verify_floor, "Modulus at or below which a sample counts as a zero")
        ->check(CLI::PositiveNumber);

    auto* demo = app.add_subcommand("demo", "Run a built-in example");
    std::string demo_name, demo_out, demo_grids;
    bool list = false;
    demo->add_option("--name", demo_name, "Example id");
    demo->add_flag("--list", list, "List example ids");
    demo->add_option("--out", demo_out, "Report path (stdout when omitted)");
    demo->add_option("--grids", demo_grids, "Directory for CSV grids");

    auto* grid = app.add_subcommand("grid", "Dump function values on a chain grid as CSV");
    std::string grid_expr, grid_out;
    double grid_density = 32.0;
    std::size_t grid_chain = 1;
    grid->add_option("--expr", grid_expr, "Function of z")->required();
    grid->add_option("--density", grid_density, "Samples per unit length")->check(CLI::PositiveNumber);
    grid->add_option("--chain", grid_chain, "Number of discs")->check(CLI::PositiveNumber);
    grid->add_option("--out", grid_out, "CSV path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);
    set_thread_count(threads);

    try {
        if (*approx) {
            const std::string started = now_utc();
            std::ifstream in(config_path);
            Json j;
            try {
                j = Json::parse(in);
            } catch (const Json::parse_error& e) {
                throw Error(ErrorKind::Parse, std::string("config is not valid JSON: ") + e.what());
            }
            return finish_job(run_job(config_from_json(j)), out_path, grid_dir, started);
        }
        if (*demo) {
            if (list || demo_name.empty()) {
                for (const auto& n : demo_names()) std::cout << n << "\n";
                return 0;
            }
            const std::string started = now_utc();
            return finish_job(run_job(demo_config(demo_name)), demo_out, demo_grids, started);
        }
        if (*verify) {
            const FuncExpr f = parse_function(verify_expr);
            CertifyOptions opts;
            opts.zero_floor = verify_floor;
            const ZeroCertificate cert = certify_zero_free(f, chain_discs(verify_chain), {}, opts);
            std::cout << dump(to_json(cert));
            if (cert.zero_free()) return 0;
            for (const auto& [_, w] : cert.winding_numbers) {
                if (w != 0) return static_cast<int>(ExitClass::Precondition);
            }
            return static_cast<int>(ExitClass::Failure);
        }
        if (*grid) {
            const FuncExpr f = parse_function(grid_expr);
            const SampleGrid g = boundary_grid(chain_discs(grid_chain), grid_density);
            std::vector<Complex> pts = g.boundary_samples;
            pts.insert(pts.end(), g.interior_samples.begin(), g.interior_samples.end());
            const std::string csv = grid_csv({"grid", pts, eval_many(f, pts)});
            if (grid_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream(grid_out, std::ios::binary) << csv;
            }
            return 0;
        }
    } catch (const Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

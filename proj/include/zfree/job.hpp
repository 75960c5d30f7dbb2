#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "zfree/serialize.hpp"

namespace zfree {

/// {"region": {"chain": n} | {"jordan": ["<map>", ...]}, "function": "<expr>",
///  "epsilon": e, "grid": {"fit": d, "verify": d}, "max_degree": k, "polynomial": bool}
struct JobConfig {
    std::variant<std::size_t, std::vector<std::string>> region = std::size_t{1};
    std::string function;
    double epsilon = 0.1;
    double fit_density = 128.0;
    double verify_density = 64.0;
    int max_degree = 200;
    bool polynomial = true;
};

JobConfig config_from_json(const Json& j);
Json to_json(const JobConfig& c);

enum class ExitClass { Success = 0, Failure = 1, Parse = 2, Precondition = 3, Nonconvergence = 4, DegreeExceeded = 5 };

std::string_view to_string(ExitClass c);
ExitClass exit_class_for(ErrorKind kind);

struct GridDump {
    std::string name;  // file stem
    std::vector<Complex> points;
    std::vector<Complex> values;
};

struct JobResult {
    ExitClass exit_class = ExitClass::Failure;
    Json report;
    std::vector<GridDump> grids;
};

/// Runs the pipeline (and the polynomial step when requested; the error
/// budget is then split evenly between the two). Never throws for
/// library failures: they become the exit class and an "error" entry.
JobResult run_job(const JobConfig& config);

/// CSV with header re(z),im(z),re(f),im(f),|f|.
std::string grid_csv(const GridDump& g);

/// Report body to `report`, timestamps to `report` + ".meta.json",
/// grids to `grid_dir`/<name>.csv when grid_dir is non-empty.
void write_outputs(const JobResult& result, const std::filesystem::path& report, const std::filesystem::path& grid_dir,
                   const std::string& started, const std::string& finished);

std::vector<std::string> demo_names();
JobConfig demo_config(const std::string& name);

}  // namespace zfree

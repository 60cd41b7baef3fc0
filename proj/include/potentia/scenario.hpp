#ifndef POTENTIA_SCENARIO_HPP
#define POTENTIA_SCENARIO_HPP

#include <filesystem>
#include <string>

#include "potentia/uniqueness.hpp"

// Single-header nlohmann/json from vendor/.
#include "json.hpp"

namespace potentia {

using json = nlohmann::ordered_json;

enum class Pipeline {
    Verdict,
    PoissonJensen,
    Duality,
    Balayage,
    Gluing,
    Continuation,
    ConvergenceStudy,
};

struct ShapeSpec {
    std::string shape;  // disk | annulus | rectangle
    Point center{0, 0};
    double radius = 0;
    double r_in = 0, r_out = 0;
    BBox rect{};

    Domain to_domain() const;
};

struct ZerosSpec {
    std::string generator = "explicit";
    std::vector<ZeroSet::Entry> points;
    Point center{0, 0};
    double angle = 0;
    double scale = 1.0;
    long k_start = 2;
    long max_terms = 1000000;
    double sum_threshold = 1000.0;
    double coeff = 1.0;
    double ratio = 0.5;
    double exponent = 2.0;

    ZeroGenerator to_generator() const;
};

struct Scenario {
    Pipeline pipeline = Pipeline::Verdict;
    long seed = 0;
    int grid_n = 256;

    ShapeSpec domain;
    bool has_hole = false;
    ShapeSpec hole;

    std::string testfn_kind = "green";  // green | custom
    Point testfn_pole{0, 0};
    std::string testfn_csv;  // custom grid values

    std::string growth_kind = "bounded";  // bounded | blaschke
    double growth_const = 0;
    std::vector<ZeroSet::Entry> growth_zeros;

    ZerosSpec zeros;

    Point ball_center{0, 0};
    double ball_radius = 0.2;

    double jensen_circle_radius = 0.5;
    int jensen_circle_nodes = 1024;

    std::string study_kind = "green";  // green | poisson-jensen | constant
    std::vector<int> study_levels{64, 128, 256};

    std::string output_dir = "out";
};

// Parses the key/value scenario format; throws ScenarioError with the line
// number and field name on malformed input.
Scenario parse_scenario(const std::filesystem::path& file);
Scenario parse_scenario_text(const std::string& text, const std::string& name);

// Schema-level validation beyond parsing (shape sanity, required sections for
// the pipeline). Throws ScenarioError.
void validate_scenario(const Scenario& sc);

struct RunResult {
    json report;
    int exit_code = 0;  // 0 completed; 1 hypothesis/geometry/IO; 2 parse/schema
    std::vector<std::string> files_written;
};

// Executes the scenario's pipeline and writes report.json plus CSV dumps into
// the output directory. Completed runs exit 0 regardless of the verdict;
// hypothesis and geometry errors exit 1.
RunResult run_scenario(const Scenario& sc,
                       const std::filesystem::path& out_dir_override = {},
                       int grid_override = 0);

// Convergence study: one (h, residual) row per level; monotone residual
// decrease is asserted for the green and poisson-jensen studies and a
// violation is reported as a calibration failure (exit 1).
RunResult run_convergence_study(const Scenario& sc, const std::vector<int>& levels,
                                const std::filesystem::path& out_dir_override = {});

}  // namespace potentia

#endif

#include <CLI11.hpp>

#include <iostream>

#include "potentia/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"potentia: numerical potential-theory scenarios"};
    app.require_subcommand(1);

    std::string run_file, run_out;
    int run_grid = 0;
    CLI::App* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("file", run_file, "scenario file")->required();
    run->add_option("--out", run_out, "output directory override");
    run->add_option("--grid", run_grid, "grid resolution override");

    std::string study_file, study_out, study_levels;
    CLI::App* study = app.add_subcommand("study", "convergence study over grid levels");
    study->add_option("file", study_file, "scenario file")->required();
    study->add_option("--levels", study_levels, "comma-separated grid levels");
    study->add_option("--out", study_out, "output directory override");

    std::string validate_file;
    CLI::App* validate = app.add_subcommand("validate", "parse and schema-check a file");
    validate->add_option("file", validate_file, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const potentia::Scenario sc = potentia::parse_scenario(run_file);
            const potentia::RunResult res =
                potentia::run_scenario(sc, run_out, run_grid);
            std::cout << res.report.dump(2) << std::endl;
            return res.exit_code;
        }
        if (study->parsed()) {
            const potentia::Scenario sc = potentia::parse_scenario(study_file);
            std::vector<int> levels;
            if (!study_levels.empty()) {
                std::stringstream ss(study_levels);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    if (!tok.empty()) levels.push_back(std::stoi(tok));
                }
            }
            const potentia::RunResult res =
                potentia::run_convergence_study(sc, levels, study_out);
            std::cout << res.report.dump(2) << std::endl;
            return res.exit_code;
        }
        if (validate->parsed()) {
            potentia::parse_scenario(validate_file);
            std::cout << "ok: " << validate_file << std::endl;
            return 0;
        }
    } catch (const potentia::ScenarioError& e) {
        std::cerr << "scenario error";
        if (e.line > 0) std::cerr << " (line " << e.line << ", " << e.field << ")";
        std::cerr << ": " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}

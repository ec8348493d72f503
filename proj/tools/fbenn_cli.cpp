// Batch runner: fbenn run <scenario> | fbenn sweep <scenario> --p 0,0.5,1
#include <charconv>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fbenn/error.hpp"
#include "fbenn/scenario.hpp"

namespace {

constexpr int exit_invalid = 2;
constexpr int exit_numerical = 3;

bool is_validation(fbenn::Errc c) {
    using fbenn::Errc;
    switch (c) {
    case Errc::unknown_key:
    case Errc::missing_key:
    case Errc::range_violation:
    case Errc::invalid_input:
    case Errc::invalid_step:
    case Errc::invalid_order:
    case Errc::invalid_terminal:
    case Errc::invalid_time:
    case Errc::io_error: return true;
    default: return false;
    }
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
        if (r.ec != std::errc() || r.ptr != item.data() + item.size())
            throw fbenn::Error(fbenn::Errc::range_violation, "option '--p': '" + item + "' is not a number");
        out.push_back(v);
    }
    return out;
}

std::string p_stem(const std::string& name, double p) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, p);
    return name + "_p" + std::string(buf, r.ptr);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional Burgers equation batch runner"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_dir = ".";
    bool quiet = false;
    app.add_option("--out-dir", out_dir, "Directory for output files");
    app.add_flag("--quiet", quiet, "Suppress the report on standard output");

    std::string run_file;
    auto* run_cmd = app.add_subcommand("run", "Run one scenario");
    run_cmd->add_option("scenario", run_file, "Scenario file")->required();

    std::string sweep_file, p_list;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario for several values of p");
    sweep_cmd->add_option("scenario", sweep_file, "Scenario file")->required();
    sweep_cmd->add_option("--p", p_list, "Comma-separated p values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_invalid;
    }

    try {
        if (*run_cmd) {
            const auto scenario = fbenn::load_scenario(run_file);
            const auto report = fbenn::run(scenario);
            fbenn::write_outputs(report, scenario, out_dir);
            if (!quiet) std::cout << fbenn::report_json(report) << "\n";
        } else {
            const auto scenario = fbenn::load_scenario(sweep_file);
            const auto ps = parse_list(p_list);
            const auto result = fbenn::sweep(scenario, ps);
            for (std::size_t i = 0; i < ps.size(); ++i) {
                fbenn::write_outputs(result.runs[i], scenario, out_dir, p_stem(scenario.name, ps[i]));
                if (!quiet) std::cout << fbenn::report_json(result.runs[i]) << "\n";
            }
            fbenn::write_continuity(result, ps, scenario, out_dir);
            if (!quiet) {
                std::cout << "p_from,p_to,linf\n";
                for (std::size_t i = 0; i < result.continuity.size(); ++i)
                    std::cout << ps[i] << "," << ps[i + 1] << "," << result.continuity[i] << "\n";
            }
        }
    } catch (const fbenn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_validation(e.code()) ? exit_invalid : exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return 0;
}

// koopguard: closed-loop battery charging simulator with Koopman-based
// attack detection and isolation.
//
// Log level comes from SPDLOG_LEVEL (e.g. SPDLOG_LEVEL=debug).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "koopguard/config.hpp"
#include "koopguard/csv.hpp"
#include "koopguard/errors.hpp"
#include "koopguard/report.hpp"
#include "koopguard/runner.hpp"

using namespace koopguard;

namespace {

void emit_report(const Report& rep, bool as_json, const std::string& path)
{
    std::string body = as_json ? to_json(rep).dump(2) + "\n" : to_text(rep);
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path);
    out << body;
}

}  // namespace

int main(int argc, char** argv)
{
    spdlog::set_default_logger(spdlog::stderr_color_mt("koopguard"));
    spdlog::cfg::load_env_levels();

    CLI::App app{"Koopman-based attack detection and isolation for a CCCV battery charger"};
    app.require_subcommand(1);

    std::vector<std::string> configs;
    std::string scenario, out_path, input, which, overlay_path, report_path;
    bool as_json = false;

    auto* run = app.add_subcommand("run", "simulate one charging run and write its trace");
    run->add_option("--config", configs, "config file(s), later ones override earlier");
    run->add_option("--scenario", scenario, "none, actuation, sensor or another preset name");
    run->add_option("--out", out_path, "CSV trace path (default from config)");
    run->add_option("--report", report_path, "also write the summary here");
    run->add_flag("--json", as_json, "summary as JSON");

    auto* cal = app.add_subcommand("calibrate", "derive a threshold and write a config overlay");
    cal->add_option("--config", configs, "config file(s)");
    cal->add_option("--which", which, "detection or isolation")
        ->required()
        ->check(CLI::IsMember({"detection", "isolation"}));
    cal->add_option("--out", overlay_path, "overlay JSON path (default: print to stdout)");

    auto* det = app.add_subcommand("detect", "re-run detection offline on a logged trace");
    det->add_option("--input", input, "CSV with t, y/y_meas, u/u_cmd columns")->required();
    det->add_option("--config", configs, "config file(s)");
    det->add_option("--out", out_path, "CSV output (default: stdout)");

    auto* sum = app.add_subcommand("summarize", "summarize a trace CSV");
    sum->add_option("--input", input, "trace CSV")->required();
    sum->add_option("--config", configs, "config file(s), for the SOC cutoff");
    sum->add_flag("--json", as_json, "machine-readable output");

    auto* show = app.add_subcommand("config", "print the merged configuration as JSON");
    show->add_option("--config", configs, "config file(s)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        RunConfig cfg = load_config(configs);

        if (*run) {
            if (!scenario.empty())
                cfg.use_scenario(scenario);
            if (!out_path.empty())
                cfg.output.csv = out_path;
            if (!report_path.empty())
                cfg.output.report = report_path;
            RunResult res = run_scenario(cfg);
            write_csv(res.records, cfg.output.csv);
            spdlog::info("{} samples written to {}", res.records.size(), cfg.output.csv);
            emit_report(summarize(res.records, cfg.charger.soc_cutoff), as_json, cfg.output.report);
        } else if (*cal) {
            nlohmann::json overlay = calibrate(cfg, which);
            if (overlay_path.empty()) {
                std::cout << overlay.dump(2) << "\n";
            } else {
                std::ofstream out(overlay_path);
                if (!out)
                    throw Error("cannot write " + overlay_path);
                out << overlay.dump(2) << "\n";
            }
        } else if (*det) {
            RunResult res = detect_offline(ingest_csv(input), cfg);
            if (out_path.empty())
                write_csv(res.records, std::cout);
            else
                write_csv(res.records, out_path);
        } else if (*show) {
            std::cout << to_json(cfg).dump(2) << "\n";
        } else if (*sum) {
            emit_report(summarize(read_records(input), cfg.charger.soc_cutoff), as_json, "");
        }
    } catch (const Error& e) {
        spdlog::error("{}", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}

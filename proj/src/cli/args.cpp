#include "proxident/cli.hpp"

#include "proxident/experiments.hpp"
#include "proxident/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>

namespace proxident::cli {

namespace {

double parse_positive(const std::string& flag, const std::string& text) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != text.size() || !(v > 0.0) || !std::isfinite(v))
        throw UsageError(flag + ": expected a positive real or 'auto', got '" + text + "'");
    return v;
}

std::optional<double> parse_auto(const std::string& flag, const std::string& text) {
    if (text == "auto") return std::nullopt;
    return parse_positive(flag, text);
}

Command parse_command(const std::string& s) {
    if (s == "run") return Command::Run;
    if (s == "compare") return Command::Compare;
    if (s == "experiment") return Command::Experiment;
    if (s == "list") return Command::List;
    if (s == "plot") return Command::Plot;
    throw UsageError("unknown command '" + s + "'");
}

} // namespace

InertiaSchedule parse_schedule(const std::string& text) {
    if (text == "nesterov") return InertiaSchedule::nesterov();
    try {
        if (text.rfind("cd:", 0) == 0) return InertiaSchedule::chambolle_dossal(parse_positive("--schedule", text.substr(3)));
        if (text.rfind("liang:", 0) == 0) {
            const std::string rest = text.substr(6);
            const auto comma = rest.find(',');
            if (comma == std::string::npos) throw UsageError("--schedule: liang needs p,q");
            return InertiaSchedule::liang(parse_positive("--schedule", rest.substr(0, comma)),
                                          parse_positive("--schedule", rest.substr(comma + 1)));
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--schedule: ") + e.what());
    }
    throw UsageError("--schedule: expected nesterov, cd:<a> or liang:<p>,<q>, got '" + text + "'");
}

std::string usage() {
    return "usage: proxident <run|compare|experiment|list|plot> [options]\n"
           "  --scenario <name>        scenario from `proxident list`\n"
           "  --algo <pg|apg|mfista|t1|t2>  repeatable\n"
           "  --seed <u64>             generator seed (default 42)\n"
           "  --budget <n>             prox-gradient steps per algorithm\n"
           "  --gamma <real|auto>      step size (auto: 1/L)\n"
           "  --schedule <nesterov|cd:a|liang:p,q>\n"
           "  --zeta <real|auto>       Z-set radius for t1/t2\n"
           "  --out <dir>              output directory (default $PROXIDENT_OUT, else ./proxident-out)\n"
           "  --svg                    also write plots\n"
           "  --config <file>          key = value file with the same keys; flags win\n";
}

CliConfig parse_args(const std::vector<std::string>& argv, const std::optional<std::string>& env_out) {
    CLI::App app{"proxident"};
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::string command;
    std::string scenario, gamma = "auto", schedule = "nesterov", zeta = "auto", out;
    std::vector<std::string> algos;
    std::uint64_t seed = 42;
    std::size_t budget = 0;
    bool svg = false;

    app.add_option("command", command)->required();
    app.add_option("--scenario", scenario);
    app.add_option("--algo", algos)->allow_extra_args(false)->check(CLI::IsMember({"pg", "apg", "mfista", "t1", "t2"}));
    app.add_option("--seed", seed);
    app.add_option("--budget", budget)->check(CLI::PositiveNumber);
    app.add_option("--gamma", gamma);
    app.add_option("--schedule", schedule);
    app.add_option("--zeta", zeta);
    app.add_option("--out", out);
    app.add_flag("--svg", svg);
    app.set_config("--config");

    std::vector<const char*> cargv;
    cargv.reserve(argv.size());
    for (const auto& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    CliConfig cfg;
    cfg.command = parse_command(command);
    auto given = [&](const char* name) { return app.count(name) > 0 || !app.get_option(name)->empty(); };

    if (cfg.command == Command::List) {
        for (const char* f : {"--scenario", "--algo", "--seed", "--budget", "--gamma", "--schedule", "--zeta", "--out", "--svg"})
            if (given(f)) throw UsageError(std::string("list takes no ") + f);
        return cfg;
    }

    if (given("--scenario")) {
        const auto names = scenario_names();
        if (std::find(names.begin(), names.end(), scenario) == names.end())
            throw UsageError("unknown scenario '" + scenario + "'");
        cfg.scenario = scenario;
    } else if (cfg.command != Command::Experiment) {
        throw UsageError(command + " requires --scenario");
    }

    cfg.algorithms = algos;
    if (cfg.command == Command::Run && cfg.algorithms.size() > 1)
        throw UsageError("run takes a single --algo; use compare for several");
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (cfg.algorithms[i] == cfg.algorithms[j]) throw UsageError("--algo " + cfg.algorithms[i] + " given twice");

    if (cfg.command == Command::Plot) {
        for (const char* f : {"--algo", "--seed", "--budget", "--gamma", "--schedule", "--zeta", "--svg"})
            if (given(f)) throw UsageError(std::string("plot takes no ") + f);
    }

    cfg.seed = seed;
    if (given("--budget")) cfg.budget = budget;
    cfg.gamma = parse_auto("--gamma", gamma);
    cfg.schedule = parse_schedule(schedule);
    cfg.zeta = parse_auto("--zeta", zeta);
    if (cfg.zeta && given("--algo") &&
        std::none_of(cfg.algorithms.begin(), cfg.algorithms.end(), [](const std::string& a) { return a == "t1" || a == "t2"; }))
        throw UsageError("--zeta only affects t1 and t2");
    cfg.svg = svg || cfg.command == Command::Experiment;

    if (given("--out"))
        cfg.out = out;
    else if (env_out && !env_out->empty())
        cfg.out = *env_out;
    else
        cfg.out = "proxident-out";
    return cfg;
}

namespace {

int run_scenarios(const CliConfig& cfg, std::ostream& out) {
    std::vector<std::string> names;
    if (cfg.scenario)
        names.push_back(*cfg.scenario);
    else
        names = scenario_names();

    std::vector<std::string> algos = cfg.algorithms;
    if (algos.empty()) algos = cfg.command == Command::Run ? std::vector<std::string>{"pg"} : default_algorithms();

    // Build and validate every scenario before running any of them.
    std::vector<Scenario> scenarios;
    for (const auto& name : names) {
        Scenario s = make_scenario(name, cfg.seed);
        const std::size_t budget = cfg.budget.value_or(default_budget(name));
        s.algorithms.clear();
        for (const auto& a : algos) {
            AlgorithmSpec spec = make_algorithm(a, budget);
            spec.config.gamma = cfg.gamma;
            spec.config.schedule = cfg.schedule;
            spec.config.zeta = cfg.zeta;
            resolve_gamma(s.problem, spec.config);
            s.algorithms.push_back(std::move(spec));
        }
        scenarios.push_back(std::move(s));
    }

    for (const auto& s : scenarios) {
        const ReportBundle b = run_scenario(s);
        const auto dir = cfg.out / s.name;
        report::write_bundle(b, dir, cfg.svg);
        out << s.name << ": F* = " << report::real_string(b.reference.f_star, 10) << ", |sig*| = "
            << b.reference.signature.size() << "\n";
        for (const auto& r : b.runs) {
            out << "  " << r.name << ": steps=" << r.trace.prox_evaluations
                << " subopt=" << report::real_string(r.trace.records.back().f_value - b.f_star_floor, 3)
                << " identified=";
            if (r.stability.first_full_identification)
                out << *r.stability.first_full_identification;
            else
                out << "never";
            out << " holes=" << r.stability.holes_after_first << "\n";
        }
        out << "  wrote " << dir.string() << "\n";
    }
    return 0;
}

} // namespace

int execute(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        switch (cfg.command) {
        case Command::List:
            for (const auto& name : scenario_names()) out << name << " (budget " << default_budget(name) << ")\n";
            out << "algorithms: pg apg mfista t1 t2\n";
            return 0;
        case Command::Plot:
            report::replot(cfg.out / *cfg.scenario);
            out << "wrote " << (cfg.out / *cfg.scenario / "plots").string() << "\n";
            return 0;
        case Command::Run:
        case Command::Compare:
        case Command::Experiment:
            return run_scenarios(cfg, out);
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    for (std::size_t i = 1; i < argv.size(); ++i)
        if (argv[i] == "-h" || argv[i] == "--help") {
            out << usage();
            return 0;
        }
    CliConfig cfg;
    try {
        const char* env = std::getenv("PROXIDENT_OUT");
        cfg = parse_args(argv, env ? std::optional<std::string>(env) : std::nullopt);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n" << usage();
        return 2;
    }
    return execute(cfg, out, err);
}

} // namespace proxident::cli

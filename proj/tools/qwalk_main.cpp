// Command line front end: exact single-walk distributions, kernel dumps,
// and the three convergence experiments, with CSV or JSON reports.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qwalk/analytics.hpp"
#include "qwalk/ensemble.hpp"
#include "qwalk/io.hpp"
#include "qwalk/random.hpp"
#include "qwalk/stats.hpp"
#include "qwalk/version.hpp"
#include "qwalk/walk.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitBadInput = 2;

struct Tolerances {
    double lln_ks_final = 0.03;
    double poisson_tv = 0.02;
    double hydro_rel_err = 0.05;
    double hydro_z = 5.0;
    double laplace_sigma = 4.0;
};

double& tolerance_slot(Tolerances& t, const std::string& key) {
    if (key == "lln_ks_final") return t.lln_ks_final;
    if (key == "poisson_tv") return t.poisson_tv;
    if (key == "hydro_rel_err") return t.hydro_rel_err;
    if (key == "hydro_z") return t.hydro_z;
    if (key == "laplace_sigma") return t.laplace_sigma;
    throw std::invalid_argument("unknown tolerance key: " + key);
}

struct GlobalOptions {
    std::string config_path;
    std::uint64_t seed = 12345;
    std::uint64_t replicas = 0;  // 0 = per-command default
    int threads = 1;
    std::string out = "-";
    std::string format = "csv";
    std::vector<std::string> tol_overrides;
    std::string profile_path;
    Tolerances tol;
};

std::vector<long long> parse_n_list(const std::string& text) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            throw std::invalid_argument("empty entry in scale list");
        out.push_back(std::stoll(item));
    }
    if (out.empty()) throw std::invalid_argument("empty scale list");
    return out;
}

qwalk::LaplaceWeights parse_lambda(const std::string& text) {
    qwalk::LaplaceWeights out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("lambda entries must look like site:weight");
        out.push_back({std::stoll(item.substr(0, colon)),
                       std::stod(item.substr(colon + 1))});
    }
    if (out.empty()) throw std::invalid_argument("empty lambda list");
    return out;
}

// Shape spec `name:center,half_width,peak`; names: triangle, cosbump.
qwalk::TestFunction parse_test_fn(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    double center = 0.0;
    double half_width = 0.25;
    double peak = 1.0;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        std::vector<double> args;
        while (std::getline(ss, item, ',')) args.push_back(std::stod(item));
        if (args.size() != 3)
            throw std::invalid_argument(
                "test function needs center,half_width,peak");
        center = args[0];
        half_width = args[1];
        peak = args[2];
    }
    if (name == "triangle") return qwalk::triangle_test(center, half_width, peak);
    if (name == "cosbump")
        return qwalk::cosine_bump_test(center, half_width, peak);
    throw std::invalid_argument("unknown test function: " + name);
}

qwalk::Profile load_gamma(const GlobalOptions& g) {
    if (g.profile_path.empty())
        return qwalk::Profile::triangle(0.0, 0.5, 1.0);
    return qwalk::load_profile_file(g.profile_path);
}

qwalk::Coin parse_coin(const std::string& text) {
    if (text == "plus") return qwalk::Coin::Plus;
    if (text == "minus") return qwalk::Coin::Minus;
    throw std::invalid_argument("coin must be `plus` or `minus`");
}

// ---------------------------------------------------------------------
// Output plumbing

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Report {
    std::string command;
    json params;          // effective parameter values
    json scalars;         // named standalone results
    std::vector<Table> tables;
    int verdict = kExitPass;  // kExitPass/kExitFail, or -1 for no check
};

std::string derived_path(const std::string& base, const std::string& tag) {
    const auto dot = base.rfind('.');
    const auto slash = base.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return base + "." + tag;
    return base.substr(0, dot) + "." + tag + base.substr(dot);
}

void write_csv_report(std::ostream& out, const Report& report,
                      const Table& table) {
    std::vector<std::string> comments;
    comments.push_back(std::string(qwalk::kProgramName) + " " +
                       std::string(qwalk::kVersion));
    comments.push_back("command=" + report.command);
    comments.push_back("params=" + report.params.dump());
    for (const auto& [key, value] : report.scalars.items())
        comments.push_back(key + "=" + value.dump());
    if (report.verdict >= 0)
        comments.push_back(std::string("pass=") +
                           (report.verdict == kExitPass ? "true" : "false"));
    comments.push_back("table=" + table.name);
    qwalk::write_csv(out, comments, table.columns, table.rows);
}

json to_json(const Report& report) {
    json doc;
    doc["program"] = std::string(qwalk::kProgramName);
    doc["version"] = std::string(qwalk::kVersion);
    doc["command"] = report.command;
    doc["params"] = report.params;
    for (const auto& [key, value] : report.scalars.items()) doc[key] = value;
    if (report.verdict >= 0) doc["pass"] = report.verdict == kExitPass;
    json tables = json::object();
    for (const auto& t : report.tables) {
        json jt;
        jt["columns"] = t.columns;
        jt["rows"] = t.rows;
        tables[t.name] = jt;
    }
    doc["tables"] = tables;
    return doc;
}

void emit(const GlobalOptions& g, const Report& report) {
    if (g.format == "json") {
        const json doc = to_json(report);
        if (g.out == "-") {
            std::cout << doc.dump(2) << '\n';
        } else {
            std::ofstream out(g.out);
            if (!out)
                throw std::runtime_error("cannot open output file: " + g.out);
            out << doc.dump(2) << '\n';
        }
        return;
    }
    if (g.format != "csv")
        throw std::invalid_argument("format must be `csv` or `json`");
    if (g.out == "-") {
        for (std::size_t i = 0; i < report.tables.size(); ++i) {
            if (i) std::cout << '\n';
            write_csv_report(std::cout, report, report.tables[i]);
        }
        return;
    }
    for (std::size_t i = 0; i < report.tables.size(); ++i) {
        const std::string path =
            i == 0 ? g.out : derived_path(g.out, report.tables[i].name);
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        write_csv_report(out, report, report.tables[i]);
    }
}

json tol_json(const Tolerances& t) {
    return json{{"lln_ks_final", t.lln_ks_final},
                {"poisson_tv", t.poisson_tv},
                {"hydro_rel_err", t.hydro_rel_err},
                {"hydro_z", t.hydro_z},
                {"laplace_sigma", t.laplace_sigma}};
}

// ---------------------------------------------------------------------
// Commands

int cmd_evolve(const GlobalOptions& g, long long site, const std::string& coin,
               long long steps) {
    const qwalk::SpinorState state =
        qwalk::evolve(qwalk::from_localized(site, parse_coin(coin)), steps);
    const qwalk::PositionDistribution dist = qwalk::position_distribution(state);

    Report report;
    report.command = "evolve";
    report.params = {{"site", site}, {"coin", coin}, {"steps", steps}};
    report.scalars["total_probability"] = dist.total();
    report.verdict = -1;
    Table table{"distribution", {"site", "probability"}, {}};
    for (std::size_t i = 0; i < dist.probs.size(); ++i)
        if (dist.probs[i] != 0.0)
            table.rows.push_back(
                {static_cast<double>(dist.first_site() + static_cast<long long>(i)),
                 dist.probs[i]});
    report.tables.push_back(std::move(table));
    emit(g, report);
    return kExitPass;
}

int cmd_kernel(const GlobalOptions& g, long long n) {
    const qwalk::PositionDistribution plus =
        qwalk::chirality_kernel(n, qwalk::Coin::Plus);
    const qwalk::PositionDistribution minus =
        qwalk::chirality_kernel(n, qwalk::Coin::Minus);

    Report report;
    report.command = "kernel";
    report.params = {{"n", n}};
    report.verdict = -1;
    Table table{"kernel",
                {"site", "probability", "plus_probability", "minus_probability"},
                {}};
    for (long long m = -n; m <= n; ++m) {
        const double p = plus.prob_at(m);
        const double q = minus.prob_at(m);
        if (p == 0.0 && q == 0.0) continue;
        table.rows.push_back({static_cast<double>(m), 0.5 * (p + q), p, q});
    }
    report.tables.push_back(std::move(table));
    emit(g, report);
    return kExitPass;
}

int cmd_lln(const GlobalOptions& g, const std::string& n_list_text) {
    const std::vector<long long> n_list = parse_n_list(n_list_text);
    const qwalk::ConvergenceReport scan = qwalk::lln_scan(n_list);

    const bool final_ok = scan.values.back() <= g.tol.lln_ks_final;
    const bool trend_ok = n_list.size() < 2 || scan.trend_down();

    Report report;
    report.command = "lln";
    report.params = {{"n_list", n_list}, {"tol", tol_json(g.tol)}};
    report.scalars["ks_final"] = scan.values.back();
    report.verdict = (final_ok && trend_ok) ? kExitPass : kExitFail;

    Table table{"report", {"n", "ks"}, {}};
    for (std::size_t i = 0; i < scan.scales.size(); ++i)
        table.rows.push_back(
            {static_cast<double>(scan.scales[i]), scan.values[i]});
    report.tables.push_back(std::move(table));

    // Density comparison at the largest scale: kernel mass rescaled by the
    // lattice spacing 2/n against the continuum density.
    const long long n = n_list.back();
    const qwalk::PositionDistribution kernel = qwalk::averaged_kernel(n);
    Table density{"density", {"x", "kernel_density", "limit_density"}, {}};
    for (long long m = -n; m <= n; ++m) {
        if ((m + n) % 2 != 0) continue;
        const double x = static_cast<double>(m) / static_cast<double>(n);
        density.rows.push_back({x,
                                kernel.prob_at(m) * static_cast<double>(n) / 2.0,
                                qwalk::limit_density(x)});
    }
    report.tables.push_back(std::move(density));
    emit(g, report);
    return report.verdict;
}

int cmd_local_eq(const GlobalOptions& g, const std::string& n_list_text,
                 double t, double x, std::uint64_t replicas) {
    const std::vector<long long> n_list = parse_n_list(n_list_text);
    const qwalk::Profile gamma = load_gamma(g);
    const qwalk::RandomSource src{g.seed, 0};
    const qwalk::LocalEquilibriumScan scan = qwalk::local_equilibrium_scan(
        gamma, t, x, n_list, replicas, src, g.threads);

    Report report;
    report.command = "local-eq";
    report.params = {{"n_list", n_list}, {"t", t}, {"x", x},
                     {"replicas", replicas}, {"seed", g.seed},
                     {"profile", g.profile_path.empty() ? "builtin-triangle"
                                                        : g.profile_path},
                     {"tol", tol_json(g.tol)}};
    report.scalars["rho"] = scan.rho;
    report.scalars["tv_final"] = scan.tv_to_limit.back();
    report.verdict =
        scan.tv_to_limit.back() <= g.tol.poisson_tv ? kExitPass : kExitFail;

    Table table{"report", {"n", "tv_empirical", "tv_exact", "intensity"}, {}};
    for (std::size_t i = 0; i < scan.scales.size(); ++i)
        table.rows.push_back({static_cast<double>(scan.scales[i]),
                              scan.tv_to_limit[i], scan.exact_tv[i],
                              scan.intensities[i]});
    report.tables.push_back(std::move(table));
    emit(g, report);
    return report.verdict;
}

int cmd_hydro(const GlobalOptions& g, const std::string& n_list_text, double t,
              const std::string& test_fn_text, const std::string& test_fn_file,
              std::uint64_t replicas) {
    const std::vector<long long> n_list = parse_n_list(n_list_text);
    const qwalk::Profile gamma = load_gamma(g);
    const qwalk::TestFunction test_fn =
        test_fn_file.empty()
            ? parse_test_fn(test_fn_text)
            : qwalk::test_from_profile(qwalk::load_profile_file(test_fn_file),
                                       test_fn_file);
    const qwalk::RandomSource src{g.seed, 0};
    const qwalk::HydroScan scan =
        qwalk::hydro_scan(gamma, test_fn, t, n_list, replicas, src, g.threads);

    const double abs_err = std::abs(scan.means.back() - scan.target);
    const double se =
        scan.sds.back() / std::sqrt(static_cast<double>(replicas));
    const bool ok = abs_err <= std::max(g.tol.hydro_rel_err * std::abs(scan.target),
                                        g.tol.hydro_z * se);

    Report report;
    report.command = "hydro";
    report.params = {{"n_list", n_list}, {"t", t},
                     {"test_fn", test_fn.name},
                     {"replicas", replicas}, {"seed", g.seed},
                     {"profile", g.profile_path.empty() ? "builtin-triangle"
                                                        : g.profile_path},
                     {"tol", tol_json(g.tol)}};
    report.scalars["target"] = scan.target;
    report.scalars["abs_err_final"] = abs_err;
    report.verdict = ok ? kExitPass : kExitFail;

    Table table{"report",
                {"n", "mean", "sd", "exact_mean", "exact_sd", "abs_err"},
                {}};
    for (std::size_t i = 0; i < scan.scales.size(); ++i)
        table.rows.push_back({static_cast<double>(scan.scales[i]),
                              scan.means[i], scan.sds[i], scan.exact_means[i],
                              scan.exact_sds[i],
                              std::abs(scan.means[i] - scan.target)});
    report.tables.push_back(std::move(table));
    emit(g, report);
    return report.verdict;
}

int cmd_laplace(const GlobalOptions& g, long long n, double t,
                const std::string& lambda_text, std::uint64_t replicas) {
    const qwalk::Profile gamma = load_gamma(g);
    const qwalk::LaplaceWeights lambda = parse_lambda(lambda_text);
    const long long steps = qwalk::steps_at(t, n);
    const qwalk::RandomSource src{g.seed, 0};
    const qwalk::LaplaceCheck check = qwalk::laplace_identity(
        gamma, n, steps, lambda, replicas, src, g.threads);

    Report report;
    report.command = "laplace";
    report.params = {{"n", n}, {"t", t}, {"lambda", lambda_text},
                     {"replicas", replicas}, {"seed", g.seed},
                     {"profile", g.profile_path.empty() ? "builtin-triangle"
                                                        : g.profile_path},
                     {"tol", tol_json(g.tol)}};
    report.verdict =
        std::abs(check.z()) <= g.tol.laplace_sigma ? kExitPass : kExitFail;

    Table table{"report",
                {"empirical", "exact", "std_error", "z", "replicas"},
                {{check.empirical, check.exact, check.std_error, check.z(),
                  static_cast<double>(check.replicas)}}};
    report.tables.push_back(std::move(table));
    emit(g, report);
    return report.verdict;
}

// ---------------------------------------------------------------------
// Config file: JSON object whose keys mirror the long option names.
// Command line flags win over config values.

struct ConfigBinding {
    CLI::Option* option;
    std::string key;
    std::function<void(const json&)> apply;
};

void apply_config(const std::string& path, std::vector<ConfigBinding>& bindings,
                  Tolerances& tol) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& err) {
        throw std::runtime_error("config " + path + ": " + err.what());
    }
    if (!cfg.is_object())
        throw std::runtime_error("config " + path + ": top level must be an object");
    for (auto& b : bindings) {
        if (b.option->count() > 0) continue;
        if (!cfg.contains(b.key)) continue;
        try {
            b.apply(cfg.at(b.key));
        } catch (const json::exception& err) {
            throw std::runtime_error("config key `" + b.key + "`: " + err.what());
        }
    }
    if (cfg.contains("tol")) {
        const json& jt = cfg.at("tol");
        if (!jt.is_object())
            throw std::runtime_error("config key `tol` must be an object");
        for (const auto& [key, value] : jt.items())
            tolerance_slot(tol, key) = value.get<double>();
    }
}

std::string json_scales_to_string(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_array()) {
        std::string out;
        for (const auto& item : value) {
            if (!out.empty()) out += ',';
            out += std::to_string(item.get<long long>());
        }
        return out;
    }
    throw std::runtime_error("expected string or array of integers");
}

} // namespace

int main(int argc, char** argv) {
    GlobalOptions g;

    CLI::App app{"Exact simulator and statistical test bench for independent "
                 "Hadamard walks on the integer lattice"};
    app.set_version_flag("--version", std::string(qwalk::kVersion));
    app.require_subcommand(1);

    std::vector<ConfigBinding> bindings;
    const auto bind = [&bindings](CLI::Option* opt, const std::string& key,
                                  std::function<void(const json&)> apply) {
        bindings.push_back({opt, key, std::move(apply)});
    };

    auto* opt_config =
        app.add_option("--config", g.config_path, "JSON config file");
    bind(app.add_option("--seed", g.seed, "RNG seed"), "seed",
         [&g](const json& v) { g.seed = v.get<std::uint64_t>(); });
    bind(app.add_option("--replicas", g.replicas,
                        "Monte Carlo replicas (0 = command default)"),
         "replicas",
         [&g](const json& v) { g.replicas = v.get<std::uint64_t>(); });
    bind(app.add_option("--threads", g.threads,
                        "worker threads (results do not depend on this)"),
         "threads", [&g](const json& v) { g.threads = v.get<int>(); });
    bind(app.add_option("--out", g.out, "output path, `-` for stdout"), "out",
         [&g](const json& v) { g.out = v.get<std::string>(); });
    bind(app.add_option("--format", g.format, "csv or json"), "format",
         [&g](const json& v) { g.format = v.get<std::string>(); });
    bind(app.add_option("--profile", g.profile_path,
                        "initial profile file (`x value` rows); default is a "
                        "triangle of height 1 on [-0.5, 0.5]"),
         "profile", [&g](const json& v) { g.profile_path = v.get<std::string>(); });
    app.add_option("--tol", g.tol_overrides,
                   "tolerance override key=value (repeatable)");

    // evolve
    long long ev_site = 0;
    std::string ev_coin = "plus";
    long long ev_steps = 100;
    auto* evolve_cmd =
        app.add_subcommand("evolve", "exact single-walk position distribution");
    bind(evolve_cmd->add_option("--site", ev_site, "starting site"), "site",
         [&](const json& v) { ev_site = v.get<long long>(); });
    bind(evolve_cmd->add_option("--coin", ev_coin, "starting coin: plus|minus"),
         "coin", [&](const json& v) { ev_coin = v.get<std::string>(); });
    bind(evolve_cmd->add_option("--steps", ev_steps, "number of steps"),
         "steps", [&](const json& v) { ev_steps = v.get<long long>(); });

    // kernel
    long long kr_n = 100;
    auto* kernel_cmd = app.add_subcommand(
        "kernel", "averaged and per-coin n-step displacement kernels");
    bind(kernel_cmd->add_option("--n", kr_n, "number of steps"), "n",
         [&](const json& v) { kr_n = v.get<long long>(); });

    // lln
    std::string lln_scales = "20,200,2000";
    auto* lln_cmd = app.add_subcommand(
        "lln", "law of large numbers: rescaled position law vs limit CDF");
    bind(lln_cmd->add_option("--n-list", lln_scales,
                             "comma separated scales, increasing"),
         "n_list", [&](const json& v) { lln_scales = json_scales_to_string(v); });

    // local-eq
    std::string leq_scales = "32,128,512";
    double leq_t = 1.0;
    double leq_x = 0.0;
    auto* leq_cmd = app.add_subcommand(
        "local-eq", "occupation law at a tracked site vs Poisson limit");
    bind(leq_cmd->add_option("--n-list", leq_scales,
                             "comma separated scales, increasing"),
         "n_list", [&](const json& v) { leq_scales = json_scales_to_string(v); });
    bind(leq_cmd->add_option("--t", leq_t, "macroscopic time"), "t",
         [&](const json& v) { leq_t = v.get<double>(); });
    bind(leq_cmd->add_option("--x", leq_x, "macroscopic position"), "x",
         [&](const json& v) { leq_x = v.get<double>(); });

    // hydro
    std::string hy_scales = "100,400,1600";
    double hy_t = 1.0;
    std::string hy_test = "triangle:0,0.25,1";
    std::string hy_test_file;
    auto* hydro_cmd = app.add_subcommand(
        "hydro", "empirical functional vs hydrodynamic limit value");
    bind(hydro_cmd->add_option("--n-list", hy_scales,
                               "comma separated scales, increasing"),
         "n_list", [&](const json& v) { hy_scales = json_scales_to_string(v); });
    bind(hydro_cmd->add_option("--t", hy_t, "macroscopic time"), "t",
         [&](const json& v) { hy_t = v.get<double>(); });
    bind(hydro_cmd->add_option("--test-fn", hy_test,
                               "test function name:center,half_width,peak "
                               "(triangle, cosbump)"),
         "test_fn", [&](const json& v) { hy_test = v.get<std::string>(); });
    bind(hydro_cmd->add_option("--test-fn-file", hy_test_file,
                               "test function from a profile file (overrides "
                               "--test-fn)"),
         "test_fn_file",
         [&](const json& v) { hy_test_file = v.get<std::string>(); });

    // laplace
    long long lp_n = 64;
    double lp_t = 1.0;
    std::string lp_lambda = "0:1";
    auto* laplace_cmd = app.add_subcommand(
        "laplace", "Monte Carlo Laplace functional vs closed form");
    bind(laplace_cmd->add_option("--n", lp_n, "lattice scale"), "n",
         [&](const json& v) { lp_n = v.get<long long>(); });
    bind(laplace_cmd->add_option("--t", lp_t, "macroscopic time"), "t",
         [&](const json& v) { lp_t = v.get<double>(); });
    bind(laplace_cmd->add_option("--lambda", lp_lambda,
                                 "weights site:value,site:value,..."),
         "lambda", [&](const json& v) { lp_lambda = v.get<std::string>(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitBadInput;
    }

    try {
        if (opt_config->count() > 0) apply_config(g.config_path, bindings, g.tol);
        for (const auto& item : g.tol_overrides) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("tolerance override must be key=value");
            tolerance_slot(g.tol, item.substr(0, eq)) =
                std::stod(item.substr(eq + 1));
        }
        if (g.threads < 0)
            throw std::invalid_argument("threads must be >= 0");
        if (g.threads == 0) {
            const unsigned hw = std::thread::hardware_concurrency();
            g.threads = hw == 0 ? 1 : static_cast<int>(hw);
        }

        const auto replicas_or = [&g](std::uint64_t fallback) {
            return g.replicas == 0 ? fallback : g.replicas;
        };

        if (evolve_cmd->parsed()) return cmd_evolve(g, ev_site, ev_coin, ev_steps);
        if (kernel_cmd->parsed()) return cmd_kernel(g, kr_n);
        if (lln_cmd->parsed()) return cmd_lln(g, lln_scales);
        if (leq_cmd->parsed())
            return cmd_local_eq(g, leq_scales, leq_t, leq_x, replicas_or(20000));
        if (hydro_cmd->parsed())
            return cmd_hydro(g, hy_scales, hy_t, hy_test, hy_test_file,
                             replicas_or(200));
        if (laplace_cmd->parsed())
            return cmd_laplace(g, lp_n, lp_t, lp_lambda, replicas_or(50000));
        std::cerr << "error: no command selected\n";
        return kExitBadInput;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitBadInput;
    }
}

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ising/parallel.hpp"
#include "ising/report.hpp"
#include "ising/run.hpp"

using nlohmann::json;

namespace {

// Copies options that were given on the command line into config.options.
class Binder {
public:
    template <class T>
    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        auto value = std::make_shared<T>();
        CLI::Option* opt = app->add_option(flag, *value, help);
        setters_.push_back([opt, value, key](json& j) {
            if (opt->count() > 0) j[key] = *value;
        });
    }

    void list(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        auto value = std::make_shared<std::vector<int>>();
        CLI::Option* opt = app->add_option(flag, *value, help)->delimiter(',');
        setters_.push_back([opt, value, key](json& j) {
            if (opt->count() > 0) j[key] = *value;
        });
    }

    void flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        auto value = std::make_shared<bool>(false);
        CLI::Option* opt = app->add_flag(flag, *value, help);
        setters_.push_back([opt, value, key](json& j) {
            if (opt->count() > 0) j[key] = *value;
        });
    }

    // "all" / "center" stay strings; "x,y" becomes a coordinate and "x,y;x,y" a list.
    void sites(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help, bool many) {
        auto value = std::make_shared<std::string>();
        CLI::Option* opt = app->add_option(flag, *value, help);
        setters_.push_back([opt, value, key, many](json& j) {
            if (opt->count() == 0) return;
            if (*value == "all" || *value == "center") {
                j[key] = *value;
                return;
            }
            json sites = json::array();
            std::stringstream groups(*value);
            std::string group;
            while (std::getline(groups, group, ';')) {
                json x = json::array();
                std::stringstream parts(group);
                std::string part;
                while (std::getline(parts, part, ',')) {
                    try {
                        std::size_t used = 0;
                        x.push_back(std::stoi(part, &used));
                        if (used != part.size()) throw std::invalid_argument(part);
                    } catch (const std::exception&) {
                        throw CLI::ValidationError(key, "bad coordinate '" + part + "'");
                    }
                }
                sites.push_back(x);
            }
            j[key] = many ? sites : sites.at(0);
        });
    }

    void apply(json& j) const {
        for (const auto& s : setters_) s(j);
    }

private:
    std::vector<std::function<void(json&)>> setters_;
};

void fuzz_options(CLI::App* sc, Binder& b) {
    b.add<long long>(sc, "--trials", "trials", "number of random instances");
    b.add<int>(sc, "--min-n", "min_n", "smallest graph size");
    b.add<int>(sc, "--max-n", "max_n", "largest graph size");
    b.add<double>(sc, "--field-scale", "field_scale", "finite fields are uniform in [-scale, scale]");
    b.add<double>(sc, "--tolerance", "tolerance", "violation threshold on the margin");
}

void lattice_options(CLI::App* sc, Binder& b) {
    b.add<int>(sc, "--dim", "dim", "lattice dimension");
    b.add<int>(sc, "--radius", "radius", "V = [-radius, radius]^dim");
    b.add<double>(sc, "--beta", "beta", "inverse temperature");
    b.add<std::string>(sc, "--field", "field", "zero | gaussian:<sigma> | rademacher:<eps>");
    b.add<std::string>(sc, "--tau", "tau", "boundary condition: plus | minus");
    b.sites(sc, "--flip", "flip", "flipped boundary site x,y (use --flip=-5,0) or all", false);
    b.sites(sc, "--window", "window", "window sites x,y;x,y or center", true);
    b.add<std::string>(sc, "--method", "method", "exact | coupled-mc");
    b.add<long long>(sc, "--sweeps", "sweeps", "sweeps per replica, half burn-in");
    b.add<int>(sc, "--replicas", "replicas", "independent coupled pairs");
    b.add<std::string>(sc, "--scan", "scan", "systematic | random");
    b.add<std::string>(sc, "--backend", "backend", "automatic | enumeration | transfer-matrix");
}

int plot(const std::string& input, const std::string& kind, const std::string& output) {
    try {
        const std::string csv = ising::emit_plot_data(ising::read_records(input), ising::plot_kind_from_string(kind));
        if (output.empty()) {
            std::cout << csv;
        } else {
            std::ofstream out(output);
            if (!out) throw std::runtime_error("cannot open '" + output + "' for writing");
            out << csv;
        }
        return ising::kExitSuccess;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ising::kExitUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and Monte Carlo checks of Ising-model correlation inequalities"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out, config_path, reproducer_dir = "reproducers";
    unsigned threads = ising::default_thread_count();
    bool verbose = false;
    std::uint64_t seed = 0;
    app.add_option("--out", out, "append JSON-lines records here instead of printing them");
    app.add_option("--threads", threads, "worker threads (default: ISING_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    app.add_flag("--verbose", verbose, "one record per fuzz trial");
    app.add_option("--reproducer-dir", reproducer_dir, "directory for violation reproducers");
    app.add_option("--config", config_path, "JSON run config; command-line options override it");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "master seed");

    std::map<std::string, Binder> binders;
    std::map<std::string, CLI::App*> subs;
    auto sub = [&](const std::string& name, const std::string& help) {
        subs[name] = app.add_subcommand(name, help);
        return subs[name];
    };

    {
        auto* sc = sub("exact", "log partition function, magnetizations and pair correlations");
        binders["exact"].add<std::string>(sc, "--instance", "instance", "instance JSON file");
        binders["exact"].sites(sc, "--pairs", "pairs", "vertex pairs u,v;u,v", true);
    }
    for (const char* name : {"check-theorem", "check-correlation"}) {
        auto* sc = sub(name, std::string(name) == "check-theorem"
                                 ? "boundary-influence inequality on an instance or a fuzz campaign"
                                 : "covariance versus zero-field correlation on an instance or a fuzz campaign");
        binders[name].flag(sc, "--fuzz", "fuzz", "run a random campaign instead of one instance");
        binders[name].add<std::string>(sc, "--instance", "instance", "instance JSON with a query block");
        fuzz_options(sc, binders[name]);
    }
    {
        auto* sc = sub("lemma", "single-spin lemma at one point or over random points");
        auto& b = binders["lemma"];
        for (const char* p : {"theta", "a", "b", "c"}) b.add<double>(sc, std::string("--") + p, p, "parameter");
        b.add<long long>(sc, "--points", "points", "random points");
        b.add<double>(sc, "--tolerance", "tolerance", "threshold on F and witness slack");
    }
    std::string variant;
    {
        auto* sc = sub("counterexample", "certificates for the path and tree constructions");
        sc->add_option("variant", variant, "path | tree | insertion")->required();
        binders["counterexample"].add<double>(sc, "--g2", "g2", "pinned field on the path");
        binders["counterexample"].add<double>(sc, "--j-ua", "j_ua", "tree coupling to the cancelling leaf");
    }
    {
        auto* sc = sub("fuzz", "combined fuzz campaign for both inequalities");
        fuzz_options(sc, binders["fuzz"]);
        binders["fuzz"].flag(sc, "--zero-field", "zero_field", "g = 0 everywhere");
    }
    {
        auto* sc = sub("rfim-decay", "coupled-chain boundary influence on boxes");
        auto& b = binders["rfim-decay"];
        b.add<int>(sc, "--dim", "dim", "lattice dimension");
        b.list(sc, "--radii", "radii", "box radii, comma separated");
        b.add<double>(sc, "--beta", "beta", "inverse temperature");
        b.add<std::string>(sc, "--field", "field", "zero | gaussian:<sigma> | rademacher:<eps> | +inf");
        b.add<long long>(sc, "--sweeps", "sweeps", "sweeps per replica, half burn-in");
        b.add<int>(sc, "--replicas", "replicas", "independent coupled pairs");
        b.add<std::string>(sc, "--scan", "scan", "systematic | random");
        b.add<int>(sc, "--exact-max-sites", "exact_max_sites", "attach exact values up to this many sites");
    }
    lattice_options(sub("ssm", "total variation on a window after one boundary flip"), binders["ssm"]);
    lattice_options(sub("sphere-coupling", "sequential coupling on the l1 sphere"), binders["sphere-coupling"]);
    std::string plot_input, plot_kind, plot_output;
    {
        auto* sc = sub("plot", "CSV export from result records");
        sc->add_option("--input", plot_input, "JSON-lines records")->required();
        sc->add_option("--kind", plot_kind, "decay | lambda-sweep | tv-distance")->required();
        sc->add_option("--output", plot_output, "CSV path (default: stdout)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ising::kExitUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "plot") return plot(plot_input, plot_kind, plot_output);

    ising::RunConfig config;
    try {
        if (!config_path.empty()) config = ising::load_config(config_path);
        if (!config.command.empty() && config.command != name)
            throw ising::ValidationError("config command '" + config.command + "' does not match '" + name + "'");
        config.command = name;
        binders[name].apply(config.options);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ising::kExitUsage;
    }
    if (!variant.empty()) config.variant = variant;
    if (seed_opt->count() > 0) config.seed = seed;
    if (app.get_option("--threads")->count() > 0 || config_path.empty()) config.threads = threads;
    if (!out.empty()) config.out = out;
    if (app.get_option("--reproducer-dir")->count() > 0) config.reproducer_dir = reproducer_dir;
    if (verbose) config.verbose = true;

    const ising::RunOutcome outcome = ising::run(config);
    if (outcome.config.out.empty())
        for (const auto& r : outcome.records) std::cout << ising::to_json(r).dump() << '\n';
    if (!outcome.message.empty()) std::cerr << "error: " << outcome.message << '\n';
    if (outcome.config.seed && !config.seed) std::cerr << "seed: " << *outcome.config.seed << '\n';
    return outcome.exit_code;
}

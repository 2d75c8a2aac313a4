#include "ising/run.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "ising/counterexample.hpp"
#include "ising/errors.hpp"
#include "ising/exact.hpp"
#include "ising/fuzz.hpp"
#include "ising/inequality.hpp"
#include "ising/instance_json.hpp"
#include "ising/lemma.hpp"
#include "ising/rfim.hpp"
#include "ising/ssm.hpp"

namespace ising {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& known_options() {
    static const std::set<std::string> fuzz_keys{"fuzz",  "instance",    "trials",   "min_n",
                                                 "max_n", "field_scale", "tolerance"};
    static const std::set<std::string> lattice_keys{"dim",  "radius", "beta",   "field",    "tau",
                                                    "flip", "window", "method", "sweeps",   "replicas",
                                                    "scan", "backend"};
    static const std::map<std::string, std::set<std::string>> keys{
        {"exact", {"instance", "pairs"}},
        {"check-theorem", fuzz_keys},
        {"check-correlation", fuzz_keys},
        {"lemma", {"theta", "a", "b", "c", "points", "tolerance"}},
        {"counterexample", {"g2", "j_ua"}},
        {"fuzz", {"trials", "min_n", "max_n", "field_scale", "tolerance", "zero_field"}},
        {"rfim-decay", {"dim", "radii", "beta", "field", "sweeps", "replicas", "scan", "exact_max_sites"}},
        {"ssm", lattice_keys},
        {"sphere-coupling", lattice_keys},
    };
    return keys;
}

// Typed access to config.options with field-named errors.
class Options {
public:
    explicit Options(const json& j) : j_(j) {}

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    template <class T>
    T get(const std::string& key, T fallback) const {
        if (!has(key)) return fallback;
        return as<T>(key);
    }

    template <class T>
    T require(const std::string& key) const {
        if (!has(key)) throw ValidationError("config field '" + key + "' is required");
        return as<T>(key);
    }

    const json& raw(const std::string& key) const { return j_.at(key); }

private:
    template <class T>
    T as(const std::string& key) const {
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ValidationError("config field '" + key + "' has the wrong type: " + j_.at(key).dump());
        }
    }

    const json& j_;
};

IsingInstance load_instance(const Options& o, json* whole = nullptr) {
    const std::string path = o.require<std::string>("instance");
    json j = read_json_file(path);
    if (whole) *whole = j;
    return instance_from_json(j);
}

ResultRecord make_record(const RunConfig& c, json payload) {
    ResultRecord r;
    r.command = c.command;
    r.config_digest = config_digest(c);
    r.payload = std::move(payload);
    return r;
}

std::filesystem::path write_reproducer(const RunConfig& c, const std::string& name, const json& body) {
    const std::filesystem::path path = std::filesystem::path(c.reproducer_dir) / name;
    write_json_file(path, body);
    return path;
}

FuzzConfig fuzz_config(const RunConfig& c, const Options& o) {
    FuzzConfig f;
    f.seed = *c.seed;
    f.trials = o.get<long long>("trials", 10000);
    f.min_n = o.get<int>("min_n", 2);
    f.max_n = o.get<int>("max_n", 8);
    f.field_scale = o.get<double>("field_scale", 3.0);
    f.tolerance = o.get<double>("tolerance", kDefaultTolerance);
    f.zero_field = o.get<bool>("zero_field", false);
    f.keep_records = c.verbose;
    f.threads = c.threads;
    f.reproducer_dir = c.reproducer_dir;
    if (f.trials < 1) throw ValidationError("config field 'trials' must be positive");
    if (f.min_n < 1 || f.max_n < f.min_n) throw ValidationError("config fields 'min_n'/'max_n' must satisfy 1 <= min_n <= max_n");
    if (f.max_n > EngineOptions{}.max_vertices) throw CapacityError("config field 'max_n' exceeds the enumeration cap");
    return f;
}

void run_fuzz(const RunConfig& c, const Options& o, bool theorem, bool correlation, RunOutcome& out) {
    FuzzConfig f = fuzz_config(c, o);
    f.check_theorem = theorem;
    f.check_correlation = correlation;
    const FuzzSummary s = fuzz_inequalities(f);
    if (c.verbose)
        for (const auto& r : s.records) out.records.push_back(make_record(c, to_json(r)));
    ResultRecord agg = make_record(c, json{{"kind", "fuzz-summary"}, {"summary", to_json(s)}});
    const bool violated = s.theorem_violations > 0 || s.correlation_violations > 0;
    if (!s.reproducers.empty()) agg.reproducer = s.reproducers.front();
    out.records.push_back(std::move(agg));
    out.exit_code = violated ? kExitViolation : kExitSuccess;
}

void run_exact(const RunConfig& c, const Options& o, RunOutcome& out) {
    const IsingInstance inst = load_instance(o);
    ExactQuery q;
    for (int v = 0; v < inst.vertex_count(); ++v) q.vertices.push_back(v);
    if (o.has("pairs")) q.pairs = o.get<std::vector<std::pair<int, int>>>("pairs", {});
    EngineOptions eo;
    eo.threads = c.threads;
    const ExactStats st = exact_stats(inst, q, eo);
    json pairs = json::array();
    for (std::size_t k = 0; k < q.pairs.size(); ++k) {
        const auto [u, v] = q.pairs[k];
        pairs.push_back({{"u", u},
                         {"v", v},
                         {"product", st.pair_products[k]},
                         {"covariance", st.pair_products[k] - st.magnetizations[u] * st.magnetizations[v]}});
    }
    out.records.push_back(make_record(c, json{{"instance_digest", stable_digest(instance_to_json(inst))},
                                              {"log_z_reduced", st.log_z},
                                              {"magnetizations", st.magnetizations},
                                              {"pairs", pairs}}));
}

void run_check_theorem(const RunConfig& c, const Options& o, RunOutcome& out) {
    if (o.get<bool>("fuzz", false)) return run_fuzz(c, o, true, false, out);
    json whole;
    const IsingInstance inst = load_instance(o, &whole);
    if (!whole.contains("query")) throw ValidationError("instance file needs a 'query' block with 'h'");
    const json& q = whole.at("query");
    std::vector<ExtendedField> h;
    try {
        for (std::size_t i = 0; i < q.at("h").size(); ++i) h.push_back(field_from_json(q.at("h")[i]));
    } catch (const json::exception&) {
        throw ValidationError("config field 'query.h' must be a list of fields");
    }
    const double tol = o.get<double>("tolerance", kDefaultTolerance);
    EngineOptions eo;
    eo.threads = c.threads;
    std::vector<InequalityReport> reports;
    std::vector<int> targets;
    if (q.contains("o")) {
        InfluenceQuery iq{inst, h, q.at("o").get<int>()};
        reports.push_back(check_boundary_influence(iq, tol, eo));
        targets.push_back(iq.o);
    } else {
        validate(InfluenceQuery{inst, h, 0});
        reports = check_boundary_influence_all_targets(inst, h, tol, eo);
        for (int v = 0; v < inst.vertex_count(); ++v) targets.push_back(v);
    }
    json list = json::array();
    long long violations = 0;
    std::optional<std::string> reproducer;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        json r = to_json(reports[k]);
        r["o"] = targets[k];
        list.push_back(r);
        if (!reports[k].holds) {
            ++violations;
            if (!reproducer)
                reproducer = write_reproducer(c, "theorem-" + reports[k].instance_digest + ".json",
                                              theorem_reproducer({inst, h, targets[k]}, reports[k]))
                                 .string();
        }
    }
    ResultRecord rec = make_record(c, json{{"kind", "theorem"}, {"reports", list}, {"violations", violations}});
    rec.reproducer = reproducer;
    out.records.push_back(std::move(rec));
    out.exit_code = violations ? kExitViolation : kExitSuccess;
}

void run_check_correlation(const RunConfig& c, const Options& o, RunOutcome& out) {
    if (o.get<bool>("fuzz", false)) return run_fuzz(c, o, false, true, out);
    json whole;
    const IsingInstance inst = load_instance(o, &whole);
    if (!whole.contains("query")) throw ValidationError("instance file needs a 'query' block with 'u' and 'v'");
    const json& q = whole.at("query");
    int u = 0, v = 0;
    try {
        u = q.at("u").get<int>();
        v = q.at("v").get<int>();
    } catch (const json::exception&) {
        throw ValidationError("config field 'query.u'/'query.v' must be vertex ids");
    }
    EngineOptions eo;
    eo.threads = c.threads;
    const InequalityReport r = check_correlation(inst, u, v, o.get<double>("tolerance", kDefaultTolerance), eo);
    ResultRecord rec = make_record(c, json{{"kind", "correlation"}, {"u", u}, {"v", v}, {"report", to_json(r)}});
    if (!r.holds) {
        rec.reproducer =
            write_reproducer(c, "correlation-" + r.instance_digest + ".json", correlation_reproducer(inst, u, v, r))
                .string();
        out.exit_code = kExitViolation;
    }
    out.records.push_back(std::move(rec));
}

void run_lemma(const RunConfig& c, const Options& o, RunOutcome& out) {
    const double tol = o.get<double>("tolerance", 1e-9);
    if (o.has("theta") || o.has("a") || o.has("b") || o.has("c")) {
        const LemmaPoint p = lemma_point(o.require<double>("theta"), o.require<double>("a"), o.require<double>("b"),
                                         o.require<double>("c"));
        const bool ok = p.f_value <= tol && p.d_witness && p.witness_slack_first >= -tol &&
                        p.witness_slack_second >= -tol;
        out.records.push_back(make_record(c, json{{"kind", "lemma-point"}, {"point", to_json(p)}, {"holds", ok}}));
        out.exit_code = ok ? kExitSuccess : kExitViolation;
        return;
    }
    const long long points = o.get<long long>("points", 100000);
    if (points < 1) throw ValidationError("config field 'points' must be positive");
    const LemmaCampaignSummary s = lemma_campaign(*c.seed, points);
    const bool ok = s.max_f <= tol && s.missing_witness == 0 && s.min_witness_slack >= -tol;
    out.records.push_back(make_record(c, json{{"kind", "lemma-campaign"}, {"summary", to_json(s)}, {"holds", ok}}));
    out.exit_code = ok ? kExitSuccess : kExitViolation;
}

void run_counterexample(const RunConfig& c, const Options& o, RunOutcome& out) {
    json payload{{"variant", c.variant}};
    bool ok = false;
    if (c.variant == "path") {
        const PathCertificate cert = counterexample_path(o.get<double>("g2", 3.0));
        payload["certificate"] = to_json(cert);
        ok = cert.certified;
    } else if (c.variant == "tree") {
        const TreeCertificate cert = counterexample_tree(o.get<double>("j_ua", 0.8));
        payload["certificate"] = to_json(cert);
        ok = cert.certified;
    } else if (c.variant == "insertion") {
        const InsertionCheck check = effective_coupling_insertion_check();
        payload["certificate"] = to_json(check);
        ok = check.holds;
    } else {
        throw ValidationError("counterexample needs one of path, tree, insertion");
    }
    payload["certified"] = ok;
    out.records.push_back(make_record(c, payload));
    out.exit_code = ok ? kExitSuccess : kExitViolation;
}

McOptions mc_options(const RunConfig& c, const Options& o) {
    McOptions m;
    m.sweeps = o.get<long long>("sweeps", 20000);
    m.replicas = o.get<int>("replicas", 4);
    m.threads = static_cast<int>(c.threads);
    m.seed = *c.seed;
    m.scan = scan_order_from_string(o.get<std::string>("scan", "systematic"));
    return m;
}

void run_rfim(const RunConfig& c, const Options& o, RunOutcome& out) {
    RfimConfig r;
    r.dim = o.get<int>("dim", 2);
    r.radii = o.get<std::vector<int>>("radii", {1, 2, 3, 4, 5, 6});
    r.beta = o.get<double>("beta", 0.3);
    r.field = o.has("field") ? field_spec_from_json(o.raw("field")) : FieldSpec{};
    r.mc = mc_options(c, o);
    r.exact_max_sites = o.get<int>("exact_max_sites", 26);
    out.records.push_back(make_record(c, to_json(rfim_influence(r))));
}

struct LatticeSetup {
    SSMQuery query;
    SsmMethod method = SsmMethod::exact;
    McOptions mc;
    LatticeExactOptions exact;
    bool all_flips = false;
};

LatticeSetup lattice_setup(const RunConfig& c, const Options& o) {
    const int dim = o.get<int>("dim", 2);
    const int radius = o.get<int>("radius", 4);
    if (dim < 2) throw ValidationError("config field 'dim' must be at least 2");
    if (radius < 0) throw ValidationError("config field 'radius' must be non-negative");
    LatticeSetup s{SSMQuery{build_box(dim, radius), o.get<double>("beta", 0.3), {}, {}, -1, {}}, SsmMethod::exact,
                   McOptions{}, LatticeExactOptions{}, false};
    const FieldSpec spec = o.has("field") ? field_spec_from_json(o.raw("field")) : field_spec_from_string("gaussian:1");
    for (const auto& f : realize_field(spec, s.query.domain, *c.seed)) {
        if (!f.is_finite()) throw ValidationError("config field 'field' must be finite for strong spatial mixing");
        s.query.h.push_back(f.value());
    }
    const std::string tau = o.get<std::string>("tau", "plus");
    if (tau != "plus" && tau != "minus") throw ValidationError("config field 'tau' must be plus or minus");
    s.query.tau.assign(s.query.domain.boundary_size(), tau == "plus" ? 1 : -1);
    if (!o.has("window") || (o.raw("window").is_string() && o.raw("window").get<std::string>() == "center")) {
        s.query.window = {s.query.domain.index_of(std::vector<int>(dim, 0))};
    } else {
        for (const auto& x : o.get<std::vector<std::vector<int>>>("window", {})) {
            const int i = s.query.domain.index_of(x);
            if (i < 0) throw ValidationError("config field 'window': site " + json(x).dump() + " is not in V");
            s.query.window.push_back(i);
        }
    }
    if (!o.has("flip") || (o.raw("flip").is_string() && o.raw("flip").get<std::string>() == "all")) {
        s.all_flips = true;
    } else {
        const auto y = o.get<std::vector<int>>("flip", {});
        s.query.flip = s.query.domain.boundary_index_of(y);
        if (s.query.flip < 0) throw ValidationError("config field 'flip': " + json(y).dump() + " is not on the boundary");
    }
    s.method = ssm_method_from_string(o.get<std::string>("method", "exact"));
    s.mc = mc_options(c, o);
    const std::string backend = o.get<std::string>("backend", "automatic");
    if (backend == "enumeration") s.exact.backend = LatticeBackend::enumeration;
    else if (backend == "transfer-matrix") s.exact.backend = LatticeBackend::transfer_matrix;
    else if (backend != "automatic") throw ValidationError("config field 'backend' must be automatic, enumeration or transfer-matrix");
    s.exact.engine.threads = c.threads;
    return s;
}

void run_ssm(const RunConfig& c, const Options& o, RunOutcome& out) {
    LatticeSetup s = lattice_setup(c, o);
    json payload{{"query", to_json(s.query)}};
    if (!s.all_flips) {
        payload["estimate"] = to_json(ssm_estimate(s.query, s.method, s.mc, s.exact));
        out.records.push_back(make_record(c, payload));
        return;
    }
    if (s.method != SsmMethod::exact) throw ValidationError("a profile over all flips needs method exact");
    const auto profile = ssm_tv_profile(s.query, s.exact);
    json rows = json::array();
    std::vector<DecayPoint> pts;
    for (const auto& p : profile) {
        rows.push_back(to_json(p));
        pts.push_back({static_cast<double>(p.distance), p.tv, 0.0});
    }
    payload["profile"] = rows;
    payload["worst_distance_increase"] = worst_distance_increase(profile);
    try {
        payload["fit"] = to_json(fit_decay(pts));
    } catch (const DomainError& e) {
        payload["fit"] = nullptr;
        payload["fit_error"] = e.what();
    }
    out.records.push_back(make_record(c, payload));
}

void run_sphere(const RunConfig& c, const Options& o, RunOutcome& out) {
    LatticeSetup s = lattice_setup(c, o);
    std::vector<int> flips;
    if (s.all_flips)
        for (int b = 0; b < s.query.domain.boundary_size(); ++b) flips.push_back(b);
    else
        flips.push_back(s.query.flip);
    json traces = json::array();
    bool all_valid = true;
    std::optional<std::string> reproducer;
    for (int b : flips) {
        SSMQuery q = s.query;
        q.flip = b;
        const SphereCouplingTrace t = sphere_coupling(q, s.exact);
        json tj = to_json(t);
        tj["y"] = q.domain.boundary_site(b);
        traces.push_back(tj);
        if (!t.valid) {
            all_valid = false;
            if (!reproducer)
                reproducer = write_reproducer(c, "sphere-" + stable_digest(to_json(q)) + ".json",
                                              json{{"query", to_json(q)}, {"trace", tj}})
                                 .string();
        }
    }
    ResultRecord rec = make_record(c, json{{"query", to_json(s.query)}, {"traces", traces}, {"valid", all_valid}});
    rec.reproducer = reproducer;
    out.records.push_back(std::move(rec));
    out.exit_code = all_valid ? kExitSuccess : kExitViolation;
}

}  // namespace

const std::vector<std::string>& run_commands() {
    static const std::vector<std::string> names{"exact", "check-theorem", "check-correlation", "lemma", "counterexample",
                                                "fuzz",  "rfim-decay",    "ssm",               "sphere-coupling"};
    return names;
}

bool is_randomized(const RunConfig& c) {
    const Options o(c.options);
    if (c.command == "check-theorem" || c.command == "check-correlation") return o.get<bool>("fuzz", false);
    if (c.command == "lemma") return !(o.has("theta") || o.has("a") || o.has("b") || o.has("c"));
    return c.command == "fuzz" || c.command == "rfim-decay" || c.command == "ssm" || c.command == "sphere-coupling";
}

json to_json(const RunConfig& c) {
    json j{{"command", c.command},
           {"options", c.options},
           {"threads", c.threads},
           {"out", c.out},
           {"reproducer_dir", c.reproducer_dir},
           {"verbose", c.verbose}};
    if (!c.variant.empty()) j["variant"] = c.variant;
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    return j;
}

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    static const std::set<std::string> top{"command", "variant", "options", "seed",
                                           "threads", "out",     "reproducer_dir", "verbose"};
    for (const auto& [key, value] : j.items())
        if (!top.count(key)) throw ValidationError("config field '" + key + "' is not recognized");
    RunConfig c;
    auto field = [&](const char* key, auto& target) {
        if (!j.contains(key) || j.at(key).is_null()) return;
        try {
            target = j.at(key).get<std::decay_t<decltype(target)>>();
        } catch (const json::exception&) {
            throw ValidationError(std::string("config field '") + key + "' has the wrong type: " + j.at(key).dump());
        }
    };
    field("command", c.command);
    field("variant", c.variant);
    field("options", c.options);
    field("threads", c.threads);
    field("out", c.out);
    field("reproducer_dir", c.reproducer_dir);
    field("verbose", c.verbose);
    if (j.contains("seed") && !j.at("seed").is_null()) {
        std::uint64_t s = 0;
        field("seed", s);
        c.seed = s;
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json_file(path)); }

void validate(const RunConfig& c) {
    const auto& known = known_options();
    const auto it = known.find(c.command);
    if (it == known.end()) throw ValidationError("config field 'command': unknown command '" + c.command + "'");
    if (!c.options.is_object()) throw ValidationError("config field 'options' must be an object");
    for (const auto& [key, value] : c.options.items())
        if (!it->second.count(key))
            throw ValidationError("config field 'options." + key + "' is not an option of " + c.command);
    if (c.threads < 1) throw ValidationError("config field 'threads' must be at least 1");
    if (c.command == "counterexample" && c.variant != "path" && c.variant != "tree" && c.variant != "insertion")
        throw ValidationError("config field 'variant' must be path, tree or insertion");
}

std::string config_digest(const RunConfig& c) {
    json j{{"command", c.command}, {"variant", c.variant}, {"options", c.options}};
    j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    return stable_digest(j);
}

RunOutcome run(RunConfig config) {
    RunOutcome out;
    const std::string started = utc_timestamp();
    try {
        validate(config);
        if (is_randomized(config) && !config.seed) {
            std::random_device rd;
            config.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        }
        out.config = config;
        const Options o(config.options);
        const std::string& cmd = config.command;
        if (cmd == "exact") run_exact(config, o, out);
        else if (cmd == "check-theorem") run_check_theorem(config, o, out);
        else if (cmd == "check-correlation") run_check_correlation(config, o, out);
        else if (cmd == "lemma") run_lemma(config, o, out);
        else if (cmd == "counterexample") run_counterexample(config, o, out);
        else if (cmd == "fuzz") run_fuzz(config, o, true, true, out);
        else if (cmd == "rfim-decay") run_rfim(config, o, out);
        else if (cmd == "ssm") run_ssm(config, o, out);
        else if (cmd == "sphere-coupling") run_sphere(config, o, out);
    } catch (const CapacityError& e) {
        out.exit_code = kExitCapacity;
        out.message = std::string("capacity: ") + e.what();
    } catch (const ConstructionError& e) {
        out.exit_code = kExitViolation;
        out.message = std::string("construction failed: ") + e.what();
    } catch (const std::exception& e) {
        out.exit_code = kExitUsage;
        out.message = e.what();
    }
    out.config = config;
    const std::string finished = utc_timestamp();
    for (auto& r : out.records) {
        if (config.seed && is_randomized(config)) r.payload["seed"] = *config.seed;
        r.started = started;
        r.finished = finished;
    }
    if (!config.out.empty() && !out.records.empty()) {
        try {
            append_records(config.out, out.records);
        } catch (const std::exception& e) {
            out.exit_code = kExitUsage;
            out.message = e.what();
        }
    }
    return out;
}

}  // namespace ising

#include "ising/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace ising {

using nlohmann::json;

json to_json(const ResultRecord& r) {
    json j{{"schema_version", r.schema_version},
           {"command", r.command},
           {"config_digest", r.config_digest},
           {"started", r.started},
           {"finished", r.finished},
           {"payload", r.payload}};
    j["reproducer"] = r.reproducer ? json(*r.reproducer) : json(nullptr);
    return j;
}

ResultRecord record_from_json(const json& j) {
    ResultRecord r;
    try {
        r.schema_version = j.at("schema_version").get<int>();
        r.command = j.at("command").get<std::string>();
        r.config_digest = j.at("config_digest").get<std::string>();
        r.started = j.at("started").get<std::string>();
        r.finished = j.at("finished").get<std::string>();
        r.payload = j.at("payload");
        if (j.contains("reproducer") && !j.at("reproducer").is_null())
            r.reproducer = j.at("reproducer").get<std::string>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad result record: ") + e.what());
    }
    if (r.schema_version != kSchemaVersion)
        throw ValidationError("unsupported schema version " + std::to_string(r.schema_version));
    return r;
}

bool operator==(const ResultRecord& a, const ResultRecord& b) { return to_json(a) == to_json(b); }

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void append_records(const std::filesystem::path& path, const std::vector<ResultRecord>& records) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    for (const auto& r : records) out << to_json(r).dump() << '\n';
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::vector<ResultRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file '" + path.string() + "'");
    std::vector<ResultRecord> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(record_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw ValidationError(path.string() + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    return out;
}

const char* to_string(PlotKind k) {
    switch (k) {
        case PlotKind::decay: return "decay";
        case PlotKind::lambda_sweep: return "lambda-sweep";
        case PlotKind::tv_distance: return "tv-distance";
    }
    return "?";
}

PlotKind plot_kind_from_string(const std::string& s) {
    if (s == "decay") return PlotKind::decay;
    if (s == "lambda-sweep") return PlotKind::lambda_sweep;
    if (s == "tv-distance") return PlotKind::tv_distance;
    throw ValidationError("unknown plot kind '" + s + "' (decay, lambda-sweep, tv-distance)");
}

std::optional<PlotKind> plot_kind_of(const ResultRecord& r) {
    const json& p = r.payload;
    if (r.command == "rfim-decay" && p.contains("fit") && !p.at("fit").is_null()) return PlotKind::decay;
    if (r.command == "counterexample" && p.value("variant", "") == "path") return PlotKind::lambda_sweep;
    if (r.command == "ssm" && p.contains("profile")) return PlotKind::tv_distance;
    return std::nullopt;
}

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string emit_plot_data(const std::vector<ResultRecord>& records, PlotKind kind) {
    if (records.empty()) throw ValidationError("no records to export");
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto k = plot_kind_of(records[i]);
        if (!k || *k != kind)
            throw PayloadTypeError("record " + std::to_string(i) + " (" + records[i].command + ") is not " +
                                   to_string(kind) + " data");
    }
    std::string out;
    switch (kind) {
        case PlotKind::decay:
            out += "# columns: record, N, difference, std_error, log_difference\n";
            for (std::size_t i = 0; i < records.size(); ++i) {
                const json& fit = records[i].payload.at("fit");
                out += "# record " + std::to_string(i) + " fit: slope=" + num(fit.at("slope").get<double>()) +
                       " intercept=" + num(fit.at("intercept").get<double>()) +
                       " r_squared=" + num(fit.at("r_squared").get<double>()) + "\n";
            }
            out += "record,N,difference,std_error,log_difference\n";
            for (std::size_t i = 0; i < records.size(); ++i)
                for (const auto& p : records[i].payload.at("fit").at("points")) {
                    const double y = p.at("y").get<double>();
                    out += std::to_string(i) + "," + num(p.at("x").get<double>()) + "," + num(y) + "," +
                           num(p.at("std_error").get<double>()) + "," + num(std::log(y)) + "\n";
                }
            break;
        case PlotKind::lambda_sweep:
            out += "# columns: record, lambda, D(lambda) = <s_o>_{lambda g + h} - <s_o>_{lambda g - h}\n";
            out += "record,lambda,D\n";
            for (std::size_t i = 0; i < records.size(); ++i) {
                const json& c = records[i].payload.at("certificate");
                const auto& scales = c.at("scales");
                const auto& values = c.at("influence");
                for (std::size_t k = 0; k < scales.size(); ++k)
                    out += std::to_string(i) + "," + num(scales[k].get<double>()) + "," +
                           num(values[k].get<double>()) + "\n";
            }
            break;
        case PlotKind::tv_distance:
            out += "# columns: record, y (boundary site coordinates joined by ':'), distance d(window, y), tv\n";
            out += "record,y,distance,tv\n";
            for (std::size_t i = 0; i < records.size(); ++i)
                for (const auto& p : records[i].payload.at("profile")) {
                    std::string y;
                    for (const auto& c : p.at("y")) y += (y.empty() ? "" : ":") + std::to_string(c.get<int>());
                    out += std::to_string(i) + "," + y + "," + std::to_string(p.at("distance").get<int>()) + "," +
                           num(p.at("tv").get<double>()) + "\n";
                }
            break;
    }
    return out;
}

}  // namespace ising

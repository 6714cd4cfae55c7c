#include "hkts/report.hpp"

#include <fstream>
#include <string>

#include <fmt/format.h>

#include "hkts/config.hpp"

namespace hkts::report {

using nlohmann::json;

std::string number(double v) { return fmt::format("{:.12g}", v); }

double rounded(double v) { return std::stod(number(v)); }

namespace {

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : ""; }

json quantiles_json(const Quantiles& q) {
    return json{{"min", rounded(q.min)}, {"median", rounded(q.median)}, {"max", rounded(q.max)}};
}

}  // namespace

std::string metrics_csv(const TrajectoryRecord& record) {
    std::string out = "t,d_V,d_S,d_Sbar\n";
    for (const MetricRow& row : record.series) {
        out += fmt::format("{},{},{},{}\n", row.t, number(row.d_all),
                           optional_number(row.d_seekers), optional_number(row.d_non_seekers));
    }
    return out;
}

std::string states_csv(const TrajectoryRecord& record) {
    std::string out = "t";
    for (std::size_t i = 0; i < record.config.n; ++i) out += fmt::format(",x_{}", i);
    out += '\n';
    for (const OpinionState& s : record.states) {
        out += std::to_string(s.t);
        for (double v : s.x) {
            out += ',';
            out += number(v);
        }
        out += '\n';
    }
    return out;
}

json bounds_json(const NoiseBounds& b) {
    return json{{"delta1", rounded(b.delta1)},
                {"delta2", rounded(b.delta2)},
                {"delta_bar", rounded(b.delta_bar)},
                {"delta_lower", rounded(b.delta_lower)}};
}

json summary_json(const EnsembleSummary& s) {
    json doc;
    doc["runs"] = s.runs;
    doc["precision"] = s.precision ? json(rounded(*s.precision)) : json(nullptr);
    doc["converged_runs"] = s.converged_runs;
    doc["converged_fraction"] =
        s.converged_fraction ? json(rounded(*s.converged_fraction)) : json(nullptr);
    doc["entered_runs"] = s.entered_runs;
    doc["entry_time"] = s.entry_time ? quantiles_json(*s.entry_time) : json(nullptr);
    doc["entry_violations"] = s.entry_violations;
    doc["tail_sup"] = quantiles_json(s.tail_sup);
    doc["final_d_V"] = quantiles_json(s.final_deviation);
    doc["bounds"] = s.bounds ? bounds_json(*s.bounds) : json(nullptr);
    json runs = json::array();
    for (const RunOutcome& o : s.outcomes) {
        runs.push_back({{"seed", o.seed},
                        {"tail_sup", rounded(o.tail_sup)},
                        {"final_d_V", rounded(o.final_deviation)},
                        {"entry_time", o.entry_time ? json(*o.entry_time) : json(nullptr)},
                        {"entry_violations", o.entry_violations}});
    }
    doc["per_run"] = std::move(runs);
    return doc;
}

json verify_json(const std::vector<PropertyResult>& results) {
    json props = json::array();
    bool ok = true;
    for (const PropertyResult& r : results) {
        ok = ok && r.verdict != Verdict::fail;
        props.push_back({{"property", r.name},
                         {"verdict", std::string(to_string(r.verdict))},
                         {"trials", r.trials},
                         {"margin", rounded(r.margin)},
                         {"note", r.note}});
    }
    return json{{"passed", ok}, {"properties", std::move(props)}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
        throw cli::IoError(fmt::format("cannot create directory '{}': {}",
                                       path.parent_path().string(), ec.message()));
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw cli::IoError(fmt::format("cannot write '{}'", path.string()));
    out << content;
    out.close();
    if (!out) throw cli::IoError(fmt::format("error while writing '{}'", path.string()));
}

}  // namespace hkts::report

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hkts/bounds.hpp"
#include "hkts/harness.hpp"
#include "hkts/verify.hpp"

namespace hkts::report {

/// All numeric output carries 12 significant digits ("%.12g").
std::string number(double v);

/// v rounded to 12 significant digits, for JSON emission.
double rounded(double v);

/// `t,d_V,d_S,d_Sbar`, one row per step. An empty group leaves its column blank.
std::string metrics_csv(const TrajectoryRecord& record);

/// `t,x_0,...,x_{n-1}`, one row per kept state.
std::string states_csv(const TrajectoryRecord& record);

nlohmann::json bounds_json(const NoiseBounds& bounds);
nlohmann::json summary_json(const EnsembleSummary& summary);
nlohmann::json verify_json(const std::vector<PropertyResult>& results);

/// JSON text with a trailing newline.
std::string dump(const nlohmann::json& doc);

/// Writes `content` to `path`, creating parent directories. Throws cli::IoError.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hkts::report

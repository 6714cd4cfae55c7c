#include "hkts/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace hkts::cli {

namespace {

constexpr std::array kKeys = {
    "n",           "m",         "seekers",    "alpha",      "epsilon",  "truth",
    "delta",       "mode",      "horizon",    "tail_window", "seed",    "seed_base",
    "runs",        "init",      "precision",  "output",     "full_states", "per_run",
    "jobs",        "trials",    "steps",      "noise_draws", "fault_no_clamp",
    "grid_delta",  "grid_alpha", "grid_m",    "grid_epsilon",
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(fmt::format("{}: '{}' is not a number", key, text));
    }
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", key, text));
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(to_double(key, item));
    return out;
}

std::string join_numbers(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + exact_number(v[i]);
    return out;
}

template <class T>
std::string join_ints(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

}  // namespace

std::string exact_number(double v) { return fmt::format("{}", v); }

std::string canonical_key(std::string_view key) {
    std::string k(key);
    std::replace(k.begin(), k.end(), '-', '_');
    if (k == "eps") k = "epsilon";
    if (k == "A") k = "truth";
    if (std::find(kKeys.begin(), kKeys.end(), k) == kKeys.end()) {
        throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
    return k;
}

KeyValues parse_key_values(std::string_view text) {
    KeyValues out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("config line {}: expected 'key = value'", lineno));
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) throw ConfigError(fmt::format("config line {}: empty key", lineno));
        out[canonical_key(key)] = trim(std::string_view(line).substr(eq + 1));
    }
    return out;
}

KeyValues load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot read config file '{}'", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    if (path.extension() != ".json") return parse_key_values(buf.str());

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
    if (!doc.contains("config") || !doc["config"].is_object()) {
        throw ConfigError(fmt::format("{}: manifest has no \"config\" object", path.string()));
    }
    KeyValues out;
    for (const auto& [key, value] : doc["config"].items()) {
        out[canonical_key(key)] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    return out;
}

RunSpec CliConfig::run_spec() const {
    RunSpec spec;
    spec.config = model;
    spec.initial = initial;
    spec.mode = mode;
    spec.horizon = horizon;
    spec.seed = seed;
    spec.tail_window = tail_window;
    spec.keep_states = full_states;
    spec.precision = precision;
    return spec;
}

CliConfig resolve(const KeyValues& values) {
    for (const auto& [key, _] : values) canonical_key(key);
    auto get = [&](const char* key) -> std::optional<std::string> {
        if (auto it = values.find(key); it != values.end()) return it->second;
        return std::nullopt;
    };
    auto num = [&](const char* key, double fallback) {
        const auto v = get(key);
        return v ? to_double(key, *v) : fallback;
    };
    auto count = [&](const char* key, std::uint64_t fallback) {
        const auto v = get(key);
        return v ? to_u64(key, *v) : fallback;
    };
    auto flag = [&](const char* key) {
        const auto v = get(key);
        return v ? to_bool(key, *v) : false;
    };

    CliConfig c;
    const auto n = static_cast<std::size_t>(count("n", 20));
    const double epsilon = num("epsilon", 0.2);
    const double truth = num("truth", 0.8);
    const double delta = num("delta", 0.02);

    std::vector<double> alpha = to_doubles("alpha", get("alpha").value_or("0.5"));
    if (alpha.size() == 1) alpha.assign(n, alpha.front());
    if (alpha.size() != n) {
        throw ConfigError(fmt::format("alpha: expected 1 or n = {} values, got {}", n,
                                      alpha.size()));
    }

    if (get("m") && get("seekers")) throw ConfigError("give either m or seekers, not both");
    std::vector<bool> seeker(n, false);
    std::string seeker_echo;
    if (const auto list = get("seekers")) {
        std::vector<std::size_t> ids;
        for (const auto& item : split_list(*list)) {
            const auto id = static_cast<std::size_t>(to_u64("seekers", item));
            if (id >= n) {
                throw ConfigError(fmt::format("seekers: index {} out of range for n = {}", id, n));
            }
            seeker[id] = true;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (seeker[i]) ids.push_back(i);
        seeker_echo = join_ints(ids);
    } else {
        const auto m = static_cast<std::size_t>(count("m", 10));
        if (m > n) {
            throw ConfigError(fmt::format("m = {} exceeds n = {} (1 <= |S| <= n)", m, n));
        }
        for (std::size_t i = 0; i < m; ++i) seeker[i] = true;
    }

    c.model.n = n;
    c.model.epsilon = epsilon;
    c.model.truth = truth;
    c.model.alpha = alpha;
    c.model.seeker = seeker;
    c.model.delta = delta;
    try {
        c.model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    try {
        c.mode = parse_mode(get("mode").value_or("iid"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    c.horizon = static_cast<std::size_t>(count("horizon", 20000));
    c.tail_window = static_cast<std::size_t>(count("tail_window", 2000));
    c.seed = count("seed", 1);
    c.seed_base = count("seed_base", c.seed);
    c.runs = static_cast<std::size_t>(count("runs", 50));
    c.jobs = static_cast<std::size_t>(count("jobs", 1));
    if (const auto p = get("precision")) c.precision = to_double("precision", *p);
    c.full_states = flag("full_states");
    c.per_run = flag("per_run");
    c.fault_no_clamp = flag("fault_no_clamp");
    if (const auto out = get("output")) {
        c.output_dir = *out;
        c.output_given = true;
    }
    c.trials = static_cast<std::size_t>(count("trials", 1000));
    c.steps = static_cast<std::size_t>(count("steps", 1000));
    c.noise_draws = static_cast<std::size_t>(count("noise_draws", 100000));

    const std::string init = get("init").value_or("uniform-random");
    if (init != "uniform-random") c.initial = to_doubles("init", init);

    if (const auto g = get("grid_delta")) c.grid_delta = to_doubles("grid_delta", *g);
    if (const auto g = get("grid_alpha")) c.grid_alpha = to_doubles("grid_alpha", *g);
    if (const auto g = get("grid_epsilon")) c.grid_epsilon = to_doubles("grid_epsilon", *g);
    if (const auto g = get("grid_m")) {
        for (const auto& item : split_list(*g))
            c.grid_m.push_back(static_cast<std::size_t>(to_u64("grid_m", item)));
    }

    if (c.horizon == 0) throw ConfigError("horizon must be at least 1");
    if (c.tail_window == 0 || c.tail_window > c.horizon) {
        throw ConfigError("tail_window must lie in [1, horizon]");
    }
    if (c.runs == 0) throw ConfigError("runs must be at least 1");
    try {
        c.run_spec().validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }

    KeyValues& e = c.echo;
    e["n"] = std::to_string(n);
    if (get("seekers")) {
        e["seekers"] = seeker_echo;
    } else {
        e["m"] = std::to_string(c.model.seeker_count());
    }
    const auto homogeneous = c.model.homogeneous_alpha();
    e["alpha"] = homogeneous ? exact_number(*homogeneous) : join_numbers(alpha);
    e["epsilon"] = exact_number(epsilon);
    e["truth"] = exact_number(truth);
    e["delta"] = exact_number(delta);
    e["mode"] = std::string(to_string(c.mode));
    e["horizon"] = std::to_string(c.horizon);
    e["tail_window"] = std::to_string(c.tail_window);
    e["seed"] = std::to_string(c.seed);
    e["seed_base"] = std::to_string(c.seed_base);
    e["runs"] = std::to_string(c.runs);
    e["init"] = init == "uniform-random" ? init
                                         : join_numbers(std::get<std::vector<double>>(c.initial));
    if (c.precision) e["precision"] = exact_number(*c.precision);
    e["output"] = c.output_dir.string();
    e["full_states"] = c.full_states ? "true" : "false";
    e["per_run"] = c.per_run ? "true" : "false";
    e["jobs"] = std::to_string(c.jobs);
    e["trials"] = std::to_string(c.trials);
    e["steps"] = std::to_string(c.steps);
    e["noise_draws"] = std::to_string(c.noise_draws);
    if (!c.grid_delta.empty()) e["grid_delta"] = join_numbers(c.grid_delta);
    if (!c.grid_alpha.empty()) e["grid_alpha"] = join_numbers(c.grid_alpha);
    if (!c.grid_m.empty()) e["grid_m"] = join_ints(c.grid_m);
    if (!c.grid_epsilon.empty()) e["grid_epsilon"] = join_numbers(c.grid_epsilon);
    return c;
}

}  // namespace hkts::cli

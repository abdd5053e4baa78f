#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "icerank/cashflow.hpp"
#include "icerank/error.hpp"
#include "icerank/numeric.hpp"
#include "icerank/scenario_engine.hpp"
#include "icerank/term_structure.hpp"

namespace icerank {

namespace fs = std::filesystem;

namespace csv {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line per row
};

inline Table read(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::io_error, "cannot open '" + path.string() + "'");
    }
    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_row(line);
        std::vector<std::string> owned(cells.begin(), cells.end());
        if (!have_header) {
            table.header = std::move(owned);
            have_header = true;
        } else {
            table.rows.push_back(std::move(owned));
            table.line_numbers.push_back(line_no);
        }
    }
    if (!have_header) {
        throw Error(Errc::parse_error, "'" + path.string() + "' is empty");
    }
    return table;
}

inline double parse_double(std::string_view text, const fs::path& path, std::size_t line,
                           std::size_t column) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, value);
    if (text.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(value)) {
        throw Error(Errc::parse_error, path.string() + ": row " + std::to_string(line) +
                                           ", column " + std::to_string(column) +
                                           ": cannot parse '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace csv

/// Reads a `tenor,rate` CSV; tenors must run 1..T without gaps.
inline YieldCurve load_curve(const fs::path& path) {
    const csv::Table table = csv::read(path);
    if (table.header.size() != 2 || table.header[0] != "tenor" || table.header[1] != "rate") {
        throw Error(Errc::parse_error, path.string() + ": header must be 'tenor,rate'");
    }
    std::vector<int> tenors;
    std::vector<double> rates;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.line_numbers[r];
        if (row.size() != 2) {
            throw Error(Errc::parse_error, path.string() + ": row " + std::to_string(line) +
                                               " has " + std::to_string(row.size()) +
                                               " columns, expected 2");
        }
        const double tenor = csv::parse_double(row[0], path, line, 1);
        if (tenor != std::floor(tenor)) {
            throw Error(Errc::parse_error, path.string() + ": row " + std::to_string(line) +
                                               ": tenor must be an integer");
        }
        tenors.push_back(static_cast<int>(tenor));
        rates.push_back(csv::parse_double(row[1], path, line, 2));
    }
    if (tenors.empty()) {
        throw Error(Errc::parse_error, path.string() + ": no tenors");
    }
    try {
        return YieldCurve::from_tenors(tenors, rates);
    } catch (const Error& e) {
        throw Error(Errc::parse_error, path.string() + ": " + e.what());
    }
}

/// Reads a scenario CSV with header `t0,...,tT`, optionally preceded by a
/// `weight` column. `horizon`, when given, must match the header.
inline ScenarioSet load_scenarios(const fs::path& path, std::optional<int> horizon = std::nullopt,
                                  std::string project_id = "") {
    const csv::Table table = csv::read(path);
    const bool weighted = !table.header.empty() && table.header.front() == "weight";
    const std::size_t offset = weighted ? 1 : 0;
    const std::size_t flow_columns = table.header.size() - offset;
    if (flow_columns < 2) {
        throw Error(Errc::parse_error, path.string() + ": need columns t0..tT with T >= 1");
    }
    for (std::size_t t = 0; t < flow_columns; ++t) {
        if (table.header[offset + t] != "t" + std::to_string(t)) {
            throw Error(Errc::parse_error, path.string() + ": header column " +
                                               std::to_string(offset + t + 1) + " should be 't" +
                                               std::to_string(t) + "', found '" +
                                               table.header[offset + t] + "'");
        }
    }
    const int file_horizon = static_cast<int>(flow_columns) - 1;
    if (horizon && *horizon != file_horizon) {
        throw Error(Errc::horizon_mismatch, path.string() + ": file horizon " +
                                                std::to_string(file_horizon) +
                                                " differs from declared horizon " +
                                                std::to_string(*horizon));
    }
    if (table.rows.empty()) {
        throw Error(Errc::empty_set, path.string() + ": no scenario rows");
    }

    std::vector<CashFlowScenario> scenarios;
    std::vector<double> weights;
    scenarios.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.line_numbers[r];
        if (row.size() != table.header.size()) {
            throw Error(Errc::parse_error, path.string() + ": row " + std::to_string(line) +
                                               " has " + std::to_string(row.size()) +
                                               " columns, expected " +
                                               std::to_string(table.header.size()));
        }
        if (weighted) weights.push_back(csv::parse_double(row[0], path, line, 1));
        std::vector<double> flows(flow_columns);
        for (std::size_t t = 0; t < flow_columns; ++t) {
            flows[t] = csv::parse_double(row[offset + t], path, line, offset + t + 1);
        }
        try {
            scenarios.emplace_back(std::move(flows));
        } catch (const Error& e) {
            throw Error(Errc::parse_error,
                        path.string() + ": row " + std::to_string(line) + ": " + e.what());
        }
    }
    return ScenarioSet(std::move(project_id), std::move(scenarios), std::move(weights));
}

inline void write_scenarios(std::ostream& out, const ScenarioSet& set, bool with_weights = false) {
    if (with_weights) out << "weight,";
    for (int t = 0; t <= set.horizon(); ++t) out << (t ? ",t" : "t") << t;
    out << '\n';
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (with_weights) out << format_number(set.weights()[i]) << ',';
        const auto flows = set[i].flows();
        for (std::size_t t = 0; t < flows.size(); ++t) {
            out << (t ? "," : "") << format_number(flows[t]);
        }
        out << '\n';
    }
}

using json = nlohmann::json;

namespace detail {

template <class T>
T required(const json& obj, const char* field, const std::string& where) {
    if (!obj.contains(field)) {
        throw Error(Errc::config_error, where + ": missing field '" + field + "'");
    }
    try {
        return obj.at(field).get<T>();
    } catch (const json::exception&) {
        throw Error(Errc::config_error, where + ": field '" + field + "' has the wrong type");
    }
}

inline json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::io_error, "cannot open '" + path.string() + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(Errc::parse_error, path.string() + ": " + e.what());
    }
}

}  // namespace detail

/// Parses a generator block:
/// {"family", "mean", "std", "skew", "template": [f0, null, ...], "n", "seed"}.
inline GeneratorSpec parse_generator(const json& block, const std::string& where = "generator") {
    if (!block.is_object()) {
        throw Error(Errc::config_error, where + ": generator block must be an object");
    }
    GeneratorSpec spec;
    const auto family = detail::required<std::string>(block, "family", where);
    try {
        spec.family = parse_family(family);
    } catch (const Error&) {
        throw Error(Errc::config_error,
                    where + ": field 'family': unknown distribution family '" + family + "'");
    }
    spec.target_mean = detail::required<double>(block, "mean", where);
    spec.target_std = detail::required<double>(block, "std", where);
    spec.target_skewness = block.contains("skew") ? detail::required<double>(block, "skew", where) : 0.0;
    spec.n_scenarios = detail::required<std::size_t>(block, "n", where);
    spec.seed = detail::required<std::uint64_t>(block, "seed", where);
    if (!block.contains("template") || !block.at("template").is_array()) {
        throw Error(Errc::config_error, where + ": field 'template' must be an array");
    }
    for (const auto& cell : block.at("template")) {
        if (cell.is_null()) {
            spec.flow_template.emplace_back(std::nullopt);
        } else if (cell.is_number()) {
            spec.flow_template.emplace_back(cell.get<double>());
        } else {
            throw Error(Errc::config_error, where + ": template entries must be numbers or null");
        }
    }
    return spec;
}

inline json to_json(const GeneratorSpec& spec) {
    json tmpl = json::array();
    for (const auto& cell : spec.flow_template) {
        tmpl.push_back(cell ? json(*cell) : json(nullptr));
    }
    return json{{"family", std::string(to_string(spec.family))},
                {"mean", spec.target_mean},
                {"std", spec.target_std},
                {"skew", spec.target_skewness},
                {"template", tmpl},
                {"n", spec.n_scenarios},
                {"seed", spec.seed}};
}

/// A project JSON: `id`, `name`, `horizon` and either `scenario_file`
/// (relative to the JSON's directory) or an inline `generator` block.
struct ProjectDescriptor {
    std::string id;
    std::string name;
    int horizon = 0;
    std::optional<fs::path> scenario_file;
    std::optional<GeneratorSpec> generator;
};

inline ProjectDescriptor parse_project(const json& doc, const fs::path& base_dir,
                                       const std::string& where) {
    if (!doc.is_object()) {
        throw Error(Errc::config_error, where + ": project must be a JSON object");
    }
    ProjectDescriptor out;
    out.id = detail::required<std::string>(doc, "id", where);
    out.name = doc.value("name", out.id);
    out.horizon = detail::required<int>(doc, "horizon", where);
    if (out.horizon < 1) {
        throw Error(Errc::config_error, where + ": horizon must be >= 1");
    }
    const bool has_file = doc.contains("scenario_file");
    const bool has_gen = doc.contains("generator");
    if (has_file == has_gen) {
        throw Error(Errc::config_error,
                    where + ": exactly one of 'scenario_file' or 'generator' is required");
    }
    if (has_file) {
        fs::path file = detail::required<std::string>(doc, "scenario_file", where);
        out.scenario_file = file.is_absolute() ? file : base_dir / file;
    } else {
        out.generator = parse_generator(doc.at("generator"), where + ": generator");
        if (out.generator->flow_template.size() != static_cast<std::size_t>(out.horizon) + 1) {
            throw Error(Errc::config_error, where + ": generator template length must be horizon+1");
        }
    }
    return out;
}

inline ProjectDescriptor load_project(const fs::path& path) {
    return parse_project(detail::read_json(path), path.parent_path(), path.string());
}

/// Overrides applied on top of a JSON generator block; flags beat the file.
struct GeneratorOverrides {
    std::optional<std::size_t> n;
    std::optional<std::uint64_t> seed;
};

inline void apply(GeneratorSpec& spec, const GeneratorOverrides& overrides) {
    if (overrides.n) spec.n_scenarios = *overrides.n;
    if (overrides.seed) spec.seed = *overrides.seed;
}

inline ScenarioSet materialize(const ProjectDescriptor& project,
                               const GeneratorOverrides& overrides = {}, unsigned workers = 1) {
    if (project.scenario_file) {
        return load_scenarios(*project.scenario_file, project.horizon, project.id);
    }
    GeneratorSpec spec = *project.generator;
    apply(spec, overrides);
    return generate(spec, project.id, workers);
}

/// A generator spec file is either a bare generator block or a project
/// JSON carrying one.
inline GeneratorSpec load_generator_spec(const fs::path& path) {
    const json doc = detail::read_json(path);
    if (doc.is_object() && doc.contains("generator")) {
        return parse_generator(doc.at("generator"), path.string() + ": generator");
    }
    return parse_generator(doc, path.string());
}

}  // namespace icerank

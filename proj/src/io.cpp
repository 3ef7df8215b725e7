#include "sbmopa/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sbmopa/errors.hpp"

namespace sbmopa::io {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << content;
    if (!out) throw ValidationError("short write to '" + path + "'");
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool record_has_data = false;

    auto end_field = [&] {
        record.push_back(field);
        field.clear();
        record_has_data = true;
    };
    auto end_record = [&] {
        if (!record_has_data && record.empty() && field.empty()) return;  // blank line
        end_field();
        if (table.header.empty()) {
            table.header = record;
        } else {
            table.rows.push_back(record);
        }
        record.clear();
        record_has_data = false;
        field.clear();
    };

    for (size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"': in_quotes = true; break;
            case ',': end_field(); break;
            case '\r': break;
            case '\n': end_record(); break;
            default: field.push_back(c);
        }
    }
    if (in_quotes) throw ValidationError("csv: unterminated quoted field");
    if (!field.empty() || record_has_data || !record.empty()) {
        if (!field.empty() || record_has_data) end_record();
    }
    if (table.header.empty()) throw ValidationError("csv: missing header row");
    for (size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r].size() != table.header.size()) {
            throw ValidationError("csv: row " + std::to_string(r + 2) + " has " +
                                  std::to_string(table.rows[r].size()) + " fields, header has " +
                                  std::to_string(table.header.size()));
        }
    }
    return table;
}

CsvTable read_csv(const std::string& path) {
    try {
        return parse_csv(read_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string to_csv(const CsvTable& table) {
    std::ostringstream os;
    auto emit = [&](const std::vector<std::string>& record) {
        for (size_t i = 0; i < record.size(); ++i) {
            if (i) os << ',';
            os << csv_escape(record[i]);
        }
        os << '\n';
    };
    emit(table.header);
    for (const auto& row : table.rows) emit(row);
    return os.str();
}

double round_sig(double value) {
    if (!std::isfinite(value)) return value;
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
    double rounded = value;
    std::from_chars(buf, res.ptr, rounded);
    return rounded;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto res =
        std::to_chars(buf, buf + sizeof(buf), round_sig(value), std::chars_format::general);
    return std::string(buf, res.ptr);
}

double parse_number(const std::string& text, const std::string& where) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() ||
        res.ptr != end) {
        // allow trailing spaces
        const char* p = res.ptr;
        while (p < end && (*p == ' ' || *p == '\t')) ++p;
        if (res.ec != std::errc() || p != end) {
            throw ValidationError("non-numeric cell at " + where + ": '" + text + "'");
        }
    }
    return value;
}

std::map<std::string, PanelVariable> roles_from_json(const std::string& text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("roles json: ") + e.what());
    }
    if (!doc.is_object() || doc.empty()) {
        throw ValidationError("roles json: expected a non-empty object keyed by column name");
    }
    std::map<std::string, PanelVariable> roles;
    for (const auto& [name, value] : doc.items()) {
        PanelVariable v;
        v.name = name;
        std::string role;
        if (value.is_string()) {
            role = value.get<std::string>();
        } else if (value.is_object()) {
            role = value.value("role", "");
            v.unit = value.value("unit", "");
        } else {
            throw ValidationError("roles json: entry '" + name + "' must be a string or object");
        }
        if (role == "input") v.role = VariableRole::Input;
        else if (role == "output") v.role = VariableRole::Output;
        else {
            throw ValidationError("roles json: column '" + name +
                                  "' must be labeled input or output");
        }
        roles[name] = v;
    }
    return roles;
}

DmuPanel panel_from_csv(const CsvTable& table,
                        const std::map<std::string, PanelVariable>& roles) {
    if (table.header.empty() || table.header[0] != "dmu_id") {
        throw ValidationError("panel csv: first column must be 'dmu_id'");
    }
    std::vector<PanelVariable> variables;
    for (size_t c = 1; c < table.header.size(); ++c) {
        const auto it = roles.find(table.header[c]);
        if (it == roles.end()) {
            throw ValidationError("panel csv: column '" + table.header[c] +
                                  "' is missing from the roles config");
        }
        variables.push_back(it->second);
    }
    for (const auto& [name, v] : roles) {
        (void)v;
        bool found = false;
        for (size_t c = 1; c < table.header.size(); ++c) {
            if (table.header[c] == name) found = true;
        }
        if (!found) {
            throw ValidationError("roles config labels column '" + name +
                                  "' that is not in the panel csv");
        }
    }
    std::vector<std::string> ids;
    std::vector<std::vector<double>> data;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        ids.push_back(row[0]);
        std::vector<double> values;
        for (size_t c = 1; c < row.size(); ++c) {
            values.push_back(parse_number(
                row[c], "row " + std::to_string(r + 2) + ", column '" + table.header[c] + "'"));
        }
        data.push_back(std::move(values));
    }
    return DmuPanel(std::move(ids), std::move(variables), std::move(data));
}

DmuPanel load_panel(const std::string& csv_path, const std::string& roles_path) {
    return panel_from_csv(read_csv(csv_path), roles_from_json(read_file(roles_path)));
}

PolicyFile policies_from_json(const std::string& text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("policies json: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("policies") || !doc["policies"].is_array() ||
        doc["policies"].empty()) {
        throw ValidationError("policies json: expected a non-empty 'policies' array");
    }
    PolicyFile file;
    file.absolute_correlation = doc.value("absolute_correlation", false);
    for (const auto& pj : doc["policies"]) {
        scenario::PolicyDefinition def;
        def.name = pj.value("name", "");
        if (def.name.empty()) throw ValidationError("policies json: policy without a name");
        def.anchor = pj.value("anchor", "");
        def.note = pj.value("note", "");
        if (pj.contains("fixed_ranks")) {
            if (!pj["fixed_ranks"].is_object()) {
                throw ValidationError("policies json: fixed_ranks must map variable to rank");
            }
            for (const auto& [var, rank] : pj["fixed_ranks"].items()) {
                def.fixed_ranks[var] = rank.get<int>();
            }
        }
        file.policies.push_back(std::move(def));
    }
    if (doc.contains("scenarios")) {
        const auto& sc = doc["scenarios"];
        if (sc.is_string()) {
            if (sc.get<std::string>() != "all-permutations") {
                throw ValidationError("policies json: scenarios must be 'all-permutations' "
                                      "or an explicit array");
            }
            file.all_permutations = true;
        } else if (sc.is_array()) {
            file.all_permutations = false;
            for (const auto& sj : sc) {
                scenario::ScenarioSpec spec;
                spec.id = sj.value("id", "");
                if (spec.id.empty()) {
                    throw ValidationError("policies json: scenario without an id");
                }
                if (!sj.contains("order") || !sj["order"].is_array()) {
                    throw ValidationError("policies json: scenario '" + spec.id +
                                          "' needs an 'order' array");
                }
                for (const auto& name : sj["order"]) {
                    spec.policy_order.push_back(name.get<std::string>());
                }
                file.explicit_scenarios.push_back(std::move(spec));
            }
            if (file.explicit_scenarios.empty()) {
                throw ValidationError("policies json: empty scenario list");
            }
        } else {
            throw ValidationError("policies json: unrecognized 'scenarios' value");
        }
    }
    return file;
}

PolicyFile load_policies(const std::string& path) {
    try {
        return policies_from_json(read_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::map<std::string, emissions::FuelFactor> fuel_factors_from_csv(const CsvTable& table) {
    const std::vector<std::string> expected = {"fuel", "ncv", "cef", "cof"};
    if (table.header != expected) {
        throw ValidationError("factor csv: header must be fuel,ncv,cef,cof");
    }
    std::map<std::string, emissions::FuelFactor> out;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        emissions::FuelFactor f;
        f.fuel = row[0];
        const std::string where = "row " + std::to_string(r + 2);
        f.ncv = parse_number(row[1], where + ", column 'ncv'");
        f.cef = parse_number(row[2], where + ", column 'cef'");
        f.cof = parse_number(row[3], where + ", column 'cof'");
        f.validate();
        if (!out.emplace(f.fuel, f).second) {
            throw ValidationError("factor csv: duplicate fuel '" + f.fuel + "'");
        }
    }
    if (out.empty()) throw ValidationError("factor csv: no rows");
    return out;
}

std::map<std::string, emissions::FuelFactor> load_fuel_factors(const std::string& path) {
    try {
        return fuel_factors_from_csv(read_csv(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

ConsumptionTable consumption_from_csv(const CsvTable& table) {
    if (table.header.empty() || table.header[0] != "dmu_id") {
        throw ValidationError("consumption csv: first column must be 'dmu_id'");
    }
    if (table.header.size() < 2) {
        throw ValidationError("consumption csv: no fuel columns");
    }
    ConsumptionTable out;
    for (size_t c = 1; c < table.header.size(); ++c) out.fuels.push_back(table.header[c]);
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        out.dmu_ids.push_back(row[0]);
        std::map<std::string, double> amounts;
        for (size_t c = 1; c < row.size(); ++c) {
            amounts[table.header[c]] = parse_number(
                row[c], "row " + std::to_string(r + 2) + ", column '" + table.header[c] + "'");
        }
        out.rows.push_back(std::move(amounts));
    }
    return out;
}

ConsumptionTable load_consumption(const std::string& path) {
    try {
        return consumption_from_csv(read_csv(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

} // namespace sbmopa::io

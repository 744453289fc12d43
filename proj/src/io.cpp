#include "streamclean/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace streamclean {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kIndex = "_index";
constexpr const char* kArrival = "_arrival";
constexpr const char* kSynthetic = "_synthetic";

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

AttributeValue value_from_text(const std::string& text, ValueType type) {
    if (text.empty()) return AttributeValue::null();
    if (auto v = convert_strict(text, type)) return *v;
    return AttributeValue(text);
}

Outcome outcome_from_string(const std::string& s, const std::string& origin) {
    for (auto o : {Outcome::Pass, Outcome::Repaired, Outcome::Deleted}) {
        if (to_string(o) == s) return o;
    }
    throw IoError(origin + ": unknown outcome '" + s + "'");
}

ordered_json finding_json(const Finding& f) {
    ordered_json j;
    j["type"] = std::string(to_string(f.type));
    j["attribute"] = f.attribute ? ordered_json(*f.attribute) : ordered_json(nullptr);
    j["detail"] = f.detail;
    return j;
}

}  // namespace

CsvTable parse_csv(std::istream& in, const std::string& origin) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, field_started = false;
    std::size_t line = 1;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        // A bare empty line is not a record.
        if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started) throw IoError(origin + ":" + std::to_string(line) + ": stray quote inside field");
                quoted = field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') break;
                [[fallthrough]];
            case '\n':
                end_record();
                ++line;
                break;
            default:
                field += c;
                field_started = true;
        }
    }
    if (quoted) throw IoError(origin + ": unterminated quoted field");
    if (field_started || !field.empty() || !record.empty()) end_record();

    CsvTable table;
    if (records.empty()) throw IoError(origin + ": missing header row");
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw IoError(origin + ": record " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                          " fields, header has " + std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open for reading");
    return parse_csv(in, path.string());
}

void write_csv(std::ostream& out, const CsvTable& table) {
    auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ',';
            out << quote(fields[i]);
        }
        out << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
}

void write_csv(const fs::path& path, const CsvTable& table) {
    std::ostringstream out;
    write_csv(out, table);
    write_text(path, out.str());
}

std::vector<DataVector> stream_from_csv(const CsvTable& table, const Schema& schema, const std::string& origin) {
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            if (table.header[i] == name) return i;
        }
        return std::nullopt;
    };
    std::vector<std::size_t> attr_cols;
    for (const auto& a : schema.attributes) {
        auto c = column(a.name);
        if (!c) throw IoError(origin + ": no column for attribute '" + a.name + "'");
        attr_cols.push_back(*c);
    }
    const auto index_col = column(kIndex);
    const auto arrival_col = column(kArrival);
    const auto synthetic_col = column(kSynthetic);
    std::optional<std::size_t> arrival_attr;
    if (!arrival_col) {
        if (!schema.arrival_attribute) throw IoError(origin + ": no _arrival column and no arrival attribute");
        arrival_attr = column(*schema.arrival_attribute);
    }

    std::vector<DataVector> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = origin + ": record " + std::to_string(r + 1);
        std::vector<std::string> raw;
        raw.reserve(attr_cols.size());
        for (auto c : attr_cols) raw.push_back(row[c]);

        const std::string& arrival_text = arrival_col ? row[*arrival_col] : row[*arrival_attr];
        auto arrival = parse_instant(arrival_text);
        if (!arrival) throw IoError(where + ": unreadable arrival time '" + arrival_text + "'");

        std::uint64_t index = r + 1;
        if (index_col) {
            try {
                index = std::stoull(row[*index_col]);
            } catch (const std::exception&) {
                throw IoError(where + ": unreadable index '" + row[*index_col] + "'");
            }
        }
        auto v = parse_vector(raw, schema, index, *arrival);
        if (synthetic_col) v.synthetic = row[*synthetic_col] == "true";
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<DataVector> read_stream(const fs::path& path, const Schema& schema) {
    return stream_from_csv(read_csv(path), schema, path.string());
}

CsvTable stream_to_csv(const std::vector<DataVector>& data, const Schema& schema, bool with_synthetic) {
    CsvTable t;
    t.header = {kIndex, kArrival};
    for (const auto& a : schema.attributes) t.header.push_back(a.name);
    if (with_synthetic) t.header.push_back(kSynthetic);
    for (const auto& v : data) {
        std::vector<std::string> row{std::to_string(v.index), format_instant(v.arrival)};
        for (auto& f : serialize_vector(v)) row.push_back(std::move(f));
        if (with_synthetic) row.push_back(v.synthetic ? "true" : "false");
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_stream(const fs::path& path, const std::vector<DataVector>& data, const Schema& schema,
                  bool with_synthetic) {
    write_csv(path, stream_to_csv(data, schema, with_synthetic));
}

CsvTable injection_log_to_csv(const InjectionLog& log) {
    CsvTable t;
    t.header = {"vector_index", "attribute", "error_type", "original", "injected"};
    for (const auto& e : log.entries) {
        t.rows.push_back({std::to_string(e.vector_index), e.attribute.value_or(""), std::string(to_string(e.type)),
                          format_value(e.original), format_value(e.injected)});
    }
    return t;
}

InjectionLog injection_log_from_csv(const CsvTable& table, const Schema& schema, const std::string& origin) {
    if (table.header != std::vector<std::string>{"vector_index", "attribute", "error_type", "original", "injected"}) {
        throw IoError(origin + ": not an injection log");
    }
    InjectionLog log;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = origin + ": record " + std::to_string(r + 1);
        InjectionEntry e;
        try {
            e.vector_index = std::stoull(row[0]);
        } catch (const std::exception&) {
            throw IoError(where + ": unreadable vector index");
        }
        auto type = error_type_from_string(row[2]);
        if (!type) throw IoError(where + ": unknown error type '" + row[2] + "'");
        e.type = *type;
        if (!row[1].empty()) {
            auto pos = schema.position(row[1]);
            if (!pos) throw IoError(where + ": unknown attribute '" + row[1] + "'");
            e.attribute = row[1];
            e.original = value_from_text(row[3], schema.attributes[*pos].type);
            // Wrong-type injections keep their corrupted surface text.
            e.injected = e.type == ErrorType::WrongType ? AttributeValue(row[4])
                                                        : value_from_text(row[4], schema.attributes[*pos].type);
        }
        log.entries.push_back(std::move(e));
    }
    return log;
}

std::string run_log_to_json(const RunLog& log) {
    ordered_json entries = ordered_json::array();
    for (const auto& e : log.entries) {
        ordered_json j;
        j["index"] = e.index;
        j["outcome"] = std::string(to_string(e.summary.outcome));
        j["findings"] = ordered_json::array();
        for (const auto& f : e.summary.findings) j["findings"].push_back(finding_json(f));
        j["changes"] = ordered_json::array();
        for (const auto& c : e.summary.changes) {
            j["changes"].push_back({{"attribute", c.attribute},
                                    {"old", format_value(c.old_value)},
                                    {"new", format_value(c.new_value)},
                                    {"strategy", c.strategy}});
        }
        j["notes"] = e.summary.notes;
        entries.push_back(std::move(j));
    }
    ordered_json doc;
    doc["vectors"] = std::move(entries);
    return doc.dump(1) + "\n";
}

RunLog run_log_from_json(const std::string& text, const Schema& schema, const std::string& origin) {
    RunLog log;
    try {
        const auto doc = json::parse(text);
        for (const auto& j : doc.at("vectors")) {
            VectorLog e;
            e.index = j.at("index").get<std::uint64_t>();
            e.summary.vector_index = e.index;
            e.summary.outcome = outcome_from_string(j.at("outcome").get<std::string>(), origin);
            for (const auto& f : j.at("findings")) {
                Finding finding;
                finding.vector_index = e.index;
                auto type = error_type_from_string(f.at("type").get<std::string>());
                if (!type) throw IoError(origin + ": unknown finding type");
                finding.type = *type;
                if (!f.at("attribute").is_null()) finding.attribute = f.at("attribute").get<std::string>();
                finding.detail = f.value("detail", "");
                e.summary.findings.push_back(std::move(finding));
            }
            const json changes = j.value("changes", json::array());
            for (const auto& c : changes) {
                const auto attr = c.at("attribute").get<std::string>();
                const auto pos = schema.position(attr);
                if (!pos) throw IoError(origin + ": unknown attribute '" + attr + "'");
                const auto type = schema.attributes[*pos].type;
                e.summary.changes.push_back({attr, value_from_text(c.at("old").get<std::string>(), type),
                                             value_from_text(c.at("new").get<std::string>(), type),
                                             c.at("strategy").get<std::string>()});
            }
            e.summary.notes = j.value("notes", std::vector<std::string>{});
            log.entries.push_back(std::move(e));
        }
    } catch (const json::exception& ex) {
        throw IoError(origin + ": malformed run log: " + ex.what());
    }
    return log;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open for reading");
    std::ostringstream s;
    s << in.rdbuf();
    if (in.bad()) throw IoError(path.string() + ": read failed");
    return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out << text;
    out.flush();
    if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace streamclean

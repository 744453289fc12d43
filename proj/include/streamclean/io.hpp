#pragma once

#include "streamclean/injector.hpp"
#include "streamclean/pipeline.hpp"
#include "streamclean/schema.hpp"
#include "streamclean/vector.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace streamclean {

/// Failure to read or write a file; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Comma-separated, double-quote escaping, header row required. Throws IoError on
/// unreadable files, unterminated quotes, or rows whose width differs from the header.
CsvTable parse_csv(std::istream& in, const std::string& origin = "<stream>");
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Stream files carry `_index` and `_arrival` before the schema attributes, and cleaned
/// output adds a trailing `_synthetic`. Files without `_arrival` take their arrival from the
/// schema's arrival attribute and are numbered in file order.
std::vector<DataVector> read_stream(const std::filesystem::path& path, const Schema& schema);
std::vector<DataVector> stream_from_csv(const CsvTable& table, const Schema& schema, const std::string& origin);
CsvTable stream_to_csv(const std::vector<DataVector>& data, const Schema& schema, bool with_synthetic = false);
void write_stream(const std::filesystem::path& path, const std::vector<DataVector>& data, const Schema& schema,
                  bool with_synthetic = false);

CsvTable injection_log_to_csv(const InjectionLog& log);
InjectionLog injection_log_from_csv(const CsvTable& table, const Schema& schema, const std::string& origin);

/// Run logs are JSON: one object per processed vector with its outcome, findings, changes and notes.
std::string run_log_to_json(const RunLog& log);
/// Restores entries (outcomes, findings, changes, notes); committed vectors are not part of the file.
RunLog run_log_from_json(const std::string& text, const Schema& schema, const std::string& origin);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace streamclean

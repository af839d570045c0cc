#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grafcet/model.hpp"

namespace grafcet {

// Raised by parse_spec. Syntax errors carry a 1-based line/column into the
// document; schema and semantic errors carry a JSON pointer in `path`.
class IngestError : public std::runtime_error {
public:
    enum class Kind { Syntax, Schema, Semantic };

    IngestError(Kind kind, std::string message, std::string path = {}, std::size_t line = 0, std::size_t column = 0,
                std::vector<Finding> findings = {});

    Kind kind() const { return kind_; }
    const std::string& path() const { return path_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::vector<Finding>& findings() const { return findings_; }

private:
    Kind kind_;
    std::string path_;
    std::size_t line_;
    std::size_t column_;
    std::vector<Finding> findings_;
};

std::string_view to_string(IngestError::Kind k);

// Parses a `.grafcet.json` document, resolves every condition and value
// expression and runs validate(); error findings abort with a Semantic error.
GrafcetSpec parse_spec(std::string_view document);
GrafcetSpec load_spec(const std::string& path);

// Canonical JSON form; parse_spec(serialize_spec(m)) == m.
std::string serialize_spec(const GrafcetSpec& spec);
nlohmann::json spec_to_json(const GrafcetSpec& spec);

// Sidecar query file: either {"queries": [...]} or a bare array.
std::vector<SafetyQuery> parse_queries(std::string_view document);

}  // namespace grafcet

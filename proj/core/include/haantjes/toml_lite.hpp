#pragma once

// Parser for the subset of TOML used by manifests: comments, [dotted.table]
// headers, bare or quoted keys, strings, numbers, booleans and (nested,
// possibly multi-line) arrays.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace haantjes::toml {

struct Value;
using Array = std::vector<Value>;
using Table = std::map<std::string, Value>;

struct Value {
  std::variant<std::monostate, std::string, double, bool, Array, std::shared_ptr<Table>> data;
  std::size_t offset = 0;  // byte offset of the value in the source

  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_number() const { return std::holds_alternative<double>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }
  bool is_table() const { return std::holds_alternative<std::shared_ptr<Table>>(data); }

  const std::string& as_string() const { return std::get<std::string>(data); }
  double as_number() const { return std::get<double>(data); }
  bool as_bool() const { return std::get<bool>(data); }
  const Array& as_array() const { return std::get<Array>(data); }
  const Table& as_table() const { return *std::get<std::shared_ptr<Table>>(data); }
};

/// Parses a document into its root table. Throws ParseError with a byte offset.
Table parse(std::string_view text);

}  // namespace haantjes::toml

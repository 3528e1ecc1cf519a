#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace semdep {

/// Identifier of a propositional variable / graph vertex.
///
/// Two VarIds are equal iff their names are byte-identical. Names are either
/// plain identifiers ([A-Za-z_][A-Za-z0-9_]*) or arbitrary nonempty text that
/// is carried in quoted form in the text formats (e.g. "(Y1,Y3,Y2)").
class VarId {
 public:
  explicit VarId(std::string name) : name_(std::move(name)) {
    if (name_.empty()) throw std::invalid_argument("VarId: empty name");
  }
  explicit VarId(const char* name) : VarId(std::string(name)) {}

  const std::string& str() const { return name_; }

  auto operator<=>(const VarId&) const = default;

 private:
  std::string name_;
};

inline bool is_plain_ident(std::string_view name) {
  if (name.empty()) return false;
  auto head = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  if (!head(name.front())) return false;
  for (char c : name.substr(1))
    if (!tail(c)) return false;
  return true;
}

/// Renders a variable name the way the text formats expect it: quoted iff it
/// is not a plain identifier. "TRUE"/"FALSE" are always quoted so they cannot
/// be re-read as the constant literals.
inline std::string format_ident(const std::string& name) {
  if (is_plain_ident(name) && name != "TRUE" && name != "FALSE") return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string format_ident(const VarId& v) { return format_ident(v.str()); }

}  // namespace semdep

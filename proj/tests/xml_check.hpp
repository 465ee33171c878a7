#pragma once

// Minimal XML well-formedness checker: balanced tags, quoted attributes,
// known entities only. Enough to catch broken SVG output.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace xmlcheck {

inline bool entities_ok(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '<') return false;
    if (text[i] != '&') continue;
    const auto semi = text.find(';', i);
    if (semi == std::string_view::npos) return false;
    const auto ent = text.substr(i + 1, semi - i - 1);
    if (ent != "amp" && ent != "lt" && ent != "gt" && ent != "quot" && ent != "apos") return false;
  }
  return true;
}

inline bool attributes_ok(std::string_view body) {
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    if (i >= body.size()) break;
    const std::size_t name_start = i;
    while (i < body.size() && body[i] != '=' && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    if (i == name_start || i >= body.size() || body[i] != '=') return false;
    ++i;
    if (i >= body.size() || (body[i] != '"' && body[i] != '\'')) return false;
    const char q = body[i++];
    const auto close = body.find(q, i);
    if (close == std::string_view::npos) return false;
    if (!entities_ok(body.substr(i, close - i))) return false;
    i = close + 1;
  }
  return true;
}

inline bool well_formed(std::string_view doc) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  int roots = 0;
  while (i < doc.size()) {
    const auto lt = doc.find('<', i);
    if (!entities_ok(doc.substr(i, (lt == std::string_view::npos ? doc.size() : lt) - i))) return false;
    if (lt == std::string_view::npos) break;
    const auto gt = doc.find('>', lt);
    if (gt == std::string_view::npos) return false;
    std::string_view tag = doc.substr(lt + 1, gt - lt - 1);
    i = gt + 1;
    if (tag.starts_with("?")) continue;
    if (tag.starts_with("/")) {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with("/");
    if (self_closing) tag.remove_suffix(1);
    const auto sp = tag.find_first_of(" \t\n");
    const std::string name(tag.substr(0, sp));
    if (name.empty()) return false;
    if (sp != std::string_view::npos && !attributes_ok(tag.substr(sp))) return false;
    if (stack.empty()) ++roots;
    if (!self_closing) stack.push_back(name);
  }
  return stack.empty() && roots == 1;
}

inline std::size_t count(std::string_view doc, std::string_view needle) {
  std::size_t n = 0;
  for (auto p = doc.find(needle); p != std::string_view::npos; p = doc.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace xmlcheck

#pragma once

// Minimal XML well-formedness check for the SVG outputs: one declaration,
// one root element, balanced tags, quoted attribute values.

#include <cctype>
#include <string>
#include <vector>

namespace testutil {

inline bool xml_well_formed(const std::string& text, std::string* error = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (error) *error = msg;
    return false;
  };

  std::size_t i = 0;
  auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };

  skip_ws();
  if (text.compare(i, 5, "<?xml") == 0) {
    const std::size_t end = text.find("?>", i);
    if (end == std::string::npos) return fail("unterminated declaration");
    i = end + 2;
  }

  std::vector<std::string> stack;
  int roots = 0;
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    if (text[i] != '<') {
      if (stack.empty()) return fail("text outside the root element");
      ++i;
      continue;
    }
    if (text.compare(i, 4, "<!--") == 0) {
      const std::size_t end = text.find("-->", i);
      if (end == std::string::npos) return fail("unterminated comment");
      i = end + 3;
      continue;
    }
    const std::size_t close = text.find('>', i);
    if (close == std::string::npos) return fail("unterminated tag");
    std::string tag = text.substr(i + 1, close - i - 1);
    i = close + 1;

    if (!tag.empty() && tag.front() == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name)
        return fail("mismatched closing tag </" + name + ">");
      stack.pop_back();
      continue;
    }

    const bool self_closing = !tag.empty() && tag.back() == '/';
    if (self_closing) tag.pop_back();
    std::size_t name_end = 0;
    while (name_end < tag.size() &&
           !std::isspace(static_cast<unsigned char>(tag[name_end])))
      ++name_end;
    const std::string name = tag.substr(0, name_end);
    if (name.empty()) return fail("empty tag name");

    // attributes must be name="value" pairs
    std::size_t j = name_end;
    while (j < tag.size()) {
      while (j < tag.size() && std::isspace(static_cast<unsigned char>(tag[j]))) ++j;
      if (j >= tag.size()) break;
      const std::size_t eq = tag.find('=', j);
      if (eq == std::string::npos) return fail("attribute without value in <" + name + ">");
      if (eq + 1 >= tag.size() || tag[eq + 1] != '"')
        return fail("unquoted attribute value in <" + name + ">");
      const std::size_t end_quote = tag.find('"', eq + 2);
      if (end_quote == std::string::npos)
        return fail("unterminated attribute value in <" + name + ">");
      j = end_quote + 1;
    }

    if (stack.empty()) {
      ++roots;
      if (roots > 1) return fail("more than one root element");
    }
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) return fail("unclosed element <" + stack.back() + ">");
  if (roots != 1) return fail("no root element");
  return true;
}

inline int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace testutil

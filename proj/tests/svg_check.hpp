#pragma once

// Minimal structural checks on generated SVG text.

#include <cstdlib>
#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace svg_check {

/// Empty when every element is closed in order and the root is an <svg>
/// carrying width and height; otherwise a description of the first problem.
inline std::string well_formed(const std::string& doc) {
  std::vector<std::string> stack;
  bool saw_root = false;
  std::size_t i = 0;
  while ((i = doc.find('<', i)) != std::string::npos) {
    const auto end = doc.find('>', i);
    if (end == std::string::npos) return "unterminated tag";
    const std::string tag = doc.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.empty()) return "empty tag";
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (tag[0] == '/') {
      const auto name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return "unexpected </" + name + ">";
      stack.pop_back();
      continue;
    }
    const auto name = tag.substr(0, tag.find_first_of(" \t\n/"));
    if (!saw_root) {
      if (name != "svg") return "root is not svg";
      if (!std::regex_search(tag, std::regex(R"(\bwidth="[0-9.]+")")) ||
          !std::regex_search(tag, std::regex(R"(\bheight="[0-9.]+")"))) {
        return "svg root lacks width/height";
      }
      saw_root = true;
    } else if (stack.empty()) {
      return "content after root";
    }
    if (tag.back() != '/') stack.push_back(name);
  }
  if (!saw_root) return "no svg element";
  if (!stack.empty()) return "unclosed <" + stack.back() + ">";
  return {};
}

/// Value of attribute `attr` on the first element whose class is `cls`.
inline std::optional<std::string> attribute(const std::string& doc, const std::string& cls,
                                            const std::string& attr) {
  const auto at = doc.find("class=\"" + cls + "\"");
  if (at == std::string::npos) return std::nullopt;
  const auto open = doc.rfind('<', at);
  const auto close = doc.find('>', at);
  const std::string tag = doc.substr(open, close - open);
  std::smatch m;
  if (!std::regex_search(tag, m, std::regex("\\b" + attr + "=\"([^\"]*)\""))) return std::nullopt;
  return m[1].str();
}

inline std::vector<std::pair<double, double>> polyline_points(const std::string& points) {
  std::vector<std::pair<double, double>> out;
  std::regex pair(R"((-?[0-9.]+),(-?[0-9.]+))");
  for (std::sregex_iterator it(points.begin(), points.end(), pair), e; it != e; ++it) {
    out.emplace_back(std::strtod((*it)[1].str().c_str(), nullptr),
                     std::strtod((*it)[2].str().c_str(), nullptr));
  }
  return out;
}

}  // namespace svg_check

#include "ltidetect/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ltidetect::config {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::string strip_comment(const std::string& line) {
  bool inString = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (ch == '"') inString = !inString;
    if (!inString && (ch == '#' || ch == ';')) return line.substr(0, i);
  }
  return line;
}

double parse_number(const std::string& token, int lineNo) {
  try {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    require(used == token.size(), ErrorCode::IoError,
            "config line " + std::to_string(lineNo) + ": bad number '" + token + "'");
    return value;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    raise(ErrorCode::IoError, "config line " + std::to_string(lineNo) +
                                  ": bad number '" + token + "'");
  }
}

// Parses "[1, 2]" or "[[1, 2], [3, 4]]" into rows of doubles.
ConfigFile::Rows parse_array(const std::string& text, int lineNo) {
  ConfigFile::Rows rows;
  std::vector<double> current;
  int depth = 0;
  bool sawInnerBrackets = false;
  std::string token;
  auto flushToken = [&] {
    const std::string t = trim(token);
    token.clear();
    if (t.empty()) return;
    current.push_back(parse_number(t, lineNo));
  };
  for (const char ch : text) {
    if (ch == '[') {
      ++depth;
      if (depth == 2) {
        sawInnerBrackets = true;
        current.clear();
      }
      require(depth <= 2, ErrorCode::IoError,
              "config line " + std::to_string(lineNo) + ": arrays nest at most twice");
    } else if (ch == ']') {
      flushToken();
      if (depth == 2) rows.push_back(current);
      if (depth == 1 && !sawInnerBrackets) rows.push_back(current);
      --depth;
      require(depth >= 0, ErrorCode::IoError,
              "config line " + std::to_string(lineNo) + ": unbalanced ']'");
    } else if (ch == ',') {
      flushToken();
    } else {
      token += ch;
    }
  }
  require(depth == 0, ErrorCode::IoError,
          "config line " + std::to_string(lineNo) + ": unbalanced '['");
  return rows;
}

ConfigFile::Value parse_value(const std::string& raw, int lineNo) {
  const std::string text = trim(raw);
  require(!text.empty(), ErrorCode::IoError,
          "config line " + std::to_string(lineNo) + ": empty value");
  if (text.front() == '[') return parse_array(text, lineNo);
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.front() == '"') {
    require(text.size() >= 2 && text.back() == '"', ErrorCode::IoError,
            "config line " + std::to_string(lineNo) + ": unterminated string");
    return text.substr(1, text.size() - 2);
  }
  const char first = text.front();
  if (std::isdigit(static_cast<unsigned char>(first)) || first == '-' ||
      first == '+' || first == '.') {
    return parse_number(text, lineNo);
  }
  return text;  // bare word, treated as a string (e.g. kind = cusum)
}

}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile file;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::string content = trim(strip_comment(line));
    if (content.empty()) continue;
    if (content.front() == '[' && content.back() == ']' &&
        content.find('=') == std::string::npos) {
      section = trim(content.substr(1, content.size() - 2));
      require(!section.empty(), ErrorCode::IoError,
              "config line " + std::to_string(lineNo) + ": empty section name");
      file.sections_[section];
      continue;
    }
    const auto eq = content.find('=');
    require(eq != std::string::npos, ErrorCode::IoError,
            "config line " + std::to_string(lineNo) + ": expected key = value");
    require(!section.empty(), ErrorCode::IoError,
            "config line " + std::to_string(lineNo) + ": key outside any [section]");
    const std::string key = trim(content.substr(0, eq));
    std::string value = trim(content.substr(eq + 1));
    require(!key.empty(), ErrorCode::IoError,
            "config line " + std::to_string(lineNo) + ": empty key");

    // Let arrays continue across lines until brackets balance.
    if (!value.empty() && value.front() == '[') {
      auto balance = [](const std::string& s) {
        long b = 0;
        for (const char ch : s) b += (ch == '[') - (ch == ']');
        return b;
      };
      while (balance(value) > 0 && std::getline(in, line)) {
        ++lineNo;
        value += ' ';
        value += trim(strip_comment(line));
      }
    }
    file.sections_[section][key] = parse_value(value, lineNo);
  }
  return file;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoError, "cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

bool ConfigFile::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

const ConfigFile::Value& ConfigFile::get(const std::string& section,
                                         const std::string& key) const {
  require(has(section, key), ErrorCode::IoError,
          "config: missing [" + section + "] " + key);
  return sections_.at(section).at(key);
}

double ConfigFile::number(const std::string& section, const std::string& key) const {
  const Value& value = get(section, key);
  require(std::holds_alternative<double>(value), ErrorCode::IoError,
          "config: [" + section + "] " + key + " must be a number");
  return std::get<double>(value);
}

double ConfigFile::number_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

bool ConfigFile::boolean_or(const std::string& section, const std::string& key,
                            bool fallback) const {
  if (!has(section, key)) return fallback;
  const Value& value = get(section, key);
  require(std::holds_alternative<bool>(value), ErrorCode::IoError,
          "config: [" + section + "] " + key + " must be true or false");
  return std::get<bool>(value);
}

std::string ConfigFile::string_or(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  if (!has(section, key)) return fallback;
  const Value& value = get(section, key);
  require(std::holds_alternative<std::string>(value), ErrorCode::IoError,
          "config: [" + section + "] " + key + " must be a string");
  return std::get<std::string>(value);
}

std::vector<double> ConfigFile::number_list(const std::string& section,
                                            const std::string& key) const {
  const Value& value = get(section, key);
  require(std::holds_alternative<Rows>(value), ErrorCode::IoError,
          "config: [" + section + "] " + key + " must be an array");
  std::vector<double> flat;
  for (const auto& row : std::get<Rows>(value))
    flat.insert(flat.end(), row.begin(), row.end());
  return flat;
}

Matrix ConfigFile::matrix(const std::string& section, const std::string& key) const {
  const Value& value = get(section, key);
  require(std::holds_alternative<Rows>(value), ErrorCode::IoError,
          "config: [" + section + "] " + key + " must be an array of rows");
  const Rows& rows = std::get<Rows>(value);
  require(!rows.empty() && !rows.front().empty(), ErrorCode::IoError,
          "config: [" + section + "] " + key + " must be nonempty");
  Matrix out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == rows.front().size(), ErrorCode::IoError,
            "config: [" + section + "] " + key + " has ragged rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return out;
}

}  // namespace ltidetect::config

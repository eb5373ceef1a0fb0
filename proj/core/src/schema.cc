/*
 * Copyright 2026 The proxycert Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "proxycert/schema.h"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "proxycert/error.h"

namespace proxycert {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void Fail(int line_no, const std::string& what) {
  throw DomainError("config line " + std::to_string(line_no) + ": " + what);
}

bool ValidGroupName(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
      return false;
    }
  }
  return true;
}

struct PendingGroup {
  std::optional<Predicate> proxy;
  std::optional<Predicate> truth;
  std::optional<double> error;
  int first_line = 0;
};

}  // namespace

DatasetSchema DatasetSchema::Parse(const std::string& text) {
  DatasetSchema schema;
  std::map<std::string, PendingGroup> groups;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool saw_label = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) Fail(line_no, "expected 'key: value'");
    const std::string key = Trim(line.substr(0, colon));
    const std::string value = Trim(line.substr(colon + 1));
    if (value.empty()) Fail(line_no, "empty value for '" + key + "'");

    if (key == "label") {
      if (saw_label) Fail(line_no, "label declared twice");
      schema.label_column = value;
      saw_label = true;
    } else if (key == "prediction") {
      if (schema.prediction_column) Fail(line_no, "prediction declared twice");
      schema.prediction_column = value;
    } else if (key == "features") {
      std::istringstream parts(value);
      std::string item;
      while (std::getline(parts, item, ',')) {
        item = Trim(item);
        if (item.empty()) Fail(line_no, "empty feature name");
        schema.feature_columns.push_back(item);
      }
    } else if (key.rfind("group.", 0) == 0) {
      const auto dot = key.rfind('.');
      if (dot <= 6) Fail(line_no, "expected group.<name>.<field>");
      const std::string name = key.substr(6, dot - 6);
      const std::string field = key.substr(dot + 1);
      if (!ValidGroupName(name)) Fail(line_no, "invalid group name '" + name + "'");
      PendingGroup& g = groups[name];
      if (g.first_line == 0) g.first_line = line_no;
      try {
        if (field == "proxy") {
          if (g.proxy) Fail(line_no, "proxy predicate declared twice");
          g.proxy = Predicate::Parse(value);
        } else if (field == "true") {
          if (g.truth) Fail(line_no, "true predicate declared twice");
          g.truth = Predicate::Parse(value);
        } else if (field == "error") {
          if (g.error) Fail(line_no, "error declared twice");
          double err = 0.0;
          auto [ptr, ec] =
              std::from_chars(value.data(), value.data() + value.size(), err);
          if (ec != std::errc() || ptr != value.data() + value.size()) {
            Fail(line_no, "'" + value + "' is not a number");
          }
          if (!(err >= 0.0 && err <= 1.0)) {
            Fail(line_no, "proxy error must lie in [0,1]");
          }
          g.error = err;
        } else {
          Fail(line_no, "unknown group field '" + field + "'");
        }
      } catch (const DomainError& e) {
        const std::string what = e.what();
        if (what.rfind("config line", 0) == 0) throw;
        Fail(line_no, what);
      }
    } else {
      Fail(line_no, "unknown key '" + key + "'");
    }
  }
  if (!saw_label) throw DomainError("config does not declare a label column");
  for (auto& [name, g] : groups) {
    if (!g.proxy) {
      Fail(g.first_line, "group '" + name + "' has no proxy predicate");
    }
    schema.groups.push_back({name, std::move(*g.proxy), std::move(g.truth), g.error});
  }
  return schema;
}

DatasetSchema DatasetSchema::ParseFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

std::string DatasetSchema::ToString() const {
  std::ostringstream out;
  out << "label: " << label_column << '\n';
  if (prediction_column) out << "prediction: " << *prediction_column << '\n';
  if (!feature_columns.empty()) {
    out << "features: ";
    for (std::size_t i = 0; i < feature_columns.size(); ++i) {
      if (i) out << ", ";
      out << feature_columns[i];
    }
    out << '\n';
  }
  char buf[64];
  for (const GroupDef& g : groups) {
    out << "group." << g.name << ".proxy: " << g.proxy.ToString() << '\n';
    if (g.truth) out << "group." << g.name << ".true: " << g.truth->ToString() << '\n';
    if (g.proxy_error) {
      std::snprintf(buf, sizeof(buf), "%.17g", *g.proxy_error);
      out << "group." << g.name << ".error: " << buf << '\n';
    }
  }
  return out.str();
}

}  // namespace proxycert

// Copyright 2026 The Tabschema Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tabschema/text.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace tabschema::text {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }

// Splits into alphanumeric words, breaking camel humps.
std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (!is_alnum(c) && static_cast<unsigned char>(c) < 0x80) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    if (!cur.empty() && is_upper(c)) {
      char prev = s[i - 1];
      bool next_lower = i + 1 < s.size() && is_lower(s[i + 1]);
      if (is_lower(prev) || (is_upper(prev) && next_lower)) {
        out.push_back(std::move(cur));
        cur.clear();
      }
    }
    cur.push_back(c);
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out = split(s, '\n');
  for (auto& line : out) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }
  return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string to_snake_case(std::string_view s) {
  std::string out;
  for (const auto& w : words(s)) {
    if (!out.empty()) out.push_back('_');
    out += to_lower(w);
  }
  return out;
}

std::string to_camel_case(std::string_view s) {
  auto ws = words(s);
  std::string out;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    std::string w = ws[i];
    if (i == 0) {
      w[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(w[0])));
    } else {
      w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    }
    out += w;
  }
  return out;
}

std::string strip_decorations(std::string_view s) {
  std::string out = trim(s);
  auto strip_pair = [&out]() {
    static constexpr std::string_view kQuotes = "\"'`*";
    bool changed = false;
    while (out.size() >= 1 && kQuotes.find(out.front()) != std::string_view::npos) {
      out.erase(out.begin());
      changed = true;
    }
    while (!out.empty() && (kQuotes.find(out.back()) != std::string_view::npos ||
                            out.back() == '.' || out.back() == ',' ||
                            out.back() == ';' || out.back() == '!')) {
      out.pop_back();
      changed = true;
    }
    return changed;
  };
  while (strip_pair()) out = trim(out);
  return out;
}

std::string strip_list_marker(std::string_view s) {
  std::string out = trim(s);
  if (out.size() >= 2 && (out[0] == '-' || out[0] == '*') && is_space(out[1])) {
    return trim(std::string_view(out).substr(2));
  }
  std::size_t i = 0;
  while (i < out.size() && std::isdigit(static_cast<unsigned char>(out[i]))) ++i;
  if (i > 0 && i + 1 < out.size() && (out[i] == '.' || out[i] == ')') &&
      is_space(out[i + 1])) {
    return trim(std::string_view(out).substr(i + 1));
  }
  return out;
}

bool is_numeric(std::string_view s) {
  std::string t = trim(s);
  if (t.empty()) return false;
  bool digit = false;
  for (char c : t) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-' && c != '+' && c != '%' &&
               c != 'e' && c != 'E' && c != '$') {
      return false;
    }
  }
  return digit;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string sha256_hex(std::string_view s) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(s.data(), s.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  std::string out;
  out.reserve(len * 2);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    out += buf;
  }
  return out;
}

}  // namespace tabschema::text

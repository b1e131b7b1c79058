/* Copyright 2026 The trlc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "trlc/corpus.hpp"

#include <algorithm>
#include <sstream>
#include <string_view>
#include <utility>

namespace trlc::corpus_data {
extern const std::vector<std::pair<std::string_view, std::string_view>> kFiles;
}  // namespace trlc::corpus_data

namespace trlc {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

CorpusEntry load(std::string_view id, std::string_view text) {
  CorpusEntry entry{std::string(id), {}, std::string(text), {}};
  std::istringstream in(entry.program);
  std::string line;
  std::string* field = nullptr;
  while (std::getline(in, line)) {
    std::string_view l(line);
    if (l.empty() || l.front() != '%') break;
    l.remove_prefix(1);
    std::string body = trim(l);
    if (body.rfind("title:", 0) == 0) {
      field = &entry.title;
      body = trim(std::string_view(body).substr(6));
    } else if (body.rfind("provenance:", 0) == 0) {
      field = &entry.provenance;
      body = trim(std::string_view(body).substr(11));
    } else if (!field) {
      continue;
    }
    if (!field->empty() && !body.empty()) *field += ' ';
    *field += body;
  }
  return entry;
}

}  // namespace

const std::vector<CorpusEntry>& list_corpus() {
  static const std::vector<CorpusEntry> entries = [] {
    std::vector<CorpusEntry> out;
    for (const auto& [id, text] : corpus_data::kFiles) out.push_back(load(id, text));
    std::sort(out.begin(), out.end(),
              [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
    return out;
  }();
  return entries;
}

const CorpusEntry& get_corpus(const std::string& id) {
  for (const CorpusEntry& e : list_corpus()) {
    if (e.id == id) return e;
  }
  throw UnknownCorpusEntry(id);
}

}  // namespace trlc

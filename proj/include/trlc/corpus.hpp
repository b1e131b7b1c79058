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

#ifndef TRLC_CORPUS_HPP_
#define TRLC_CORPUS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace trlc {

// A shipped example program. `title` and `provenance` come from the
// leading `% title:` / `% provenance:` comment block of the .tlp file.
struct CorpusEntry {
  std::string id;
  std::string title;
  std::string program;
  std::string provenance;
};

class UnknownCorpusEntry : public std::out_of_range {
 public:
  explicit UnknownCorpusEntry(const std::string& id)
      : std::out_of_range("unknown corpus entry '" + id + "'") {}
};

// Sorted by id.
const std::vector<CorpusEntry>& list_corpus();
const CorpusEntry& get_corpus(const std::string& id);

}  // namespace trlc

#endif  // TRLC_CORPUS_HPP_

#pragma once

#include <filesystem>
#include <string>
#include <vector>

// Lexical resources: the closed-class function-word list and the cohesive
// marker list.  Both are plain UTF-8 text, one entry per line, '#' starting
// a comment, blank lines ignored.  Entries are lowercased on load and kept
// in file order with duplicates dropped (first occurrence wins); markers may
// be multi-word phrases ("in addition").

namespace otkit {

struct Resources {
  std::vector<std::string> function_words;
  std::vector<std::string> cohesive_markers;
};

// Parse one list file.
std::vector<std::string> load_word_list(const std::filesystem::path& path);

// Load function_words.txt and cohesive_markers.txt from a directory.
Resources load_resources(const std::filesystem::path& dir);

void write_word_list(const std::filesystem::path& path,
                     const std::vector<std::string>& entries,
                     const std::string& comment = "");

}  // namespace otkit

#include "otkit/resources.hpp"

#include <cctype>
#include <fstream>
#include <unordered_set>

#include "otkit/error.hpp"

namespace otkit {

namespace {

std::string lowercase_ascii(std::string s) {
  for (char& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::vector<std::string> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io, "cannot open word list '" + path.string() + "'");
  std::vector<std::string> entries;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string entry = lowercase_ascii(strip(line));
    if (entry.empty()) continue;
    if (seen.insert(entry).second) entries.push_back(std::move(entry));
  }
  return entries;
}

Resources load_resources(const std::filesystem::path& dir) {
  Resources r;
  r.function_words = load_word_list(dir / "function_words.txt");
  r.cohesive_markers = load_word_list(dir / "cohesive_markers.txt");
  return r;
}

void write_word_list(const std::filesystem::path& path,
                     const std::vector<std::string>& entries,
                     const std::string& comment) {
  std::ofstream out(path);
  require(out.good(), Errc::io, "cannot write word list '" + path.string() + "'");
  if (!comment.empty()) out << "# " << comment << '\n';
  for (const auto& e : entries) out << e << '\n';
  out.flush();
  require(out.good(), Errc::io, "failed writing '" + path.string() + "'");
}

}  // namespace otkit

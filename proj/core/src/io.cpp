#include "otkit/io.hpp"

#include <fstream>

#include "otkit/error.hpp"

namespace otkit {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  require(out.good(), Errc::io, "cannot open '" + path.string() + "' for writing");
  return out;
}

json parse_line(const std::string& line, const std::filesystem::path& path,
                std::size_t lineno) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded())
    fail(Errc::io,
         path.string() + ":" + std::to_string(lineno) + ": invalid JSON");
  if (!j.is_object())
    fail(Errc::io,
         path.string() + ":" + std::to_string(lineno) + ": expected an object");
  return j;
}

void flush_or_fail(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  require(out.good(), Errc::io, "failed writing '" + path.string() + "'");
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(Errc::io, "invalid JSON in '" + path.string() + "'");
  return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  flush_or_fail(out, path);
}

std::vector<Document> read_documents_jsonl(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<Document> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = parse_line(line, path, lineno);
    Document d;
    if (!j.contains("id") || !j["id"].is_string())
      fail(Errc::io, path.string() + ":" + std::to_string(lineno) +
                         ": document needs a string 'id'");
    d.id = j["id"].get<std::string>();
    if (j.contains("text")) d.text = j["text"].get<std::string>();
    if (j.contains("tokens"))
      d.tokens = j["tokens"].get<std::vector<std::string>>();
    if (d.text.has_value() == d.tokens.has_value())
      fail(Errc::io, path.string() + ":" + std::to_string(lineno) +
                         ": document '" + d.id +
                         "' must carry exactly one of text/tokens");
    if (j.contains("pos")) d.pos = j["pos"].get<std::vector<std::string>>();
    if (j.contains("label")) d.label = parse_label(j["label"].get<std::string>());
    if (j.contains("domain")) d.domain = j["domain"].get<std::string>();
    docs.push_back(std::move(d));
  }
  return docs;
}

void write_documents_jsonl(const std::filesystem::path& path,
                           const std::vector<Document>& docs) {
  auto out = open_out(path);
  for (const auto& d : docs) {
    json j;
    j["id"] = d.id;
    if (d.text) j["text"] = *d.text;
    if (d.tokens) j["tokens"] = *d.tokens;
    if (d.pos) j["pos"] = *d.pos;
    if (d.label) j["label"] = std::string(1, label_char(*d.label));
    if (d.domain) j["domain"] = *d.domain;
    out << j.dump() << '\n';
  }
  flush_or_fail(out, path);
}

void write_chunks_jsonl(const std::filesystem::path& path, const ChunkSet& set,
                        bool emit_tokens) {
  auto out = open_out(path);
  json header;
  header["target_size"] = set.target_size;
  header["provenance"] = {{"seed", set.provenance.seed},
                          {"config_hash", set.provenance.config_hash}};
  out << header.dump() << '\n';
  for (const auto& c : set.chunks) {
    json j;
    j["id"] = c.id;
    j["token_count"] = c.token_count;
    j["source_doc_ids"] = c.source_doc_ids;
    if (c.label) j["label"] = std::string(1, label_char(*c.label));
    if (c.domain) j["domain"] = *c.domain;
    if (emit_tokens) {
      j["tokens"] = c.tokens;
      if (c.pos) j["pos"] = *c.pos;
    }
    out << j.dump() << '\n';
  }
  flush_or_fail(out, path);
}

ChunkSet read_chunks_jsonl(const std::filesystem::path& path) {
  auto in = open_in(path);
  ChunkSet set;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = parse_line(line, path, lineno);
    if (!saw_header && j.contains("target_size")) {
      set.target_size = j["target_size"].get<std::size_t>();
      if (j.contains("provenance")) {
        const auto& p = j["provenance"];
        if (p.contains("seed"))
          set.provenance.seed = p["seed"].get<std::uint64_t>();
        if (p.contains("config_hash"))
          set.provenance.config_hash = p["config_hash"].get<std::string>();
      }
      saw_header = true;
      continue;
    }
    saw_header = true;
    Chunk c;
    if (!j.contains("id") || !j["id"].is_string())
      fail(Errc::io, path.string() + ":" + std::to_string(lineno) +
                         ": chunk needs a string 'id'");
    c.id = j["id"].get<std::string>();
    if (j.contains("source_doc_ids"))
      c.source_doc_ids = j["source_doc_ids"].get<std::vector<std::string>>();
    if (j.contains("label")) c.label = parse_label(j["label"].get<std::string>());
    if (j.contains("domain")) c.domain = j["domain"].get<std::string>();
    if (j.contains("tokens")) {
      c.tokens = j["tokens"].get<std::vector<std::string>>();
      if (j.contains("pos")) {
        c.pos = j["pos"].get<std::vector<std::string>>();
        if (c.pos->size() != c.tokens.size())
          fail(Errc::io, path.string() + ":" + std::to_string(lineno) +
                             ": chunk '" + c.id + "' pos/token length mismatch");
      }
    }
    if (j.contains("token_count")) {
      c.token_count = j["token_count"].get<std::size_t>();
      if (!c.tokens.empty() && c.tokens.size() != c.token_count)
        fail(Errc::io, path.string() + ":" + std::to_string(lineno) +
                           ": chunk '" + c.id +
                           "' token_count disagrees with its token list");
    } else {
      c.token_count = c.tokens.size();
    }
    set.chunks.push_back(std::move(c));
  }
  return set;
}

void write_labels_jsonl(const std::filesystem::path& path,
                        const std::vector<std::pair<std::string, Label>>& labels) {
  auto out = open_out(path);
  for (const auto& [id, label] : labels) {
    json j;
    j["id"] = id;
    j["label"] = std::string(1, label_char(label));
    out << j.dump() << '\n';
  }
  flush_or_fail(out, path);
}

std::vector<std::pair<std::string, Label>> read_labels_jsonl(
    const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::pair<std::string, Label>> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = parse_line(line, path, lineno);
    labels.emplace_back(j.at("id").get<std::string>(),
                        parse_label(j.at("label").get<std::string>()));
  }
  return labels;
}

}  // namespace otkit

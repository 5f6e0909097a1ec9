#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "otkit/corpus.hpp"

// File formats.
//
// Documents and chunks travel as JSON Lines (one object per line); models
// and reports as single JSON documents.  All JSON is written with sorted
// keys and a trailing newline so that identical data yields identical
// bytes — reproducibility checks diff files directly.

namespace otkit {

using json = nlohmann::json;

// --- generic helpers --------------------------------------------------------

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

// --- documents ---------------------------------------------------------------
// One object per line:
//   {"id": ..., "text": ...}           or
//   {"id": ..., "tokens": [...], "pos": [...]}
// with optional "label" ("O"/"T") and "domain".  Unknown keys are ignored.

std::vector<Document> read_documents_jsonl(const std::filesystem::path& path);
void write_documents_jsonl(const std::filesystem::path& path,
                           const std::vector<Document>& docs);

// --- chunks -------------------------------------------------------------------
// One object per line with id, token_count, source_doc_ids and, when known,
// label/domain.  Token and pos lists are emitted only when emit_tokens is
// set; chunk files without tokens can still be scored but not re-featurized.
// The first line is a header object carrying target_size and provenance.

void write_chunks_jsonl(const std::filesystem::path& path, const ChunkSet& set,
                        bool emit_tokens);
ChunkSet read_chunks_jsonl(const std::filesystem::path& path);

// --- labels -------------------------------------------------------------------
// One {"id": ..., "label": "O"|"T"} object per line, in the given order.

void write_labels_jsonl(const std::filesystem::path& path,
                        const std::vector<std::pair<std::string, Label>>& labels);
std::vector<std::pair<std::string, Label>> read_labels_jsonl(
    const std::filesystem::path& path);

}  // namespace otkit

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace ragkit::ingest {

struct DocumentMeta {
    std::string doc_id;
    std::string company;
    std::string quarter;      // e.g. "Q1"
    std::string fiscal_year;  // e.g. "FY2024"
    std::string source_path;
};

/// A contiguous span of a source document. Offsets count Unicode code
/// points; `text` is always byte-identical to the source substring.
struct DocumentChunk {
    std::string chunk_id;
    std::string doc_id;
    std::string text;
    std::size_t start_char = 0;
    std::size_t end_char = 0;  // exclusive
    DocumentMeta meta;
};

struct ChunkingConfig {
    std::size_t chunk_size = 1024;    // code points
    std::size_t chunk_overlap = 0;    // code points
    std::vector<std::string> separators = default_separators();

    static std::vector<std::string> default_separators();

    /// Table-style configuration for the similarity-search path: 1024 / 0.
    static ChunkingConfig vector_preset();
    /// Configuration for the graph-construction path: 2024 / 204.
    static ChunkingConfig kg_preset();

    void validate() const;  // throws Error(argument) on overlap >= size etc.
};

/// Reads a JSON manifest (array of {file, doc_id, company, quarter,
/// fiscal_year}) and loads each referenced file as UTF-8 text. Documents
/// come back in manifest order.
std::vector<std::pair<std::string, DocumentMeta>> load_corpus(
    const std::filesystem::path& root, const std::filesystem::path& manifest);

/// Recursive character splitting. Tries separators in ladder order, cuts
/// after each occurrence, then greedily merges adjacent pieces up to
/// chunk_size with at most chunk_overlap code points shared between
/// consecutive chunks. Chunk spans tile the source text, so concatenating
/// chunks with overlaps removed reproduces the input byte-for-byte.
std::vector<DocumentChunk> split_recursive(const std::string& text,
                                           const ChunkingConfig& cfg,
                                           const DocumentMeta& meta);

}  // namespace ragkit::ingest

#pragma once

#include <cstdint>
#include <filesystem>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "ragkit/ingest.hpp"
#include "ragkit/metadata_filter.hpp"
#include "ragkit/providers.hpp"

namespace ragkit::vectorstore {

struct IndexEntry {
    ingest::DocumentChunk chunk;
    providers::EmbeddingVector vector;
};

struct ScoredChunk {
    ingest::DocumentChunk chunk;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based
};

/// Exact-scoring cosine index over chunk embeddings. Queries scan every
/// entry passing the metadata filter and return the top k by score with
/// ties broken by ascending chunk_id, so results are reproducible and can
/// be checked against a brute-force oracle.
///
/// Readers share the index freely; upserts take exclusive access.
class VectorIndex {
public:
    explicit VectorIndex(std::size_t dim);

    VectorIndex(VectorIndex&& other) noexcept;
    VectorIndex& operator=(VectorIndex&& other) noexcept;

    /// Inserts or replaces entries keyed by chunk_id. Returns the number of
    /// entries written.
    std::size_t upsert(std::vector<IndexEntry> entries);

    std::vector<ScoredChunk> query(const providers::EmbeddingVector& qv, std::size_t k,
                                   const MetadataFilter& filter = {}) const;

    std::size_t size() const;
    std::size_t dim() const { return dim_; }

    // Persistence: versioned little-endian container, bit-exact round trips.
    // Layout: magic "RKVIDX01", u32 version, u32 dim, u64 count, then
    // length-prefixed records.
    void save(const std::filesystem::path& path) const;
    static VectorIndex load(const std::filesystem::path& path);

    struct FileInfo {
        std::uint32_t version = 0;
        std::size_t dim = 0;
        std::size_t count = 0;
    };
    /// Reads only the header.
    static FileInfo peek(const std::filesystem::path& path);

private:
    struct StoredEntry {
        IndexEntry entry;
        double norm = 0.0;
        std::string company_folded;
        std::string quarter_folded;
        std::string fiscal_year_folded;
    };

    static StoredEntry make_stored(IndexEntry entry);

    std::size_t dim_;
    std::vector<StoredEntry> entries_;
    std::unordered_map<std::string, std::size_t> by_chunk_id_;
    mutable std::shared_mutex mutex_;
};

}  // namespace ragkit::vectorstore

#include "ragkit/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ragkit/error.hpp"

namespace ragkit::ingest {

namespace {

// Byte offset of every code point, plus a trailing sentinel equal to the
// byte length. Continuation bytes (10xxxxxx) never start a code point.
std::vector<std::size_t> codepoint_offsets(const std::string& text) {
    std::vector<std::size_t> offsets;
    offsets.reserve(text.size() + 1);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
            offsets.push_back(i);
        }
    }
    offsets.push_back(text.size());
    return offsets;
}

struct Span {
    std::size_t start;  // code-point indices
    std::size_t end;
};

class SpanSplitter {
public:
    SpanSplitter(const std::string& text, const std::vector<std::size_t>& cp,
                 const ChunkingConfig& cfg)
        : text_(text), cp_(cp), cfg_(cfg) {}

    std::vector<Span> run() const {
        std::size_t total = cp_.size() - 1;
        if (total == 0) return {};
        std::vector<Span> pieces;
        atomize(0, total, 0, pieces);
        return merge(pieces);
    }

private:
    // Next occurrence of `sep` at or after code point `from`, strictly
    // before code point `limit`. Separators are ASCII so a byte search is
    // exact; the found byte offset always lands on a code-point start.
    std::size_t find_sep(const std::string& sep, std::size_t from,
                         std::size_t limit) const {
        std::size_t byte_pos = text_.find(sep, cp_[from]);
        if (byte_pos == std::string::npos || byte_pos >= cp_[limit]) return npos;
        auto it = std::lower_bound(cp_.begin(), cp_.end(), byte_pos);
        return static_cast<std::size_t>(it - cp_.begin());
    }

    void atomize(std::size_t start, std::size_t end, std::size_t sep_idx,
                 std::vector<Span>& out) const {
        if (end - start <= cfg_.chunk_size) {
            out.push_back({start, end});
            return;
        }
        for (std::size_t si = sep_idx; si < cfg_.separators.size(); ++si) {
            const std::string& sep = cfg_.separators[si];
            if (sep.empty()) {
                for (std::size_t i = start; i < end; ++i) out.push_back({i, i + 1});
                return;
            }
            std::vector<std::size_t> bounds;
            std::size_t pos = find_sep(sep, start, end);
            while (pos != npos) {
                std::size_t b = pos + sep.size();  // ASCII: bytes == code points
                if (b >= end) break;
                bounds.push_back(b);
                pos = find_sep(sep, b, end);
            }
            if (bounds.empty()) continue;  // separator never cuts this span
            std::size_t prev = start;
            bounds.push_back(end);
            for (std::size_t b : bounds) {
                if (b - prev <= cfg_.chunk_size) {
                    out.push_back({prev, b});
                } else {
                    atomize(prev, b, si + 1, out);
                }
                prev = b;
            }
            return;
        }
        for (std::size_t i = start; i < end; i += cfg_.chunk_size) {
            out.push_back({i, std::min(i + cfg_.chunk_size, end)});
        }
    }

    // Greedy merge with an overlap budget. A chunk is emitted when the next
    // piece would overflow chunk_size; the window then drops front pieces
    // until the retained suffix fits inside chunk_overlap and the incoming
    // piece fits inside chunk_size.
    std::vector<Span> merge(const std::vector<Span>& pieces) const {
        std::vector<Span> chunks;
        std::deque<Span> win;
        for (const Span& p : pieces) {
            if (!win.empty() && p.end - win.front().start > cfg_.chunk_size) {
                chunks.push_back({win.front().start, win.back().end});
                while (!win.empty() &&
                       (win.back().end - win.front().start > cfg_.chunk_overlap ||
                        p.end - win.front().start > cfg_.chunk_size)) {
                    win.pop_front();
                }
            }
            win.push_back(p);
        }
        if (!win.empty()) chunks.push_back({win.front().start, win.back().end});
        return chunks;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    const std::string& text_;
    const std::vector<std::size_t>& cp_;
    const ChunkingConfig& cfg_;
};

std::string make_chunk_id(const std::string& doc_id, std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%05zu", index);
    return doc_id + buf;
}

}  // namespace

std::vector<std::string> ChunkingConfig::default_separators() {
    return {"\n\n", "\n", " ", ""};
}

ChunkingConfig ChunkingConfig::vector_preset() {
    return ChunkingConfig{1024, 0, default_separators()};
}

ChunkingConfig ChunkingConfig::kg_preset() {
    return ChunkingConfig{2024, 204, default_separators()};
}

void ChunkingConfig::validate() const {
    if (chunk_size == 0) {
        throw Error(ErrorKind::argument, "chunk_size must be positive");
    }
    if (chunk_overlap >= chunk_size) {
        throw Error(ErrorKind::argument,
                    "chunk_overlap (" + std::to_string(chunk_overlap) +
                        ") must be smaller than chunk_size (" +
                        std::to_string(chunk_size) + ")");
    }
    if (separators.empty()) {
        throw Error(ErrorKind::argument, "separator ladder must not be empty");
    }
}

std::vector<std::pair<std::string, DocumentMeta>> load_corpus(
    const std::filesystem::path& root, const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) {
        throw Error(ErrorKind::load,
                    "cannot open corpus manifest " + manifest.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::schema,
                    "manifest " + manifest.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_array()) {
        throw Error(ErrorKind::schema,
                    "manifest " + manifest.string() + " must be a JSON array");
    }

    std::vector<std::pair<std::string, DocumentMeta>> corpus;
    std::set<std::string> seen_ids;
    for (const auto& row : doc) {
        for (const char* key : {"file", "doc_id", "company", "quarter", "fiscal_year"}) {
            if (!row.contains(key) || !row[key].is_string()) {
                throw Error(ErrorKind::schema,
                            std::string("manifest row missing string field '") + key + "'");
            }
        }
        DocumentMeta meta;
        meta.doc_id = row["doc_id"].get<std::string>();
        meta.company = row["company"].get<std::string>();
        meta.quarter = row["quarter"].get<std::string>();
        meta.fiscal_year = row["fiscal_year"].get<std::string>();
        if (meta.company.empty() || meta.quarter.empty() || meta.fiscal_year.empty()) {
            throw Error(ErrorKind::validation,
                        "doc '" + meta.doc_id +
                            "': company, quarter and fiscal_year must be non-empty");
        }
        if (!seen_ids.insert(meta.doc_id).second) {
            throw Error(ErrorKind::validation,
                        "duplicate doc_id '" + meta.doc_id + "' in manifest");
        }
        std::filesystem::path file = root / row["file"].get<std::string>();
        meta.source_path = file.string();

        std::ifstream text_in(file, std::ios::binary);
        if (!text_in) {
            throw Error(ErrorKind::load, "cannot open document " + file.string());
        }
        std::ostringstream buf;
        buf << text_in.rdbuf();
        corpus.emplace_back(buf.str(), std::move(meta));
    }
    return corpus;
}

std::vector<DocumentChunk> split_recursive(const std::string& text,
                                           const ChunkingConfig& cfg,
                                           const DocumentMeta& meta) {
    cfg.validate();
    if (text.empty()) return {};

    const std::vector<std::size_t> cp = codepoint_offsets(text);
    const std::vector<Span> spans = SpanSplitter(text, cp, cfg).run();

    std::vector<DocumentChunk> chunks;
    chunks.reserve(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        DocumentChunk c;
        c.chunk_id = make_chunk_id(meta.doc_id, i);
        c.doc_id = meta.doc_id;
        c.start_char = spans[i].start;
        c.end_char = spans[i].end;
        c.text = text.substr(cp[spans[i].start], cp[spans[i].end] - cp[spans[i].start]);
        c.meta = meta;
        chunks.push_back(std::move(c));
    }
    return chunks;
}

}  // namespace ragkit::ingest

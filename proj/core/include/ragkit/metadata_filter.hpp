#pragma once

#include <map>
#include <optional>
#include <string>

#include "ragkit/ingest.hpp"

namespace ragkit::vectorstore {

/// Company / quarter / fiscal-year constraint applied at retrieval time.
/// An absent field is a wildcard; matching is exact after ASCII case
/// folding, so "Infosys" and "INFOSYS" select the same segments.
struct MetadataFilter {
    std::optional<std::string> company;
    std::optional<std::string> quarter;
    std::optional<std::string> fiscal_year;

    bool matches(const ingest::DocumentMeta& meta) const;
    bool matches(const std::map<std::string, std::string>& metadata) const;
    bool is_wildcard() const { return !company && !quarter && !fiscal_year; }
};

std::string fold_case(std::string_view s);

}  // namespace ragkit::vectorstore

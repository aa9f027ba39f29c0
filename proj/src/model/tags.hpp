#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "model/records.hpp"

namespace kpforge::model {

// A `<tag>…</tag>` occurrence; byte_begin/byte_end delimit exactly the body
// within the source text.
struct TaggedSpan {
    std::string tag;
    std::string body;
    size_t byte_begin = 0;
    size_t byte_end = 0;
};

// All non-overlapping `<tag>…</tag>` spans in document order. Only the exact
// tokens `<tag>` / `</tag>` are recognized; any other `<` is literal text.
// Throws UnbalancedTags on a dangling open/close or a nested same-tag open.
std::vector<TaggedSpan> extract_tagged(std::string_view raw, std::string_view tag);

// Parses labeling-model completions: one TopicAnnotation per <AN> block, the
// <l> body as topic label, each <k> body a key point. Surrounding prose is
// ignored. Exact duplicate key points within a block are collapsed to the
// first occurrence. Throws MalformedMarkup when a block lacks exactly one
// non-empty <l> or has zero <k> tags; UnbalancedTags propagates.
std::vector<TopicAnnotation> parse_annotation(std::string_view raw);

// Number of interrogative sub-parts, counted as '?' characters.
int count_subquestions(std::string_view question);

}  // namespace kpforge::model

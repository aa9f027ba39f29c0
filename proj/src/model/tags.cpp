#include "model/tags.hpp"

#include <algorithm>

#include "util/errors.hpp"
#include "util/text.hpp"

namespace kpforge::model {

std::vector<TaggedSpan> extract_tagged(std::string_view raw, std::string_view tag) {
    const std::string open = "<" + std::string(tag) + ">";
    const std::string close = "</" + std::string(tag) + ">";

    std::vector<TaggedSpan> spans;
    size_t pos = 0;
    ptrdiff_t open_at = -1;
    while (pos < raw.size()) {
        size_t next_open = raw.find(open, pos);
        size_t next_close = raw.find(close, pos);
        if (next_open == std::string_view::npos && next_close == std::string_view::npos) break;

        if (next_open < next_close) {
            if (open_at >= 0)
                throw UnbalancedTags("nested <" + std::string(tag) + "> at byte " + std::to_string(next_open));
            open_at = static_cast<ptrdiff_t>(next_open + open.size());
            pos = next_open + open.size();
        } else {
            if (open_at < 0)
                throw UnbalancedTags("stray </" + std::string(tag) + "> at byte " + std::to_string(next_close));
            TaggedSpan span;
            span.tag = std::string(tag);
            span.byte_begin = static_cast<size_t>(open_at);
            span.byte_end = next_close;
            span.body = std::string(raw.substr(span.byte_begin, span.byte_end - span.byte_begin));
            spans.push_back(std::move(span));
            open_at = -1;
            pos = next_close + close.size();
        }
    }
    if (open_at >= 0) throw UnbalancedTags("unclosed <" + std::string(tag) + ">");
    return spans;
}

std::vector<TopicAnnotation> parse_annotation(std::string_view raw) {
    std::vector<TopicAnnotation> annotations;
    for (const TaggedSpan& block : extract_tagged(raw, "AN")) {
        auto labels = extract_tagged(block.body, "l");
        if (labels.size() != 1)
            throw MalformedMarkup("<AN> block needs exactly one <l>, found " + std::to_string(labels.size()));
        TopicAnnotation ann;
        ann.topic_label = text::trim(labels[0].body);
        if (ann.topic_label.empty()) throw MalformedMarkup("<l> body is empty");

        for (const TaggedSpan& k : extract_tagged(block.body, "k")) {
            std::string kp = text::trim(k.body);
            if (kp.empty()) continue;
            if (std::find(ann.key_points.begin(), ann.key_points.end(), kp) == ann.key_points.end())
                ann.key_points.push_back(std::move(kp));
        }
        if (ann.key_points.empty()) throw MalformedMarkup("<AN> block for '" + ann.topic_label + "' has no <k> tags");
        annotations.push_back(std::move(ann));
    }
    return annotations;
}

int count_subquestions(std::string_view question) {
    return static_cast<int>(std::count(question.begin(), question.end(), '?'));
}

}  // namespace kpforge::model

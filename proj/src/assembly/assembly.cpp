#include "assembly/assembly.hpp"

#include <unordered_map>

#include "mathexpr/answers.hpp"
#include "model/tags.hpp"
#include "util/errors.hpp"
#include "util/text.hpp"

namespace kpforge::assembly {

using nlohmann::json;

json TrainingExample::to_json() const {
    json j;
    j["question"] = question;
    j["answer"] = answer;
    j["rendered"] = rendered;
    j["provenance"] = provenance;
    return j;
}

TrainingExample TrainingExample::from_json(const json& j) {
    TrainingExample e;
    e.question = j.at("question").get<std::string>();
    e.answer = j.at("answer").get<std::string>();
    e.rendered = j.value("rendered", "");
    e.provenance = j.value("provenance", json::object());
    return e;
}

std::vector<std::string> rephrase(const std::string& question, const std::string& solution,
                                  gateway::Gateway& gw, const gateway::PromptCatalog& prompts) {
    const auto& tpl = prompts.get("rephrasing");
    std::string rendered = gateway::render_prompt(tpl, {{"question", question}, {"solution", solution}});

    gateway::ChatRequest req;
    req.template_name = tpl.name;
    req.messages = {{gateway::Role::user, rendered}};
    req.temperature = 0.7;
    req.top_p = 0.95;
    req.n_samples = 1;

    std::string completion = gw.chat(req).at(0);
    auto spans = model::extract_tagged(completion, "Q");
    if (spans.empty()) throw MalformedMarkup("rephrasing completion contained no <Q> spans");

    std::vector<std::string> variants;
    for (const auto& span : spans) {
        if (variants.size() == 10) break;
        std::string v = text::trim(span.body);
        if (!v.empty()) variants.push_back(std::move(v));
    }
    if (variants.empty()) throw MalformedMarkup("rephrasing completion contained only empty <Q> spans");
    return variants;
}

namespace {
constexpr const char* kChatMiddle = "\nEnclose the final answer using \\boxed{}.\n\nAssistant: ";
constexpr const char* kChatPrefix = "User: ";
}  // namespace

std::string render_chat(const std::string& question, const std::string& answer) {
    if (text::trim(question).empty() || text::trim(answer).empty())
        throw std::invalid_argument("render_chat: question and answer must be non-empty");
    return kChatPrefix + question + kChatMiddle + answer;
}

bool split_chat(const std::string& rendered, std::string* question, std::string* answer) {
    if (!text::starts_with(rendered, kChatPrefix)) return false;
    size_t mid = rendered.find(kChatMiddle);
    if (mid == std::string::npos) return false;
    *question = rendered.substr(std::string(kChatPrefix).size(), mid - std::string(kChatPrefix).size());
    *answer = rendered.substr(mid + std::string(kChatMiddle).size());
    return true;
}

FilterResult filter_examples(const std::vector<TrainingExample>& examples, int max_digit_run,
                             int max_subquestions) {
    FilterResult result;
    for (size_t i = 0; i < examples.size(); ++i) {
        const TrainingExample& e = examples[i];
        if (text::trim(e.answer).empty()) {
            result.dropped.push_back({i, "empty_answer"});
            continue;
        }
        size_t run = std::max(text::longest_digit_run(e.question), text::longest_digit_run(e.answer));
        if (run > static_cast<size_t>(max_digit_run)) {
            result.dropped.push_back({i, "long_digit_run"});
            continue;
        }
        if (model::count_subquestions(e.question) > max_subquestions) {
            result.dropped.push_back({i, "too_many_subquestions"});
            continue;
        }
        bool has_final = !mathexpr::extract_answers(e.answer).empty();
        if (!has_final) {
            result.dropped.push_back({i, "no_final_answer"});
            continue;
        }
        result.kept.push_back(i);
    }
    return result;
}

DedupResult minhash_dedup(const std::vector<TrainingExample>& examples, const MinHashParams& params) {
    std::vector<std::string> texts;
    texts.reserve(examples.size());
    for (const auto& e : examples) texts.push_back(e.question + "\n" + e.answer);
    return minhash_dedup_texts(texts, params);
}

json ContaminationReport::to_json() const {
    json j;
    json split_arr = json::array();
    for (const auto& split : splits) {
        auto hits_json = [](const std::vector<ContaminationHit>& hits) {
            json arr = json::array();
            for (const auto& h : hits)
                arr.push_back({{"test_id", h.test_id}, {"train_id", h.train_id}, {"ngram", h.ngram}});
            return arr;
        };
        split_arr.push_back({{"split", split.split_name},
                             {"items_checked", split.items_checked},
                             {"question_hits", hits_json(split.question_hits)},
                             {"solution_hits", hits_json(split.solution_hits)}});
    }
    j["splits"] = std::move(split_arr);
    j["total_question_hits"] = total_question_hits;
    j["total_solution_hits"] = total_solution_hits;
    return j;
}

namespace {

// n-gram text -> id of the first train item containing it
using NgramIndex = std::unordered_map<std::string, std::string>;

NgramIndex build_ngram_index(const std::vector<CorpusItem>& items, int n) {
    NgramIndex index;
    for (const auto& item : items) {
        auto words = text::split_words(text::normalize_ws(item.text));
        if (words.size() < static_cast<size_t>(n)) continue;
        for (size_t i = 0; i + n <= words.size(); ++i) {
            std::string gram;
            for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
                if (j) gram += ' ';
                gram += words[i + j];
            }
            index.emplace(std::move(gram), item.id);  // first occurrence wins
        }
    }
    return index;
}

// First n-gram of `item` present in the index, if any.
std::optional<ContaminationHit> first_hit(const CorpusItem& item, const NgramIndex& index, int n) {
    auto words = text::split_words(text::normalize_ws(item.text));
    if (words.size() < static_cast<size_t>(n)) return std::nullopt;
    for (size_t i = 0; i + n <= words.size(); ++i) {
        std::string gram;
        for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
            if (j) gram += ' ';
            gram += words[i + j];
        }
        auto it = index.find(gram);
        if (it != index.end()) return ContaminationHit{item.id, it->second, gram};
    }
    return std::nullopt;
}

}  // namespace

ContaminationReport contamination_check(const std::vector<CorpusItem>& train_questions,
                                        const std::vector<CorpusItem>& train_solutions,
                                        const std::vector<TestSplit>& test_sets, int n_q, int n_s) {
    if (n_q < 1 || n_s < 1) throw std::invalid_argument("n-gram sizes must be >= 1");

    NgramIndex question_index = build_ngram_index(train_questions, n_q);
    NgramIndex solution_index = build_ngram_index(train_solutions, n_s);

    ContaminationReport report;
    for (const auto& split : test_sets) {
        SplitReport sr;
        sr.split_name = split.name;
        sr.items_checked = split.questions.size();
        for (const auto& q : split.questions)
            if (auto hit = first_hit(q, question_index, n_q)) sr.question_hits.push_back(*hit);
        for (const auto& s : split.solutions)
            if (auto hit = first_hit(s, solution_index, n_s)) sr.solution_hits.push_back(*hit);
        report.total_question_hits += sr.question_hits.size();
        report.total_solution_hits += sr.solution_hits.size();
        report.splits.push_back(std::move(sr));
    }
    return report;
}

}  // namespace kpforge::assembly

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "assembly/minhash.hpp"
#include "gateway/gateway.hpp"

namespace kpforge::assembly {

struct TrainingExample {
    std::string question;
    std::string answer;
    std::string rendered;       // chat-template text
    nlohmann::json provenance;  // stage, source ids, rephrase index

    nlohmann::json to_json() const;
    static TrainingExample from_json(const nlohmann::json& j);
};

// Up to 10 question variants from the rephrasing prompt, each paired with the
// original retained solution. Fewer than 10 spans is accepted (and counted by
// the caller); zero spans throws MalformedMarkup.
std::vector<std::string> rephrase(const std::string& question, const std::string& solution,
                                  gateway::Gateway& gw, const gateway::PromptCatalog& prompts);

// `User: {question}\nEnclose the final answer using \boxed{}.\n\nAssistant:
// {answer}` exactly, no trailing newline.
std::string render_chat(const std::string& question, const std::string& answer);

// Splits a rendered example back into (question, answer); inverse of
// render_chat on its image.
bool split_chat(const std::string& rendered, std::string* question, std::string* answer);

struct FilterDrop {
    size_t index = 0;
    std::string reason;  // empty_answer / long_digit_run / too_many_subquestions / no_final_answer
};

struct FilterResult {
    std::vector<size_t> kept;  // input order preserved
    std::vector<FilterDrop> dropped;
};

FilterResult filter_examples(const std::vector<TrainingExample>& examples, int max_digit_run,
                             int max_subquestions);

DedupResult minhash_dedup(const std::vector<TrainingExample>& examples, const MinHashParams& params);

struct CorpusItem {
    std::string id;
    std::string text;
};

struct ContaminationHit {
    std::string test_id;
    std::string train_id;
    std::string ngram;
};

struct SplitReport {
    std::string split_name;
    std::vector<ContaminationHit> question_hits;  // at most one per test item
    std::vector<ContaminationHit> solution_hits;
    size_t items_checked = 0;
};

struct ContaminationReport {
    std::vector<SplitReport> splits;
    size_t total_question_hits = 0;
    size_t total_solution_hits = 0;

    nlohmann::json to_json() const;
};

struct TestSplit {
    std::string name;
    std::vector<CorpusItem> questions;
    std::vector<CorpusItem> solutions;  // parallel ids with questions
};

// Word-level n-gram audit after lowercasing and whitespace normalization: a
// test item hits when any of its n-grams occurs in any train item.
ContaminationReport contamination_check(const std::vector<CorpusItem>& train_questions,
                                        const std::vector<CorpusItem>& train_solutions,
                                        const std::vector<TestSplit>& test_sets, int n_q, int n_s);

}  // namespace kpforge::assembly

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gateway/gateway.hpp"
#include "mathexpr/answers.hpp"
#include "tcpm/tcpm.hpp"

namespace kpforge::synthesis {

struct Provenance {
    std::vector<int> topic_ids;
    std::vector<std::string> exemplar_ids;
    std::vector<std::string> key_points;
};

struct SyntheticQuestion {
    std::string id;
    std::string text;
    Provenance provenance;
    std::optional<double> quality_score;  // in [0,1] once scored
    int sub_question_count = 0;

    nlohmann::json to_json() const;
    static SyntheticQuestion from_json(const nlohmann::json& j);
};

struct CandidateSolution {
    std::string question_id;
    int sample_index = 0;
    std::string prompt_variant;  // answering_v1..v5
    std::string text;
    mathexpr::AnswerSet answers;

    nlohmann::json to_json() const;
    static CandidateSolution from_json(const nlohmann::json& j);
};

// Per-sub-question grouping of candidate answers into equivalence classes
// (union-find transitive closure over pairwise `equivalent`).
struct AnswerClass {
    std::string representative;       // raw answer of the lowest sample index
    std::vector<int> member_indices;  // sample indices, ascending
};

struct ConsensusRecord {
    std::string question_id;
    int k = 0;                                      // samples drawn
    std::vector<std::vector<AnswerClass>> classes;  // per sub-question position
    std::vector<double> csv;                        // c_i = |largest class| / k
    std::vector<std::string> modal_answers;         // empty string when no class

    nlohmann::json to_json() const;
};

enum class VotingKind { non_voting, semi_voting, full_voting };

VotingKind voting_kind_from_string(const std::string& s);
std::string to_string(VotingKind k);

struct VotingStrategy {
    VotingKind kind = VotingKind::semi_voting;
    double csv_threshold = 0.1;  // ignored for non_voting
};

// Renders the generation prompt over the practice set and extracts the single
// <Q> span; throws MalformedMarkup on zero or multiple spans.
SyntheticQuestion generate_question(const tcpm::PracticeSet& ps, gateway::Gateway& gw,
                                    const gateway::PromptCatalog& prompts, const std::string& question_id,
                                    double temperature = 0.7);

// First floating-point literal in the evaluation completion, clamped to
// [0,1]; throws UnparseableScore when none exists.
double score_question(const SyntheticQuestion& q, const tcpm::PracticeSet& ps, gateway::Gateway& gw,
                      const gateway::PromptCatalog& prompts);

struct FilterOutcome {
    std::vector<SyntheticQuestion> accepted;
    std::vector<std::pair<SyntheticQuestion, std::string>> rejected;  // with reason
};

// score >= threshold accepts (inclusive boundary).
FilterOutcome filter_questions(const std::vector<SyntheticQuestion>& qs, double threshold);

// k nucleus-sampled solutions; sample i uses prompt variant v(i mod 5 + 1)
// and the practice exemplar as the few-shot demonstration.
std::vector<CandidateSolution> sample_solutions(const SyntheticQuestion& q,
                                                const model::SeedProblem& exemplar, gateway::Gateway& gw,
                                                const gateway::PromptCatalog& prompts, int k,
                                                double temperature = 0.75, double top_p = 0.95);

ConsensusRecord consensus(const std::vector<CandidateSolution>& cands,
                          const mathexpr::Tolerances& tol = {});

// Returns indices into `solutions` retained under the strategy.
std::vector<size_t> apply_voting(const ConsensusRecord& rec, const VotingStrategy& strat,
                                 const std::vector<CandidateSolution>& solutions);

// Formats key points + exemplar problems for the generation/evaluation
// prompts; returns the block text and the total key-point count.
std::pair<std::string, int> format_practice_blocks(const tcpm::PracticeSet& ps);

}  // namespace kpforge::synthesis

#include "synthesis/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "model/tags.hpp"
#include "util/errors.hpp"
#include "util/text.hpp"

namespace kpforge::synthesis {

using nlohmann::json;

json SyntheticQuestion::to_json() const {
    json j;
    j["id"] = id;
    j["text"] = text;
    j["provenance"] = {{"topic_ids", provenance.topic_ids},
                       {"exemplar_ids", provenance.exemplar_ids},
                       {"key_points", provenance.key_points}};
    if (quality_score) j["quality_score"] = *quality_score;
    j["sub_question_count"] = sub_question_count;
    return j;
}

SyntheticQuestion SyntheticQuestion::from_json(const json& j) {
    SyntheticQuestion q;
    q.id = j.at("id").get<std::string>();
    q.text = j.at("text").get<std::string>();
    const json& p = j.at("provenance");
    q.provenance.topic_ids = p.at("topic_ids").get<std::vector<int>>();
    q.provenance.exemplar_ids = p.at("exemplar_ids").get<std::vector<std::string>>();
    q.provenance.key_points = p.at("key_points").get<std::vector<std::string>>();
    if (j.contains("quality_score")) q.quality_score = j.at("quality_score").get<double>();
    q.sub_question_count = j.at("sub_question_count").get<int>();
    return q;
}

json CandidateSolution::to_json() const {
    json j;
    j["question_id"] = question_id;
    j["sample_index"] = sample_index;
    j["prompt_variant"] = prompt_variant;
    j["text"] = text;
    json answers_json = json::array();
    for (const auto& a : answers.answers)
        answers_json.push_back({{"raw", a.raw}, {"parse_ok", a.parse_ok}});
    j["answers"] = std::move(answers_json);
    return j;
}

CandidateSolution CandidateSolution::from_json(const json& j) {
    CandidateSolution c;
    c.question_id = j.at("question_id").get<std::string>();
    c.sample_index = j.at("sample_index").get<int>();
    c.prompt_variant = j.at("prompt_variant").get<std::string>();
    c.text = j.at("text").get<std::string>();
    for (const auto& a : j.at("answers")) {
        mathexpr::Answer ans;
        ans.raw = a.at("raw").get<std::string>();
        ans.value = mathexpr::canonicalize(ans.raw);
        ans.parse_ok = a.at("parse_ok").get<bool>();
        c.answers.answers.push_back(std::move(ans));
    }
    return c;
}

json ConsensusRecord::to_json() const {
    json j;
    j["question_id"] = question_id;
    j["k"] = k;
    j["csv"] = csv;
    j["modal_answers"] = modal_answers;
    json positions = json::array();
    for (const auto& pos : classes) {
        json cls = json::array();
        for (const auto& c : pos)
            cls.push_back({{"representative", c.representative}, {"members", c.member_indices}});
        positions.push_back(std::move(cls));
    }
    j["classes"] = std::move(positions);
    return j;
}

VotingKind voting_kind_from_string(const std::string& s) {
    if (s == "non_voting") return VotingKind::non_voting;
    if (s == "semi_voting") return VotingKind::semi_voting;
    if (s == "full_voting") return VotingKind::full_voting;
    throw ConfigInvalid("unknown voting strategy: " + s);
}

std::string to_string(VotingKind k) {
    switch (k) {
        case VotingKind::non_voting: return "non_voting";
        case VotingKind::semi_voting: return "semi_voting";
        default: return "full_voting";
    }
}

std::pair<std::string, int> format_practice_blocks(const tcpm::PracticeSet& ps) {
    std::string out;
    int kp_total = 0;
    int topic_no = 0;
    for (const auto& entry : ps.entries) {
        ++topic_no;
        out += "Key points of topic " + std::to_string(topic_no) + ":\n";
        for (size_t i = 0; i < entry.key_points.size(); ++i) {
            out += std::to_string(i + 1) + ". " + entry.key_points[i] + "\n";
            ++kp_total;
        }
        out += "Example problem:\n" + entry.exemplar.question + "\nExample solution:\n" +
               entry.exemplar.solution + "\n\n";
    }
    return {out, kp_total};
}

SyntheticQuestion generate_question(const tcpm::PracticeSet& ps, gateway::Gateway& gw,
                                    const gateway::PromptCatalog& prompts, const std::string& question_id,
                                    double temperature) {
    auto [blocks, kp_count] = format_practice_blocks(ps);
    const auto& tpl = prompts.get("question_generation");
    std::string rendered = gateway::render_prompt(
        tpl, {{"kp_practice_blocks", blocks}, {"kp_count", std::to_string(kp_count)}});

    gateway::ChatRequest req;
    req.template_name = tpl.name;
    req.messages = {{gateway::Role::user, rendered}};
    req.temperature = temperature;
    req.top_p = 0.95;
    req.n_samples = 1;

    std::string completion = gw.chat(req).at(0);
    auto spans = model::extract_tagged(completion, "Q");
    if (spans.size() != 1)
        throw MalformedMarkup("expected one <Q> span, found " + std::to_string(spans.size()));

    SyntheticQuestion q;
    q.id = question_id;
    q.text = text::trim(spans[0].body);
    q.sub_question_count = model::count_subquestions(q.text);
    for (const auto& entry : ps.entries) {
        q.provenance.topic_ids.push_back(entry.topic_id);
        q.provenance.exemplar_ids.push_back(entry.exemplar.id);
        for (const auto& kp : entry.key_points) q.provenance.key_points.push_back(kp);
    }
    return q;
}

double score_question(const SyntheticQuestion& q, const tcpm::PracticeSet& ps, gateway::Gateway& gw,
                      const gateway::PromptCatalog& prompts) {
    auto [blocks, kp_count] = format_practice_blocks(ps);
    const auto& tpl = prompts.get("question_evaluation");
    std::string rendered = gateway::render_prompt(
        tpl, {{"kp_practice_blocks", blocks}, {"kp_count", std::to_string(kp_count)}, {"question", q.text}});

    gateway::ChatRequest req;
    req.template_name = tpl.name;
    req.messages = {{gateway::Role::user, rendered}};
    req.temperature = 0.0;
    req.top_p = 1.0;
    req.n_samples = 1;

    std::string completion = gw.chat(req).at(0);

    // first floating-point literal anywhere in the completion
    for (size_t i = 0; i < completion.size(); ++i) {
        char c = completion[i];
        if (!std::isdigit(static_cast<unsigned char>(c))) continue;
        size_t j = i;
        while (j < completion.size() && std::isdigit(static_cast<unsigned char>(completion[j]))) ++j;
        if (j < completion.size() && completion[j] == '.') {
            ++j;
            while (j < completion.size() && std::isdigit(static_cast<unsigned char>(completion[j]))) ++j;
        }
        double value = std::strtod(completion.substr(i, j - i).c_str(), nullptr);
        return std::clamp(value, 0.0, 1.0);
    }
    throw UnparseableScore("no numeric literal in evaluation completion");
}

FilterOutcome filter_questions(const std::vector<SyntheticQuestion>& qs, double threshold) {
    FilterOutcome out;
    for (const auto& q : qs) {
        if (!q.quality_score) throw std::invalid_argument("filter_questions: unscored question " + q.id);
        if (*q.quality_score >= threshold) {
            out.accepted.push_back(q);
        } else {
            out.rejected.push_back({q, "score " + std::to_string(*q.quality_score) + " below threshold"});
        }
    }
    return out;
}

std::vector<CandidateSolution> sample_solutions(const SyntheticQuestion& q,
                                                const model::SeedProblem& exemplar, gateway::Gateway& gw,
                                                const gateway::PromptCatalog& prompts, int k,
                                                double temperature, double top_p) {
    if (k < 1) throw std::invalid_argument("sample_solutions: k must be >= 1");

    // Sample i uses answering_v(i mod 5 + 1); indices for one variant are
    // gathered into a single n_samples request so each sample keys its own
    // CacheKey.
    std::vector<CandidateSolution> out(static_cast<size_t>(k));
    for (int variant = 0; variant < 5; ++variant) {
        std::vector<int> indices;
        for (int i = variant; i < k; i += 5) indices.push_back(i);
        if (indices.empty()) continue;

        const auto& tpl = prompts.get("answering_v" + std::to_string(variant + 1));
        std::string rendered = gateway::render_prompt(tpl, {{"demo_question", exemplar.question},
                                                            {"demo_answer", exemplar.solution},
                                                            {"question", q.text}});
        gateway::ChatRequest req;
        req.template_name = tpl.name;
        req.messages = {{gateway::Role::user, rendered}};
        req.temperature = temperature;
        req.top_p = top_p;
        req.n_samples = static_cast<int>(indices.size());

        std::vector<std::string> completions = gw.chat(req);
        for (size_t slot = 0; slot < indices.size(); ++slot) {
            CandidateSolution cand;
            cand.question_id = q.id;
            cand.sample_index = indices[slot];
            cand.prompt_variant = tpl.name;
            cand.text = completions[slot];
            cand.answers = mathexpr::extract_answers(cand.text);
            out[static_cast<size_t>(indices[slot])] = std::move(cand);
        }
    }
    return out;
}

namespace {

// Union-find over sample slots at one answer position.
struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ConsensusRecord consensus(const std::vector<CandidateSolution>& cands, const mathexpr::Tolerances& tol) {
    ConsensusRecord rec;
    rec.k = static_cast<int>(cands.size());
    if (cands.empty()) return rec;
    rec.question_id = cands.front().question_id;
    for (const auto& c : cands)
        if (c.question_id != rec.question_id)
            throw std::invalid_argument("consensus over mixed question ids");

    size_t arity = 0;
    for (const auto& c : cands) arity = std::max(arity, c.answers.size());

    for (size_t pos = 0; pos < arity; ++pos) {
        struct Vote {
            int sample_index;
            const mathexpr::Answer* answer;
        };
        std::vector<Vote> votes;
        for (const auto& c : cands)
            if (pos < c.answers.size()) votes.push_back({c.sample_index, &c.answers.answers[pos]});
        std::sort(votes.begin(), votes.end(),
                  [](const Vote& a, const Vote& b) { return a.sample_index < b.sample_index; });

        DisjointSet ds(votes.size());
        for (size_t a = 0; a < votes.size(); ++a)
            for (size_t b = a + 1; b < votes.size(); ++b)
                if (mathexpr::equivalent_values(votes[a].answer->value, votes[b].answer->value, tol))
                    ds.unite(static_cast<int>(a), static_cast<int>(b));

        std::map<int, AnswerClass> by_root;
        for (size_t i = 0; i < votes.size(); ++i) {
            AnswerClass& cls = by_root[ds.find(static_cast<int>(i))];
            if (cls.member_indices.empty()) cls.representative = votes[i].answer->raw;
            cls.member_indices.push_back(votes[i].sample_index);
        }

        std::vector<AnswerClass> classes;
        for (auto& [root, cls] : by_root) classes.push_back(std::move(cls));
        // largest class first; ties by lowest member sample index
        std::sort(classes.begin(), classes.end(), [](const AnswerClass& a, const AnswerClass& b) {
            if (a.member_indices.size() != b.member_indices.size())
                return a.member_indices.size() > b.member_indices.size();
            return a.member_indices.front() < b.member_indices.front();
        });

        double c_i = classes.empty() || rec.k == 0
                         ? 0.0
                         : static_cast<double>(classes.front().member_indices.size()) / rec.k;
        rec.csv.push_back(c_i);
        rec.modal_answers.push_back(classes.empty() ? std::string() : classes.front().representative);
        rec.classes.push_back(std::move(classes));
    }
    return rec;
}

namespace {

bool in_modal_class(const ConsensusRecord& rec, size_t pos, int sample_index) {
    if (pos >= rec.classes.size() || rec.classes[pos].empty()) return false;
    const auto& members = rec.classes[pos].front().member_indices;
    return std::find(members.begin(), members.end(), sample_index) != members.end();
}

}  // namespace

std::vector<size_t> apply_voting(const ConsensusRecord& rec, const VotingStrategy& strat,
                                 const std::vector<CandidateSolution>& solutions) {
    std::vector<size_t> retained;
    const size_t arity = rec.csv.size();

    for (size_t idx = 0; idx < solutions.size(); ++idx) {
        const CandidateSolution& sol = solutions[idx];
        bool keep = false;
        switch (strat.kind) {
            case VotingKind::non_voting:
                keep = true;
                break;
            case VotingKind::semi_voting: {
                if (arity <= 1) {
                    keep = arity == 1 && rec.csv[0] >= strat.csv_threshold &&
                           in_modal_class(rec, 0, sol.sample_index);
                } else {
                    // multi-sub-question: agreement with the modal class on at
                    // least one position that reaches the threshold
                    for (size_t pos = 0; pos < arity && !keep; ++pos)
                        keep = rec.csv[pos] >= strat.csv_threshold && in_modal_class(rec, pos, sol.sample_index);
                }
                break;
            }
            case VotingKind::full_voting: {
                if (arity == 0) break;
                double min_c = *std::min_element(rec.csv.begin(), rec.csv.end());
                if (min_c < strat.csv_threshold) break;
                keep = true;
                for (size_t pos = 0; pos < arity; ++pos)
                    keep = keep && in_modal_class(rec, pos, sol.sample_index);
                break;
            }
        }
        if (keep) retained.push_back(idx);
    }
    return retained;
}

}  // namespace kpforge::synthesis

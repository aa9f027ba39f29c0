#include "pipeline/config.hpp"

#include <fstream>

#include "util/errors.hpp"

namespace kpforge::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve(const fs::path& base_dir, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
}

void require_exists(const fs::path& p, const std::string& what) {
    if (!fs::exists(p)) throw ConfigInvalid(what + " not found: " + p.string());
}

}  // namespace

PipelineConfig PipelineConfig::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigInvalid("config is not valid JSON: " + path.string());

    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    PipelineConfig c;
    c.config_path = path;

    try {
        if (!j.contains("rng_seed")) throw ConfigInvalid("rng_seed is required (no wall-clock defaults)");
        c.rng_seed = j.at("rng_seed").get<uint64_t>();

        if (!j.contains("seed_corpora") || j.at("seed_corpora").empty())
            throw ConfigInvalid("seed_corpora must list at least one corpus file");
        for (const auto& sc : j.at("seed_corpora")) {
            SeedCorpus corpus;
            corpus.path = resolve(base, sc.at("path").get<std::string>());
            corpus.source = model::source_from_string(sc.value("source", "other"));
            require_exists(corpus.path, "seed corpus");
            c.seed_corpora.push_back(std::move(corpus));
        }

        c.output_dir = resolve(base, j.value("output_dir", "out"));
        c.prompts_dir = resolve(base, j.value("prompts_dir", "prompts"));
        require_exists(c.prompts_dir, "prompts directory");

        if (j.contains("provider")) {
            const json& p = j.at("provider");
            c.provider.mode = gateway::provider_mode_from_string(p.value("mode", "mock"));
            if (p.contains("cache_path"))
                c.provider.cache_path = resolve(base, p.at("cache_path").get<std::string>()).string();
            c.provider.max_calls = p.value("max_calls", c.provider.max_calls);
            c.provider.embed_dim = p.value("embed_dim", c.provider.embed_dim);
            c.provider.retries = p.value("retries", c.provider.retries);
            c.provider.backoff_initial_ms = p.value("backoff_initial_ms", c.provider.backoff_initial_ms);
            c.provider.max_in_flight = p.value("max_in_flight", c.provider.max_in_flight);
            c.provider.base_url = p.value("base_url", c.provider.base_url);
            c.provider.api_key_env = p.value("api_key_env", c.provider.api_key_env);
            c.provider.base_url_env = p.value("base_url_env", c.provider.base_url_env);
            c.provider.model = p.value("model", c.provider.model);
        }
        if (c.provider.mode == gateway::ProviderMode::replay && c.provider.cache_path.empty())
            throw ConfigInvalid("replay mode requires provider.cache_path");
        if (c.provider.max_calls < 0) throw ConfigInvalid("provider.max_calls must be >= 0");

        if (j.contains("clustering")) {
            const json& k = j.at("clustering");
            c.cluster_sim_threshold = k.value("sim_threshold", c.cluster_sim_threshold);
            c.min_cluster_kps = k.value("min_cluster_kps", c.min_cluster_kps);
        }
        if (!(c.cluster_sim_threshold > 0.0 && c.cluster_sim_threshold < 1.0))
            throw ConfigInvalid("clustering.sim_threshold must be in (0, 1)");

        if (j.contains("tcpm")) c.tcpm_heatmap_csv = j.at("tcpm").value("heatmap_csv", c.tcpm_heatmap_csv);

        if (j.contains("synthesis")) {
            const json& s = j.at("synthesis");
            c.n_questions = s.value("n_questions", c.n_questions);
            c.quality_threshold = s.value("quality_threshold", c.quality_threshold);
            c.generation_temperature = s.value("generation_temperature", c.generation_temperature);
            c.k3_probability = s.value("k3_probability", c.k3_probability);
            c.max_subquestions = s.value("max_subquestions", c.max_subquestions);
        }
        if (c.n_questions < 1) throw ConfigInvalid("synthesis.n_questions must be >= 1");
        if (!(c.quality_threshold >= 0.0 && c.quality_threshold <= 1.0))
            throw ConfigInvalid("synthesis.quality_threshold must be in [0, 1]");
        if (!(c.k3_probability >= 0.0 && c.k3_probability <= 1.0))
            throw ConfigInvalid("synthesis.k3_probability must be in [0, 1]");

        if (j.contains("answering")) {
            const json& a = j.at("answering");
            c.samples_k = a.value("samples", c.samples_k);
            c.answer_temperature = a.value("temperature", c.answer_temperature);
            c.answer_top_p = a.value("top_p", c.answer_top_p);
            c.answer_max_tokens = a.value("max_tokens", c.answer_max_tokens);
        }
        if (c.samples_k < 1) throw ConfigInvalid("answering.samples must be >= 1");

        if (j.contains("voting")) {
            const json& v = j.at("voting");
            c.voting.kind = synthesis::voting_kind_from_string(v.value("strategy", "semi_voting"));
            c.voting.csv_threshold = v.value("csv_threshold", c.voting.csv_threshold);
        }
        if (!(c.voting.csv_threshold >= 0.0 && c.voting.csv_threshold <= 1.0))
            throw ConfigInvalid("voting.csv_threshold must be in [0, 1]");

        if (j.contains("assembly")) {
            const json& a = j.at("assembly");
            c.rephrase_enabled = a.value("rephrase", c.rephrase_enabled);
            if (a.contains("minhash")) {
                const json& m = a.at("minhash");
                c.minhash.shingle_size = m.value("shingle_size", c.minhash.shingle_size);
                c.minhash.num_hashes = m.value("num_hashes", c.minhash.num_hashes);
                c.minhash.band_count = m.value("band_count", c.minhash.band_count);
                c.minhash.jaccard_threshold = m.value("jaccard_threshold", c.minhash.jaccard_threshold);
            }
            c.max_digit_run = a.value("max_digit_run", c.max_digit_run);
            for (const auto& extra : a.value("extra_corpora", std::vector<std::string>{})) {
                fs::path p = resolve(base, extra);
                require_exists(p, "extra corpus");
                c.extra_corpora.push_back(p);
            }
        }
        try {
            c.minhash.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigInvalid(std::string("assembly.minhash: ") + e.what());
        }

        if (j.contains("audit")) {
            const json& a = j.at("audit");
            c.audit_question_ngram = a.value("question_ngram", c.audit_question_ngram);
            c.audit_solution_ngram = a.value("solution_ngram", c.audit_solution_ngram);
            for (const auto& ts : a.value("test_sets", json::array())) {
                TestSetRef ref;
                ref.name = ts.at("name").get<std::string>();
                ref.path = resolve(base, ts.at("path").get<std::string>());
                require_exists(ref.path, "audit test set");
                c.audit_test_sets.push_back(std::move(ref));
            }
        }
        if (c.audit_question_ngram < 1 || c.audit_solution_ngram < 1)
            throw ConfigInvalid("audit n-gram sizes must be >= 1");

        if (j.contains("grade")) {
            const json& g = j.at("grade");
            if (g.contains("pred_path")) {
                c.grade_pred_path = resolve(base, g.at("pred_path").get<std::string>());
                require_exists(c.grade_pred_path, "grade predictions");
            }
            if (g.contains("gold_path")) {
                c.grade_gold_path = resolve(base, g.at("gold_path").get<std::string>());
                require_exists(c.grade_gold_path, "grade gold answers");
            }
            c.grade_rel_tol = g.value("rel_tol", c.grade_rel_tol);
            c.grade_abs_tol = g.value("abs_tol", c.grade_abs_tol);
        }
    } catch (const json::exception& e) {
        throw ConfigInvalid(std::string("config field error: ") + e.what());
    }
    return c;
}

json PipelineConfig::to_json() const {
    json j;
    j["rng_seed"] = rng_seed;
    json corpora = json::array();
    for (const auto& sc : seed_corpora)
        corpora.push_back({{"path", sc.path.string()}, {"source", model::to_string(sc.source)}});
    j["seed_corpora"] = std::move(corpora);
    j["output_dir"] = output_dir.string();
    j["prompts_dir"] = prompts_dir.string();
    j["provider"] = {{"mode", gateway::to_string(provider.mode)},
                     {"cache_path", provider.cache_path},
                     {"max_calls", provider.max_calls},
                     {"embed_dim", provider.embed_dim},
                     {"model", provider.model}};
    j["clustering"] = {{"sim_threshold", cluster_sim_threshold}, {"min_cluster_kps", min_cluster_kps}};
    j["tcpm"] = {{"heatmap_csv", tcpm_heatmap_csv}};
    j["synthesis"] = {{"n_questions", n_questions},
                      {"quality_threshold", quality_threshold},
                      {"generation_temperature", generation_temperature},
                      {"k3_probability", k3_probability},
                      {"max_subquestions", max_subquestions}};
    j["answering"] = {{"samples", samples_k},
                      {"temperature", answer_temperature},
                      {"top_p", answer_top_p},
                      {"max_tokens", answer_max_tokens}};
    j["voting"] = {{"strategy", synthesis::to_string(voting.kind)}, {"csv_threshold", voting.csv_threshold}};
    json extras = json::array();
    for (const auto& p : extra_corpora) extras.push_back(p.string());
    j["assembly"] = {{"rephrase", rephrase_enabled},
                     {"minhash",
                      {{"shingle_size", minhash.shingle_size},
                       {"num_hashes", minhash.num_hashes},
                       {"band_count", minhash.band_count},
                       {"jaccard_threshold", minhash.jaccard_threshold}}},
                     {"max_digit_run", max_digit_run},
                     {"extra_corpora", std::move(extras)}};
    json tests = json::array();
    for (const auto& ts : audit_test_sets) tests.push_back({{"name", ts.name}, {"path", ts.path.string()}});
    j["audit"] = {{"question_ngram", audit_question_ngram},
                  {"solution_ngram", audit_solution_ngram},
                  {"test_sets", std::move(tests)}};
    j["grade"] = {{"pred_path", grade_pred_path.string()},
                  {"gold_path", grade_gold_path.string()},
                  {"rel_tol", grade_rel_tol},
                  {"abs_tol", grade_abs_tol}};
    return j;
}

}  // namespace kpforge::pipeline

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "assembly/minhash.hpp"
#include "gateway/gateway.hpp"
#include "model/records.hpp"
#include "synthesis/synthesis.hpp"

namespace kpforge::pipeline {

struct SeedCorpus {
    std::filesystem::path path;
    model::Source source = model::Source::other;
};

struct TestSetRef {
    std::string name;
    std::filesystem::path path;
};

// One human-editable JSON file configures the whole run. Relative paths
// resolve against the config file's directory. rng_seed is mandatory: runs
// never key off the wall clock.
struct PipelineConfig {
    std::filesystem::path config_path;
    std::vector<SeedCorpus> seed_corpora;
    std::filesystem::path output_dir;
    std::filesystem::path prompts_dir;
    uint64_t rng_seed = 0;

    gateway::GatewayConfig provider;

    // clustering
    double cluster_sim_threshold = 0.88;
    int min_cluster_kps = 3;

    // tcpm
    bool tcpm_heatmap_csv = true;

    // synthesis
    int n_questions = 40;
    double quality_threshold = 0.85;
    double generation_temperature = 0.7;
    double k3_probability = 0.5;  // P(k = 3); otherwise k = 2
    int max_subquestions = 3;

    // answering
    int samples_k = 10;
    double answer_temperature = 0.75;
    double answer_top_p = 0.95;
    int answer_max_tokens = 1024;

    // voting
    synthesis::VotingStrategy voting;

    // assembly
    bool rephrase_enabled = true;
    assembly::MinHashParams minhash;
    int max_digit_run = 25;
    std::vector<std::filesystem::path> extra_corpora;

    // audit
    int audit_question_ngram = 20;
    int audit_solution_ngram = 30;
    std::vector<TestSetRef> audit_test_sets;

    // grade
    std::filesystem::path grade_pred_path;  // optional until the stage runs
    std::filesystem::path grade_gold_path;
    double grade_rel_tol = 1e-6;
    double grade_abs_tol = 1e-9;

    static PipelineConfig load(const std::filesystem::path& path);

    // Canonical form for digesting into the manifest.
    nlohmann::json to_json() const;
};

}  // namespace kpforge::pipeline

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "gateway/gateway.hpp"
#include "util/errors.hpp"
#include "util/hash.hpp"
#include "util/text.hpp"

namespace kpforge::gateway {

namespace {

// Cheap deterministic stream over a hash seed.
struct HashStream {
    uint64_t state;
    explicit HashStream(uint64_t seed) : state(seed) {}
    uint64_t next() { return state = hash::mix(state); }
    uint64_t next(uint64_t bound) { return next() % bound; }
};

struct TopicBank {
    const char* label;
    const char* alias;  // nullptr when the topic has no near-duplicate label
    std::vector<const char*> kps;
};

const std::vector<TopicBank>& topic_bank() {
    static const std::vector<TopicBank> bank = {
        {"Arithmetic - Percentages",
         "Arithmetic - Percentage",
         {"Converting between fractions, decimals, and percentages",
          "Calculating the percentage of a quantity",
          "Finding the whole given a part and the percent",
          "Percent increase and decrease",
          "Expressing a ratio as a percentage",
          "Successive percentage changes"}},
        {"Geometry - Circles",
         nullptr,
         {"Area of a circle from its radius", "Circumference and diameter relationship",
          "Equation of a circle in standard form", "Arc length from a central angle",
          "Tangent lines meet radii at right angles"}},
        {"Algebra - Linear Equations",
         nullptr,
         {"Isolating a variable by inverse operations", "Translating word problems into linear equations",
          "Solving equations with variables on both sides", "Checking a solution by substitution",
          "Slope-intercept form of a line", "Systems of two linear equations by elimination"}},
        {"Combinatorics - Counting Problems",
         nullptr,
         {"Product rule for independent choices", "Combinations for unordered selections",
          "Permutations for ordered arrangements", "Complementary counting"}},
        {"Trigonometry - Cosine Function",
         nullptr,
         {"Exact cosine values for common angles", "Reference angles in each quadrant",
          "Cosine symmetry across the unit circle", "Converting between degrees and radians"}},
        {"Number Theory - Divisibility",
         nullptr,
         {"Divisibility rules for small integers", "Prime factorization of an integer",
          "Greatest common divisor by the Euclidean algorithm", "Remainders and modular reduction",
          "Least common multiple from factorizations"}},
        {"Others - Problem Context",
         nullptr,
         {"Translating a real-world scenario into arithmetic steps",
          "Identifying relevant and irrelevant quantities", "Organizing multi-step reasoning"}},
        {"Arithmetic - Rate Problems",
         nullptr,
         {"Distance equals rate times time", "Unit rates from proportional quantities",
          "Combining rates of simultaneous processes", "Converting units within rate calculations",
          "Average speed over multiple segments"}},
    };
    return bank;
}

std::string flat_prompt(const ChatRequest& req) {
    std::string out;
    for (const auto& m : req.messages) {
        out += m.content;
        out += '\n';
    }
    return out;
}

// Substring between the last `begin` marker and the following `end` marker.
std::string last_block(const std::string& prompt, std::string_view begin, std::string_view end) {
    size_t at = prompt.rfind(begin);
    if (at == std::string::npos) return {};
    size_t from = at + begin.size();
    size_t to = prompt.find(end, from);
    if (to == std::string::npos) to = prompt.size();
    return text::trim(prompt.substr(from, to - from));
}

std::string an_block(const std::string& label, const std::vector<std::string>& kps) {
    std::string out = "<AN> <l>" + label + "</l>";
    for (const auto& kp : kps) out += " <k>" + kp + "</k>";
    out += " </AN>";
    return out;
}

std::string knowledge_extraction_completion(const std::string& prompt, uint64_t seed) {
    const std::string seed_question = last_block(prompt, "Question:", "Answer:");
    if (text::contains(seed_question, "\\cos 330")) {
        // mirrors the worked example shipped with the extraction prompt
        return an_block("Trigonometry - Cosine Function",
                        {"Understanding co-terminal angles in trigonometry",
                         "Trigonometric identities, specifically the cosine of an angle related to a "
                         "reference angle",
                         "Knowledge of exact values of cosine for common angles (30°, 45°, "
                         "60°, etc.)",
                         "Subtraction of angles and use of angle identities"});
    }

    const auto& bank = topic_bank();
    HashStream hs(seed);
    size_t first = hs.next(bank.size());
    bool two_blocks = hs.next(3) != 0;
    size_t second = (first + 1 + hs.next(bank.size() - 1)) % bank.size();

    auto emit = [&](size_t idx) {
        const TopicBank& topic = bank[idx];
        std::string label = topic.label;
        std::vector<std::string> kps;
        if (topic.alias != nullptr) {
            // near-duplicate labels share the full key-point list so their
            // centroids coincide and clustering has something to merge
            if (hs.next(2) == 0) label = topic.alias;
            for (const char* kp : topic.kps) kps.emplace_back(kp);
        } else {
            size_t len = std::min<size_t>(topic.kps.size(), 3 + hs.next(4));
            size_t start = hs.next(topic.kps.size());
            for (size_t j = 0; j < len; ++j) kps.emplace_back(topic.kps[(start + j) % topic.kps.size()]);
        }
        return an_block(label, kps);
    };

    std::string out = emit(first);
    if (two_blocks) out += " " + emit(second);
    return out;
}

std::string question_generation_completion(const std::string& /*prompt*/, uint64_t seed) {
    HashStream hs(seed);
    long long a = 2 + static_cast<long long>(hs.next(97));
    long long b = 3 + static_cast<long long>(hs.next(89));
    uint64_t form = hs.next(23) == 0 ? 90 : hs.next(11);

    std::string q;
    switch (form) {
        case 0:
        case 1:
        case 2:
            q = "A community garden is laid out as a rectangle measuring " + std::to_string(a) +
                " meters by " + std::to_string(b) + " meters. What is its area in square meters?";
            break;
        case 3:
        case 4:
            q = "A cyclist rides " + std::to_string(a) + " kilometers in the morning and " +
                std::to_string(b) + " kilometers in the afternoon. How many kilometers does she ride in total?";
            break;
        case 5:
        case 6:
            q = "A pump moves " + std::to_string(a * b) + " liters of water in " + std::to_string(b) +
                " minutes at a steady rate. How many liters does it move per minute?";
            break;
        case 7:
        case 8: {
            // two sub-questions
            q = "A bakery sells trays of " + std::to_string(a) + " rolls and receives an order for " +
                std::to_string(b) + " trays. How many rolls is that in total? If every roll is cut into 2 "
                "halves, how many halves are produced?";
            break;
        }
        case 9:
            // declarative form: exercises the zero-sub-question reject path
            q = "Evaluate the product of " + std::to_string(a) + " and " + std::to_string(b) + ".";
            break;
        case 10:
            q = "What is " + std::to_string(a) + " increased by " + std::to_string(b) + " percent?";
            break;
        default:
            // pathological many-part question: exercises the sub-question cap
            q = "What is " + std::to_string(a) + " plus " + std::to_string(b) +
                "? What is their product? What is their difference? What is their ratio?";
            break;
    }
    return "Here is the new problem integrating the requested key points.\n<Q>" + q + "</Q>";
}

std::string question_evaluation_completion(const std::string& /*prompt*/, uint64_t seed) {
    HashStream hs(seed);
    double score = 0.70 + static_cast<double>(hs.next(31)) / 100.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "Evaluation Score: %.2f", score);
    return std::string(buf) + "\nThe problem engages the supplied key points coherently.";
}

std::string format_value(long long v, uint64_t form) {
    switch (form % 4) {
        case 0: return std::to_string(v);
        case 1: return "\\frac{" + std::to_string(2 * v) + "}{2}";
        case 2: return std::to_string(v) + ".0";
        default: return std::to_string(v);
    }
}

std::string answering_completion(const std::string& prompt, uint64_t seed) {
    const std::string question = last_block(prompt, "Question:", "Answer:");
    uint64_t hq = hash::fnv1a(text::normalize_ws(question));
    int arity = std::clamp(static_cast<int>(std::count(question.begin(), question.end(), '?')), 1, 3);

    HashStream hs(seed ^ 0x5eedull);
    uint64_t r = hs.next(10);
    if (r == 9) return "I considered several approaches but could not settle on a final result.";

    std::vector<long long> values;
    for (int j = 0; j < arity; ++j) {
        long long v = 1 + static_cast<long long>(hash::mix(hq + static_cast<uint64_t>(j)) % 200);
        if (r >= 7) v += 1 + static_cast<long long>(hs.next(97));  // dissenting sample
        values.push_back(v);
    }

    std::string out = "Working through the problem step by step.\n";
    for (int j = 0; j < arity; ++j) {
        out += "For part " + std::to_string(j + 1) + " the computation gives $\\boxed{" +
               format_value(values[j], hs.next()) + "}$.\n";
    }
    if (arity > 1) {
        out += "The answer is: ";
        for (int j = 0; j < arity; ++j) {
            if (j) out += "; ";
            out += std::to_string(values[j]);
        }
    }
    return out;
}

std::string rephrasing_completion(const std::string& prompt, uint64_t seed) {
    const std::string original = last_block(prompt, "Original Problem: <Q>", "</Q>");
    // the first two integers of the original parameterize each scenario
    long long a = 3, b = 4;
    {
        int found = 0;
        for (size_t i = 0; i < original.size() && found < 2;) {
            if (isdigit(static_cast<unsigned char>(original[i]))) {
                size_t j = i;
                while (j < original.size() && isdigit(static_cast<unsigned char>(original[j]))) ++j;
                long long v = std::strtoll(original.substr(i, j - i).c_str(), nullptr, 10);
                (found == 0 ? a : b) = v;
                ++found;
                i = j;
            } else {
                ++i;
            }
        }
    }

    static const std::array<const char*, 12> scenarios = {
        "On a space station, an engineer stores {A} canisters on each of {B} racks",
        "In an orchard, a farmer picks {A} apples from each of {B} trees",
        "At a library, a clerk shelves {A} books onto each of {B} carts",
        "During a regatta, each of {B} boats carries {A} signal flags",
        "A potter glazes {A} bowls in each of {B} kiln batches",
        "A beekeeper collects {A} jars of honey from each of {B} hives",
        "On a film set, {B} crates each hold {A} props",
        "A submarine crew packs {A} ration tins into each of {B} lockers",
        "At a circus, each of {B} jugglers keeps {A} clubs in the air",
        "A cartographer pins {A} markers on each of {B} map sheets",
        "In a castle kitchen, {B} shelves each hold {A} copper pots",
        "A drone fleet of {B} drones each carries {A} parcels",
    };

    HashStream hs(seed);
    size_t count = 8 + hs.next(3);
    size_t offset = hs.next(scenarios.size());
    std::string out = "Here are the rephrased scenarios.\n";
    for (size_t k = 0; k < count; ++k) {
        std::string body = scenarios[(offset + k) % scenarios.size()];
        auto replace_all = [&](std::string_view from, const std::string& to) {
            size_t at;
            while ((at = body.find(from)) != std::string::npos) body.replace(at, from.size(), to);
        };
        replace_all("{A}", std::to_string(a));
        replace_all("{B}", std::to_string(b));
        out += "Question" + std::to_string(k + 1) + ": <Q>" + body +
               ". How many items does this describe in total?</Q>\n";
    }
    return out;
}

class MockProvider : public Provider {
public:
    explicit MockProvider(int embed_dim) : embed_dim_(embed_dim) {}

    std::vector<std::string> chat(const ChatRequest& req) override {
        const std::string prompt = flat_prompt(req);
        std::vector<std::string> out;
        out.reserve(static_cast<size_t>(req.n_samples));
        for (int i = 0; i < req.n_samples; ++i) {
            uint64_t seed = hash::fnv1a(CacheKey::for_sample(req, i).digest);
            out.push_back(complete(req.template_name, prompt, seed));
        }
        return out;
    }

    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override {
        std::vector<std::vector<double>> vecs;
        vecs.reserve(texts.size());
        for (const auto& t : texts) vecs.push_back(unit_vector(t));
        return vecs;
    }

private:
    int embed_dim_;

    std::string complete(const std::string& tpl, const std::string& prompt, uint64_t seed) const {
        if (tpl == "knowledge_extraction") return knowledge_extraction_completion(prompt, seed);
        if (tpl == "question_generation") return question_generation_completion(prompt, seed);
        if (tpl == "question_evaluation") return question_evaluation_completion(prompt, seed);
        if (text::starts_with(tpl, "answering_v")) return answering_completion(prompt, seed);
        if (tpl == "rephrasing") return rephrasing_completion(prompt, seed);
        // unknown template: echo something parseable as a generic completion
        return "Acknowledged. <Q>placeholder</Q>";
    }

    std::vector<double> unit_vector(const std::string& text_in) const {
        HashStream hs(hash::fnv1a(text_in));
        std::vector<double> v(static_cast<size_t>(embed_dim_));
        double norm2 = 0.0;
        for (auto& x : v) {
            x = (static_cast<double>(hs.next() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
            norm2 += x * x;
        }
        double norm = std::sqrt(norm2);
        if (norm < 1e-12) {
            v[0] = 1.0;
            norm = 1.0;
        }
        for (auto& x : v) x /= norm;
        return v;
    }
};

}  // namespace

std::unique_ptr<Provider> make_mock_provider(int embed_dim) {
    return std::make_unique<MockProvider>(embed_dim);
}

}  // namespace kpforge::gateway

#include "vsp/prompting.hpp"

#include <algorithm>
#include <map>

#include "vsp/errors.hpp"
#include "vsp/resources.hpp"
#include "vsp/text.hpp"

namespace vsp {

namespace {

std::string template_text(std::string_view name) {
    auto res = find_resource(std::string("templates/") + std::string(name) + ".txt");
    if (!res) throw Error("missing built-in template " + std::string(name));
    std::string text(*res);
    if (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

// Single left-to-right pass so substituted values are never re-scanned.
std::string fill(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values) {
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            auto close = tmpl.find('}', i);
            if (close != std::string_view::npos) {
                auto it = values.find(tmpl.substr(i + 1, close - i - 1));
                if (it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out += tmpl[i++];
    }
    return out;
}

std::string fenced(std::string_view code) { return "```\n" + escape_code_fences(code) + "\n```"; }

std::string strip_trailing_newlines(std::string_view code) {
    while (!code.empty() && (code.back() == '\n' || code.back() == '\r')) code.remove_suffix(1);
    return std::string(code);
}

StrategyFamily family_for(Strategy strategy, const PromptOptions& options) {
    if (options.irrelevant_text) return StrategyFamily::IrrelevantVSP;
    switch (strategy) {
        case Strategy::StandardFewShot: return StrategyFamily::StandardFewShot;
        case Strategy::NaiveCoT: return StrategyFamily::NaiveCoT;
        default: return StrategyFamily::VSP;
    }
}

}  // namespace

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::Standard: return "standard";
        case Strategy::StandardFewShot: return "fewshot";
        case Strategy::NaiveCoT: return "naivecot";
        case Strategy::ZeroShotVSP: return "zeroshot-vsp";
        case Strategy::VSP: return "vsp";
        case Strategy::OtherTypeVSP: return "othertype-vsp";
    }
    return "standard";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
    for (auto v : {Strategy::Standard, Strategy::StandardFewShot, Strategy::NaiveCoT, Strategy::ZeroShotVSP,
                   Strategy::VSP, Strategy::OtherTypeVSP}) {
        if (to_string(v) == s) return v;
    }
    return std::nullopt;
}

std::optional<Task> parse_task(std::string_view s) {
    if (s == "id" || s == "identification") return Task::Identification;
    if (s == "discover" || s == "discovery") return Task::Discovery;
    if (s == "patch" || s == "patching") return Task::Patching;
    return std::nullopt;
}

bool strategy_supports(Strategy strategy, Task task) {
    return !(strategy == Strategy::NaiveCoT && task == Task::Patching);
}

std::string_view to_string(Role r) { return r == Role::System ? "system" : "user"; }

std::size_t estimate_tokens(const std::vector<Message>& messages) {
    std::size_t chars = 0;
    for (const auto& m : messages) chars += utf8_length(m.content);
    return (chars + 3) / 4;
}

std::string system_preamble() { return template_text("system_preamble"); }

std::string identification_question(CweId cwe, bool explain_meaning) {
    std::string id = cwe.label();
    if (explain_meaning && !cwe.name().empty()) id += " (" + std::string(cwe.name()) + ")";
    return fill(template_text("identification_question"), {{"cwe", id}});
}

std::string discovery_question() { return template_text("discovery_question"); }

std::string patching_question(std::string_view code, CweId cwe, std::string_view vulnerable_line) {
    const auto wanted = trim(vulnerable_line);
    const auto lines = split_lines(code);
    const bool present = !wanted.empty() && std::any_of(lines.begin(), lines.end(),
                                                        [&](const std::string& l) { return trim(l) == wanted; });
    if (!present) throw LineNotInCode(std::string(vulnerable_line));
    return fill(template_text("patching_question"), {{"code", escape_code_fences(strip_trailing_newlines(code))},
                                                     {"number", std::to_string(cwe.number())},
                                                     {"name", std::string(cwe.name())},
                                                     {"line", std::string(wanted)}});
}

std::string zero_shot_vsp_suffix(Task task) {
    return template_text(task == Task::Patching ? "zero_shot_vsp_patching" : "zero_shot_vsp_detection");
}

std::string escape_code_fences(std::string_view code) { return replace_all(std::string(code), "```", "\\`\\`\\`"); }

std::vector<Exemplar> select_exemplars(const ExemplarLibrary& library, Strategy strategy, Task task,
                                       std::optional<CweId> test_cwe, const PromptOptions& options) {
    if (strategy == Strategy::Standard || strategy == Strategy::ZeroShotVSP) return {};
    if (!strategy_supports(strategy, task)) {
        throw StrategyTaskMismatch("strategy " + std::string(to_string(strategy)) + " does not support task " +
                                   std::string(to_string(task)));
    }
    if (options.irrelevant_text && strategy != Strategy::VSP && strategy != Strategy::OtherTypeVSP) {
        throw InvalidOptions("irrelevant-text exemplars exist only for the vsp and othertype-vsp strategies");
    }
    if (task != Task::Discovery && !test_cwe) {
        throw InvalidOptions("identification and patching exemplars are chosen by the test sample's CWE");
    }

    const StrategyFamily family = family_for(strategy, options);
    auto wanted_cwe = [&](const CweId& cwe) {
        if (strategy == Strategy::OtherTypeVSP) {
            return is_substitute_cwe(cwe.number()) && (!test_cwe || cwe != *test_cwe);
        }
        if (task == Task::Discovery) return is_supported_cwe(cwe.number());
        return cwe == *test_cwe;
    };

    std::vector<Exemplar> picked;
    for (const auto& ex : library.exemplars) {
        if (ex.family != family || ex.task != task) continue;
        if (task == Task::Patching && ex.polarity != Polarity::Vulnerable) continue;
        if (!wanted_cwe(ex.cwe)) continue;
        picked.push_back(ex);
    }
    if (picked.empty()) {
        int cwe = test_cwe ? test_cwe->number() : kSupportedCwes.front();
        throw CoverageGap(cwe, std::string(to_string(family)));
    }
    if (options.exemplar_count && picked.size() > *options.exemplar_count) picked.resize(*options.exemplar_count);
    return picked;
}

std::string render_exemplar_turn(const Exemplar& exemplar) {
    if (exemplar.task == Task::Patching) return exemplar.question + "\nA: " + exemplar.answer;
    return exemplar.question + "\n" + fenced(exemplar.code) + "\nA: " + exemplar.answer;
}

RenderedPrompt render_prompt(Task task, Strategy strategy, const CodeSample& sample, const ExemplarLibrary& library,
                             const PromptOptions& options) {
    if (!strategy_supports(strategy, task)) {
        throw StrategyTaskMismatch("strategy " + std::string(to_string(strategy)) + " does not support task " +
                                   std::string(to_string(task)));
    }
    if (task != Task::Discovery && !sample.cwe) throw MissingCwe(sample.id);
    if (options.explain_cwe_meaning && task == Task::Discovery) {
        throw InvalidOptions("discovery questions name no CWE to explain");
    }
    if (options.question_position == QuestionPosition::AfterCode && task == Task::Patching) {
        throw InvalidOptions("the patching question embeds the code; it cannot be moved after it");
    }

    std::string code = sample.code;
    if (options.inject_context_comments) {
        if (!sample.annotated_code) throw MissingAnnotatedCode(sample.id);
        code = *sample.annotated_code;
    }
    code = strip_trailing_newlines(code);

    RenderedPrompt prompt;
    prompt.strategy = strategy;
    prompt.task = task;
    prompt.sample_id = sample.id;
    prompt.messages.push_back({Role::System, system_preamble()});

    for (const auto& ex : select_exemplars(library, strategy, task, sample.cwe, options)) {
        prompt.messages.push_back({Role::User, render_exemplar_turn(ex)});
    }

    std::string question;
    switch (task) {
        case Task::Identification: question = identification_question(*sample.cwe, options.explain_cwe_meaning); break;
        case Task::Discovery: question = discovery_question(); break;
        case Task::Patching: {
            auto line = sample.vulnerable_line_text();
            if (!line) throw MissingVulnerableLine(sample.id);
            question = patching_question(code, *sample.cwe, *line);
            break;
        }
    }
    if (strategy == Strategy::ZeroShotVSP) question += "\n" + zero_shot_vsp_suffix(task);

    std::string final_turn;
    if (task == Task::Patching) {
        final_turn = question;
    } else if (options.question_position == QuestionPosition::AfterCode) {
        final_turn = fenced(code) + "\n" + question;
    } else {
        final_turn = question + "\n" + fenced(code);
    }
    prompt.messages.push_back({Role::User, std::move(final_turn)});
    prompt.token_estimate = estimate_tokens(prompt.messages);
    return prompt;
}

std::string to_text(const RenderedPrompt& prompt) {
    std::string out;
    out += "# task: " + std::string(to_string(prompt.task)) + "\n";
    out += "# strategy: " + std::string(to_string(prompt.strategy)) + "\n";
    out += "# sample: " + prompt.sample_id + "\n";
    out += "# token_estimate: " + std::to_string(prompt.token_estimate) + "\n";
    for (const auto& m : prompt.messages) {
        out += "--- " + std::string(to_string(m.role)) + " ---\n";
        out += m.content;
        out += "\n";
    }
    return out;
}

}  // namespace vsp

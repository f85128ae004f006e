#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vsp/corpus.hpp"

// Prompt construction for the three analysis tasks under each prompting
// strategy. Everything here is a pure function of its arguments.
namespace vsp {

enum class Strategy { Standard, StandardFewShot, NaiveCoT, ZeroShotVSP, VSP, OtherTypeVSP };

// CLI spellings: standard, fewshot, naivecot, zeroshot-vsp, vsp, othertype-vsp.
std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view s);
// CLI spellings: id, discover, patch (the long names are accepted too).
std::optional<Task> parse_task(std::string_view s);

bool strategy_supports(Strategy strategy, Task task);

enum class QuestionPosition { BeforeCode, AfterCode };

struct PromptOptions {
    QuestionPosition question_position = QuestionPosition::BeforeCode;
    bool explain_cwe_meaning = false;
    bool inject_context_comments = false;
    bool irrelevant_text = false;
    // nullopt keeps every exemplar the strategy selects.
    std::optional<std::size_t> exemplar_count;

    friend bool operator==(const PromptOptions&, const PromptOptions&) = default;
};

enum class Role { System, User };
std::string_view to_string(Role r);

struct Message {
    Role role = Role::User;
    std::string content;

    friend bool operator==(const Message&, const Message&) = default;
};

struct RenderedPrompt {
    std::vector<Message> messages;
    Strategy strategy = Strategy::Standard;
    Task task = Task::Identification;
    std::string sample_id;
    std::size_t token_estimate = 0;

    friend bool operator==(const RenderedPrompt&, const RenderedPrompt&) = default;
};

// ceil(code points / 4) over all message contents.
std::size_t estimate_tokens(const std::vector<Message>& messages);

std::string system_preamble();
std::string identification_question(CweId cwe, bool explain_meaning = false);
std::string discovery_question();
// Throws LineNotInCode unless vulnerable_line is one of the code's lines
// (compared after trimming surrounding whitespace).
std::string patching_question(std::string_view code, CweId cwe, std::string_view vulnerable_line);
std::string zero_shot_vsp_suffix(Task task);

// Triple-backtick runs inside code are rewritten to \`\`\` so the fence that
// wraps the code stays unambiguous.
std::string escape_code_fences(std::string_view code);

std::vector<Exemplar> select_exemplars(const ExemplarLibrary& library, Strategy strategy, Task task,
                                       std::optional<CweId> test_cwe, const PromptOptions& options);

// Renders one exemplar as the user turn "Q: ...\n```\n<code>\n```\nA: ...".
std::string render_exemplar_turn(const Exemplar& exemplar);

RenderedPrompt render_prompt(Task task, Strategy strategy, const CodeSample& sample, const ExemplarLibrary& library,
                             const PromptOptions& options = {});

// Human-readable dump used by golden files and the CLI preview.
std::string to_text(const RenderedPrompt& prompt);

}  // namespace vsp

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "molgen/prompting/sampling.hpp"

namespace molgen::prompting {

enum class Direction { Text2Mol, Mol2Text };

const char* direction_name(Direction d);
// Accepts "text2mol" and "mol2text"; throws ConfigError otherwise.
Direction parse_direction(const std::string& name);

inline constexpr const char* kTemplateVersion = "prompt-v1";

inline constexpr const char* kText2MolInstruction =
    "Below are the textual descriptions -- chemical SMILES representation pairs. Generate the "
    "chemical SMILES representation for the textual description provided below.";

inline constexpr const char* kMol2TextInstruction =
    "Below are the chemical SMILES representation -- textual description pairs. Generate the "
    "textual description for the chemical SMILES representation provided below.";

inline constexpr std::size_t kDefaultPromptBudget = 12000;
inline constexpr std::size_t kDefaultK = 16;
inline constexpr std::size_t kDefaultR = 4;

struct AugmentedPrompt {
  Direction direction = Direction::Text2Mol;
  std::string instruction;
  std::vector<Demonstration> demonstrations;
  std::string query;
  std::string rendered;
};

struct PromptOptions {
  std::size_t top_r = kDefaultR;
  std::size_t budget = kDefaultPromptBudget;
};

// Instruction, then one block per demonstration in the given order, then the
// query block and the output-format directive. Throws ConfigError when the
// rendered text exceeds options.budget characters.
AugmentedPrompt build_prompt(const std::vector<Demonstration>& demos, const std::string& query,
                             Direction direction, const PromptOptions& options = {});

// Scaffold samplers return the most similar pair first; prompts place the
// most similar pair last, next to the query.
std::vector<Demonstration> order_for_prompt(std::vector<Demonstration> demos);

}  // namespace molgen::prompting

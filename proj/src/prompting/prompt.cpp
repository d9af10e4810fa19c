#include "molgen/prompting/prompt.hpp"

#include <algorithm>

#include "molgen/error.hpp"

namespace molgen::prompting {

const char* direction_name(Direction d) { return d == Direction::Text2Mol ? "text2mol" : "mol2text"; }

Direction parse_direction(const std::string& name) {
  if (name == "text2mol") return Direction::Text2Mol;
  if (name == "mol2text") return Direction::Mol2Text;
  throw ConfigError("unknown task direction '" + name + "' (expected text2mol or mol2text)");
}

AugmentedPrompt build_prompt(const std::vector<Demonstration>& demos, const std::string& query,
                             Direction direction, const PromptOptions& options) {
  AugmentedPrompt p;
  p.direction = direction;
  p.demonstrations = demos;
  p.query = query;
  const bool t2m = direction == Direction::Text2Mol;
  p.instruction = t2m ? kText2MolInstruction : kMol2TextInstruction;

  std::string& out = p.rendered;
  out = p.instruction + "\n\n";
  for (const auto& d : demos) {
    if (t2m) {
      out += "Description: " + d.description + "\nSMILES: " + d.smiles + "\n\n";
    } else {
      out += "SMILES: " + d.smiles + "\nDescription: " + d.description + "\n\n";
    }
  }
  if (t2m) {
    out += "Description: " + query + "\nSMILES:\n\n";
    out += "Answer with the top " + std::to_string(options.top_r) +
           " candidate SMILES strings, most likely first, one per line in the form "
           "\"<rank>. <SMILES>\". After the list, write a line beginning with \"Explanation:\" "
           "and justify the predictions.\n";
  } else {
    out += "SMILES: " + query + "\nDescription:\n\n";
    out += "Answer with a line beginning with \"Explanation:\" followed by the technical "
           "description of the molecule.\n";
  }
  if (out.size() > options.budget) {
    throw ConfigError("rendered prompt has " + std::to_string(out.size()) +
                      " characters, over the budget of " + std::to_string(options.budget) +
                      " (lower k or raise the budget)");
  }
  return p;
}

std::vector<Demonstration> order_for_prompt(std::vector<Demonstration> demos) {
  std::reverse(demos.begin(), demos.end());
  return demos;
}

}  // namespace molgen::prompting

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "molgen/error.hpp"
#include "molgen/smiles/molecule.hpp"

namespace molgen::smiles {

class SmilesError : public DataError {
 public:
  enum class Kind { Syntax, UnclosedRing, Valence, Aromaticity };

  SmilesError(Kind kind, std::string message) : DataError(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Supported: organic-subset and bracket atoms (isotope accepted and ignored,
// hydrogen count, charge), bonds - = # :, branches, ring closures 0-9 and %nn,
// aromatic b c n o p s (plus se as te in brackets), '.'-separated components.
// Rejected with a syntax error: stereo marks (@ / \), wildcard *, atom classes,
// quadruple bonds.
//
// Messages:
//   syntax error at position P: REASON
//   unclosed ring bond L
//   valence violation on atom I (SYMBOL, valence V)
//   non-ring atom I marked aromatic
//   cannot kekulize aromatic system containing atom I
MoleculeGraph parse_smiles(std::string_view text);

// Non-throwing form. On failure returns nullopt and stores the message.
std::optional<MoleculeGraph> try_parse_smiles(std::string_view text, std::string* error = nullptr);

bool is_valid_smiles(std::string_view text);

}  // namespace molgen::smiles

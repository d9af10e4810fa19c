#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "molgen/smiles/molecule.hpp"

namespace molgen::smiles {

struct BitFingerprint {
  std::uint32_t nbits = 0;
  std::vector<std::uint32_t> bits;  // strictly increasing, each < nbits

  bool operator==(const BitFingerprint&) const = default;
};

// Builds a fingerprint from arbitrary bit indices (sorted and deduplicated).
BitFingerprint make_fingerprint(std::uint32_t nbits, std::vector<std::uint32_t> bits);

// Circular (ECFP-style) fingerprint. radius <= 10, nbits a power of two >= 64.
BitFingerprint morgan_fingerprint(const MoleculeGraph& g, int radius, std::uint32_t nbits);

// Linear-path fingerprint over simple paths of 1..max_len bonds.
// max_len in [1, 7], nbits a power of two.
BitFingerprint path_fingerprint(const MoleculeGraph& g, int max_len, std::uint32_t nbits);

// Canonical path strings (diagnostics and tests).
std::vector<std::string> enumerate_paths(const MoleculeGraph& g, int max_len);

}  // namespace molgen::smiles

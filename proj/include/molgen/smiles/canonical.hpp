#pragma once

#include <string>
#include <vector>

#include "molgen/rng.hpp"
#include "molgen/smiles/molecule.hpp"

namespace molgen::smiles {

// Unique rank per atom, invariant under atom renumbering up to symmetry:
// atom invariants refined by sorted neighbor ranks, ties broken one at a time.
std::vector<int> canonical_ranks(const MoleculeGraph& g);

// Emits SMILES by depth-first traversal. Components start at their
// lowest-priority atom; neighbors are visited in ascending priority.
std::string write_smiles(const MoleculeGraph& g, const std::vector<int>& priority);

std::string canonical_smiles(const MoleculeGraph& g);

// Same molecule written from a random traversal order.
std::string random_smiles(const MoleculeGraph& g, Rng& rng);

}  // namespace molgen::smiles

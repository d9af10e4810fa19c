#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace molgen::smiles {

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

struct Atom {
  int atomic_number = 0;
  int charge = 0;
  // Total attached hydrogens. Given explicitly for bracket atoms, derived from
  // the default valence otherwise.
  int hydrogens = 0;
  bool aromatic = false;
  bool bracket = false;

  bool operator==(const Atom&) const = default;
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::Single;

  int other(int atom) const { return atom == a ? b : a; }
  bool operator==(const Bond&) const = default;
};

struct Neighbor {
  int atom;
  int bond;
};

class MoleculeGraph;

// Runs ring perception, kekulization of aromatic systems, implicit-hydrogen
// assignment and valence checks. Throws SmilesError (see parse.hpp).
MoleculeGraph build_molecule(std::vector<Atom> atoms, std::vector<Bond> bonds);

// Validated molecular graph. Construct through parse_smiles or build_molecule;
// both run ring perception, kekulization and valence checks.
class MoleculeGraph {
 public:
  MoleculeGraph() = default;

  std::size_t atom_count() const { return atoms_.size(); }
  std::size_t bond_count() const { return bonds_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  const Atom& atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond& bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }
  std::span<const Neighbor> neighbors(int i) const { return adjacency_[static_cast<std::size_t>(i)]; }
  int degree(int i) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(i)].size()); }

  bool bond_in_ring(int b) const { return bond_in_ring_[static_cast<std::size_t>(b)] != 0; }
  bool atom_in_ring(int i) const { return atom_in_ring_[static_cast<std::size_t>(i)] != 0; }
  // Kekulé bond order used for valence: aromatic bonds resolved to 1 or 2.
  int kekule_order(int b) const { return kekule_[static_cast<std::size_t>(b)]; }
  // Index of the bond joining i and j, or -1.
  int find_bond(int i, int j) const;

  // Connected components as sorted atom lists, ordered by smallest member.
  std::vector<std::vector<int>> components() const;

  bool operator==(const MoleculeGraph& o) const { return atoms_ == o.atoms_ && bonds_ == o.bonds_; }

 private:
  friend MoleculeGraph build_molecule(std::vector<Atom> atoms, std::vector<Bond> bonds);

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<char> bond_in_ring_;
  std::vector<char> atom_in_ring_;
  std::vector<int> kekule_;
};

// Element data.
int atomic_number(std::string_view symbol);  // 0 if unknown
std::string_view element_symbol(int atomic_number);
bool in_organic_subset(int atomic_number);
// Allowed valences for an element carrying a formal charge; empty means the
// element is not valence-checked.
std::span<const int> allowed_valences(int atomic_number, int charge);

// Hydrogens an unbracketed atom receives given its bond-order sum, or -1 if no
// allowed valence accommodates it.
int default_implicit_hydrogens(int atomic_number, int bond_sum);

char bond_symbol(BondOrder order);

}  // namespace molgen::smiles

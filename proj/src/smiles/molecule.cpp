#include "molgen/smiles/molecule.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <string>

#include "molgen/smiles/parse.hpp"

namespace molgen::smiles {
namespace {

constexpr std::array<std::string_view, 119> kSymbols = {
    "",   "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
    "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",
    "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac",
    "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf",
    "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

constexpr int kZero[] = {0};
constexpr int kOne[] = {1};
constexpr int kTwo[] = {2};
constexpr int kThree[] = {3};
constexpr int kFour[] = {4};
constexpr int kThreeFive[] = {3, 5};
constexpr int kTwoFourSix[] = {2, 4, 6};

std::span<const int> neutral_valences(int z) {
  switch (z) {
    case 1: return kOne;
    case 2: case 10: case 18: case 36: case 54: case 86: return kZero;
    case 5: return kThree;
    case 6: case 14: return kFour;
    case 7: return kThree;
    case 8: return kTwo;
    case 9: case 17: case 35: case 53: return kOne;
    case 15: case 33: return kThreeFive;
    case 16: case 34: case 52: return kTwoFourSix;
    default: return {};
  }
}

int smallest_allowed_at_least(std::span<const int> allowed, int v) {
  for (int a : allowed) {
    if (a >= v) return a;
  }
  return -1;
}

[[noreturn]] void fail(SmilesError::Kind kind, std::string message) {
  throw SmilesError(kind, std::move(message));
}

[[noreturn]] void valence_violation(int atom, int z, int valence) {
  fail(SmilesError::Kind::Valence, "valence violation on atom " + std::to_string(atom) + " (" +
                                       std::string(element_symbol(z)) + ", valence " +
                                       std::to_string(valence) + ")");
}

// Bridges are exactly the bonds on no cycle.
std::vector<char> ring_bonds(std::size_t n, const std::vector<Bond>& bonds,
                             const std::vector<std::vector<Neighbor>>& adj) {
  std::vector<char> in_ring(bonds.size(), 1);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  struct Frame {
    int atom;
    int via_bond;
    std::size_t next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    std::vector<Frame> stack{{static_cast<int>(root), -1, 0}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& nbrs = adj[static_cast<std::size_t>(f.atom)];
      if (f.next < nbrs.size()) {
        const Neighbor nb = nbrs[f.next++];
        if (nb.bond == f.via_bond) continue;
        const auto j = static_cast<std::size_t>(nb.atom);
        if (disc[j] < 0) {
          disc[j] = low[j] = timer++;
          stack.push_back({nb.atom, nb.bond, 0});
        } else {
          low[static_cast<std::size_t>(f.atom)] =
              std::min(low[static_cast<std::size_t>(f.atom)], disc[j]);
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          const auto parent = static_cast<std::size_t>(stack.back().atom);
          const auto child = static_cast<std::size_t>(done.atom);
          low[parent] = std::min(low[parent], low[child]);
          if (low[child] > disc[parent]) in_ring[static_cast<std::size_t>(done.via_bond)] = 0;
        }
      }
    }
  }
  return in_ring;
}

// Perfect matching over the atoms that need a double bond, using only
// aromatic bonds whose ends both need one.
bool kekule_matching(const std::vector<char>& needs, const std::vector<Bond>& bonds,
                     const std::vector<std::vector<Neighbor>>& adj, std::vector<int>& kekule) {
  const std::size_t n = needs.size();
  std::vector<int> mate(n, -1);
  std::vector<int> mate_bond(n, -1);
  auto candidates = [&](int i) {
    int c = 0;
    for (const Neighbor& nb : adj[static_cast<std::size_t>(i)]) {
      if (bonds[static_cast<std::size_t>(nb.bond)].order == BondOrder::Aromatic &&
          needs[static_cast<std::size_t>(nb.atom)] && mate[static_cast<std::size_t>(nb.atom)] < 0) {
        ++c;
      }
    }
    return c;
  };
  long budget = 1'000'000;
  std::function<bool()> solve = [&]() -> bool {
    if (--budget < 0) return false;
    int best = -1;
    int best_count = 1 << 30;
    for (std::size_t i = 0; i < n; ++i) {
      if (!needs[i] || mate[i] >= 0) continue;
      const int c = candidates(static_cast<int>(i));
      if (c < best_count) {
        best = static_cast<int>(i);
        best_count = c;
        if (c <= 1) break;
      }
    }
    if (best < 0) return true;
    if (best_count == 0) return false;
    for (const Neighbor& nb : adj[static_cast<std::size_t>(best)]) {
      const auto j = static_cast<std::size_t>(nb.atom);
      if (bonds[static_cast<std::size_t>(nb.bond)].order != BondOrder::Aromatic || !needs[j] ||
          mate[j] >= 0) {
        continue;
      }
      mate[static_cast<std::size_t>(best)] = nb.atom;
      mate[j] = best;
      mate_bond[j] = nb.bond;
      if (solve()) return true;
      mate[static_cast<std::size_t>(best)] = -1;
      mate[j] = -1;
      mate_bond[j] = -1;
    }
    return false;
  };
  if (!solve()) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (mate_bond[i] >= 0) kekule[static_cast<std::size_t>(mate_bond[i])] = 2;
  }
  return true;
}

}  // namespace

int atomic_number(std::string_view symbol) {
  for (std::size_t z = 1; z < kSymbols.size(); ++z) {
    if (kSymbols[z] == symbol) return static_cast<int>(z);
  }
  return 0;
}

std::string_view element_symbol(int z) {
  if (z <= 0 || z >= static_cast<int>(kSymbols.size())) return "?";
  return kSymbols[static_cast<std::size_t>(z)];
}

bool in_organic_subset(int z) {
  switch (z) {
    case 5: case 6: case 7: case 8: case 9: case 15: case 16: case 17: case 35: case 53:
      return true;
    default:
      return false;
  }
}

std::span<const int> allowed_valences(int z, int charge) {
  if (neutral_valences(z).empty()) return {};
  // A charged atom takes the valences of its isoelectronic neutral element.
  const int effective = z - charge;
  if (effective <= 0) return kZero;
  return neutral_valences(effective);
}

int default_implicit_hydrogens(int z, int bond_sum) {
  const auto allowed = neutral_valences(z);
  const int target = smallest_allowed_at_least(allowed, bond_sum);
  return target < 0 ? -1 : target - bond_sum;
}

char bond_symbol(BondOrder order) {
  switch (order) {
    case BondOrder::Single: return '-';
    case BondOrder::Double: return '=';
    case BondOrder::Triple: return '#';
    case BondOrder::Aromatic: return ':';
  }
  return '?';
}

int MoleculeGraph::find_bond(int i, int j) const {
  for (const Neighbor& nb : neighbors(i)) {
    if (nb.atom == j) return nb.bond;
  }
  return -1;
}

std::vector<std::vector<int>> MoleculeGraph::components() const {
  std::vector<int> comp(atoms_.size(), -1);
  std::vector<std::vector<int>> out;
  for (std::size_t s = 0; s < atoms_.size(); ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{static_cast<int>(s)};
    comp[s] = id;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      out.back().push_back(a);
      for (const Neighbor& nb : neighbors(a)) {
        if (comp[static_cast<std::size_t>(nb.atom)] < 0) {
          comp[static_cast<std::size_t>(nb.atom)] = id;
          stack.push_back(nb.atom);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

MoleculeGraph build_molecule(std::vector<Atom> atoms, std::vector<Bond> bonds) {
  const std::size_t n = atoms.size();
  std::vector<std::vector<Neighbor>> adj(n);
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    const Bond& bd = bonds[b];
    if (bd.a < 0 || bd.b < 0 || static_cast<std::size_t>(bd.a) >= n ||
        static_cast<std::size_t>(bd.b) >= n || bd.a == bd.b) {
      fail(SmilesError::Kind::Syntax, "bond " + std::to_string(b) + " has invalid endpoints");
    }
    adj[static_cast<std::size_t>(bd.a)].push_back({bd.b, static_cast<int>(b)});
    adj[static_cast<std::size_t>(bd.b)].push_back({bd.a, static_cast<int>(b)});
  }

  const std::vector<char> bond_ring = ring_bonds(n, bonds, adj);
  std::vector<char> atom_ring(n, 0);
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    if (!bond_ring[b]) continue;
    atom_ring[static_cast<std::size_t>(bonds[b].a)] = 1;
    atom_ring[static_cast<std::size_t>(bonds[b].b)] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (atoms[i].aromatic && !atom_ring[i]) {
      fail(SmilesError::Kind::Aromaticity,
           "non-ring atom " + std::to_string(i) + " marked aromatic");
    }
  }
  // Aromatic bonds outside rings (e.g. the link in biphenyl) are single bonds.
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    if (bonds[b].order == BondOrder::Aromatic && !bond_ring[b]) bonds[b].order = BondOrder::Single;
  }

  std::vector<int> kekule(bonds.size());
  std::vector<int> base(n, 0);
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    const BondOrder o = bonds[b].order;
    kekule[b] = o == BondOrder::Aromatic ? 1 : static_cast<int>(o);
    base[static_cast<std::size_t>(bonds[b].a)] += kekule[b];
    base[static_cast<std::size_t>(bonds[b].b)] += kekule[b];
  }

  // Each aromatic atom whose allowed valence leaves room for one more bond
  // must receive exactly one double bond from its aromatic system.
  std::vector<char> needs(n, 0);
  std::vector<int> remaining(n, 0);
  bool any_needs = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& a = atoms[i];
    if (!a.aromatic) continue;
    const int used = base[i] + (a.bracket ? a.hydrogens : 0);
    const auto allowed = allowed_valences(a.atomic_number, a.charge);
    if (allowed.empty()) continue;
    const int target = smallest_allowed_at_least(allowed, used);
    if (target < 0) valence_violation(static_cast<int>(i), a.atomic_number, used);
    remaining[i] = target - used;
    needs[i] = remaining[i] >= 1 ? 1 : 0;
    any_needs = any_needs || needs[i];
  }
  if (any_needs && !kekule_matching(needs, bonds, adj, kekule)) {
    std::size_t first = 0;
    while (!needs[first]) ++first;
    fail(SmilesError::Kind::Aromaticity,
         "cannot kekulize aromatic system containing atom " + std::to_string(first));
  }

  std::vector<int> bond_sum(n, 0);
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    bond_sum[static_cast<std::size_t>(bonds[b].a)] += kekule[b];
    bond_sum[static_cast<std::size_t>(bonds[b].b)] += kekule[b];
  }
  for (std::size_t i = 0; i < n; ++i) {
    Atom& a = atoms[i];
    const auto allowed = allowed_valences(a.atomic_number, a.charge);
    if (a.bracket) {
      const int v = bond_sum[i] + a.hydrogens;
      if (!allowed.empty() && v > allowed.back()) valence_violation(static_cast<int>(i), a.atomic_number, v);
      continue;
    }
    const int target = smallest_allowed_at_least(allowed, bond_sum[i]);
    if (target < 0) valence_violation(static_cast<int>(i), a.atomic_number, bond_sum[i]);
    a.hydrogens = target - bond_sum[i];
  }

  MoleculeGraph g;
  g.atoms_ = std::move(atoms);
  g.bonds_ = std::move(bonds);
  g.adjacency_ = std::move(adj);
  g.bond_in_ring_ = bond_ring;
  g.atom_in_ring_ = std::move(atom_ring);
  g.kekule_ = std::move(kekule);
  return g;
}

}  // namespace molgen::smiles

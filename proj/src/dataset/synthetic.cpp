#include <algorithm>
#include <cstdio>
#include <set>

#include "molgen/dataset/corpus.hpp"
#include "molgen/error.hpp"
#include "molgen/rng.hpp"
#include "molgen/smiles/canonical.hpp"
#include "molgen/smiles/molecule.hpp"

namespace molgen::data {
namespace {

using smiles::Atom;
using smiles::Bond;
using smiles::BondOrder;
using smiles::MoleculeGraph;

constexpr int kC = 6;
constexpr int kN = 7;
constexpr int kO = 8;

int max_valence(int z) { return z == kC ? 4 : z == kN ? 3 : 2; }

struct Draft {
  std::vector<int> element;
  std::vector<Bond> bonds;
  std::vector<int> used;  // bond-order sum per atom

  int free(int i) const { return max_valence(element[static_cast<std::size_t>(i)]) - used[static_cast<std::size_t>(i)]; }
};

int pick_element(Rng& rng) {
  const double u = rng.uniform01();
  return u < 0.7 ? kC : u < 0.85 ? kN : kO;
}

BondOrder pick_order(Rng& rng, int cap) {
  const double u = rng.uniform01();
  if (cap >= 3 && u < 0.05) return BondOrder::Triple;
  if (cap >= 2 && u < 0.2) return BondOrder::Double;
  return BondOrder::Single;
}

// Distances from `src` over the draft's bonds (BFS).
std::vector<int> distances(const Draft& d, int src) {
  const int n = static_cast<int>(d.element.size());
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::vector<int> queue = {src};
  dist[static_cast<std::size_t>(src)] = 0;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const int u = queue[q];
    for (const Bond& b : d.bonds) {
      if (b.a != u && b.b != u) continue;
      const int v = b.other(u);
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

Draft random_draft(Rng& rng) {
  Draft d;
  const int atoms = 3 + static_cast<int>(rng.uniform_index(8));
  d.element.push_back(kC);
  d.used.push_back(0);
  for (int i = 1; i < atoms; ++i) {
    std::vector<int> open;
    for (int j = 0; j < i; ++j) {
      if (d.free(j) > 0) open.push_back(j);
    }
    if (open.empty()) break;
    const int parent = open[rng.uniform_index(open.size())];
    const int z = pick_element(rng);
    d.element.push_back(z);
    d.used.push_back(0);
    const int cap = std::min(d.free(parent), max_valence(z));
    const BondOrder order = pick_order(rng, cap);
    d.bonds.push_back({parent, i, order});
    d.used[static_cast<std::size_t>(parent)] += static_cast<int>(order);
    d.used[static_cast<std::size_t>(i)] += static_cast<int>(order);
  }
  // Optional ring closure between atoms 4 or 5 bonds apart (5- and 6-rings).
  if (rng.uniform01() < 0.35) {
    std::vector<std::pair<int, int>> candidates;
    const int n = static_cast<int>(d.element.size());
    for (int i = 0; i < n; ++i) {
      if (d.free(i) < 1) continue;
      const auto dist = distances(d, i);
      for (int j = i + 1; j < n; ++j) {
        const int dj = dist[static_cast<std::size_t>(j)];
        if (d.free(j) >= 1 && (dj == 4 || dj == 5)) candidates.emplace_back(i, j);
      }
    }
    if (!candidates.empty()) {
      const auto [i, j] = candidates[rng.uniform_index(candidates.size())];
      d.bonds.push_back({i, j, BondOrder::Single});
      ++d.used[static_cast<std::size_t>(i)];
      ++d.used[static_cast<std::size_t>(j)];
    }
  }
  return d;
}

MoleculeGraph to_graph(const Draft& d) {
  std::vector<Atom> atoms;
  for (int z : d.element) atoms.push_back(Atom{z, 0, 0, false, false});
  return smiles::build_molecule(std::move(atoms), d.bonds);
}

std::string plural(int count, const std::string& noun) {
  return std::to_string(count) + " " + noun + (count == 1 ? "" : "s");
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += i + 1 == items.size() ? " and " : ", ";
    out += items[i];
  }
  return out;
}

// Functional groups recognised on C/N/O skeletons with no aromatic atoms.
std::vector<std::string> functional_groups(const MoleculeGraph& g) {
  int acid = 0, hydroxyl = 0, aldehyde = 0, ketone = 0, ether = 0, amine = 0, imine = 0,
      nitrile = 0, alkene = 0, alkyne = 0;
  const int n = static_cast<int>(g.atom_count());
  auto has_double_o = [&](int c) {
    for (const auto& nb : g.neighbors(c)) {
      if (g.atom(nb.atom).atomic_number == kO && g.kekule_order(nb.bond) == 2) return true;
    }
    return false;
  };
  for (int i = 0; i < n; ++i) {
    const Atom& a = g.atom(i);
    if (a.atomic_number == kC && has_double_o(i)) {
      bool oh = false;
      int carbons = 0;
      for (const auto& nb : g.neighbors(i)) {
        const Atom& o = g.atom(nb.atom);
        if (o.atomic_number == kO && g.kekule_order(nb.bond) == 1 && o.hydrogens == 1) oh = true;
        if (o.atomic_number == kC) ++carbons;
      }
      if (oh) {
        ++acid;
      } else if (a.hydrogens > 0) {
        ++aldehyde;
      } else if (carbons == 2) {
        ++ketone;
      }
    }
    if (a.atomic_number == kO && a.hydrogens == 1 && g.degree(i) == 1) {
      const int c = g.neighbors(i)[0].atom;
      if (g.atom(c).atomic_number == kC && !has_double_o(c)) ++hydroxyl;
    }
    if (a.atomic_number == kO && g.degree(i) == 2) {
      bool all_c = true;
      for (const auto& nb : g.neighbors(i)) all_c = all_c && g.atom(nb.atom).atomic_number == kC;
      if (all_c) ++ether;
    }
    if (a.atomic_number == kN && a.hydrogens > 0) {
      bool single_only = true;
      for (const auto& nb : g.neighbors(i)) single_only = single_only && g.kekule_order(nb.bond) == 1;
      if (single_only) ++amine;
    }
  }
  for (std::size_t b = 0; b < g.bond_count(); ++b) {
    const Bond& bd = g.bond(static_cast<int>(b));
    const int za = g.atom(bd.a).atomic_number;
    const int zb = g.atom(bd.b).atomic_number;
    const int order = g.kekule_order(static_cast<int>(b));
    const bool cc = za == kC && zb == kC;
    const bool cn = (za == kC && zb == kN) || (za == kN && zb == kC);
    if (cc && order == 2) ++alkene;
    if (cc && order == 3) ++alkyne;
    if (cn && order == 2) ++imine;
    if (cn && order == 3) ++nitrile;
  }
  std::vector<std::string> out;
  auto add = [&](int count, const std::string& one, const std::string& many) {
    if (count == 1) out.push_back(one);
    if (count > 1) out.push_back(std::to_string(count) + " " + many);
  };
  add(acid, "a carboxylic acid group", "carboxylic acid groups");
  add(hydroxyl, "a hydroxy group", "hydroxy groups");
  add(aldehyde, "an aldehyde group", "aldehyde groups");
  add(ketone, "a ketone group", "ketone groups");
  add(ether, "an ether linkage", "ether linkages");
  add(amine, "an amino group", "amino groups");
  add(imine, "an imine group", "imine groups");
  add(nitrile, "a nitrile group", "nitrile groups");
  add(alkene, "a carbon-carbon double bond", "carbon-carbon double bonds");
  add(alkyne, "a carbon-carbon triple bond", "carbon-carbon triple bonds");
  return out;
}

std::string describe(const MoleculeGraph& g) {
  int counts[3] = {0, 0, 0};
  int branches = 0;
  int hydrogens = 0;
  for (int i = 0; i < static_cast<int>(g.atom_count()); ++i) {
    const int z = g.atom(i).atomic_number;
    ++counts[z == kC ? 0 : z == kN ? 1 : 2];
    if (g.degree(i) >= 3) ++branches;
    hydrogens += g.atom(i).hydrogens;
  }
  const int rings = static_cast<int>(g.bond_count()) - static_cast<int>(g.atom_count()) + 1;
  std::string out = "The molecule is ";
  out += rings == 0 ? "an acyclic" : rings == 1 ? "a monocyclic" : "a polycyclic";
  std::vector<std::string> parts = {plural(counts[0], "carbon atom")};
  if (counts[1] > 0) parts.push_back(plural(counts[1], "nitrogen atom"));
  if (counts[2] > 0) parts.push_back(plural(counts[2], "oxygen atom"));
  parts.push_back(plural(hydrogens, "hydrogen"));
  out += " compound with " + join_list(parts) + ".";
  const auto groups = functional_groups(g);
  if (!groups.empty()) out += " It contains " + join_list(groups) + ".";
  if (branches > 0) {
    out += " Its skeleton has " + plural(branches, "branch point") + ".";
  } else {
    out += " Its skeleton is unbranched.";
  }
  return out;
}

}  // namespace

Corpus make_synthetic_corpus(std::size_t n, std::uint64_t seed) {
  if (n < 4) throw DomainError("make_synthetic_corpus: need at least 4 records");
  Rng rng(seed);
  std::vector<TextMoleculePair> all;
  std::set<std::string> smiles_seen;
  std::set<std::string> text_seen;
  const std::size_t max_attempts = 2000 * n;
  for (std::size_t attempt = 0; all.size() < n; ++attempt) {
    if (attempt == max_attempts) {
      throw DomainError("make_synthetic_corpus: could not find " + std::to_string(n) +
                        " distinct molecules");
    }
    const MoleculeGraph g = to_graph(random_draft(rng));
    std::string smi = smiles::canonical_smiles(g);
    std::string desc = describe(g);
    if (smiles_seen.count(smi) || text_seen.count(desc)) continue;
    smiles_seen.insert(smi);
    text_seen.insert(desc);
    char id[16];
    std::snprintf(id, sizeof id, "SYN%06zu", all.size() + 1);
    all.push_back({id, std::move(smi), std::move(desc)});
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  const SplitSizes sizes = split_sizes(n);
  Corpus c;
  for (std::size_t k = 0; k < n; ++k) {
    auto& dest = k < sizes.train ? c.train : k < sizes.train + sizes.validation ? c.validation : c.test;
    dest.push_back(all[order[k]]);
  }
  return c;
}

}  // namespace molgen::data

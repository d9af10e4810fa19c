#include "molgen/smiles/canonical.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>
#include <tuple>

namespace molgen::smiles {
namespace {

// Dense ranks from per-atom keys; equal keys share a rank.
template <class Key>
int assign_ranks(const std::vector<Key>& keys, std::vector<int>& ranks) {
  std::vector<int> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return keys[static_cast<std::size_t>(x)] < keys[static_cast<std::size_t>(y)];
  });
  int r = -1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto i = static_cast<std::size_t>(order[k]);
    if (k == 0 || keys[static_cast<std::size_t>(order[k - 1])] < keys[i]) ++r;
    ranks[i] = r;
  }
  return r + 1;
}

int refine(const MoleculeGraph& g, std::vector<int>& ranks, int classes) {
  const std::size_t n = g.atom_count();
  using Key = std::pair<int, std::vector<std::pair<int, int>>>;
  while (true) {
    std::vector<Key> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
      keys[i].first = ranks[i];
      for (const Neighbor& nb : g.neighbors(static_cast<int>(i))) {
        keys[i].second.emplace_back(static_cast<int>(g.bond(nb.bond).order),
                                    ranks[static_cast<std::size_t>(nb.atom)]);
      }
      std::sort(keys[i].second.begin(), keys[i].second.end());
    }
    const int next = assign_ranks(keys, ranks);
    if (next == classes) return classes;
    classes = next;
  }
}

std::string digit_text(int d) {
  if (d < 10) return std::to_string(d);
  return "%" + std::to_string(d);
}

class Writer {
 public:
  Writer(const MoleculeGraph& g, const std::vector<int>& priority) : g_(g), prio_(priority) {}

  std::string run() {
    const std::size_t n = g_.atom_count();
    visited_.assign(n, 0);
    children_.assign(n, {});
    ring_at_.assign(n, {});
    bond_seen_.assign(g_.bond_count(), 0);
    auto comps = g_.components();
    std::sort(comps.begin(), comps.end(), [&](const auto& x, const auto& y) {
      return min_priority(x) < min_priority(y);
    });
    std::string out;
    for (const auto& comp : comps) {
      int root = comp.front();
      for (int a : comp) {
        if (prio_[static_cast<std::size_t>(a)] < prio_[static_cast<std::size_t>(root)]) root = a;
      }
      discover(root, -1);
      if (!out.empty()) out += '.';
      emit(root, out);
    }
    return out;
  }

 private:
  struct RingEnd {
    int partner;
    int bond;
    bool opening;
  };

  int min_priority(const std::vector<int>& comp) const {
    int m = prio_[static_cast<std::size_t>(comp.front())];
    for (int a : comp) m = std::min(m, prio_[static_cast<std::size_t>(a)]);
    return m;
  }

  std::vector<Neighbor> sorted_neighbors(int a) const {
    const auto span = g_.neighbors(a);
    std::vector<Neighbor> v(span.begin(), span.end());
    std::sort(v.begin(), v.end(), [&](const Neighbor& x, const Neighbor& y) {
      return prio_[static_cast<std::size_t>(x.atom)] < prio_[static_cast<std::size_t>(y.atom)];
    });
    return v;
  }

  void discover(int a, int via_bond) {
    const auto ai = static_cast<std::size_t>(a);
    visited_[ai] = 1;
    for (const Neighbor& nb : sorted_neighbors(a)) {
      const auto b = static_cast<std::size_t>(nb.bond);
      if (nb.bond == via_bond || bond_seen_[b]) continue;
      bond_seen_[b] = 1;
      if (!visited_[static_cast<std::size_t>(nb.atom)]) {
        children_[ai].push_back(nb);
        discover(nb.atom, nb.bond);
      } else {
        // Back edge to an ancestor: opened there, closed here.
        ring_at_[static_cast<std::size_t>(nb.atom)].push_back({a, nb.bond, true});
        ring_at_[ai].push_back({nb.atom, nb.bond, false});
      }
    }
  }

  std::string bond_text(int bond) const {
    const Bond& b = g_.bond(bond);
    switch (b.order) {
      case BondOrder::Single:
        return g_.atom(b.a).aromatic && g_.atom(b.b).aromatic ? "-" : "";
      case BondOrder::Double: return "=";
      case BondOrder::Triple: return "#";
      case BondOrder::Aromatic: return "";
    }
    return "";
  }

  bool writes_unbracketed(int a) const {
    const Atom& at = g_.atom(a);
    if (!in_organic_subset(at.atomic_number) || at.charge != 0) return false;
    if (at.aromatic) {
      switch (at.atomic_number) {
        case 5: case 6: case 7: case 8: case 15: case 16: break;
        default: return false;
      }
      int base = 0;
      for (const Neighbor& nb : g_.neighbors(a)) {
        const BondOrder o = g_.bond(nb.bond).order;
        base += o == BondOrder::Aromatic ? 1 : static_cast<int>(o);
      }
      const int rem = default_implicit_hydrogens(at.atomic_number, base);
      if (rem < 0) return false;
      return (rem >= 1 ? rem - 1 : 0) == at.hydrogens;
    }
    int sum = 0;
    for (const Neighbor& nb : g_.neighbors(a)) sum += g_.kekule_order(nb.bond);
    return default_implicit_hydrogens(at.atomic_number, sum) == at.hydrogens;
  }

  std::string atom_text(int a) const {
    const Atom& at = g_.atom(a);
    std::string sym(element_symbol(at.atomic_number));
    if (at.aromatic) sym[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(sym[0])));
    if (writes_unbracketed(a)) return sym;
    std::string s = "[" + sym;
    if (at.hydrogens > 0) {
      s += 'H';
      if (at.hydrogens > 1) s += std::to_string(at.hydrogens);
    }
    if (at.charge != 0) {
      s += at.charge > 0 ? '+' : '-';
      if (std::abs(at.charge) > 1) s += std::to_string(std::abs(at.charge));
    }
    return s + "]";
  }

  int allocate_digit() {
    for (int d = 1;; ++d) {
      if (std::find(in_use_.begin(), in_use_.end(), d) == in_use_.end()) {
        in_use_.push_back(d);
        return d;
      }
    }
  }

  void emit(int a, std::string& out) {
    const auto ai = static_cast<std::size_t>(a);
    out += atom_text(a);
    auto ends = ring_at_[ai];
    std::sort(ends.begin(), ends.end(), [&](const RingEnd& x, const RingEnd& y) {
      if (x.opening != y.opening) return !x.opening;
      return prio_[static_cast<std::size_t>(x.partner)] < prio_[static_cast<std::size_t>(y.partner)];
    });
    std::vector<int> freed;
    for (const RingEnd& e : ends) {
      if (e.opening) continue;
      const int d = digit_of_bond_.at(e.bond);
      out += digit_text(d);
      freed.push_back(d);
    }
    for (const RingEnd& e : ends) {
      if (!e.opening) continue;
      const int d = allocate_digit();
      digit_of_bond_[e.bond] = d;
      out += bond_text(e.bond) + digit_text(d);
    }
    for (int d : freed) in_use_.erase(std::find(in_use_.begin(), in_use_.end(), d));
    const auto& kids = children_[ai];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const bool last = k + 1 == kids.size();
      if (!last) out += '(';
      out += bond_text(kids[k].bond);
      emit(kids[k].atom, out);
      if (!last) out += ')';
    }
  }

  const MoleculeGraph& g_;
  const std::vector<int>& prio_;
  std::vector<char> visited_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<RingEnd>> ring_at_;
  std::vector<char> bond_seen_;
  std::vector<int> in_use_;
  std::map<int, int> digit_of_bond_;
};

}  // namespace

std::vector<int> canonical_ranks(const MoleculeGraph& g) {
  const std::size_t n = g.atom_count();
  std::vector<int> ranks(n, 0);
  if (n == 0) return ranks;
  using Inv = std::tuple<int, int, int, int, int, int>;
  std::vector<Inv> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& a = g.atom(static_cast<int>(i));
    // Degree first, so output starts at a terminal atom where one exists.
    inv[i] = {g.degree(static_cast<int>(i)), a.atomic_number, a.aromatic ? 1 : 0, a.charge, a.hydrogens,
              g.atom_in_ring(static_cast<int>(i)) ? 1 : 0};
  }
  int classes = refine(g, ranks, assign_ranks(inv, ranks));
  while (classes < static_cast<int>(n)) {
    // Lowest rank shared by more than one atom; its first atom is split off.
    std::vector<int> count(n, 0);
    for (int r : ranks) ++count[static_cast<std::size_t>(r)];
    int tied = 0;
    while (count[static_cast<std::size_t>(tied)] < 2) ++tied;
    std::vector<std::pair<int, int>> keys(n);
    bool split = false;
    for (std::size_t i = 0; i < n; ++i) {
      int sub = 1;
      if (!split && ranks[i] == tied) {
        sub = 0;
        split = true;
      }
      keys[i] = {ranks[i], sub};
    }
    classes = refine(g, ranks, assign_ranks(keys, ranks));
  }
  return ranks;
}

std::string write_smiles(const MoleculeGraph& g, const std::vector<int>& priority) {
  return Writer(g, priority).run();
}

std::string canonical_smiles(const MoleculeGraph& g) { return write_smiles(g, canonical_ranks(g)); }

std::string random_smiles(const MoleculeGraph& g, Rng& rng) {
  std::vector<int> priority(g.atom_count());
  std::iota(priority.begin(), priority.end(), 0);
  rng.shuffle(priority);
  return write_smiles(g, priority);
}

}  // namespace molgen::smiles

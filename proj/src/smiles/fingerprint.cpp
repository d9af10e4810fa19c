#include "molgen/smiles/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <string>

#include "molgen/error.hpp"
#include "molgen/hash.hpp"

namespace molgen::smiles {
namespace {

bool power_of_two(std::uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::string atom_label(const Atom& a) {
  std::string s(element_symbol(a.atomic_number));
  if (a.aromatic) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

void extend_paths(const MoleculeGraph& g, int max_len, std::vector<int>& atoms,
                  std::vector<int>& bonds, std::vector<char>& on_path,
                  std::vector<std::string>& out) {
  if (!bonds.empty()) {
    std::string fwd = atom_label(g.atom(atoms[0]));
    std::string rev = atom_label(g.atom(atoms.back()));
    for (std::size_t k = 0; k < bonds.size(); ++k) {
      fwd += bond_symbol(g.bond(bonds[k]).order);
      fwd += atom_label(g.atom(atoms[k + 1]));
      const std::size_t rk = bonds.size() - 1 - k;
      rev += bond_symbol(g.bond(bonds[rk]).order);
      rev += atom_label(g.atom(atoms[rk]));
    }
    out.push_back(std::min(fwd, rev));
  }
  if (static_cast<int>(bonds.size()) == max_len) return;
  for (const Neighbor& nb : g.neighbors(atoms.back())) {
    if (on_path[static_cast<std::size_t>(nb.atom)]) continue;
    on_path[static_cast<std::size_t>(nb.atom)] = 1;
    atoms.push_back(nb.atom);
    bonds.push_back(nb.bond);
    extend_paths(g, max_len, atoms, bonds, on_path, out);
    atoms.pop_back();
    bonds.pop_back();
    on_path[static_cast<std::size_t>(nb.atom)] = 0;
  }
}

}  // namespace

BitFingerprint make_fingerprint(std::uint32_t nbits, std::vector<std::uint32_t> bits) {
  for (std::uint32_t b : bits) {
    if (b >= nbits) throw DomainError("fingerprint bit " + std::to_string(b) + " out of range");
  }
  std::sort(bits.begin(), bits.end());
  bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
  return {nbits, std::move(bits)};
}

BitFingerprint morgan_fingerprint(const MoleculeGraph& g, int radius, std::uint32_t nbits) {
  if (radius < 0 || radius > 10) throw DomainError("morgan radius must be in [0, 10]");
  if (!power_of_two(nbits) || nbits < 64) throw DomainError("morgan nbits must be a power of two >= 64");
  const std::size_t n = g.atom_count();
  std::vector<std::uint64_t> ids(n);
  std::vector<std::uint32_t> bits;
  for (std::size_t i = 0; i < n; ++i) {
    const int ii = static_cast<int>(i);
    const Atom& a = g.atom(ii);
    std::uint64_t h = fnv1a64("morgan0");
    h = fnv1a64_u64(static_cast<std::uint64_t>(a.atomic_number), h);
    h = fnv1a64_u64(static_cast<std::uint64_t>(g.degree(ii)), h);
    h = fnv1a64_u64(static_cast<std::uint64_t>(a.hydrogens), h);
    h = fnv1a64_u64(static_cast<std::uint64_t>(static_cast<std::int64_t>(a.charge)), h);
    h = fnv1a64_u64(g.atom_in_ring(ii) ? 1 : 0, h);
    h = fnv1a64_u64(a.aromatic ? 1 : 0, h);
    ids[i] = h;
    bits.push_back(static_cast<std::uint32_t>(h & (nbits - 1)));
  }
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
      for (const Neighbor& nb : g.neighbors(static_cast<int>(i))) {
        env.emplace_back(static_cast<std::uint64_t>(g.bond(nb.bond).order),
                         ids[static_cast<std::size_t>(nb.atom)]);
      }
      std::sort(env.begin(), env.end());
      std::uint64_t h = fnv1a64_u64(static_cast<std::uint64_t>(r), fnv1a64("morgan"));
      h = fnv1a64_u64(ids[i], h);
      for (const auto& [order, id] : env) {
        h = fnv1a64_u64(order, h);
        h = fnv1a64_u64(id, h);
      }
      next[i] = h;
      bits.push_back(static_cast<std::uint32_t>(h & (nbits - 1)));
    }
    ids = std::move(next);
  }
  return make_fingerprint(nbits, std::move(bits));
}

std::vector<std::string> enumerate_paths(const MoleculeGraph& g, int max_len) {
  if (max_len < 1 || max_len > 7) throw DomainError("path max_len must be in [1, 7]");
  std::vector<std::string> out;
  std::vector<char> on_path(g.atom_count(), 0);
  for (std::size_t s = 0; s < g.atom_count(); ++s) {
    std::vector<int> atoms{static_cast<int>(s)};
    std::vector<int> bonds;
    on_path[s] = 1;
    extend_paths(g, max_len, atoms, bonds, on_path, out);
    on_path[s] = 0;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BitFingerprint path_fingerprint(const MoleculeGraph& g, int max_len, std::uint32_t nbits) {
  if (!power_of_two(nbits)) throw DomainError("path nbits must be a power of two");
  std::vector<std::uint32_t> bits;
  for (const std::string& p : enumerate_paths(g, max_len)) {
    bits.push_back(static_cast<std::uint32_t>(fnv1a64(p) & (nbits - 1)));
  }
  return make_fingerprint(nbits, std::move(bits));
}

}  // namespace molgen::smiles

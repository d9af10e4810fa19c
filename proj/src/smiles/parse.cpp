#include "molgen/smiles/parse.hpp"

#include <cctype>
#include <map>
#include <vector>

namespace molgen::smiles {
namespace {

constexpr char kNoBond = 0;

struct RingOpen {
  int atom;
  char bond;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  MoleculeGraph run() {
    if (s_.empty()) syntax(0, "empty SMILES");
    while (pos_ < s_.size()) step();
    if (pending_ != kNoBond) syntax(s_.size(), "bond at end of input");
    if (!branches_.empty()) syntax(s_.size(), "unclosed branch");
    if (prev_ < 0) syntax(s_.size(), "empty component after '.'");
    if (!rings_.empty()) {
      throw SmilesError(SmilesError::Kind::UnclosedRing,
                        "unclosed ring bond " + label_text(rings_.begin()->first));
    }
    return build_molecule(std::move(atoms_), std::move(bonds_));
  }

 private:
  struct Branch {
    int atom;
    bool nonempty;
  };

  [[noreturn]] static void syntax(std::size_t pos, const std::string& reason) {
    throw SmilesError(SmilesError::Kind::Syntax,
                      "syntax error at position " + std::to_string(pos) + ": " + reason);
  }

  static std::string label_text(int label) {
    return label < 10 ? std::to_string(label) : "%" + std::to_string(label);
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
  }

  void step() {
    const char c = s_[pos_];
    switch (c) {
      case '.':
        if (prev_ < 0) syntax(pos_, "'.' without preceding atom");
        if (pending_ != kNoBond) syntax(pos_, "bond before '.'");
        if (!branches_.empty()) syntax(pos_, "'.' inside a branch is not supported");
        prev_ = -1;
        ++pos_;
        return;
      case '-': case '=': case '#': case ':':
        if (prev_ < 0) syntax(pos_, "bond without preceding atom");
        if (pending_ != kNoBond) syntax(pos_, "consecutive bond symbols");
        pending_ = c;
        pending_pos_ = pos_++;
        return;
      case '/': case '\\':
        syntax(pos_, "stereo bonds are not supported");
      case '$':
        syntax(pos_, "quadruple bonds are not supported");
      case '(':
        if (prev_ < 0) syntax(pos_, "branch without preceding atom");
        if (pending_ != kNoBond) syntax(pos_, "bond before '('");
        if (!branches_.empty()) branches_.back().nonempty = true;
        branches_.push_back({prev_, false});
        ++pos_;
        return;
      case ')': {
        if (branches_.empty()) syntax(pos_, "unbalanced ')'");
        if (pending_ != kNoBond) syntax(pos_, "bond before ')'");
        if (!branches_.back().nonempty) syntax(pos_, "empty branch");
        prev_ = branches_.back().atom;
        branches_.pop_back();
        ++pos_;
        return;
      }
      case '%':
        ring_closure();
        return;
      case '[':
        bracket_atom();
        return;
      case '*':
        syntax(pos_, "wildcard atoms are not supported");
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ring_closure();
      return;
    }
    organic_atom();
  }

  void ring_closure() {
    const std::size_t at = pos_;
    if (prev_ < 0) syntax(at, "ring bond without preceding atom");
    int label;
    if (s_[pos_] == '%') {
      if (!std::isdigit(static_cast<unsigned char>(peek(1))) ||
          !std::isdigit(static_cast<unsigned char>(peek(2)))) {
        syntax(at, "'%' must be followed by two digits");
      }
      label = (peek(1) - '0') * 10 + (peek(2) - '0');
      pos_ += 3;
    } else {
      label = s_[pos_] - '0';
      ++pos_;
    }
    const char bond = pending_;
    pending_ = kNoBond;
    auto it = rings_.find(label);
    if (it == rings_.end()) {
      rings_.emplace(label, RingOpen{prev_, bond});
      return;
    }
    const RingOpen open = it->second;
    rings_.erase(it);
    if (open.atom == prev_) syntax(at, "ring bond " + label_text(label) + " closes on its own atom");
    // When both ends carry a bond symbol the opening one wins.
    add_bond(open.atom, prev_, open.bond != kNoBond ? open.bond : bond, at);
  }

  void organic_atom() {
    const std::size_t at = pos_;
    const char c = s_[pos_];
    Atom a;
    std::size_t len = 1;
    switch (c) {
      case 'B':
        if (peek(1) == 'r') { a.atomic_number = 35; len = 2; } else { a.atomic_number = 5; }
        break;
      case 'C':
        if (peek(1) == 'l') { a.atomic_number = 17; len = 2; } else { a.atomic_number = 6; }
        break;
      case 'N': a.atomic_number = 7; break;
      case 'O': a.atomic_number = 8; break;
      case 'P': a.atomic_number = 15; break;
      case 'S': a.atomic_number = 16; break;
      case 'F': a.atomic_number = 9; break;
      case 'I': a.atomic_number = 53; break;
      case 'b': a.atomic_number = 5; a.aromatic = true; break;
      case 'c': a.atomic_number = 6; a.aromatic = true; break;
      case 'n': a.atomic_number = 7; a.aromatic = true; break;
      case 'o': a.atomic_number = 8; a.aromatic = true; break;
      case 'p': a.atomic_number = 15; a.aromatic = true; break;
      case 's': a.atomic_number = 16; a.aromatic = true; break;
      default: {
        std::string shown(1, c);
        if (std::isspace(static_cast<unsigned char>(c))) shown = "whitespace";
        syntax(at, "unexpected character '" + shown + "'");
      }
    }
    pos_ += len;
    add_atom(a, at);
  }

  int parse_number(std::size_t max_digits) {
    int v = 0;
    std::size_t digits = 0;
    while (std::isdigit(static_cast<unsigned char>(peek())) && digits < max_digits) {
      v = v * 10 + (peek() - '0');
      ++pos_;
      ++digits;
    }
    return digits == 0 ? -1 : v;
  }

  void bracket_atom() {
    const std::size_t at = pos_;
    ++pos_;
    Atom a;
    a.bracket = true;
    parse_number(4);  // isotope: accepted, ignored
    const char c = peek();
    if (c == '*') syntax(pos_, "wildcard atoms are not supported");
    if (std::islower(static_cast<unsigned char>(c))) {
      // Aromatic bracket symbols.
      static constexpr std::pair<std::string_view, int> kAromatic[] = {
          {"se", 34}, {"as", 33}, {"te", 52}, {"b", 5}, {"c", 6}, {"n", 7}, {"o", 8}, {"p", 15}, {"s", 16}};
      bool found = false;
      for (const auto& [sym, z] : kAromatic) {
        if (s_.substr(pos_, sym.size()) == sym) {
          a.atomic_number = z;
          a.aromatic = true;
          pos_ += sym.size();
          found = true;
          break;
        }
      }
      if (!found) syntax(pos_, "unknown aromatic element symbol");
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      int z = 0;
      if (std::islower(static_cast<unsigned char>(peek(1)))) {
        z = atomic_number(s_.substr(pos_, 2));
        if (z != 0) pos_ += 2;
      }
      if (z == 0) {
        z = atomic_number(s_.substr(pos_, 1));
        if (z == 0) syntax(pos_, "unknown element symbol");
        ++pos_;
      }
      a.atomic_number = z;
    } else {
      syntax(pos_, "expected element symbol in bracket atom");
    }
    if (peek() == '@') syntax(pos_, "stereochemistry is not supported");
    if (peek() == 'H') {
      ++pos_;
      const int h = parse_number(1);
      a.hydrogens = h < 0 ? 1 : h;
    }
    if (peek() == '+' || peek() == '-') {
      const char sign = peek();
      ++pos_;
      int mag = parse_number(2);
      if (mag < 0) {
        mag = 1;
        while (peek() == sign) {
          ++mag;
          ++pos_;
        }
      }
      a.charge = sign == '+' ? mag : -mag;
    }
    if (peek() == ':') syntax(pos_, "atom classes are not supported");
    if (peek() == '@') syntax(pos_, "stereochemistry is not supported");
    if (peek() != ']') {
      if (pos_ >= s_.size()) syntax(pos_, "unterminated bracket atom");
      syntax(pos_, "unexpected character in bracket atom");
    }
    ++pos_;
    add_atom(a, at);
  }

  void add_atom(const Atom& a, std::size_t at) {
    const int idx = static_cast<int>(atoms_.size());
    atoms_.push_back(a);
    if (prev_ >= 0) add_bond(prev_, idx, pending_, pending_ != kNoBond ? pending_pos_ : at);
    pending_ = kNoBond;
    prev_ = idx;
    if (!branches_.empty()) branches_.back().nonempty = true;
  }

  void add_bond(int i, int j, char symbol, std::size_t at) {
    const Atom& ai = atoms_[static_cast<std::size_t>(i)];
    const Atom& aj = atoms_[static_cast<std::size_t>(j)];
    BondOrder order;
    switch (symbol) {
      case '-': order = BondOrder::Single; break;
      case '=': order = BondOrder::Double; break;
      case '#': order = BondOrder::Triple; break;
      case ':':
        if (!ai.aromatic || !aj.aromatic) syntax(at, "aromatic bond between non-aromatic atoms");
        order = BondOrder::Aromatic;
        break;
      default:
        order = ai.aromatic && aj.aromatic ? BondOrder::Aromatic : BondOrder::Single;
    }
    for (const Bond& b : bonds_) {
      if ((b.a == i && b.b == j) || (b.a == j && b.b == i)) {
        syntax(at, "duplicate bond between atoms " + std::to_string(i) + " and " + std::to_string(j));
      }
    }
    bonds_.push_back({i, j, order});
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int prev_ = -1;
  char pending_ = kNoBond;
  std::size_t pending_pos_ = 0;
  std::vector<Branch> branches_;
  std::map<int, RingOpen> rings_;
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
};

}  // namespace

MoleculeGraph parse_smiles(std::string_view text) { return Parser(text).run(); }

std::optional<MoleculeGraph> try_parse_smiles(std::string_view text, std::string* error) {
  try {
    return parse_smiles(text);
  } catch (const SmilesError& e) {
    if (error != nullptr) *error = e.what();
    return std::nullopt;
  }
}

bool is_valid_smiles(std::string_view text) { return try_parse_smiles(text).has_value(); }

}  // namespace molgen::smiles

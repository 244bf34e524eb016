/* Copyright 2026 The maskinfo Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "maskinfo/molgraph.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <map>
#include <stack>

#include "maskinfo/error.h"

namespace maskinfo {

namespace {

constexpr std::array<std::string_view, kMaxAtomicNumber + 1> kSymbols = {
    "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
    "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",
    "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac",
    "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf",
    "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

bool IsOrganicSubset(int z) {
  switch (z) {
    case 5: case 6: case 7: case 8: case 9: case 15: case 16: case 17: case 35: case 53:
      return true;
    default:
      return false;
  }
}

enum class BondSpec : std::uint8_t { kImplicit, kSingle, kDouble, kTriple, kAromatic };

struct PendingBond {
  int begin;
  int end;
  BondSpec spec;
};

struct RingOpening {
  int atom;
  BondSpec spec;
};

[[noreturn]] void Fail(ErrorCode code, std::string_view smiles, size_t pos, std::string_view what) {
  throw Error(code, std::string(what) + " at position " + std::to_string(pos) + " in '" +
                        std::string(smiles) + "'");
}

class SmilesParser {
 public:
  explicit SmilesParser(std::string_view s) : s_(s) {}

  MolGraph Parse() {
    // Anything after the first whitespace is a title, per common usage.
    size_t end = 0;
    while (end < s_.size() && !std::isspace(static_cast<unsigned char>(s_[end]))) ++end;
    s_ = s_.substr(0, end);
    if (s_.empty()) throw Error(ErrorCode::kEmptyInput, "empty SMILES");

    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '(') {
        if (prev_ < 0) Fail(ErrorCode::kUnknownToken, s_, pos_, "branch before any atom");
        if (bond_ != BondSpec::kImplicit) Fail(ErrorCode::kUnknownToken, s_, pos_, "bond before branch");
        branches_.push({prev_, pos_});
        ++pos_;
      } else if (c == ')') {
        if (branches_.empty()) Fail(ErrorCode::kUnbalancedParen, s_, pos_, "unmatched ')'");
        if (bond_ != BondSpec::kImplicit) Fail(ErrorCode::kUnknownToken, s_, pos_, "dangling bond");
        prev_ = branches_.top().first;
        branches_.pop();
        ++pos_;
      } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\') {
        if (bond_ != BondSpec::kImplicit) Fail(ErrorCode::kUnknownToken, s_, pos_, "consecutive bond symbols");
        bond_ = c == '=' ? BondSpec::kDouble
              : c == '#' ? BondSpec::kTriple
              : c == ':' ? BondSpec::kAromatic
                         : BondSpec::kSingle;
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        RingBond(c - '0');
        ++pos_;
      } else if (c == '%') {
        if (pos_ + 2 >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) ||
            !std::isdigit(static_cast<unsigned char>(s_[pos_ + 2]))) {
          Fail(ErrorCode::kUnknownToken, s_, pos_, "malformed %nn ring label");
        }
        RingBond((s_[pos_ + 1] - '0') * 10 + (s_[pos_ + 2] - '0'));
        pos_ += 3;
      } else if (c == '.') {
        Fail(ErrorCode::kMultiFragment, s_, pos_, "dot-separated fragments");
      } else if (c == '[') {
        BracketAtom();
      } else {
        OrganicAtom();
      }
    }
    if (!branches_.empty()) Fail(ErrorCode::kUnbalancedParen, s_, branches_.top().second, "unclosed '('");
    if (!rings_.empty()) {
      Fail(ErrorCode::kUnclosedRing, s_, s_.size(), "ring label " + std::to_string(rings_.begin()->first) + " never closed");
    }
    if (bond_ != BondSpec::kImplicit) Fail(ErrorCode::kUnknownToken, s_, pos_, "dangling bond");
    return Build();
  }

 private:
  void AddAtom(Atom atom) {
    atom.index = static_cast<int>(atoms_.size());
    atoms_.push_back(atom);
    const int idx = atom.index;
    if (prev_ >= 0) AddBond(prev_, idx, bond_);
    bond_ = BondSpec::kImplicit;
    prev_ = idx;
  }

  void AddBond(int a, int b, BondSpec spec) {
    if (a == b) Fail(ErrorCode::kUnknownToken, s_, pos_, "atom bonded to itself");
    for (const auto& p : pending_) {
      if ((p.begin == a && p.end == b) || (p.begin == b && p.end == a)) {
        Fail(ErrorCode::kUnknownToken, s_, pos_, "duplicate bond");
      }
    }
    pending_.push_back({a, b, spec});
  }

  void RingBond(int label) {
    if (prev_ < 0) Fail(ErrorCode::kUnknownToken, s_, pos_, "ring label before any atom");
    auto it = rings_.find(label);
    if (it == rings_.end()) {
      rings_[label] = {prev_, bond_};
    } else {
      BondSpec spec = bond_;
      if (spec == BondSpec::kImplicit) {
        spec = it->second.spec;
      } else if (it->second.spec != BondSpec::kImplicit && it->second.spec != spec) {
        Fail(ErrorCode::kUnknownToken, s_, pos_, "conflicting ring bond symbols");
      }
      AddBond(it->second.atom, prev_, spec);
      rings_.erase(it);
    }
    bond_ = BondSpec::kImplicit;
  }

  void OrganicAtom() {
    const char c = s_[pos_];
    Atom atom;
    size_t len = 1;
    if (c == '*') {
      atom.atomic_number = 0;
    } else if (c == 'C' && pos_ + 1 < s_.size() && s_[pos_ + 1] == 'l') {
      atom.atomic_number = 17;
      len = 2;
    } else if (c == 'B' && pos_ + 1 < s_.size() && s_[pos_ + 1] == 'r') {
      atom.atomic_number = 35;
      len = 2;
    } else {
      switch (c) {
        case 'B': atom.atomic_number = 5; break;
        case 'C': atom.atomic_number = 6; break;
        case 'N': atom.atomic_number = 7; break;
        case 'O': atom.atomic_number = 8; break;
        case 'P': atom.atomic_number = 15; break;
        case 'S': atom.atomic_number = 16; break;
        case 'F': atom.atomic_number = 9; break;
        case 'I': atom.atomic_number = 53; break;
        case 'b': atom.atomic_number = 5; atom.aromatic = true; break;
        case 'c': atom.atomic_number = 6; atom.aromatic = true; break;
        case 'n': atom.atomic_number = 7; atom.aromatic = true; break;
        case 'o': atom.atomic_number = 8; atom.aromatic = true; break;
        case 'p': atom.atomic_number = 15; atom.aromatic = true; break;
        case 's': atom.atomic_number = 16; atom.aromatic = true; break;
        default:
          Fail(ErrorCode::kUnknownToken, s_, pos_, std::string("unexpected character '") + c + "'");
      }
    }
    AddAtom(atom);
    pos_ += len;
  }

  void BracketAtom() {
    const size_t open = pos_;
    const size_t close = s_.find(']', pos_);
    if (close == std::string_view::npos) Fail(ErrorCode::kUnknownToken, s_, open, "unterminated bracket atom");
    std::string_view body = s_.substr(open + 1, close - open - 1);
    size_t i = 0;
    while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i;  // isotope

    Atom atom;
    atom.bracket = true;
    if (i >= body.size()) Fail(ErrorCode::kUnknownToken, s_, open, "bracket atom without element");
    if (body[i] == '*') {
      atom.atomic_number = 0;
      ++i;
    } else if (std::islower(static_cast<unsigned char>(body[i]))) {
      // Aromatic: two-letter forms first.
      static constexpr std::array<std::pair<std::string_view, int>, 9> kAromatic = {{
          {"se", 34}, {"as", 33}, {"te", 52}, {"b", 5}, {"c", 6}, {"n", 7}, {"o", 8}, {"p", 15}, {"s", 16}}};
      bool found = false;
      for (const auto& [sym, z] : kAromatic) {
        if (body.substr(i, sym.size()) == sym) {
          atom.atomic_number = z;
          atom.aromatic = true;
          i += sym.size();
          found = true;
          break;
        }
      }
      if (!found) Fail(ErrorCode::kUnknownToken, s_, open, "unknown aromatic symbol");
    } else if (std::isupper(static_cast<unsigned char>(body[i]))) {
      size_t len = 1;
      if (i + 1 < body.size() && std::islower(static_cast<unsigned char>(body[i + 1])) &&
          AtomicNumberFromSymbol(body.substr(i, 2)) > 0) {
        len = 2;
      } else if (i + 1 < body.size() && std::islower(static_cast<unsigned char>(body[i + 1])) &&
                 AtomicNumberFromSymbol(body.substr(i, 1)) == 0) {
        // Two-letter symbol that is not an element: unknown class.
        len = 2;
      }
      atom.atomic_number = AtomicNumberFromSymbol(body.substr(i, len));
      i += len;
    } else {
      Fail(ErrorCode::kUnknownToken, s_, open, "bracket atom without element");
    }

    // Chirality: @, @@, @TH1, @AL2, @SP3, @TB12, @OH30 ...
    if (i < body.size() && body[i] == '@') {
      ++i;
      if (i < body.size() && body[i] == '@') {
        ++i;
      } else {
        while (i < body.size() && std::isupper(static_cast<unsigned char>(body[i])) && body[i] != 'H') ++i;
        while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i;
      }
    }
    if (i < body.size() && body[i] == 'H') {
      ++i;
      int h = 1;
      if (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) {
        h = 0;
        while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) h = h * 10 + (body[i++] - '0');
      }
      atom.bracket_hydrogens = h;
    }
    if (i < body.size() && (body[i] == '+' || body[i] == '-')) {
      const char sign = body[i];
      int magnitude = 0;
      while (i < body.size() && body[i] == sign) {
        ++magnitude;
        ++i;
      }
      if (magnitude == 1 && i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) {
        magnitude = 0;
        while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) magnitude = magnitude * 10 + (body[i++] - '0');
      }
      atom.formal_charge = sign == '+' ? magnitude : -magnitude;
    }
    if (i < body.size() && body[i] == ':') {  // atom class
      ++i;
      while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) ++i;
    }
    if (i != body.size()) Fail(ErrorCode::kUnknownToken, s_, open + 1 + i, "unexpected text in bracket atom");
    pos_ = close + 1;
    AddAtom(atom);
  }

  MolGraph Build() {
    std::vector<Bond> bonds;
    bonds.reserve(pending_.size());
    std::vector<bool> implicit_aromatic(pending_.size(), false);
    for (size_t b = 0; b < pending_.size(); ++b) {
      const auto& p = pending_[b];
      Bond bond;
      bond.begin = p.begin;
      bond.end = p.end;
      switch (p.spec) {
        case BondSpec::kDouble: bond.order = BondOrder::kDouble; break;
        case BondSpec::kTriple: bond.order = BondOrder::kTriple; break;
        case BondSpec::kAromatic: bond.order = BondOrder::kAromatic; break;
        case BondSpec::kSingle: bond.order = BondOrder::kSingle; break;
        case BondSpec::kImplicit:
          bond.order = BondOrder::kSingle;
          implicit_aromatic[b] = atoms_[static_cast<size_t>(p.begin)].aromatic &&
                                 atoms_[static_cast<size_t>(p.end)].aromatic;
          break;
      }
      bonds.push_back(bond);
    }
    MolGraph provisional(atoms_, bonds, std::string(s_));
    const RingFlags rings = RingMembership(provisional);
    for (size_t b = 0; b < bonds.size(); ++b) {
      // Implicit bonds between two aromatic atoms are aromatic only on a ring;
      // the biphenyl-style linker stays single.
      if (implicit_aromatic[b] && rings.bond[b]) bonds[b].order = BondOrder::kAromatic;
      bonds[b].in_ring = rings.bond[b];
    }
    for (size_t a = 0; a < atoms_.size(); ++a) atoms_[a].in_ring = rings.atom[a];
    return MolGraph(std::move(atoms_), std::move(bonds), std::string(s_));
  }

  std::string_view s_;
  size_t pos_ = 0;
  int prev_ = -1;
  BondSpec bond_ = BondSpec::kImplicit;
  std::vector<Atom> atoms_;
  std::vector<PendingBond> pending_;
  std::map<int, RingOpening> rings_;
  std::stack<std::pair<int, size_t>> branches_;
};

}  // namespace

char BondOrderCode(BondOrder order) {
  switch (order) {
    case BondOrder::kSingle: return '1';
    case BondOrder::kDouble: return '2';
    case BondOrder::kTriple: return '3';
    case BondOrder::kAromatic: return 'a';
  }
  return '?';
}

std::string_view ElementSymbol(int atomic_number) {
  if (atomic_number < 0 || atomic_number > kMaxAtomicNumber) return "*";
  return kSymbols[static_cast<size_t>(atomic_number)];
}

int AtomicNumberFromSymbol(std::string_view symbol) {
  for (int z = 1; z <= kMaxAtomicNumber; ++z) {
    if (kSymbols[static_cast<size_t>(z)] == symbol) return z;
  }
  return 0;
}

MolGraph::MolGraph(std::vector<Atom> atoms, std::vector<Bond> bonds, std::string source_smiles)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)), source_smiles_(std::move(source_smiles)) {
  adjacency_.resize(atoms_.size());
  for (size_t b = 0; b < bonds_.size(); ++b) {
    const Bond& bond = bonds_[b];
    adjacency_[static_cast<size_t>(bond.begin)].push_back({bond.end, static_cast<int>(b)});
    adjacency_[static_cast<size_t>(bond.end)].push_back({bond.begin, static_cast<int>(b)});
  }
}

int MolGraph::FindBond(int a, int b) const {
  for (const Neighbor& n : neighbors(a)) {
    if (n.atom == b) return n.bond;
  }
  return -1;
}

bool MolGraph::IsConnected() const {
  if (atoms_.empty()) return true;
  std::vector<bool> seen(atoms_.size(), false);
  std::vector<int> stack = {0};
  seen[0] = true;
  size_t reached = 1;
  while (!stack.empty()) {
    const int a = stack.back();
    stack.pop_back();
    for (const Neighbor& n : neighbors(a)) {
      if (!seen[static_cast<size_t>(n.atom)]) {
        seen[static_cast<size_t>(n.atom)] = true;
        ++reached;
        stack.push_back(n.atom);
      }
    }
  }
  return reached == atoms_.size();
}

RingFlags RingMembership(const MolGraph& graph) {
  const int n = graph.num_atoms();
  RingFlags flags;
  flags.atom.assign(static_cast<size_t>(n), false);
  flags.bond.assign(static_cast<size_t>(graph.num_bonds()), true);

  // Iterative Tarjan bridge finding.
  std::vector<int> disc(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
  int timer = 0;
  struct Frame {
    int atom;
    int parent_bond;
    size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (disc[static_cast<size_t>(root)] >= 0) continue;
    std::vector<Frame> stack = {{root, -1, 0}};
    disc[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto nbrs = graph.neighbors(f.atom);
      if (f.next < nbrs.size()) {
        const Neighbor nb = nbrs[f.next++];
        if (nb.bond == f.parent_bond) continue;
        auto& d = disc[static_cast<size_t>(nb.atom)];
        if (d < 0) {
          d = low[static_cast<size_t>(nb.atom)] = timer++;
          stack.push_back({nb.atom, nb.bond, 0});
        } else {
          low[static_cast<size_t>(f.atom)] = std::min(low[static_cast<size_t>(f.atom)], d);
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          const int parent = stack.back().atom;
          low[static_cast<size_t>(parent)] =
              std::min(low[static_cast<size_t>(parent)], low[static_cast<size_t>(done.atom)]);
          if (low[static_cast<size_t>(done.atom)] > disc[static_cast<size_t>(parent)]) {
            flags.bond[static_cast<size_t>(done.parent_bond)] = false;
          }
        }
      }
    }
  }
  for (int b = 0; b < graph.num_bonds(); ++b) {
    if (flags.bond[static_cast<size_t>(b)]) {
      flags.atom[static_cast<size_t>(graph.bond(b).begin)] = true;
      flags.atom[static_cast<size_t>(graph.bond(b).end)] = true;
    }
  }
  return flags;
}

namespace {

std::string AtomToken(const Atom& atom) {
  const int z = atom.atomic_number;
  const bool organic = z == 0 || IsOrganicSubset(z);
  if (!atom.bracket && organic && atom.formal_charge == 0) {
    std::string sym(ElementSymbol(z));
    if (atom.aromatic) sym[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(sym[0])));
    return sym;
  }
  std::string out = "[";
  std::string sym(ElementSymbol(z));
  if (atom.aromatic) {
    for (auto& ch : sym) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  out += sym;
  if (atom.bracket_hydrogens == 1) out += "H";
  if (atom.bracket_hydrogens > 1) out += "H" + std::to_string(atom.bracket_hydrogens);
  if (atom.formal_charge > 0) out += "+" + (atom.formal_charge > 1 ? std::to_string(atom.formal_charge) : "");
  if (atom.formal_charge < 0) out += "-" + (atom.formal_charge < -1 ? std::to_string(-atom.formal_charge) : "");
  out += "]";
  return out;
}

std::string BondToken(const MolGraph& g, const Bond& bond) {
  const bool both_aromatic = g.atom(bond.begin).aromatic && g.atom(bond.end).aromatic;
  switch (bond.order) {
    case BondOrder::kSingle: return both_aromatic ? "-" : "";
    case BondOrder::kDouble: return "=";
    case BondOrder::kTriple: return "#";
    case BondOrder::kAromatic: return both_aromatic && bond.in_ring ? "" : ":";
  }
  return "";
}

std::string RingLabel(int label) {
  if (label < 10) return std::to_string(label);
  return "%" + std::to_string(label);
}

}  // namespace

std::string WriteSmiles(const MolGraph& graph) {
  const int n = graph.num_atoms();
  if (n == 0) return "";
  std::vector<bool> visited(static_cast<size_t>(n), false);
  std::vector<bool> tree_bond(static_cast<size_t>(graph.num_bonds()), false);

  // First pass: DFS tree so ring-closure bonds are known before writing.
  {
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::function<void(int)> dfs = [&](int a) {
      seen[static_cast<size_t>(a)] = true;
      for (const Neighbor& nb : graph.neighbors(a)) {
        if (!seen[static_cast<size_t>(nb.atom)]) {
          tree_bond[static_cast<size_t>(nb.bond)] = true;
          dfs(nb.atom);
        }
      }
    };
    dfs(0);
  }

  std::map<int, int> open_ring_label;  // bond -> label
  std::vector<bool> label_used(100, false);
  std::string out;
  std::function<void(int)> emit = [&](int a) {
    visited[static_cast<size_t>(a)] = true;
    out += AtomToken(graph.atom(a));
    // Ring closures touching this atom.
    for (const Neighbor& nb : graph.neighbors(a)) {
      if (tree_bond[static_cast<size_t>(nb.bond)]) continue;
      auto it = open_ring_label.find(nb.bond);
      if (it != open_ring_label.end()) {
        out += BondToken(graph, graph.bond(nb.bond)) + RingLabel(it->second);
        label_used[static_cast<size_t>(it->second)] = false;
        open_ring_label.erase(it);
      } else if (!visited[static_cast<size_t>(nb.atom)]) {
        int label = 1;
        while (label_used[static_cast<size_t>(label)]) ++label;
        label_used[static_cast<size_t>(label)] = true;
        open_ring_label[nb.bond] = label;
        out += BondToken(graph, graph.bond(nb.bond)) + RingLabel(label);
      }
    }
    std::vector<Neighbor> children;
    for (const Neighbor& nb : graph.neighbors(a)) {
      if (tree_bond[static_cast<size_t>(nb.bond)] && !visited[static_cast<size_t>(nb.atom)]) children.push_back(nb);
    }
    for (size_t c = 0; c < children.size(); ++c) {
      const bool branch = c + 1 < children.size();
      if (branch) out += "(";
      out += BondToken(graph, graph.bond(children[c].bond));
      emit(children[c].atom);
      if (branch) out += ")";
    }
  };
  emit(0);
  return out;
}

std::string LargestFragment(std::string_view smiles) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  int depth = 0;
  for (size_t i = 0; i < smiles.size(); ++i) {
    if (smiles[i] == '[') ++depth;
    if (smiles[i] == ']') --depth;
    if (smiles[i] == '.' && depth == 0) {
      parts.push_back(smiles.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.empty()) return std::string(smiles);
  parts.push_back(smiles.substr(start));
  std::string_view best;
  int best_atoms = -1;
  for (std::string_view part : parts) {
    int atoms = -1;
    try {
      atoms = ParseSmiles(part).num_atoms();
    } catch (const Error&) {
      atoms = -1;
    }
    if (atoms > best_atoms) {
      best_atoms = atoms;
      best = part;
    }
  }
  return std::string(best);
}

MolGraph ParseSmiles(std::string_view smiles) { return SmilesParser(smiles).Parse(); }

}  // namespace maskinfo

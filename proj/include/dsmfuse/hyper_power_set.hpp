#pragma once

// The hyper-power set D^Θ: every proposition built from the atoms of a frame
// with intersection and union. Propositions are kept as a minimal antichain
// of intersection terms (a union of intersections), which is a normal form
// of the free distributive lattice.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dsmfuse/error.hpp"

namespace dsmfuse {

/// Bit i set means atom i (0-based) takes part in the intersection.
using AtomSet = std::uint32_t;

/// Hard limit on frame size; |D^Θ| grows like the Dedekind numbers.
inline constexpr std::size_t kMaxAtoms = 6;
/// Default enumeration cap; 6 is allowed when asked for explicitly.
inline constexpr std::size_t kDefaultMaxAtoms = 5;

namespace detail {

inline bool is_reserved_label(std::string_view s) {
  return s == "u" || s == "U" || s == "n" || s == "N" || s == "empty";
}

inline bool label_has_bad_chars(std::string_view s) {
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '(' || c == ')' || c == ',' || c == '"') return true;
  }
  return s.find("∩") != std::string_view::npos || s.find("∪") != std::string_view::npos ||
         s.find("∅") != std::string_view::npos;
}

}  // namespace detail

/// The frame of discernment: n named atoms.
class Frame {
 public:
  explicit Frame(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw frame_error("a frame needs at least one atom");
    if (labels_.size() > kMaxAtoms) {
      throw frame_error("frame has " + std::to_string(labels_.size()) + " atoms; at most " +
                        std::to_string(kMaxAtoms) + " are supported (|D^Θ| grows like the Dedekind numbers)");
    }
    std::set<std::string_view> seen;
    for (const auto& l : labels_) {
      if (l.empty() || detail::is_reserved_label(l) || detail::label_has_bad_chars(l)) {
        throw frame_error("invalid atom label '" + l + "'");
      }
      if (!seen.insert(l).second) throw frame_error("duplicate atom label '" + l + "'");
    }
  }

  /// Atoms labelled t1..tn.
  static Frame with_atoms(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 1; i <= n; ++i) labels.push_back("t" + std::to_string(i));
    return Frame(std::move(labels));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  AtomSet all_atoms() const { return static_cast<AtomSet>((1u << labels_.size()) - 1u); }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::vector<std::string> labels_;
};

namespace detail {

// Terms with more atoms (smaller sets) come first; equal sizes compare
// lexicographically on their sorted atom indices.
inline bool term_before(AtomSet a, AtomSet b) {
  const int pa = std::popcount(a);
  const int pb = std::popcount(b);
  if (pa != pb) return pa > pb;
  if (a == b) return false;
  const AtomSet diff = a ^ b;
  return (a & diff & (~diff + 1)) != 0;
}

inline std::vector<AtomSet> minimize_terms(std::vector<AtomSet> terms) {
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  std::vector<AtomSet> out;
  out.reserve(terms.size());
  for (AtomSet t : terms) {
    // t is absorbed when a proper subset of its atoms is already a term.
    const bool absorbed = std::any_of(terms.begin(), terms.end(),
                                      [t](AtomSet s) { return s != t && (s & t) == s; });
    if (!absorbed) out.push_back(t);
  }
  std::sort(out.begin(), out.end(), term_before);
  return out;
}

}  // namespace detail

/// An element of D^Θ in canonical form.
///
/// The empty antichain is ∅. Terms are nonempty atom sets, no term contains
/// another, and terms are sorted with larger intersections first.
class Proposition {
 public:
  Proposition() = default;

  static Proposition atom(std::size_t i) { return from_canonical({AtomSet{1} << i}); }

  /// Intersection of the given atoms.
  static Proposition intersection(AtomSet atoms) {
    if (atoms == 0) throw std::invalid_argument("an intersection term needs at least one atom");
    return from_canonical({atoms});
  }

  /// Union of intersection terms, canonicalized.
  static Proposition from_terms(std::vector<AtomSet> terms) {
    if (std::find(terms.begin(), terms.end(), AtomSet{0}) != terms.end()) {
      throw std::invalid_argument("an intersection term needs at least one atom");
    }
    return from_canonical(detail::minimize_terms(std::move(terms)));
  }

  std::span<const AtomSet> terms() const { return terms_; }
  bool is_empty() const { return terms_.empty(); }

  /// Every atom mentioned anywhere in the proposition.
  AtomSet atoms() const {
    AtomSet all = 0;
    for (AtomSet t : terms_) all |= t;
    return all;
  }

  friend bool operator==(const Proposition&, const Proposition&) = default;

  /// The deterministic enumeration order: fewer terms first, then term by
  /// term (larger intersections first, then by atom index).
  friend std::strong_ordering operator<=>(const Proposition& a, const Proposition& b) {
    if (a.terms_.size() != b.terms_.size()) return a.terms_.size() <=> b.terms_.size();
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i] == b.terms_[i]) continue;
      return detail::term_before(a.terms_[i], b.terms_[i]) ? std::strong_ordering::less
                                                           : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }

 private:
  static Proposition from_canonical(std::vector<AtomSet> terms) {
    Proposition p;
    p.terms_ = std::move(terms);
    return p;
  }

  std::vector<AtomSet> terms_;
};

struct PropositionHash {
  std::size_t operator()(const Proposition& p) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (AtomSet t : p.terms()) h = (h ^ t) * 0x100000001b3ull;
    return h;
  }
};

/// p ∩ q: pairwise unions of atom sets, minimized.
inline Proposition meet(const Proposition& p, const Proposition& q) {
  if (p.is_empty() || q.is_empty()) return {};
  std::vector<AtomSet> terms;
  terms.reserve(p.terms().size() * q.terms().size());
  for (AtomSet s : p.terms()) {
    for (AtomSet t : q.terms()) terms.push_back(s | t);
  }
  return Proposition::from_terms(std::move(terms));
}

/// p ∪ q: concatenated terms, minimized.
inline Proposition join(const Proposition& p, const Proposition& q) {
  std::vector<AtomSet> terms(p.terms().begin(), p.terms().end());
  terms.insert(terms.end(), q.terms().begin(), q.terms().end());
  return Proposition::from_terms(std::move(terms));
}

/// p ⊆ q in the lattice, i.e. meet(p, q) == p.
inline bool leq(const Proposition& p, const Proposition& q) {
  return std::all_of(p.terms().begin(), p.terms().end(), [&q](AtomSet t) {
    return std::any_of(q.terms().begin(), q.terms().end(), [t](AtomSet s) { return (s & t) == s; });
  });
}

inline Proposition union_of_atoms(AtomSet atoms) {
  std::vector<AtomSet> terms;
  for (AtomSet rest = atoms; rest != 0; rest &= rest - 1) terms.push_back(rest & (~rest + 1));
  return Proposition::from_terms(std::move(terms));
}

/// u(X): the union of every atom that appears in X; u(∅) = ∅.
inline Proposition u_of(const Proposition& p) { return union_of_atoms(p.atoms()); }

/// I_t = θ1 ∪ ... ∪ θn.
inline Proposition total_ignorance(const Frame& frame) { return union_of_atoms(frame.all_atoms()); }

namespace detail {

// Calls visit(terms) for every antichain drawn from `family` (a list of
// distinct atom sets), including the empty antichain.
inline void for_each_antichain(std::span<const AtomSet> family,
                               const std::function<void(const std::vector<AtomSet>&)>& visit) {
  std::vector<AtomSet> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == family.size()) {
      visit(chosen);
      return;
    }
    rec(i + 1);
    const AtomSet t = family[i];
    const bool comparable = std::any_of(chosen.begin(), chosen.end(), [t](AtomSet s) {
      return (s & t) == s || (s & t) == t;
    });
    if (!comparable) {
      chosen.push_back(t);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

}  // namespace detail

/// All elements of D^Θ for one frame, in the deterministic order.
class HyperPowerSet {
 public:
  const Frame& frame() const { return frame_; }
  std::span<const Proposition> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  const Proposition& operator[](std::size_t i) const { return elements_[i]; }

  /// Position of p in elements(), or size() if p is not over this frame.
  std::size_t index_of(const Proposition& p) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
    if (it == elements_.end() || *it != p) return elements_.size();
    return static_cast<std::size_t>(it - elements_.begin());
  }
  bool contains(const Proposition& p) const { return index_of(p) != elements_.size(); }

 private:
  friend HyperPowerSet enumerate(const Frame& frame, std::size_t max_atoms);
  explicit HyperPowerSet(Frame frame) : frame_(std::move(frame)) {}

  Frame frame_;
  std::vector<Proposition> elements_;
};

/// Builds D^Θ. Refuses frames larger than max_atoms (at most kMaxAtoms).
inline HyperPowerSet enumerate(const Frame& frame, std::size_t max_atoms = kDefaultMaxAtoms) {
  max_atoms = std::min(max_atoms, kMaxAtoms);
  if (frame.size() > max_atoms) {
    throw frame_error("refusing to enumerate D^Θ for " + std::to_string(frame.size()) +
                      " atoms (cap " + std::to_string(max_atoms) +
                      "); the hyper-power set grows like the Dedekind numbers");
  }
  std::vector<AtomSet> family;
  for (AtomSet t = 1; t <= frame.all_atoms(); ++t) family.push_back(t);

  HyperPowerSet hps(frame);
  detail::for_each_antichain(family, [&](const std::vector<AtomSet>& terms) {
    hps.elements_.push_back(Proposition::from_terms(terms));
  });
  std::sort(hps.elements_.begin(), hps.elements_.end());
  return hps;
}

/// Every proposition p with leq(p, bound), ∅ included, in enumeration order.
inline std::vector<Proposition> down_set(const Proposition& bound, const Frame& frame) {
  std::vector<AtomSet> family;
  for (AtomSet t = 1; t <= frame.all_atoms(); ++t) {
    if (std::any_of(bound.terms().begin(), bound.terms().end(), [t](AtomSet s) { return (s & t) == s; })) {
      family.push_back(t);
    }
  }
  std::vector<Proposition> out;
  detail::for_each_antichain(family, [&](const std::vector<AtomSet>& terms) {
    out.push_back(Proposition::from_terms(terms));
  });
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Text form. Grammar (whitespace-separated tokens, parentheses allowed):
//   expr   := term ('u' term)*
//   term   := factor ('n' factor)*
//   factor := atom | '(' expr ')' | 'empty'
// 'U'/'∪' and 'N'/'∩' are accepted as operators, '∅' as the empty set. An
// atom is a frame label, or a 1-based index when no label matches.

enum class Notation { ascii, unicode };

namespace detail {

class PropositionParser {
 public:
  PropositionParser(std::string_view text, const Frame& frame) : text_(text), frame_(frame) { tokenize(); }

  Proposition parse() {
    if (tokens_.empty()) fail("empty expression");
    Proposition p = expr();
    if (pos_ != tokens_.size()) fail("unexpected '" + tokens_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error("proposition '" + std::string(text_) + "': " + what);
  }

  void tokenize() {
    std::size_t i = 0;
    auto starts = [&](std::string_view tok) { return text_.substr(i, tok.size()) == tok; };
    while (i < text_.size()) {
      const char c = text_[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++i;
      } else if (c == '(' || c == ')') {
        tokens_.emplace_back(1, c);
        ++i;
      } else if (starts("∩")) {
        tokens_.emplace_back("n");
        i += std::string_view("∩").size();
      } else if (starts("∪")) {
        tokens_.emplace_back("u");
        i += std::string_view("∪").size();
      } else if (starts("∅")) {
        tokens_.emplace_back("empty");
        i += std::string_view("∅").size();
      } else {
        std::size_t j = i;
        while (j < text_.size() && text_[j] != ' ' && text_[j] != '\t' && text_[j] != '\n' && text_[j] != '\r' &&
               text_[j] != '(' && text_[j] != ')' && text_.substr(j, 3) != "∩" && text_.substr(j, 3) != "∪" &&
               text_.substr(j, 3) != "∅") {
          ++j;
        }
        std::string word(text_.substr(i, j - i));
        if (word == "U") word = "u";
        if (word == "N") word = "n";
        tokens_.push_back(std::move(word));
        i = j;
      }
    }
  }

  bool peek(std::string_view tok) const { return pos_ < tokens_.size() && tokens_[pos_] == tok; }

  Proposition expr() {
    Proposition p = term();
    while (peek("u")) {
      ++pos_;
      p = join(p, term());
    }
    return p;
  }

  Proposition term() {
    Proposition p = factor();
    while (peek("n")) {
      ++pos_;
      p = meet(p, factor());
    }
    return p;
  }

  Proposition factor() {
    if (pos_ >= tokens_.size()) fail("unexpected end of expression");
    const std::string& tok = tokens_[pos_++];
    if (tok == "(") {
      Proposition p = expr();
      if (!peek(")")) fail("missing ')'");
      ++pos_;
      return p;
    }
    if (tok == "empty") return {};
    if (tok == ")" || tok == "u" || tok == "n") fail("unexpected '" + tok + "'");
    return Proposition::atom(atom_index(tok));
  }

  std::size_t atom_index(const std::string& tok) const {
    const auto& labels = frame_.labels();
    if (auto it = std::find(labels.begin(), labels.end(), tok); it != labels.end()) {
      return static_cast<std::size_t>(it - labels.begin());
    }
    if (!tok.empty() && std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      const std::size_t idx = std::stoul(tok);
      if (idx >= 1 && idx <= frame_.size()) return idx - 1;
    }
    fail("unknown atom '" + tok + "'");
  }

  std::string_view text_;
  const Frame& frame_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Proposition parse_proposition(std::string_view text, const Frame& frame) {
  return detail::PropositionParser(text, frame).parse();
}

inline std::string render(const Proposition& p, const Frame& frame, Notation notation = Notation::ascii) {
  const bool ascii = notation == Notation::ascii;
  if (p.is_empty()) return ascii ? "empty" : "∅";
  const std::string cap = ascii ? " n " : "∩";
  const std::string cup = ascii ? " u " : "∪";
  std::string out;
  for (std::size_t i = 0; i < p.terms().size(); ++i) {
    const AtomSet t = p.terms()[i];
    const bool wrap = p.terms().size() > 1 && std::popcount(t) > 1;
    if (i > 0) out += cup;
    if (wrap) out += '(';
    bool first = true;
    for (std::size_t a = 0; a < frame.size(); ++a) {
      if ((t >> a) & 1u) {
        if (!first) out += cap;
        out += frame.label(a);
        first = false;
      }
    }
    if (wrap) out += ')';
  }
  return out;
}

/// Throws if p mentions atoms outside the frame.
inline void require_in_frame(const Proposition& p, const Frame& frame) {
  if ((p.atoms() & ~frame.all_atoms()) != 0) {
    throw std::invalid_argument("proposition mentions atoms outside a frame of " + std::to_string(frame.size()));
  }
}

}  // namespace dsmfuse

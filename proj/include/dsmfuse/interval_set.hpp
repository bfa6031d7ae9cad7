#pragma once

// Finite unions of real intervals with arbitrary endpoint openness, and the
// set arithmetic used to combine imprecise masses.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include "dsmfuse/error.hpp"

namespace dsmfuse {

/// Endpoints closer than this are treated as the same point when merging.
inline constexpr double kEndpointTolerance = 1e-12;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Bound {
  double value = 0.0;
  bool open = false;

  friend bool operator==(const Bound&, const Bound&) = default;
};

/// One connected component: an interval or a single point.
///
/// lo.value <= hi.value, and a degenerate piece is always the closed point
/// {a}. Only the upper bound may be +inf, and it is then open.
class Piece {
 public:
  Piece(Bound lo, Bound hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo.value) || std::isnan(hi.value)) {
      throw std::invalid_argument("piece bound is NaN");
    }
    if (std::isinf(lo.value)) {
      throw std::invalid_argument("piece lower bound must be finite");
    }
    if (std::isinf(hi.value) && (hi.value < 0 || !hi.open)) {
      throw std::invalid_argument("an infinite upper bound must be +inf and open");
    }
    if (lo.value > hi.value) {
      throw std::invalid_argument("piece lower bound exceeds upper bound");
    }
    if (lo.value == hi.value && (lo.open || hi.open)) {
      throw std::invalid_argument("degenerate piece must be a closed point");
    }
    // Normalise -0.0 so formatting and equality stay canonical.
    lo_.value += 0.0;
    hi_.value += 0.0;
  }

  static Piece point(double v) { return Piece({v, false}, {v, false}); }
  static Piece closed(double lo, double hi) { return Piece({lo, false}, {hi, false}); }
  static Piece open(double lo, double hi) { return Piece({lo, true}, {hi, true}); }
  static Piece left_open(double lo, double hi) { return Piece({lo, true}, {hi, false}); }
  static Piece right_open(double lo, double hi) { return Piece({lo, false}, {hi, true}); }

  const Bound& lo() const { return lo_; }
  const Bound& hi() const { return hi_; }
  bool is_point() const { return lo_.value == hi_.value; }

  bool contains(double x) const {
    const bool above = lo_.open ? x > lo_.value : x >= lo_.value;
    const bool below = hi_.open ? x < hi_.value : x <= hi_.value;
    return above && below;
  }

  friend bool operator==(const Piece&, const Piece&) = default;

 private:
  Bound lo_;
  Bound hi_;
};

namespace detail {

// Builds a piece from bounds computed by arithmetic on nonempty operands.
// Rounding can collapse a tiny interval to zero width; the exact result is
// nonempty, so it becomes a point.
inline Piece arithmetic_piece(Bound lo, Bound hi) {
  if (lo.value >= hi.value && !std::isinf(hi.value)) {
    return Piece::point(lo.value);
  }
  return Piece(lo, hi);
}

inline bool near(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= kEndpointTolerance;
}

inline Bound max_upper(const Bound& a, const Bound& b) {
  if (near(a.value, b.value)) {
    return {std::max(a.value, b.value), a.open && b.open};
  }
  return a.value > b.value ? a : b;
}

inline bool piece_order(const Piece& a, const Piece& b) {
  if (a.lo().value != b.lo().value) return a.lo().value < b.lo().value;
  if (a.lo().open != b.lo().open) return !a.lo().open;
  if (a.hi().value != b.hi().value) return a.hi().value < b.hi().value;
  return a.hi().open < b.hi().open;
}

}  // namespace detail

/// A subset of the extended real line stored in normal form: sorted,
/// pairwise disjoint pieces, where consecutive pieces either leave a gap or
/// meet at a value excluded on both sides.
class SetValue {
 public:
  SetValue() = default;

  explicit SetValue(std::span<const Piece> raw) : pieces_(raw.begin(), raw.end()) { normalize_in_place(); }
  SetValue(std::initializer_list<Piece> raw) : pieces_(raw) { normalize_in_place(); }
  explicit SetValue(std::vector<Piece>&& raw) : pieces_(std::move(raw)) { normalize_in_place(); }

  static SetValue point(double v) { return SetValue{Piece::point(v)}; }
  static SetValue closed(double lo, double hi) { return SetValue{Piece::closed(lo, hi)}; }

  std::span<const Piece> pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  std::size_t size() const { return pieces_.size(); }

  bool is_point() const { return pieces_.size() == 1 && pieces_.front().is_point(); }
  bool is_point(double v) const { return is_point() && pieces_.front().lo().value == v; }
  bool is_interval() const { return pieces_.size() == 1; }

  double inf() const {
    require_nonempty();
    return pieces_.front().lo().value;
  }
  double sup() const {
    require_nonempty();
    return pieces_.back().hi().value;
  }

  bool contains(double x) const {
    return std::any_of(pieces_.begin(), pieces_.end(), [x](const Piece& p) { return p.contains(x); });
  }

  friend bool operator==(const SetValue&, const SetValue&) = default;

 private:
  void require_nonempty() const {
    if (pieces_.empty()) throw std::domain_error("empty set has no infimum or supremum");
  }

  void normalize_in_place() {
    std::sort(pieces_.begin(), pieces_.end(), detail::piece_order);
    std::vector<Piece> out;
    out.reserve(pieces_.size());
    for (const Piece& p : pieces_) {
      if (out.empty()) {
        out.push_back(p);
        continue;
      }
      const Piece& cur = out.back();
      const double gap = p.lo().value - cur.hi().value;
      bool merge = false;
      if (detail::near(p.lo().value, cur.hi().value)) {
        merge = !(cur.hi().open && p.lo().open);
      } else {
        merge = gap < 0;
      }
      if (!merge) {
        out.push_back(p);
        continue;
      }
      Bound lo = cur.lo();
      if (detail::near(lo.value, p.lo().value) && !p.lo().open) lo.open = false;
      Bound hi = detail::max_upper(cur.hi(), p.hi());
      out.back() = detail::arithmetic_piece(lo, hi);
    }
    pieces_ = std::move(out);
  }

  std::vector<Piece> pieces_;
};

inline SetValue normalize(std::span<const Piece> raw) { return SetValue(raw); }

inline double inf_of(const SetValue& s) { return s.inf(); }
inline double sup_of(const SetValue& s) { return s.sup(); }
inline bool contains(const SetValue& s, double x) { return s.contains(x); }

namespace detail {

inline void require_operand(const SetValue& s, const char* op) {
  if (s.empty()) throw std::invalid_argument(std::string(op) + ": empty operand");
}

inline void require_nonnegative(const SetValue& s, const char* op) {
  if (s.inf() < 0) throw std::invalid_argument(std::string(op) + ": negative operand");
}

template <class F>
SetValue piecewise(const SetValue& a, const SetValue& b, F&& combine) {
  std::vector<Piece> raw;
  raw.reserve(a.size() * b.size());
  for (const Piece& p : a.pieces()) {
    for (const Piece& q : b.pieces()) raw.push_back(combine(p, q));
  }
  return SetValue(std::move(raw));
}

// A product endpoint is attained when both factors attain theirs, or when
// one factor attains zero (which fixes the product regardless of the other).
inline bool product_lower_closed(const Bound& a, const Bound& b) {
  return (!a.open && !b.open) || (a.value == 0 && !a.open) || (b.value == 0 && !b.open);
}

}  // namespace detail

/// Minkowski sum {s1 + s2}.
inline SetValue add(const SetValue& a, const SetValue& b) {
  detail::require_operand(a, "add");
  detail::require_operand(b, "add");
  return detail::piecewise(a, b, [](const Piece& p, const Piece& q) {
    return detail::arithmetic_piece({p.lo().value + q.lo().value, p.lo().open || q.lo().open},
                                    {p.hi().value + q.hi().value, p.hi().open || q.hi().open});
  });
}

/// {s1 - s2}; may go negative, clamping is separate.
inline SetValue sub(const SetValue& a, const SetValue& b) {
  detail::require_operand(a, "sub");
  detail::require_operand(b, "sub");
  if (std::isinf(b.sup())) throw std::invalid_argument("sub: unbounded subtrahend");
  return detail::piecewise(a, b, [](const Piece& p, const Piece& q) {
    return detail::arithmetic_piece({p.lo().value - q.hi().value, p.lo().open || q.hi().open},
                                    {p.hi().value - q.lo().value, p.hi().open || q.lo().open});
  });
}

/// {s1 * s2} for nonnegative operands.
inline SetValue mul(const SetValue& a, const SetValue& b) {
  detail::require_operand(a, "mul");
  detail::require_operand(b, "mul");
  detail::require_nonnegative(a, "mul");
  detail::require_nonnegative(b, "mul");
  return detail::piecewise(a, b, [](const Piece& p, const Piece& q) {
    if ((p.is_point() && p.lo().value == 0) || (q.is_point() && q.lo().value == 0)) {
      return Piece::point(0.0);
    }
    const Bound lo{p.lo().value * q.lo().value, !detail::product_lower_closed(p.lo(), q.lo())};
    const Bound hi{p.hi().value * q.hi().value, p.hi().open || q.hi().open};
    return detail::arithmetic_piece(lo, hi);
  });
}

inline SetValue operator+(const SetValue& a, const SetValue& b) { return add(a, b); }
inline SetValue operator-(const SetValue& a, const SetValue& b) { return sub(a, b); }
inline SetValue operator*(const SetValue& a, const SetValue& b) { return mul(a, b); }

/// Outcome of dividing by the point {0}: no finite set describes it.
struct UnboundedQuotient {
  friend bool operator==(const UnboundedQuotient&, const UnboundedQuotient&) = default;
};

using Quotient = std::variant<SetValue, UnboundedQuotient>;

/// {s1 / s2} for nonnegative operands. When the divisor contains 0 the
/// result is [inf(a)/sup(b), +inf); dividing by {0} alone is unbounded.
inline Quotient div(const SetValue& a, const SetValue& b) {
  detail::require_operand(a, "div");
  detail::require_operand(b, "div");
  detail::require_nonnegative(a, "div");
  detail::require_nonnegative(b, "div");
  if (b.is_point(0.0)) return UnboundedQuotient{};

  if (b.contains(0.0)) {
    const Piece& first = a.pieces().front();
    const Piece& last = b.pieces().back();
    if (std::isinf(last.hi().value)) {
      const bool zero_attained = first.lo().value == 0 && !first.lo().open;
      return SetValue{Piece({0.0, !zero_attained}, {kInfinity, true})};
    }
    const Bound lo{first.lo().value / last.hi().value,
                   !detail::product_lower_closed(first.lo(), last.hi())};
    return SetValue{Piece(lo, {kInfinity, true})};
  }

  return detail::piecewise(a, b, [](const Piece& p, const Piece& q) {
    Bound lo;
    if (std::isinf(q.hi().value)) {
      lo = {0.0, !(p.lo().value == 0 && !p.lo().open)};
    } else {
      lo = {p.lo().value / q.hi().value, !detail::product_lower_closed(p.lo(), q.hi())};
    }
    Bound hi;
    if (q.lo().value == 0 || std::isinf(p.hi().value)) {
      hi = {kInfinity, true};
    } else {
      hi = {p.hi().value / q.lo().value, p.hi().open || q.lo().open};
    }
    return detail::arithmetic_piece(lo, hi);
  });
}

/// Forces a set into [0, 1]: the part below 0 collapses onto {0} and the
/// part above 1 onto {1}.
inline SetValue clamp_unit(const SetValue& s) {
  std::vector<Piece> raw;
  raw.reserve(s.size());
  for (const Piece& p : s.pieces()) {
    const Bound& lo = p.lo();
    const Bound& hi = p.hi();
    if (hi.value < 0 || (hi.value == 0 && hi.open)) {
      raw.push_back(Piece::point(0.0));
    } else if (lo.value > 1 || (lo.value == 1 && lo.open)) {
      raw.push_back(Piece::point(1.0));
    } else {
      const Bound new_lo = lo.value < 0 ? Bound{0.0, false} : lo;
      const Bound new_hi = hi.value > 1 ? Bound{1.0, false} : hi;
      raw.push_back(detail::arithmetic_piece(new_lo, new_hi));
    }
  }
  return SetValue(std::move(raw));
}

inline bool needs_unit_clamp(const SetValue& s) { return !s.empty() && (s.inf() < 0 || s.sup() > 1); }

// ---------------------------------------------------------------------------
// Text form: "[a,b]", "(a,b)", "[a,b)", "(a,b]", "{a}" or "{a,b,...}", or a
// bare number, joined by "U". The empty set is "{}".

/// Shortest decimal that round-trips to the same double.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v + 0.0);
  return std::string(buf, end);
}

/// Rounded to ten significant digits, for human-readable tables.
inline std::string format_number_short(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v + 0.0);
  return buf;
}

struct SetFormat {
  bool short_numbers = false;
  /// Render a single point as a bare number rather than "{a}".
  bool bare_points = false;
};

inline std::string format_piece(const Piece& p, SetFormat fmt = {}) {
  auto num = [&](double v) { return fmt.short_numbers ? format_number_short(v) : format_number(v); };
  if (p.is_point()) return "{" + num(p.lo().value) + "}";
  std::string out;
  out += p.lo().open ? '(' : '[';
  out += num(p.lo().value);
  out += ',';
  out += num(p.hi().value);
  out += p.hi().open ? ')' : ']';
  return out;
}

inline std::string format_set(const SetValue& s, SetFormat fmt = {}) {
  if (s.empty()) return "{}";
  if (fmt.bare_points && s.is_point()) {
    return fmt.short_numbers ? format_number_short(s.inf()) : format_number(s.inf());
  }
  std::string out;
  for (const Piece& p : s.pieces()) {
    if (!out.empty()) out += " U ";
    out += format_piece(p, fmt);
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const SetValue& s) { return os << format_set(s); }

namespace detail {

class SetLiteralParser {
 public:
  explicit SetLiteralParser(std::string_view text) : text_(text) {}

  SetValue parse() {
    skip_ws();
    if (consume("{")) {
      skip_ws();
      if (consume("}")) {
        skip_ws();
        if (at_end()) return {};
        fail("the empty set literal cannot be combined with other pieces");
      }
      pos_ = 0;
    }
    std::vector<Piece> raw;
    for (;;) {
      skip_ws();
      parse_piece(raw);
      skip_ws();
      if (at_end()) break;
      if (!(consume("U") || consume("u") || consume("∪"))) fail("expected 'U' between pieces");
    }
    return SetValue(std::move(raw));
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error("set literal '" + std::string(text_) + "': " + what);
  }

  bool at_end() const { return pos_ >= text_.size(); }

  void skip_ws() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) ++pos_;
  }

  bool consume(std::string_view tok) {
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    skip_ws();
    if (!consume(tok)) fail("expected '" + std::string(tok) + "'");
  }

  double number() {
    skip_ws();
    bool plus = consume("+");
    std::size_t start = pos_;
    double v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc() || (plus && ptr == text_.data() + start)) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  Piece make(Bound lo, Bound hi) {
    try {
      return Piece(lo, hi);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  void parse_piece(std::vector<Piece>& raw) {
    if (consume("{")) {
      for (;;) {
        const double v = number();
        raw.push_back(make({v, false}, {v, false}));
        skip_ws();
        if (consume("}")) return;
        expect(",");
      }
    }
    if (!at_end() && (text_[pos_] == '[' || text_[pos_] == '(')) {
      const bool lo_open = text_[pos_++] == '(';
      const double lo = number();
      expect(",");
      const double hi = number();
      skip_ws();
      if (at_end() || (text_[pos_] != ']' && text_[pos_] != ')')) fail("expected ']' or ')'");
      const bool hi_open = text_[pos_++] == ')';
      raw.push_back(make({lo, lo_open}, {hi, hi_open}));
      return;
    }
    const double v = number();
    raw.push_back(make({v, false}, {v, false}));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline SetValue parse_set(std::string_view text) { return detail::SetLiteralParser(text).parse(); }

}  // namespace dsmfuse

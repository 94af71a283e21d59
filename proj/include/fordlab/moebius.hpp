#pragma once

// PSL2 elements over Q(sqrt m), stored as sign-normalized determinant-one
// matrices so that structural equality is group equality.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fordlab/exactnum.hpp"

namespace fordlab {

class MoebiusElement {
 public:
  // Throws NotUnimodular unless ad - bc == 1 exactly.
  MoebiusElement(QuadValue a, QuadValue b, QuadValue c, QuadValue d);

  static MoebiusElement identity() { return MoebiusElement(1, 0, 0, 1); }
  static MoebiusElement translation(const QuadValue& t) { return MoebiusElement(1, t, 0, 1); }

  const QuadValue& a() const { return m_[0]; }
  const QuadValue& b() const { return m_[1]; }
  const QuadValue& c() const { return m_[2]; }
  const QuadValue& d() const { return m_[3]; }

  // Radicand shared by the nonrational entries (0 when all are rational).
  long radicand() const;
  bool is_identity() const;
  bool fixes_infinity() const { return c().is_zero(); }
  bool is_integral() const;

  QuadValue trace() const { return a() + d(); }
  QuadValue determinant() const { return a() * d() - b() * c(); }

  std::string str() const;  // [[a,b],[c,d]]
  static MoebiusElement parse(std::string_view text);

  std::array<std::uint64_t, 2> fingerprint() const;

  friend bool operator==(const MoebiusElement& x, const MoebiusElement& y) { return x.m_ == y.m_; }

 private:
  struct Unchecked {};
  MoebiusElement(Unchecked, QuadValue a, QuadValue b, QuadValue c, QuadValue d);
  void sign_normalize();

  std::array<QuadValue, 4> m_;

  friend MoebiusElement mm_mul(const MoebiusElement&, const MoebiusElement&);
  friend MoebiusElement mm_inv(const MoebiusElement&);
};

MoebiusElement mm_mul(const MoebiusElement& x, const MoebiusElement& y);
MoebiusElement mm_inv(const MoebiusElement& x);
MoebiusElement mm_pow(const MoebiusElement& x, long k);
inline MoebiusElement operator*(const MoebiusElement& x, const MoebiusElement& y) { return mm_mul(x, y); }

// g * x * g^-1
MoebiusElement conjugate_by(const MoebiusElement& g, const MoebiusElement& x);

struct CanonicalTrace {
  QuadValue value;

  // Representative of {t, -t}: rational part > 0, or rational part 0 and
  // radical coefficient >= 0.
  static CanonicalTrace of(const QuadValue& t);
  std::string str() const { return value.str(); }

  friend bool operator==(const CanonicalTrace& x, const CanonicalTrace& y) { return x.value == y.value; }
  // Lexicographic by (rational part, radical coefficient, radicand).
  friend std::strong_ordering operator<=>(const CanonicalTrace& x, const CanonicalTrace& y);
};

CanonicalTrace canonical_trace(const MoebiusElement& x);

enum class ElementClass { Identity, Elliptic, Parabolic, Hyperbolic, Loxodromic };
std::string_view to_string(ElementClass c);
ElementClass classify(const MoebiusElement& x);

// Congruence predicates on rational-integer matrices; either sign lift.
bool in_gamma0(const MoebiusElement& x, long n);
bool in_principal(const MoebiusElement& x, long n);

// Entries a + b*omega of the ring of integers of Q(sqrt -d).
bool in_ring_of_integers(const QuadValue& x, long d);
bool in_bianchi(const MoebiusElement& x, long d);

// Words over a generator list: letter k > 0 is generator k-1, k < 0 its
// inverse. Text form `g1.g2^-1.g1`, the empty word is `e`.
using Word = std::vector<int>;
std::string word_str(const Word& w);
Word inverse_word(const Word& w);
MoebiusElement evaluate_word(const std::vector<MoebiusElement>& gens, const Word& w);

// Generator files: one matrix per line, `#` comments, blank lines ignored.
// Parse errors carry the 1-based line number.
std::vector<MoebiusElement> parse_generator_file(std::istream& in);
std::string format_generator_file(const std::vector<MoebiusElement>& gens, std::string_view header = {});

}  // namespace fordlab

#pragma once

// Isometric circles and spheres, Ford domains of two-generator groups and of
// the parabolic-plus-one groups used for Bianchi groups, Ford reduction, and
// the separation checks feeding the combination theorem.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fordlab/exactnum.hpp"
#include "fordlab/moebius.hpp"

namespace fordlab {

// x + iy with real QuadValue coordinates.
struct ComplexPoint {
  QuadValue re;
  QuadValue im;

  static ComplexPoint of_real(const QuadValue& x) { return {x, QuadValue(0)}; }
  // Splits a value of an imaginary quadratic field into real coordinates.
  static ComplexPoint of_field(const QuadValue& z);

  ComplexPoint conj() const { return {re, -im}; }
  QuadValue abs2() const { return re * re + im * im; }
  std::string str() const;

  friend ComplexPoint operator+(const ComplexPoint& x, const ComplexPoint& y) { return {x.re + y.re, x.im + y.im}; }
  friend ComplexPoint operator-(const ComplexPoint& x, const ComplexPoint& y) { return {x.re - y.re, x.im - y.im}; }
  friend ComplexPoint operator*(const ComplexPoint& x, const ComplexPoint& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend ComplexPoint operator/(const ComplexPoint& x, const ComplexPoint& y);
  friend bool operator==(const ComplexPoint& x, const ComplexPoint& y) { return x.re == y.re && x.im == y.im; }
};

// (az + b) / (cz + d); DivisionByZero at the pole.
ComplexPoint apply(const MoebiusElement& g, const ComplexPoint& z);

// |e|^2 of a matrix entry: real entries may carry a radical as long as the
// square is rational, otherwise IrrationalRadius.
Rational entry_abs2(const QuadValue& e);

struct IsometricDisk {
  ComplexPoint center;
  Rational radius_sq;
  MoebiusElement owner;

  bool same_circle(const IsometricDisk& o) const { return center == o.center && radius_sq == o.radius_sq; }
};

IsometricDisk isometric_disk(const MoebiusElement& g);

enum class Separation { Disjoint, Tangent, Overlap };
std::string_view to_string(Separation s);

// Exact comparison of |center difference| with r_u + r_v.
Separation disks_disjoint(const IsometricDisk& u, const IsometricDisk& v);

// Margins are reported as |d| - r1 - r2 when that is a QuadValue, else as
// |d|^2 - (r1 + r2)^2, else only the sign is known.
enum class MarginKind { None, Linear, Squared };
std::string_view to_string(MarginKind k);

struct Margin {
  std::optional<QuadValue> value;
  MarginKind kind = MarginKind::None;
};

Margin disjoint_margin(const IsometricDisk& u, const IsometricDisk& v);

// Info entries describe a condition that was evaluated but not relied upon.
enum class CheckStatus { Pass, Fail, Undecided, Info };
std::string_view to_string(CheckStatus s);

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::optional<QuadValue> margin;
  MarginKind margin_kind = MarginKind::None;
  std::vector<std::string> witnesses;
};

struct SeparationReport {
  std::vector<Check> checks;

  // Fail beats Undecided beats Pass; Info entries do not count.
  CheckStatus overall() const;
  bool passed() const { return overall() == CheckStatus::Pass; }
};

CheckStatus strictest(const std::vector<Check>& checks);

// Closed parallelogram anchor + s*t1 + t*t2, 0 <= s, t <= 1.
struct Prism {
  ComplexPoint anchor;
  ComplexPoint t1;
  ComplexPoint t2;
};

struct ExcludedDisk {
  IsometricDisk disk;
  MoebiusElement pairing;  // maps the disk's outside to the paired disk's inside
  Word word;               // pairing as a word in the group's generators
};

enum class CriterionVariant { None, Classical, Sharp };
std::string_view to_string(CriterionVariant v);

struct FordDomain {
  int ambient = 2;
  // ambient 2: the strip |Re z - center| <= halfwidth
  QuadValue center;
  QuadValue halfwidth;
  // ambient 3
  Prism prism;

  // Stabilizer of infinity: one translation (ambient 2) or two (ambient 3).
  std::vector<MoebiusElement> translations;
  std::vector<Word> translation_words;
  // Disks of the non-parabolic generator and its inverse; `excluded` holds
  // their translates meeting the strip or prism.
  std::vector<ExcludedDisk> base;
  std::vector<ExcludedDisk> excluded;
  CriterionVariant variant = CriterionVariant::None;
  std::vector<Check> criteria;
};

// Letters of the translation and the other generator in words.
struct TwoGenLetters {
  int translation = 1;
  int other = 2;
};

// Self-domain test, the inequalities |a+d|/|c| < |m|/2 and |m| > 4/|c|, and
// the period fit: the two disks span strictly less than |m|.
std::vector<Check> two_gen_criteria(const QuadValue& m, const MoebiusElement& g2);

// LemmaViolation when neither variant certifies the domain.
FordDomain build_ford_two_gen(const QuadValue& m, const MoebiusElement& g2, TwoGenLetters letters = {});

// Same group, strip moved to a new center (any strip of the same width is a
// fundamental region for the translation).
FordDomain recenter(const FordDomain& q, const QuadValue& center);

struct PrismLetters {
  int generator = 1;
  int t1 = 2;
  int t2 = 3;
};

// Domain of <g, t1, t2> with g = [[x,-1],[1,0]]-type: unit spheres of g
// and g^-1 and their lattice translates meeting the prism.
FordDomain build_ford_prism(const MoebiusElement& g, const Prism& prism, const MoebiusElement& t1,
                            const MoebiusElement& t2, PrismLetters letters = {});

// Closed disk inside the closed strip / prism (strictly inside when
// `strict`), and disjoint from every excluded disk.
bool disk_in_domain(const IsometricDisk& u, const FordDomain& q, bool strict = false);

// Distance^2 from a point to the closed parallelogram (0 inside).
QuadValue prism_distance2(const ComplexPoint& p, const Prism& prism);
bool point_in_prism(const ComplexPoint& p, const Prism& prism);

// Closed point of the ambient-2 domain (interior when `interior`).
bool point_in_domain(const ComplexPoint& z, const FordDomain& q, bool interior);

struct MembershipResult {
  enum class Status { Member, NonMember, Undecided };
  Status status = Status::Undecided;
  Word word;  // for Member: target as a word in the group's generators
  std::size_t steps = 0;
};
std::string_view to_string(MembershipResult::Status s);

ComplexPoint domain_basepoint(const FordDomain& q);

// Ford reduction of target(z0) back into the domain.
MembershipResult membership_reduce(const FordDomain& q, const MoebiusElement& target, std::size_t cap = 10000);

// Height above which the strip / prism lies inside the domain.
QuadValue infinite_area_height(const FordDomain& q);

struct SeparationItem {
  std::string name;
  FordDomain domain;
  MoebiusElement conjugator;
  Rational x;
  Rational y;
};

SeparationReport verify_separation(const std::vector<SeparationItem>& items,
                                   const std::function<bool(const MoebiusElement&)>& in_ambient,
                                   std::size_t membership_cap = 10000);

struct PowerScan {
  std::vector<std::pair<long, IsometricDisk>> disks;  // exponent, disk; distinct circles only
  std::vector<long> skipped;                          // exponents with c = 0
  bool growth = false;
  long last = 0;  // largest exponent scanned
};

PowerScan power_sphere_scan(const MoebiusElement& g, int horizon);

struct BianchiPiece {
  std::string name;
  QuadValue x;
  MoebiusElement generator;
  FordDomain domain;
  std::optional<MoebiusElement> involution;
};

struct BianchiScanPolicy {
  int horizon = 50;
  // A scanned disk meeting an involution sphere is a failure when true,
  // otherwise the certificate is only downgraded to undecided.
  bool strict = true;
};

SeparationReport bianchi_separation_check(long d, const std::vector<BianchiPiece>& pieces, const Prism& prism,
                                          const BianchiScanPolicy& policy);

}  // namespace fordlab

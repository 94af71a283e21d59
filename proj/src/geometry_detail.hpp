#pragma once

// Shared helpers of the geometry translation units.

#include <optional>
#include <string>

#include "fordlab/geometry.hpp"

namespace fordlab::detail {

std::optional<QuadValue> as_quad(const RadicalExpr& e);
RadicalExpr diff(RadicalExpr a, const RadicalExpr& b);

// center -/+ radius along the real axis
RadicalExpr shadow_end(const IsometricDisk& u, int side);
// |d|^2 - (r_u + r_v)^2
RadicalExpr squared_gap(const IsometricDisk& u, const IsometricDisk& v);
// |d| - r_u - r_v when |d|^2 is rational, else the squared gap
std::pair<RadicalExpr, MarginKind> gap_expr(const IsometricDisk& u, const IsometricDisk& v);

// Smallest of several margins, preferring linear ones.
struct MinTracker {
  std::optional<RadicalExpr> best;
  MarginKind kind = MarginKind::None;
  std::string witness;

  void offer(const RadicalExpr& e, MarginKind k, std::string who = {});
  void fill(Check& c) const;
};

mpz_class floor_of(const QuadValue& x);
QuadValue cross(const ComplexPoint& x, const ComplexPoint& y);
QuadValue dot(const ComplexPoint& x, const ComplexPoint& y);
Word repeat(const Word& w, long times);
Word concat(Word a, const Word& b);

}  // namespace fordlab::detail

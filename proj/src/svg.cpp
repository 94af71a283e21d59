#include "fordlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fordlab {

namespace {

constexpr double kScale = 100.0;
const char* const kPalette[] = {"#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '<') out += "&lt;";
    else if (ch == '>') out += "&gt;";
    else if (ch == '&') out += "&amp;";
    else out += ch;
  }
  return out;
}

class Canvas {
 public:
  void circle(double x, double y, double r, const std::string& stroke, const std::string& cls, const std::string& label) {
    grow(x - r, y - r);
    grow(x + r, y + r);
    body_ << "  <circle class=\"" << cls << "\" cx=\"" << num(x * kScale) << "\" cy=\"" << num(-y * kScale)
          << "\" r=\"" << num(r * kScale) << "\" fill=\"none\" stroke=\"" << stroke << "\"><title>" << escape(label)
          << "</title></circle>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke, const std::string& cls, double width = 1) {
    grow(x1, y1);
    grow(x2, y2);
    body_ << "  <line class=\"" << cls << "\" x1=\"" << num(x1 * kScale) << "\" y1=\"" << num(-y1 * kScale)
          << "\" x2=\"" << num(x2 * kScale) << "\" y2=\"" << num(-y2 * kScale) << "\" stroke=\"" << stroke
          << "\" stroke-width=\"" << num(width) << "\"/>\n";
  }
  void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, const std::string& cls) {
    body_ << "  <polygon class=\"" << cls << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      grow(pts[i].first, pts[i].second);
      body_ << (i ? " " : "") << num(pts[i].first * kScale) << "," << num(-pts[i].second * kScale);
    }
    body_ << "\" fill=\"none\" stroke=\"" << stroke << "\"/>\n";
  }
  void open_group(const std::string& id) { body_ << " <g id=\"" << escape(id) << "\">\n"; }
  void close_group() { body_ << " </g>\n"; }
  // Vertical strip lines are drawn down to the axis and up to this height.
  double top() const { return top_; }
  void set_top(double t) { top_ = t; }

  std::string finish() const {
    double x0 = (has_ ? lo_x_ : -1) - 0.25, x1 = (has_ ? hi_x_ : 1) + 0.25;
    double y0 = (has_ ? lo_y_ : -1) - 0.25, y1 = (has_ ? hi_y_ : 1) + 0.25;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(x0 * kScale) << " " << num(-y1 * kScale)
        << " " << num((x1 - x0) * kScale) << " " << num((y1 - y0) * kScale) << "\">\n";
    out << body_.str() << "</svg>\n";
    return out.str();
  }

 private:
  void grow(double x, double y) {
    if (!has_) {
      lo_x_ = hi_x_ = x;
      lo_y_ = hi_y_ = y;
      has_ = true;
      return;
    }
    lo_x_ = std::min(lo_x_, x);
    hi_x_ = std::max(hi_x_, x);
    lo_y_ = std::min(lo_y_, y);
    hi_y_ = std::max(hi_y_, y);
  }
  std::ostringstream body_;
  bool has_ = false;
  double lo_x_ = 0, hi_x_ = 0, lo_y_ = 0, hi_y_ = 0;
  double top_ = 1.5;
};

void disk(Canvas& cv, const IsometricDisk& u, const std::string& stroke, const std::string& cls) {
  cv.circle(u.center.re.to_double(), u.center.im.to_double(), std::sqrt(u.radius_sq.to_double()), stroke, cls,
            u.owner.str());
}

void strip(Canvas& cv, double center, double halfwidth) {
  for (double x : {center - halfwidth, center + halfwidth}) cv.line(x, 0, x, cv.top(), "#444444", "strip");
  cv.line(center - halfwidth, 0, center + halfwidth, 0, "#888888", "axis", 0.5);
}

void domain_2d(Canvas& cv, const FordDomain& q, const std::string& color) {
  strip(cv, q.center.to_double(), q.halfwidth.to_double());
  for (const auto& e : q.excluded) disk(cv, e.disk, color, "excluded");
}

void prism(Canvas& cv, const Prism& p) {
  auto pt = [](const ComplexPoint& z) { return std::make_pair(z.re.to_double(), z.im.to_double()); };
  cv.polygon({pt(p.anchor), pt(p.anchor + p.t1), pt(p.anchor + p.t1 + p.t2), pt(p.anchor + p.t2)}, "#444444", "prism");
}

}  // namespace

std::string render_construction_svg(const Construction& c) {
  Canvas cv;
  const bool bianchi = c.target.kind == Target::Kind::Bianchi;
  if (bianchi && c.prism) prism(cv, *c.prism);
  for (std::size_t i = 0; i < c.subgroups.size(); ++i) {
    const Subgroup& s = c.subgroups[i];
    const std::string color = kPalette[i % (sizeof kPalette / sizeof *kPalette)];
    cv.open_group(s.name);
    try {
      if (bianchi) {
        FordDomain q = build_ford_prism(s.generators[0], *c.prism, s.generators[1], s.generators[2]);
        for (const auto& e : q.excluded) disk(cv, e.disk, color, "excluded");
      } else {
        domain_2d(cv, subgroup_domain(s), color);
      }
    } catch (const Error&) {
      // no certified domain: draw the raw disks
      const MoebiusElement& g = s.generators[bianchi ? 0 : (s.translation_index == 0 ? 1 : 0)];
      if (!g.c().is_zero()) {
        disk(cv, isometric_disk(g), color, "excluded");
        disk(cv, isometric_disk(mm_inv(g)), color, "excluded");
      }
    }
    if (i < c.conjugators.size() && c.conjugators[i]) {
      const MoebiusElement& a = *c.conjugators[i];
      disk(cv, isometric_disk(a), "#d62728", "conjugator");
      if (!a.trace().is_zero()) disk(cv, isometric_disk(mm_inv(a)), "#d62728", "conjugator");
    }
    if (s.interval)
      cv.line(s.interval->first.to_double(), 0, s.interval->second.to_double(), 0, "#ff7f0e", "interval", 3);
    cv.close_group();
  }
  return cv.finish();
}

std::string render_generators_svg(const std::vector<MoebiusElement>& gens) {
  Canvas cv;
  double center = 0, halfwidth = 0.5;
  for (const auto& g : gens)
    if (g.fixes_infinity() && !g.b().is_zero() && g.b().is_real()) {
      halfwidth = std::abs(g.b().to_double()) / 2;
      break;
    }
  strip(cv, center, halfwidth);
  int k = 0;
  for (const auto& g : gens) {
    if (g.c().is_zero()) continue;
    const std::string color = kPalette[k++ % (sizeof kPalette / sizeof *kPalette)];
    try {
      disk(cv, isometric_disk(g), color, "generator");
      disk(cv, isometric_disk(mm_inv(g)), color, "generator");
    } catch (const Error&) {
      // circle without a rational radius square is skipped
    }
  }
  return cv.finish();
}

}  // namespace fordlab

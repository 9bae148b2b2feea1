#pragma once

#include <string>

namespace ramanwt {

// Minimal builder for static vector graphics; emits deterministic text with
// two-decimal coordinates.
class SvgBuilder {
 public:
  SvgBuilder(double width, double height);

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "", double stroke_width = 1.0);
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0);
  void polyline(const std::string& points, const std::string& stroke, double width = 1.5);
  void circle(double cx, double cy, double r, const std::string& fill);
  void text(double x, double y, const std::string& s, double size = 12.0,
            const std::string& anchor = "start", const std::string& fill = "#333");

  static std::string point_list_entry(double x, double y);
  std::string finish() const;

 private:
  std::string body_;
  double width_, height_;
};

}  // namespace ramanwt

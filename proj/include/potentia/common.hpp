#ifndef POTENTIA_COMMON_HPP
#define POTENTIA_COMMON_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace potentia {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double dist(Point a, Point b) { return norm(a - b); }

struct BBox {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    bool contains(Point p) const {
        return p.x > xmin && p.x < xmax && p.y > ymin && p.y < ymax;
    }
};

// Extended reals: IEEE doubles with -inf/+inf as legal function values.
inline constexpr double neg_inf() { return -std::numeric_limits<double>::infinity(); }
inline constexpr double pos_inf() { return std::numeric_limits<double>::infinity(); }
inline bool is_neg_inf(double v) { return std::isinf(v) && v < 0; }
inline bool is_pos_inf(double v) { return std::isinf(v) && v > 0; }

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidDimensionError : Error {
    explicit InvalidDimensionError(const std::string& what) : Error(what) {}
};

struct GeometryError : Error {
    explicit GeometryError(const std::string& what) : Error(what) {}
};

struct DomainMismatchError : Error {
    explicit DomainMismatchError(const std::string& what) : Error(what) {}
};

struct SolverError : Error {
    explicit SolverError(const std::string& what) : Error(what) {}
};

struct HypothesisError : Error {
    explicit HypothesisError(const std::string& what) : Error(what) {}
};

struct GluingHypothesisError : HypothesisError {
    GluingHypothesisError(const std::string& what, Point worst, double gap)
        : HypothesisError(what), worst_node(worst), worst_gap(gap) {}
    Point worst_node;
    double worst_gap;
};

struct ScenarioError : Error {
    ScenarioError(const std::string& what, int line_no, std::string field_name)
        : Error(what), line(line_no), field(std::move(field_name)) {}
    int line;
    std::string field;
};

}  // namespace potentia

#endif

#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace steinerlab {

/// Absolute tolerance (length units) for point equality and on-line tests.
/// Inputs are assumed scaled to O(1) diameter.
inline constexpr double kGeomEps = 1e-9;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
    friend Point operator*(Point p, double s) { return {s * p.x, s * p.y}; }
    friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Wraps an angle into [0, 2pi).
double normalize_angle(double theta);

/// A unit direction u = (cos theta, sin theta) with theta in [0, 2pi).
class Direction {
public:
    Direction() = default;
    explicit Direction(double theta) : theta_(normalize_angle(theta)) {}

    static Direction from_vector(Point v);

    double theta() const { return theta_; }
    Point unit() const { return {std::cos(theta_), std::sin(theta_)}; }
    /// Unit vector spanning u-perp, oriented so that (normal, unit) is right-handed.
    Point normal() const { return {std::sin(theta_), -std::cos(theta_)}; }

private:
    double theta_ = 0.0;
};

struct Ring {
    std::vector<Point> vertices;

    std::size_t size() const { return vertices.size(); }
};

/// Shoelace signed area; positive for counterclockwise rings.
double signed_area(const Ring& ring);
double perimeter(const Ring& ring);

/// Outer ring counterclockwise, holes clockwise.
struct Region {
    Ring outer;
    std::vector<Ring> holes;
};

struct Segment {
    Point a;
    Point b;

    double length() const { return dist(a, b); }
    bool is_point() const { return a == b; }
};

/// Measure-zero part of a set. A zero-length segment is an isolated point.
struct Chain {
    std::vector<Segment> segments;
};

struct CompactSet {
    std::vector<Region> regions;
    std::vector<Chain> chains;

    bool empty() const;
    std::size_t vertex_count() const;
};

struct Ball {
    Point center;
    double radius = 0.0;
};

struct BoundingBox {
    Point lo{+INFINITY, +INFINITY};
    Point hi{-INFINITY, -INFINITY};

    bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
    void expand(Point p);
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
};

// --- construction and validation ---------------------------------------

/// Builds a region, reorienting the outer ring CCW and holes CW.
Region make_region(Ring outer, std::vector<Ring> holes = {});
Ring make_ring(std::vector<Point> vertices);
CompactSet make_set(std::vector<Region> regions, std::vector<Chain> chains = {});
CompactSet make_polygon_set(std::vector<Point> outer);

/// Throws GeometryError naming the offending component when an invariant fails.
void validate(const CompactSet& set);

// --- measures ---------------------------------------------------------

double area(const Region& region);
double area(const CompactSet& set);
double perimeter(const CompactSet& set);
double diameter(const CompactSet& set);
double second_moment(const CompactSet& set, Point p);
BoundingBox bounding_box(const CompactSet& set);
std::vector<Point> all_vertices(const CompactSet& set);

/// Returns the centered ball with the same area. Throws for null sets.
Ball equimeasurable_ball(const CompactSet& set);

// --- rigid motions -------------------------------------------------------

CompactSet rotate(const CompactSet& set, double angle);
CompactSet translate(const CompactSet& set, Point v);
/// Reflection across the line u-perp through the origin.
CompactSet reflect(const CompactSet& set, Direction u);
CompactSet scale(const CompactSet& set, double factor);

// --- point queries -------------------------------------------------------

/// Closed-set membership for the region part (boundary counts as inside).
bool region_contains(const CompactSet& set, Point p);
double distance_to_segment(Point p, const Segment& s);
/// Euclidean distance from p to the set (0 inside a region).
double distance_to_set(const CompactSet& set, Point p);

// --- convexity ---------------------------------------------------------

/// Andrew's monotone chain; counterclockwise, collinear points dropped.
std::vector<Point> convex_hull(std::span<const Point> points);
double convex_hull_area(const CompactSet& set);
/// True when the set is one hole-free region whose outer ring turns left
/// everywhere, up to the given angular tolerance.
bool is_convex(const CompactSet& set, double angular_tol = 1e-7);

// --- builtin shapes -------------------------------------------------------

enum class BallFit { inscribed, circumscribed };

/// Regular n-gon approximating the closed ball. Inscribed polygons have
/// their vertices on the circle; circumscribed ones their edge midpoints.
CompactSet polygon_ball(Point center, double radius, int n = 256,
                        BallFit fit = BallFit::inscribed);
CompactSet segment_set(Point a, Point b);
/// Concatenates two sets whose regions already have disjoint interiors.
CompactSet merge_disjoint(const CompactSet& a, const CompactSet& b);

}  // namespace steinerlab

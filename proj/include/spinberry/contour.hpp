#ifndef SPINBERRY_CONTOUR_HPP
#define SPINBERRY_CONTOUR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include <spinberry/errors.hpp>
#include <spinberry/quadrature.hpp>
#include <spinberry/types.hpp>

// Closed oriented polylines in parameter space and triangulated caps bounded
// by them.  Orientation convention throughout: a contour circling an axis
// counterclockwise as seen from outside the sphere (right-handed about the
// outward normal) has positive solid angle.

namespace spinberry {

template <typename S>
struct ParameterContour {
  std::vector<Vec3<S>> points;  // closed by convention: last connects to first
  int orientation = 1;          // +1 storage order, -1 reversed traversal

  std::size_t size() const { return points.size(); }

  const Vec3<S>& point(std::size_t k) const {
    return orientation >= 0 ? points[k] : points[points.size() - 1 - k];
  }

  S radius() const { return points.empty() ? S(0) : points.front().norm(); }

  ParameterContour reversed() const {
    ParameterContour c = *this;
    c.orientation = -c.orientation;
    return c;
  }

  // Pole clearance is demanded by the gauge-dependent consumers (connection
  // pull-backs, overlap products); purely geometric consumers may waive it,
  // e.g. a polygon with a vertex on the axis still has a solid angle.
  void validate(bool require_pole_clearance = true) const {
    if (points.size() < 3) throw Error("contour needs at least 3 points");
    if (orientation != 1 && orientation != -1)
      throw Error("contour orientation must be +1 or -1");
    const S r0 = points.front().norm();
    if (!(r0 > S(0))) throw ZeroSpinVector();
    const S rtol = S(1e-10) * std::max(S(1), r0);
    const std::size_t n = points.size();
    for (std::size_t k = 0; k < n; ++k) {
      if (!points[k].allFinite()) throw Error("contour point is not finite");
      if (std::abs(points[k].norm() - r0) > rtol)
        throw Error("contour points must share one radius");
      if (require_pole_clearance &&
          std::hypot(points[k][0], points[k][1]) < S(kPoleGuard) * r0)
        throw PoleSingularity("contour point");
      if ((points[(k + 1) % n] - points[k]).norm() == S(0))
        throw Error("consecutive contour points must be distinct");
    }
  }

  // Circle at colatitude theta about the z-axis, azimuth increasing
  // (counterclockwise seen from +z).
  static ParameterContour circle(S theta, std::size_t n, S radius = S(1),
                                 S phi0 = S(0)) {
    ParameterContour c;
    c.points.reserve(n);
    const S st = std::sin(theta);
    const S ct = std::cos(theta);
    for (std::size_t k = 0; k < n; ++k) {
      const S phi = phi0 + S(2) * pi_v<S> * S(k) / S(n);
      c.points.emplace_back(radius * st * std::cos(phi),
                            radius * st * std::sin(phi), radius * ct);
    }
    return c;
  }

  // Boundary of the positive octant: three unit vertices joined by great-arc
  // edges, counterclockwise as seen from (1,1,1).
  static ParameterContour octant() {
    ParameterContour c;
    c.points = {Vec3<S>(1, 0, 0), Vec3<S>(0, 1, 0), Vec3<S>(0, 0, 1)};
    return c;
  }
};

// Oriented solid angle of the geodesic triangle (a, b, c) on the unit sphere;
// positive when (a, b, c) wind counterclockwise seen from outside.
template <typename S>
S triangle_solid_angle(const Vec3<S>& a, const Vec3<S>& b, const Vec3<S>& c) {
  const S num = a.dot(b.cross(c));
  const S den = S(1) + a.dot(b) + b.dot(c) + c.dot(a);
  return S(2) * std::atan2(num, den);
}

namespace detail {

// True if unit point p lies strictly inside the minor arc a -> b, assuming p
// is on the arc's great circle.
template <typename S>
bool strictly_inside_arc(const Vec3<S>& p, const Vec3<S>& a, const Vec3<S>& b,
                         S tol) {
  const Vec3<S> n = a.cross(b);
  return a.cross(p).dot(n) > tol && p.cross(b).dot(n) > tol;
}

// Best-effort great-arc crossing test between all non-adjacent segment pairs.
// Assumes segments subtend less than pi (true for sensibly sampled contours).
template <typename S>
bool contour_self_intersects(const std::vector<Vec3<S>>& dir) {
  const std::size_t n = dir.size();
  const S tol = S(1e-12);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3<S>& a = dir[i];
    const Vec3<S>& b = dir[(i + 1) % n];
    const Vec3<S> n1 = a.cross(b);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closure
      const Vec3<S>& c = dir[j];
      const Vec3<S>& d = dir[(j + 1) % n];
      const Vec3<S> n2 = c.cross(d);
      Vec3<S> t = n1.cross(n2);
      const S tn = t.norm();
      if (tn < S(1e-14)) continue;  // coplanar arcs: not treated (best effort)
      t /= tn;
      for (int sign = 0; sign < 2; ++sign) {
        const Vec3<S> p = sign ? Vec3<S>(-t) : t;
        if (strictly_inside_arc(p, a, b, tol) &&
            strictly_inside_arc(p, c, d, tol))
          return true;
      }
    }
  }
  return false;
}

// Fan reference direction: the mean circulation axis of the contour.
template <typename S>
Vec3<S> contour_axis(const std::vector<Vec3<S>>& dir) {
  const Vec3<S> axis = pairwise_sum(dir.size(), [&](std::size_t k) {
    return Vec3<S>(dir[k].cross(dir[(k + 1) % dir.size()]));
  });
  return axis;
}

}  // namespace detail

// Oriented solid angle subtended by the contour, by fan decomposition into
// geodesic triangles from the circulation axis (sign-canonicalized, so the
// value is exactly odd under orientation reversal).  Exact for geodesic
// polygons; range (-4 pi, 4 pi).  Self-intersection detection is best effort
// and only attempted for contours of at most 1024 points (quadratic cost).
template <typename S>
S solid_angle(const ParameterContour<S>& contour) {
  contour.validate(false);
  const std::size_t n = contour.size();
  std::vector<Vec3<S>> dir(n);
  for (std::size_t k = 0; k < n; ++k) dir[k] = contour.point(k).normalized();
  if (n <= 1024 && detail::contour_self_intersects(dir))
    throw SelfIntersection();
  Vec3<S> ref = detail::contour_axis(dir);
  const S an = ref.norm();
  bool usable = an > S(1e-12);
  if (usable) {
    ref /= an;
    // Canonical apex: dominant component positive.  Both orientations of one
    // contour then fan from the same apex, so reversal negates the result
    // exactly instead of landing on another branch of the 4 pi ambiguity.
    int dom = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(ref[i]) > std::abs(ref[dom])) dom = i;
    if (ref[dom] < S(0)) ref = -ref;
    for (std::size_t k = 0; k < n; ++k)
      if (ref.dot(dir[k]) < S(-1) + S(1e-9)) {
        usable = false;  // antipodal apex degenerates the fan triangles
        break;
      }
  }
  if (!usable) ref = dir[0];
  return pairwise_sum(n, [&](std::size_t k) {
    return triangle_solid_angle(ref, dir[k], dir[(k + 1) % n]);
  });
}

// Triangulated surface bounded by a contour.  Triangles are wound
// counterclockwise seen from outside the sphere (outward normals).
template <typename S>
struct SurfaceCapMesh {
  std::vector<Vec3<S>> vertices;
  std::vector<std::array<std::size_t, 3>> triangles;

  // Structural checks: interior edges shared by exactly two triangles with
  // opposite directions (consistent winding), boundary edges forming one
  // directed cycle.  Returns the boundary cycle vertex indices in order.
  std::vector<std::size_t> boundary_cycle() const {
    if (triangles.empty()) throw MeshInconsistent("mesh has no triangles");
    std::map<std::pair<std::size_t, std::size_t>, int> edges;
    for (const auto& t : triangles) {
      for (int e = 0; e < 3; ++e) {
        const std::size_t u = t[e];
        const std::size_t v = t[(e + 1) % 3];
        if (u == v) throw MeshInconsistent("degenerate triangle edge");
        if (u >= vertices.size() || v >= vertices.size())
          throw MeshInconsistent("triangle index out of range");
        if (++edges[{std::min(u, v), std::max(u, v)}] > 2)
          throw MeshInconsistent("edge shared by more than two triangles");
      }
    }
    std::map<std::size_t, std::size_t> next;  // directed boundary edges
    for (const auto& t : triangles) {
      for (int e = 0; e < 3; ++e) {
        const std::size_t u = t[e];
        const std::size_t v = t[(e + 1) % 3];
        if (edges[{std::min(u, v), std::max(u, v)}] == 1) {
          if (next.count(u))
            throw MeshInconsistent("boundary branches at a vertex");
          next[u] = v;
        }
      }
    }
    // An interior edge traversed twice in the same direction never reaches
    // count 2 as a directed pair; detect flips by re-walking directed edges.
    std::map<std::pair<std::size_t, std::size_t>, int> directed;
    for (const auto& t : triangles)
      for (int e = 0; e < 3; ++e)
        if (++directed[{t[e], t[(e + 1) % 3]}] > 1)
          throw MeshInconsistent("two triangles wind an edge the same way");
    if (next.empty()) throw MeshInconsistent("mesh is closed, expected a cap");
    std::vector<std::size_t> cycle;
    cycle.reserve(next.size());
    const std::size_t start = next.begin()->first;
    std::size_t at = start;
    do {
      cycle.push_back(at);
      const auto it = next.find(at);
      if (it == next.end()) throw MeshInconsistent("boundary cycle is open");
      at = it->second;
    } while (at != start && cycle.size() <= next.size());
    if (cycle.size() != next.size())
      throw MeshInconsistent("boundary is not a single cycle");
    return cycle;
  }

  void validate() const { (void)boundary_cycle(); }

  // The boundary cycle must visit exactly the contour's points in traversal
  // order (up to the starting point).
  void require_boundary(const ParameterContour<S>& contour) const {
    const auto cycle = boundary_cycle();
    const std::size_t n = contour.size();
    if (cycle.size() != n)
      throw MeshInconsistent("boundary length differs from contour");
    const S tol = S(1e-12) * std::max(S(1), contour.radius());
    std::size_t start = n;
    for (std::size_t k = 0; k < n; ++k)
      if ((vertices[cycle[k]] - contour.point(0)).norm() <= tol) {
        start = k;
        break;
      }
    if (start == n) throw MeshInconsistent("boundary misses contour start");
    for (std::size_t k = 0; k < n; ++k)
      if ((vertices[cycle[(start + k) % n]] - contour.point(k)).norm() > tol)
        throw MeshInconsistent("boundary cycle deviates from contour");
  }
};

// Concentric-ring triangulation of the cap between the contour and its
// circulation-axis apex: `rings` rings of one vertex per contour point,
// joined by great-circle interpolation toward the apex.  Ring `rings`
// coincides with the contour itself.
template <typename S>
SurfaceCapMesh<S> build_cap_mesh(const ParameterContour<S>& contour,
                                 std::size_t rings) {
  contour.validate(false);
  if (rings < 1) throw MeshInconsistent("cap mesh needs at least one ring");
  const std::size_t n = contour.size();
  const S radius = contour.radius();
  std::vector<Vec3<S>> dir(n);
  for (std::size_t k = 0; k < n; ++k) dir[k] = contour.point(k).normalized();
  Vec3<S> axis = detail::contour_axis(dir);
  if (axis.norm() < S(1e-12))
    throw MeshInconsistent("contour circulation axis undefined");
  axis.normalize();

  SurfaceCapMesh<S> mesh;
  mesh.vertices.reserve(1 + rings * n);
  mesh.vertices.push_back(radius * axis);
  for (std::size_t j = 1; j <= rings; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (j == rings) {
        mesh.vertices.push_back(contour.point(k));
        continue;
      }
      const S cosang = std::clamp(axis.dot(dir[k]), S(-1), S(1));
      const S ang = std::acos(cosang);
      if (ang < S(1e-12))
        throw MeshInconsistent("contour touches the cap apex");
      const S t = S(j) / S(rings);
      const Vec3<S> v = (std::sin((S(1) - t) * ang) * axis +
                         std::sin(t * ang) * dir[k]) /
                        std::sin(ang);
      mesh.vertices.push_back(radius * v);
    }
  }
  const auto idx = [n](std::size_t ring, std::size_t k) {
    return 1 + (ring - 1) * n + (k % n);
  };
  mesh.triangles.reserve(n + (rings - 1) * 2 * n);
  for (std::size_t k = 0; k < n; ++k)
    mesh.triangles.push_back({0, idx(1, k), idx(1, k + 1)});
  for (std::size_t j = 1; j < rings; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t a = idx(j, k);
      const std::size_t b = idx(j, k + 1);
      const std::size_t c = idx(j + 1, k + 1);
      const std::size_t d = idx(j + 1, k);
      mesh.triangles.push_back({a, d, c});
      mesh.triangles.push_back({a, c, b});
    }
  }
  return mesh;
}

}  // namespace spinberry

#endif

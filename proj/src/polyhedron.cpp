#include "supdiff/polyhedron.hpp"

#include "supdiff/double_description.hpp"
#include "supdiff/lp.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace supdiff {

namespace {

// Public data enters with dim <= 6; one extra slot serves epigraph lifts.
constexpr int kHardDimensionCeiling = 7;

void check_dim(int dim) {
  if (dim < 1 || dim > kHardDimensionCeiling) {
    throw std::invalid_argument("polyhedron dimension out of range [1, " +
                                std::to_string(kHardDimensionCeiling) + "]");
  }
}

void check_same_dim(const Polyhedron& p, const Polyhedron& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("dimension mismatch");
}

struct HalfSpaceLess {
  bool operator()(const HalfSpace& a, const HalfSpace& b) const {
    const int c = compare_lex(a.normal, b.normal);
    if (c != 0) return c < 0;
    return a.offset < b.offset;
  }
};

bool halfspace_eq(const HalfSpace& a, const HalfSpace& b) {
  return a.offset == b.offset && compare_lex(a.normal, b.normal) == 0;
}

// Joint content normalization of (normal | offset), keeping direction.
HalfSpace normalize_halfspace(const HalfSpace& h) {
  Vec joint = h.normal;
  joint.push_back(h.offset);
  joint = primitive(joint);
  HalfSpace out;
  out.offset = joint.back();
  joint.pop_back();
  out.normal = std::move(joint);
  return out;
}

std::vector<HalfSpace> tidy_hrep(std::vector<HalfSpace> rows, int dim) {
  std::vector<HalfSpace> out;
  out.reserve(rows.size());
  for (auto& row : rows) {
    if (static_cast<int>(row.normal.size()) != dim) {
      throw std::invalid_argument("inequality normal has wrong dimension");
    }
    HalfSpace h = normalize_halfspace(row);
    if (is_zero(h.normal) && h.offset >= 0) continue;  // trivially true
    out.push_back(std::move(h));
  }
  std::sort(out.begin(), out.end(), HalfSpaceLess{});
  out.erase(std::unique(out.begin(), out.end(), halfspace_eq), out.end());
  return out;
}

// v redundant iff v in conv(other vertices) + cone(rays).
bool vertex_redundant(const Vec& v, const std::vector<Vec>& others, const std::vector<Vec>& rays) {
  if (others.empty()) return false;
  const int dim = static_cast<int>(v.size());
  const int nv = static_cast<int>(others.size());
  const int nr = static_cast<int>(rays.size());
  const int n = nv + nr;
  std::vector<lp::Constraint> constraints;
  for (int c = 0; c < dim; ++c) {
    Vec row(n);
    for (int i = 0; i < nv; ++i) row[i] = others[i][c];
    for (int j = 0; j < nr; ++j) row[nv + j] = rays[j][c];
    constraints.push_back(lp::equal(std::move(row), v[c]));
  }
  Vec ones(n, Rational(0));
  for (int i = 0; i < nv; ++i) ones[i] = 1;
  constraints.push_back(lp::equal(std::move(ones), Rational(1)));
  for (int i = 0; i < n; ++i) {
    Vec row(n, Rational(0));
    row[i] = -1;
    constraints.push_back(lp::less_equal(std::move(row), Rational(0)));
  }
  return lp::feasible(constraints, n);
}

}  // namespace

Polyhedron Polyhedron::from_hrep(int dim, std::vector<HalfSpace> constraints) {
  check_dim(dim);
  Polyhedron p(dim);
  p.hrep_ = tidy_hrep(std::move(constraints), dim);
  p.hrep_canonical_ = false;
  return p;
}

Polyhedron Polyhedron::from_vrep(int dim, std::vector<Vec> vertices, std::vector<Vec> rays) {
  check_dim(dim);
  for (const auto& v : vertices) {
    if (static_cast<int>(v.size()) != dim) throw std::invalid_argument("vertex has wrong dimension");
  }
  for (const auto& r : rays) {
    if (static_cast<int>(r.size()) != dim) throw std::invalid_argument("ray has wrong dimension");
  }

  Polyhedron p(dim);
  VRep rep;
  if (vertices.empty()) {
    // No vertices means the empty set; rays are discarded.
    p.vrep_ = std::move(rep);
    return p;
  }

  // Canonical rays: primitive, deduplicated, irredundant.
  std::set<Vec, VecLess> ray_set;
  for (const auto& r : rays) {
    Vec pr = primitive(r);
    if (!is_zero(pr)) ray_set.insert(std::move(pr));
  }
  rep.rays.assign(ray_set.begin(), ray_set.end());
  for (std::size_t i = 0; i < rep.rays.size();) {
    std::vector<Vec> others;
    for (std::size_t j = 0; j < rep.rays.size(); ++j) {
      if (j != i) others.push_back(rep.rays[j]);
    }
    if (detail::in_cone(others, rep.rays[i])) {
      rep.rays.erase(rep.rays.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }

  // Canonical vertices: deduplicated, none inside the hull of the rest.
  std::set<Vec, VecLess> vertex_set(vertices.begin(), vertices.end());
  rep.vertices.assign(vertex_set.begin(), vertex_set.end());
  for (std::size_t i = 0; i < rep.vertices.size();) {
    std::vector<Vec> others;
    for (std::size_t j = 0; j < rep.vertices.size(); ++j) {
      if (j != i) others.push_back(rep.vertices[j]);
    }
    if (vertex_redundant(rep.vertices[i], others, rep.rays)) {
      rep.vertices.erase(rep.vertices.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }

  p.vrep_ = std::move(rep);
  return p;
}

Polyhedron Polyhedron::empty_set(int dim) {
  check_dim(dim);
  Polyhedron p(dim);
  p.vrep_ = VRep{};
  p.hrep_ = std::vector<HalfSpace>{HalfSpace{zero_vec(dim), Rational(-1)}};
  p.hrep_canonical_ = true;
  return p;
}

Polyhedron Polyhedron::whole_space(int dim) {
  check_dim(dim);
  Polyhedron p(dim);
  VRep rep;
  rep.vertices.push_back(zero_vec(dim));
  for (int i = 0; i < dim; ++i) {
    Vec e = zero_vec(dim);
    e[i] = 1;
    rep.rays.push_back(e);
    e[i] = -1;
    rep.rays.push_back(e);
  }
  std::sort(rep.rays.begin(), rep.rays.end(), VecLess{});
  p.vrep_ = std::move(rep);
  p.hrep_ = std::vector<HalfSpace>{};
  p.hrep_canonical_ = true;
  return p;
}

Polyhedron Polyhedron::singleton(Vec point) {
  const int dim = static_cast<int>(point.size());
  check_dim(dim);
  Polyhedron p(dim);
  VRep rep;
  rep.vertices.push_back(std::move(point));
  p.vrep_ = std::move(rep);
  return p;
}

void Polyhedron::ensure_vrep() const {
  if (vrep_.has_value()) return;
  // Homogenize: x in P iff (x, 1) lies in the cone
  //   {(x, t) : <a_i, x> - b_i t <= 0, -t <= 0}.
  std::vector<Vec> normals;
  normals.reserve(hrep_->size() + 1);
  for (const auto& h : *hrep_) {
    Vec n = h.normal;
    n.push_back(-h.offset);
    normals.push_back(std::move(n));
  }
  Vec tpos = zero_vec(dim_ + 1);
  tpos[dim_] = -1;
  normals.push_back(std::move(tpos));

  VRep rep;
  for (const Vec& g : detail::cone_generators(normals, dim_ + 1)) {
    const Rational& tau = g[dim_];
    Vec prefix(g.begin(), g.end() - 1);
    if (tau > 0) {
      rep.vertices.push_back(scaled(prefix, Rational(1) / tau));
    } else {
      if (!is_zero(prefix)) rep.rays.push_back(primitive(prefix));
    }
  }
  if (rep.vertices.empty()) {
    rep.rays.clear();  // canonical empty
  }
  std::sort(rep.vertices.begin(), rep.vertices.end(), VecLess{});
  std::sort(rep.rays.begin(), rep.rays.end(), VecLess{});
  vrep_ = std::move(rep);
}

void Polyhedron::ensure_some_hrep() const {
  if (hrep_.has_value()) return;
  ensure_canonical_hrep();
}

void Polyhedron::ensure_canonical_hrep() const {
  if (hrep_.has_value() && hrep_canonical_) return;
  ensure_vrep();
  std::vector<HalfSpace> rows;
  if (vrep_->vertices.empty()) {
    rows.push_back(HalfSpace{zero_vec(dim_), Rational(-1)});
  } else {
    // Facets of the homogenization cone(v_i, 1; r_j, 0) via polarity.
    std::vector<Vec> generators;
    generators.reserve(vrep_->vertices.size() + vrep_->rays.size());
    for (const auto& v : vrep_->vertices) {
      Vec g = v;
      g.push_back(Rational(1));
      generators.push_back(std::move(g));
    }
    for (const auto& r : vrep_->rays) {
      Vec g = r;
      g.push_back(Rational(0));
      generators.push_back(std::move(g));
    }
    for (const Vec& row : detail::cone_inequalities(generators, dim_ + 1)) {
      Vec normal(row.begin(), row.end() - 1);
      if (is_zero(normal)) continue;  // encodes t >= 0 only
      rows.push_back(HalfSpace{std::move(normal), -row.back()});
    }
    std::sort(rows.begin(), rows.end(), HalfSpaceLess{});
  }
  hrep_ = std::move(rows);
  hrep_canonical_ = true;
}

bool Polyhedron::is_empty() const {
  ensure_vrep();
  return vrep_->vertices.empty();
}

const std::vector<Vec>& Polyhedron::vertices() const {
  ensure_vrep();
  return vrep_->vertices;
}

const std::vector<Vec>& Polyhedron::rays() const {
  ensure_vrep();
  return vrep_->rays;
}

const std::vector<HalfSpace>& Polyhedron::inequalities() const {
  ensure_canonical_hrep();
  return *hrep_;
}

bool Polyhedron::contains(const Vec& point) const {
  if (static_cast<int>(point.size()) != dim_) throw std::invalid_argument("dimension mismatch");
  if (hrep_.has_value()) {
    for (const auto& h : *hrep_) {
      if (dot(h.normal, point) > h.offset) return false;
    }
    return true;
  }
  // V-representation membership: point in conv(V) + cone(R).
  if (vrep_->vertices.empty()) return false;
  const int nv = static_cast<int>(vrep_->vertices.size());
  const int nr = static_cast<int>(vrep_->rays.size());
  const int n = nv + nr;
  std::vector<lp::Constraint> constraints;
  for (int c = 0; c < dim_; ++c) {
    Vec row(n);
    for (int i = 0; i < nv; ++i) row[i] = vrep_->vertices[i][c];
    for (int j = 0; j < nr; ++j) row[nv + j] = vrep_->rays[j][c];
    constraints.push_back(lp::equal(std::move(row), point[c]));
  }
  Vec ones(n, Rational(0));
  for (int i = 0; i < nv; ++i) ones[i] = 1;
  constraints.push_back(lp::equal(std::move(ones), Rational(1)));
  for (int i = 0; i < n; ++i) {
    Vec row(n, Rational(0));
    row[i] = -1;
    constraints.push_back(lp::less_equal(std::move(row), Rational(0)));
  }
  return lp::feasible(constraints, n);
}

bool Polyhedron::is_bounded() const {
  ensure_vrep();
  return vrep_->rays.empty();
}

std::string Polyhedron::str() const {
  ensure_vrep();
  std::ostringstream out;
  if (is_empty()) {
    out << "{} (dim " << dim_ << ")";
    return out.str();
  }
  out << "conv{";
  for (std::size_t i = 0; i < vrep_->vertices.size(); ++i) {
    if (i > 0) out << ", ";
    out << to_string(vrep_->vertices[i]);
  }
  out << "}";
  if (!vrep_->rays.empty()) {
    out << " + cone{";
    for (std::size_t i = 0; i < vrep_->rays.size(); ++i) {
      if (i > 0) out << ", ";
      out << to_string(vrep_->rays[i]);
    }
    out << "}";
  }
  return out.str();
}

bool contains_point(const Polyhedron& p, const Vec& x) { return p.contains(x); }

Polyhedron minkowski_sum(const Polyhedron& p, const Polyhedron& q) {
  check_same_dim(p, q);
  if (p.is_empty() || q.is_empty()) return Polyhedron::empty_set(p.dim());
  std::vector<Vec> vertices;
  vertices.reserve(p.vertices().size() * q.vertices().size());
  for (const auto& a : p.vertices()) {
    for (const auto& b : q.vertices()) {
      vertices.push_back(add(a, b));
    }
  }
  std::vector<Vec> rays = p.rays();
  rays.insert(rays.end(), q.rays().begin(), q.rays().end());
  return Polyhedron::from_vrep(p.dim(), std::move(vertices), std::move(rays));
}

Polyhedron hull_union(const std::vector<Polyhedron>& sets) {
  if (sets.empty()) throw std::invalid_argument("hull_union of an empty list");
  const int dim = sets.front().dim();
  std::vector<Vec> vertices;
  std::vector<Vec> rays;
  for (const auto& s : sets) {
    if (s.dim() != dim) throw std::invalid_argument("dimension mismatch");
    if (s.is_empty()) continue;
    vertices.insert(vertices.end(), s.vertices().begin(), s.vertices().end());
    rays.insert(rays.end(), s.rays().begin(), s.rays().end());
  }
  if (vertices.empty()) return Polyhedron::empty_set(dim);
  return Polyhedron::from_vrep(dim, std::move(vertices), std::move(rays));
}

Polyhedron hull_union(const Polyhedron& p, const Polyhedron& q) {
  return hull_union(std::vector<Polyhedron>{p, q});
}

Polyhedron scale(const Polyhedron& p, const Rational& factor) {
  if (factor < 0) throw std::invalid_argument("scale requires a nonnegative factor");
  if (p.is_empty()) return Polyhedron::empty_set(p.dim());
  if (factor == 0) return Polyhedron::singleton(zero_vec(p.dim()));
  std::vector<Vec> vertices;
  vertices.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) vertices.push_back(scaled(v, factor));
  return Polyhedron::from_vrep(p.dim(), std::move(vertices), p.rays());
}

Polyhedron recession_cone(const Polyhedron& p) {
  if (p.is_empty()) return Polyhedron::singleton(zero_vec(p.dim()));
  return Polyhedron::from_vrep(p.dim(), {zero_vec(p.dim())}, p.rays());
}

Polyhedron intersect(const Polyhedron& p, const Polyhedron& q) {
  check_same_dim(p, q);
  std::vector<HalfSpace> rows = p.inequalities();
  const auto& qrows = q.inequalities();
  rows.insert(rows.end(), qrows.begin(), qrows.end());
  return Polyhedron::from_hrep(p.dim(), std::move(rows));
}

bool is_subset(const Polyhedron& inner, const Polyhedron& outer) {
  check_same_dim(inner, outer);
  if (inner.is_empty()) return true;
  outer.ensure_some_hrep();
  for (const auto& h : *outer.hrep_) {
    for (const auto& v : inner.vertices()) {
      if (dot(h.normal, v) > h.offset) return false;
    }
    for (const auto& r : inner.rays()) {
      if (dot(h.normal, r) > 0) return false;
    }
  }
  return true;
}

bool set_equal(const Polyhedron& p, const Polyhedron& q) {
  return is_subset(p, q) && is_subset(q, p);
}

ExtReal support_value(const Polyhedron& p, const Vec& direction) {
  if (static_cast<int>(direction.size()) != p.dim()) {
    throw std::invalid_argument("dimension mismatch");
  }
  if (p.is_empty()) return ExtReal::minus_infinity();
  for (const auto& r : p.rays()) {
    if (dot(r, direction) > 0) return ExtReal::plus_infinity();
  }
  ExtReal best = ExtReal::minus_infinity();
  for (const auto& v : p.vertices()) {
    ExtReal value(dot(v, direction));
    if (best < value) best = value;
  }
  return best;
}

Polyhedron eps_normal_set(const Polyhedron& p, const Vec& x, const Rational& eps) {
  if (eps < 0) throw std::invalid_argument("eps_normal_set requires eps >= 0");
  if (!p.contains(x)) return Polyhedron::empty_set(p.dim());
  std::vector<HalfSpace> rows;
  rows.reserve(p.vertices().size() + p.rays().size());
  for (const auto& v : p.vertices()) {
    rows.push_back(HalfSpace{sub(v, x), eps});
  }
  for (const auto& r : p.rays()) {
    rows.push_back(HalfSpace{r, Rational(0)});
  }
  return Polyhedron::from_hrep(p.dim(), std::move(rows));
}

std::optional<Vec> interior_point(const Polyhedron& p) {
  p.ensure_some_hrep();
  const auto& rows = *p.hrep_;
  const int n = p.dim();
  // maximize margin m subject to <a, x> + m * |a|_1 <= b and m <= 1.
  std::vector<lp::Constraint> constraints;
  for (const auto& h : rows) {
    Vec row = h.normal;
    row.push_back(l1_norm(h.normal));
    constraints.push_back(lp::less_equal(std::move(row), h.offset));
  }
  Vec bound = zero_vec(n + 1);
  bound[n] = 1;
  constraints.push_back(lp::less_equal(std::move(bound), Rational(1)));
  Vec objective = zero_vec(n + 1);
  objective[n] = 1;
  lp::Solution s = lp::maximize(objective, constraints);
  if (s.status != lp::Status::kOptimal || s.value <= 0) return std::nullopt;
  return Vec(s.point.begin(), s.point.end() - 1);
}

bool has_interior(const Polyhedron& p) { return interior_point(p).has_value(); }

Polyhedron drop_last_coordinate(const Polyhedron& p) {
  if (p.dim() < 2) throw std::invalid_argument("cannot drop the only coordinate");
  if (p.is_empty()) return Polyhedron::empty_set(p.dim() - 1);
  std::vector<Vec> vertices;
  for (const auto& v : p.vertices()) vertices.push_back(Vec(v.begin(), v.end() - 1));
  std::vector<Vec> rays;
  for (const auto& r : p.rays()) {
    Vec prefix(r.begin(), r.end() - 1);
    if (!is_zero(prefix)) rays.push_back(std::move(prefix));
  }
  return Polyhedron::from_vrep(p.dim() - 1, std::move(vertices), std::move(rays));
}

}  // namespace supdiff

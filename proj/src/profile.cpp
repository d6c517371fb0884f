#include "curvflow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvflow/quadrature.hpp"

namespace curvflow {

std::string to_string(Topology t) { return t == Topology::Sphere ? "Sphere" : "Torus"; }

std::string to_string(DerivativeSource s) {
  return s == DerivativeSource::Analytic ? "Analytic" : "FiniteDifference";
}

Topology topology_from_string(const std::string& s) {
  if (s == "Sphere") return Topology::Sphere;
  if (s == "Torus") return Topology::Torus;
  throw std::invalid_argument("unknown topology: " + s);
}

DerivativeSource derivative_source_from_string(const std::string& s) {
  if (s == "Analytic") return DerivativeSource::Analytic;
  if (s == "FiniteDifference") return DerivativeSource::FiniteDifference;
  throw std::invalid_argument("unknown derivative source: " + s);
}

double CurvePoint::speed() const { return std::hypot(dr, dz); }

bool valid_stencil_order(int order) { return order == 4 || order == 6 || order == 8; }

std::vector<Stencil> build_stencils(std::span<const double> u, Topology topology, double period, int order) {
  if (!valid_stencil_order(order)) throw GeometryError("stencil order must be 4, 6 or 8");
  const std::size_t n = u.size();
  const int half = order / 2;
  const auto width = static_cast<std::size_t>(order + 1);
  if (n < width) throw GeometryError("profile has too few samples for the finite-difference stencils");
  const auto last = static_cast<std::ptrdiff_t>(n - 1);
  std::vector<Stencil> out(n);
  std::vector<double> nodes(width);
  for (std::size_t i = 0; i < n; ++i) {
    Stencil& st = out[i];
    st.width = width;
    for (int k = -half; k <= half; ++k) {
      const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + k;
      StencilEntry& e = st.entries[static_cast<std::size_t>(k + half)];
      double node = 0.0;
      if (topology == Topology::Torus) {
        const auto nn = static_cast<std::ptrdiff_t>(n);
        const std::ptrdiff_t wrapped = ((j % nn) + nn) % nn;
        const double shift = static_cast<double>((j - wrapped) / nn) * period;
        e.index = static_cast<std::size_t>(wrapped);
        node = u[e.index] + shift;
      } else if (j < 0) {
        e.index = static_cast<std::size_t>(-j);
        e.mirrored = true;
        node = 2.0 * u[0] - u[e.index];
      } else if (j > last) {
        e.index = static_cast<std::size_t>(2 * last - j);
        e.mirrored = true;
        node = 2.0 * u[n - 1] - u[e.index];
      } else {
        e.index = static_cast<std::size_t>(j);
        node = u[e.index];
      }
      nodes[static_cast<std::size_t>(k + half)] = node;
    }
    const auto w = fd_weights(u[i], nodes, 2);
    for (std::size_t m = 0; m < width; ++m) {
      st.entries[m].d1 = w[1][m];
      st.entries[m].d2 = w[2][m];
    }
  }
  return out;
}

void apply_stencils(std::span<const Stencil> stencils, std::span<const double> f, double parity,
                    std::span<double> d1, std::span<double> d2) {
  for (std::size_t i = 0; i < stencils.size(); ++i) {
    double a = 0.0;
    double b = 0.0;
    for (const auto& e : stencils[i]) {
      const double v = e.mirrored ? parity * f[e.index] : f[e.index];
      a += e.d1 * v;
      b += e.d2 * v;
    }
    d1[i] = a;
    d2[i] = b;
  }
}

namespace {

double orient(double ax, double ay, double bx, double by, double cx, double cy) {
  return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

bool on_segment(double ax, double ay, double bx, double by, double px, double py) {
  return std::min(ax, bx) <= px && px <= std::max(ax, bx) && std::min(ay, by) <= py && py <= std::max(ay, by);
}

bool segments_intersect(double ax, double ay, double bx, double by, double cx, double cy, double dx, double dy) {
  const double o1 = orient(ax, ay, bx, by, cx, cy);
  const double o2 = orient(ax, ay, bx, by, dx, dy);
  const double o3 = orient(cx, cy, dx, dy, ax, ay);
  const double o4 = orient(cx, cy, dx, dy, bx, by);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
  if (o1 == 0 && on_segment(ax, ay, bx, by, cx, cy)) return true;
  if (o2 == 0 && on_segment(ax, ay, bx, by, dx, dy)) return true;
  if (o3 == 0 && on_segment(cx, cy, dx, dy, ax, ay)) return true;
  if (o4 == 0 && on_segment(cx, cy, dx, dy, bx, by)) return true;
  return false;
}

class ScaledCurve final : public ProfileCurve {
 public:
  ScaledCurve(std::shared_ptr<const ProfileCurve> base, double k) : base_(std::move(base)), k_(k) {}
  CurvePoint point(double u) const override {
    CurvePoint p = base_->point(u);
    return {k_ * p.r, k_ * p.z, k_ * p.dr, k_ * p.dz, k_ * p.ddr, k_ * p.ddz};
  }
  std::optional<CurveJet> jet(double u) const override {
    auto j = base_->jet(u);
    if (!j) return std::nullopt;
    return CurveJet{j->r * Jet(k_), j->z * Jet(k_)};
  }

 private:
  std::shared_ptr<const ProfileCurve> base_;
  double k_;
};

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(std::span<const double> r,
                                                                          std::span<const double> z,
                                                                          Topology topology) {
  const std::size_t n = r.size();
  const std::size_t segs = topology == Topology::Torus ? n : n - 1;
  struct Box {
    double r0, r1, z0, z1;
  };
  std::vector<Box> boxes(segs);
  for (std::size_t s = 0; s < segs; ++s) {
    const std::size_t t = (s + 1) % n;
    boxes[s] = {std::min(r[s], r[t]), std::max(r[s], r[t]), std::min(z[s], z[t]), std::max(z[s], z[t])};
  }
  for (std::size_t p = 0; p < segs; ++p) {
    for (std::size_t q = p + 2; q < segs; ++q) {
      if (topology == Topology::Torus && p == 0 && q == segs - 1) continue;
      const Box& a = boxes[p];
      const Box& b = boxes[q];
      if (a.r1 < b.r0 || b.r1 < a.r0 || a.z1 < b.z0 || b.z1 < a.z0) continue;
      const std::size_t p1 = (p + 1) % n;
      const std::size_t q1 = (q + 1) % n;
      if (segments_intersect(r[p], z[p], r[p1], z[p1], r[q], z[q], r[q1], z[q1])) return std::make_pair(p, q);
    }
  }
  return std::nullopt;
}

GeneratingProfile GeneratingProfile::from_samples(int n, Topology topology, std::vector<double> u,
                                                  std::vector<double> r, std::vector<double> z,
                                                  std::optional<double> period, bool check_embedded,
                                                  int stencil_order) {
  GeneratingProfile p;
  p.n_ = n;
  p.topology_ = topology;
  p.source_ = DerivativeSource::FiniteDifference;
  p.stencil_order_ = stencil_order;
  p.u_ = std::move(u);
  p.r_ = std::move(r);
  p.z_ = std::move(z);
  if (p.u_.size() != p.r_.size() || p.u_.size() != p.z_.size())
    throw GeometryError("profile sample arrays have different lengths");
  if (topology == Topology::Torus) {
    if (!period) throw GeometryError("torus profile requires a period");
    p.period_ = *period;
  }
  if (p.u_.size() < 5) throw GeometryError("profile needs at least 5 samples");
  for (std::size_t i = 1; i < p.u_.size(); ++i)
    if (!(p.u_[i] > p.u_[i - 1])) throw GeometryError("degenerate stencil: u samples must be strictly increasing");
  if (topology == Topology::Torus && !(p.period_ > p.u_.back() - p.u_.front()))
    throw GeometryError("torus period must exceed the sampled u range");
  p.stencils_ = std::make_shared<const std::vector<Stencil>>(build_stencils(p.u_, topology, p.period_, stencil_order));
  p.compute_fd_points();
  p.validate(check_embedded);
  return p;
}

GeneratingProfile GeneratingProfile::from_curve(int n, Topology topology, std::shared_ptr<const ProfileCurve> curve,
                                                std::vector<double> u, std::optional<double> period,
                                                bool check_embedded) {
  GeneratingProfile p;
  p.n_ = n;
  p.topology_ = topology;
  p.source_ = DerivativeSource::Analytic;
  p.curve_ = std::move(curve);
  p.u_ = std::move(u);
  if (topology == Topology::Torus) {
    if (!period) throw GeometryError("torus profile requires a period");
    p.period_ = *period;
  }
  if (p.u_.size() < 5) throw GeometryError("profile needs at least 5 samples");
  for (std::size_t i = 1; i < p.u_.size(); ++i)
    if (!(p.u_[i] > p.u_[i - 1])) throw GeometryError("degenerate stencil: u samples must be strictly increasing");
  if (topology == Topology::Torus && !(p.period_ > p.u_.back() - p.u_.front()))
    throw GeometryError("torus period must exceed the sampled u range");
  p.points_.resize(p.u_.size());
  p.r_.resize(p.u_.size());
  p.z_.resize(p.u_.size());
  for (std::size_t i = 0; i < p.u_.size(); ++i) {
    p.points_[i] = p.curve_->point(p.u_[i]);
    p.r_[i] = p.points_[i].r;
    p.z_[i] = p.points_[i].z;
  }
  if (topology == Topology::Sphere) {
    // Poles sit exactly on the axis.
    for (std::size_t i : {std::size_t{0}, p.u_.size() - 1}) {
      p.r_[i] = 0.0;
      p.points_[i].r = 0.0;
      p.points_[i].dz = 0.0;
      p.points_[i].ddr = 0.0;
    }
  }
  p.stencils_ = std::make_shared<const std::vector<Stencil>>(build_stencils(p.u_, topology, p.period_));
  p.detect_uniform();
  p.validate(check_embedded);
  return p;
}

void GeneratingProfile::compute_fd_points() {
  const std::size_t n = u_.size();
  std::vector<double> dr(n), ddr(n), dz(n), ddz(n);
  apply_stencils(*stencils_, r_, -1.0, dr, ddr);
  apply_stencils(*stencils_, z_, 1.0, dz, ddz);
  points_.resize(n);
  for (std::size_t i = 0; i < n; ++i) points_[i] = {r_[i], z_[i], dr[i], dz[i], ddr[i], ddz[i]};
  if (topology_ == Topology::Sphere) {
    for (std::size_t i : {std::size_t{0}, n - 1}) {
      points_[i].dz = 0.0;
      points_[i].ddr = 0.0;
    }
  }
  detect_uniform();
}

void GeneratingProfile::detect_uniform() {
  const std::size_t n = u_.size();
  const double du = (u_.back() - u_.front()) / static_cast<double>(n - 1);
  uniform_ = true;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(u_[i] - u_[i - 1] - du) > 1e-12 * std::max(1.0, std::abs(du))) uniform_ = false;
  if (topology_ == Topology::Torus && std::abs(period_ - du * static_cast<double>(n)) > 1e-12 * period_)
    uniform_ = false;
}

void GeneratingProfile::validate(bool check_embedded) const {
  if (n_ < 2) throw GeometryError("hypersurface dimension must be at least 2");
  const std::size_t n = u_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(r_[i]) || !std::isfinite(z_[i])) throw GeometryError("non-finite profile sample");
    if (is_pole(i)) {
      if (r_[i] != 0.0) throw GeometryError("sphere profile must meet the axis at both endpoints");
    } else if (!(r_[i] > 0.0)) {
      throw GeometryError("profile touches the axis at a non-pole sample " + std::to_string(i));
    }
    if (!(points_[i].speed() > 0.0)) throw GeometryError("profile is not immersed at sample " + std::to_string(i));
  }
  if (check_embedded) {
    if (auto hit = find_self_intersection(r_, z_, topology_))
      throw GeometryError("profile is not embedded: segments " + std::to_string(hit->first) + " and " +
                          std::to_string(hit->second) + " intersect");
  }
}

GeneratingProfile GeneratingProfile::with_positions(std::vector<double> r, std::vector<double> z) const {
  if (r.size() != u_.size() || z.size() != u_.size()) throw GeometryError("position arrays do not match the grid");
  GeneratingProfile p;
  p.n_ = n_;
  p.topology_ = topology_;
  p.source_ = DerivativeSource::FiniteDifference;
  p.period_ = period_;
  p.stencil_order_ = stencil_order_;
  p.u_ = u_;
  p.r_ = std::move(r);
  p.z_ = std::move(z);
  p.stencils_ = stencils_;
  p.compute_fd_points();
  p.validate(false);
  return p;
}

GeneratingProfile GeneratingProfile::as_finite_difference() const {
  if (source_ == DerivativeSource::FiniteDifference) return *this;
  return with_positions(r_, z_);
}

GeneratingProfile GeneratingProfile::as_finite_difference(int stencil_order) const {
  if (stencil_order == stencil_order_) return as_finite_difference();
  GeneratingProfile p = *this;
  p.stencil_order_ = stencil_order;
  p.stencils_ = std::make_shared<const std::vector<Stencil>>(build_stencils(u_, topology_, period_, stencil_order));
  return p.with_positions(r_, z_);
}

double GeneratingProfile::min_spacing() const {
  const std::size_t n = u_.size();
  double m = std::numeric_limits<double>::infinity();
  const std::size_t segs = topology_ == Topology::Torus ? n : n - 1;
  for (std::size_t i = 0; i < segs; ++i) {
    const std::size_t j = (i + 1) % n;
    m = std::min(m, std::hypot(r_[j] - r_[i], z_[j] - z_[i]));
  }
  return m;
}

CurvePoint evaluate_profile(const GeneratingProfile& profile, std::size_t i) {
  if (i >= profile.size()) throw std::out_of_range("evaluate_profile: sample index out of range");
  return profile.point(i);
}

GeneratingProfile dilate(const GeneratingProfile& profile, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("dilate: factor must be positive");
  std::optional<double> period;
  if (profile.topology() == Topology::Torus) period = profile.period();
  std::vector<double> u(profile.u().begin(), profile.u().end());
  if (profile.source() == DerivativeSource::Analytic) {
    return GeneratingProfile::from_curve(profile.dim(), profile.topology(),
                                         std::make_shared<ScaledCurve>(profile.shared_curve(), k), std::move(u),
                                         period, false);
  }
  std::vector<double> r(profile.r().begin(), profile.r().end());
  std::vector<double> z(profile.z().begin(), profile.z().end());
  for (auto& v : r) v *= k;
  for (auto& v : z) v *= k;
  return GeneratingProfile::from_samples(profile.dim(), profile.topology(), std::move(u), std::move(r), std::move(z),
                                         period, false, profile.stencil_order());
}

}  // namespace curvflow

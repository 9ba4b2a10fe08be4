#include "pspectra/moebius.hpp"

namespace pspectra {

MoebiusMap::MoebiusMap(Padic a_, Padic b_, Padic c_, Padic d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  if (det().is_zero()) throw params_error("degenerate Moebius map");
}

MoebiusMap MoebiusMap::identity(ParamsPtr P) {
  Padic one = Padic::from_long(P, 1);
  Padic z = Padic::zero(P);
  return MoebiusMap(one, z, z, one);
}

MoebiusMap MoebiusMap::from_fixed_points(const ProjPoint& za, const ProjPoint& zr,
                                         const Padic& t) {
  ParamsPtr P = t.params();
  Padic one = Padic::from_long(P, 1);
  Padic z0 = Padic::zero(P);
  if (za.inf && zr.inf) throw params_error("fixed points must be distinct");
  if (za.inf) {
    // attracting infinity: z -> z/t + zr(t-1)/t, i.e. [[1, zr(t-1)], [0, t]]
    return MoebiusMap(one, zr.z * (t - one), z0, t);
  }
  if (zr.inf) {
    // repelling infinity: z -> t z + za(1-t)
    return MoebiusMap(t, za.z * (one - t), z0, one);
  }
  // [[za - t zr, za zr (t-1)], [1-t, t za - zr]]
  return MoebiusMap(za.z - t * zr.z, za.z * zr.z * (t - one), one - t, t * za.z - zr.z);
}

MoebiusMap MoebiusMap::compose(const MoebiusMap& o) const {
  return MoebiusMap(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d);
}

MoebiusMap MoebiusMap::inverse() const { return MoebiusMap(d, -b, -c, a); }

ProjPoint MoebiusMap::apply(const ProjPoint& p) const {
  if (p.inf) {
    if (c.is_zero()) return ProjPoint::infinity();
    return ProjPoint::of(a / c);
  }
  Padic num = a * p.z + b;
  Padic den = c * p.z + d;
  if (den.is_zero()) {
    if (num.is_zero()) throw precision_error("Moebius map indeterminate at working precision");
    return ProjPoint::infinity();
  }
  return ProjPoint::of(num / den);
}

Padic MoebiusMap::derivative_at(const ProjPoint& fixed) const {
  if (fixed.inf) {
    if (!c.is_zero()) throw params_error("infinity is not a fixed point");
    return d / a;
  }
  Padic den = c * fixed.z + d;
  return det() / (den * den);
}

std::string MoebiusMap::to_string() const {
  return "[[" + a.to_string(4) + ", " + b.to_string(4) + "], [" + c.to_string(4) + ", " +
         d.to_string(4) + "]]";
}

FixedPointResult moebius_fixed_points(const MoebiusMap& m) {
  FixedPointResult R;
  ParamsPtr P = m.a.params() ? m.a.params() : m.d.params();
  if (m.c.is_zero()) {
    Padic da = m.d - m.a;
    if (da.is_zero()) {
      // translation (or identity): single fixed point at infinity
      R.kind = FixedPointResult::Kind::Parabolic;
      R.z1 = ProjPoint::infinity();
      return R;
    }
    R.kind = FixedPointResult::Kind::TwoPoints;
    R.z1 = ProjPoint::of(m.b / da);
    R.z2 = ProjPoint::infinity();
    return R;
  }
  // z^2 + B z + C = 0 with B = (d-a)/c, C = -b/c
  Padic B = (m.d - m.a) / m.c;
  Padic C = -(m.b / m.c);
  Padic disc = B * B - Padic::from_long(P, 4) * C;
  if (disc.is_zero()) {
    R.kind = FixedPointResult::Kind::Parabolic;
    Padic two = Padic::from_long(P, 2);
    R.z1 = ProjPoint::of(-(B / two));
    return R;
  }
  auto r = padic_sqrt(disc);
  if (!r) {
    R.kind = FixedPointResult::Kind::NoRoot;
    return R;
  }
  Padic two = Padic::from_long(P, 2);
  Padic za = (-B + *r) / two;
  Padic zb = (-B - *r) / two;
  if (Padic::compare_canonical(zb, za) < 0) std::swap(za, zb);
  R.kind = FixedPointResult::Kind::TwoPoints;
  R.z1 = ProjPoint::of(za);
  R.z2 = ProjPoint::of(zb);
  return R;
}

MultiplierResult moebius_multiplier(const MoebiusMap& m) {
  MultiplierResult R;
  ParamsPtr P = m.a.params() ? m.a.params() : m.d.params();
  Padic tr = m.a + m.d;
  Padic det = m.det();
  // eigenvalues: roots of x^2 - tr x + det
  if (tr.is_zero()) {
    // x^2 = -det: eigenvalue ratio is -1, |ratio| = 1
    return R;
  }
  Padic disc = tr * tr - Padic::from_long(P, 4) * det;
  if (disc.is_zero()) return R;  // parabolic
  auto r = padic_sqrt(disc);
  if (!r) return R;  // conjugate eigenvalues, equal absolute value
  Padic two = Padic::from_long(P, 2);
  Padic l1 = (tr + *r) / two;
  Padic l2 = (tr - *r) / two;
  if (l1.is_zero() || l2.is_zero()) throw params_error("degenerate eigenvalues");
  if (l2.abs() < l1.abs()) std::swap(l1, l2);  // l1 the smaller
  if (l1.abs() == l2.abs()) return R;
  R.kind = MultiplierResult::Kind::Hyperbolic;
  R.t = l1 / l2;
  return R;
}

}  // namespace pspectra

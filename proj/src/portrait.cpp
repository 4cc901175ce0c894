#include "arbor/portrait.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace arbor {

LevelForms precritical_form(const RationalMap& f, std::size_t N) {
  const NumberField& K = f.field();
  CriticalData cd = critical_data(f);
  auto U = form::first_hit_levels(K, f.num, f.den, cd.support, std::max<std::size_t>(N, 1));
  // Nothing new at level 1 means the critical set is totally invariant.
  if (U[1].degree == 0)
    throw PreconditionError("powering map: backward critical orbit has fewer than 3 points");
  U.resize(N + 1);
  KForm C{KPoly{K.one()}, 0};
  for (const auto& u : U) C = form::mul(K, C, u);
  return LevelForms{N, std::move(U), normalized(K, std::move(C))};
}

std::vector<Form<ResidueField>> residual_levels(const ReducedMap& f, std::size_t N) {
  const ResidueField& R = f.field;
  Form<ResidueField> J = form::jacobian(R, f.num, f.den);
  if (J.is_zero()) throw PreconditionError("reduced critical form vanishes");
  return form::first_hit_levels(R, f.num, f.den, form::squarefree_part(R, J), N);
}

std::string point_name(const ResidueField& R, const ClosedPoint& c) {
  if (c.infinite) return "inf";
  if (c.degree() == 1) return to_string(R, R.neg(c.minpoly[0]));
  return to_string(R, c.minpoly, 'x');
}

// ---------------------------------------------------------------------------
// Directed cycles

DirectedCycle has_directed_cycle(const ReducedMap& f) {
  auto crit = residual_critical_points(f);
  std::stable_partition(crit.begin(), crit.end(), [](const ClosedPoint& c) { return !c.infinite; });
  for (const auto& c : crit) {
    auto [F, z] = generic_point(f.field, c);
    PointMap fm = over(f, F);
    ResidualOrbit o = residual_orbit(fm, z);
    if (!o.purely_periodic()) continue;
    DirectedCycle dc{true, {}};
    for (const auto& w : o.cycle) dc.cycle.push_back(closed_point(F, w));
    return dc;
  }
  return DirectedCycle{};
}

DirectedCycle has_directed_cycle(const RationalMap& f, const PrimeSpec& P) {
  return has_directed_cycle(reduce_map(f, P));
}

// ---------------------------------------------------------------------------
// Collisions and the residual vertex set

namespace {

struct Residual {
  std::vector<PortraitVertex> vertices;  // unsorted
  CollisionVerdict collision;
};

bool repeated_root(const ResidueField& R, const Form<ResidueField>& F) {
  if (F.infinity_multiplicity() >= 2) return true;
  for (const auto& e : ff::squarefree_decomposition(R, F.coeffs))
    if (e.multiplicity > 1) return true;
  return false;
}

Residual residual_analysis(const RationalMap& f, const PrimeSpec& P, const LevelForms& lf,
                           bool exact_check) {
  const NumberField& K = f.field();
  const ResidueField& R = P.field;
  Residual out;
  std::map<std::string, std::size_t> index;  // keyed by factor text
  Form<ResidueField> prod{Poly<ResidueField>{R.one()}, 0};
  std::optional<std::size_t> first;
  auto add = [&](const ClosedPoint& c, std::size_t level, int mult) {
    const std::string key = to_string(R, c);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, out.vertices.size());
      out.vertices.push_back(PortraitVertex{c, level, mult, point_name(R, c)});
    } else {
      out.vertices[it->second].multiplicity += mult;
    }
  };
  for (std::size_t k = 0; k < lf.levels.size(); ++k) {
    const KForm& U = lf.levels[k];
    if (U.degree == 0) continue;
    Form<ResidueField> Ur = reduce_forms(K, P, {&U})[0];
    if (Ur.infinity_multiplicity() > 0)
      add(ClosedPoint{true, {}}, k, static_cast<int>(Ur.infinity_multiplicity()));
    for (auto& e : ff::factor(R, Ur.coeffs)) add(ClosedPoint{false, e.factor}, k, e.multiplicity);
    prod = form::mul(R, prod, Ur);
    if (!first && repeated_root(R, prod)) first = k;
  }
  CollisionVerdict& cv = out.collision;
  cv.collision = first.has_value();
  cv.depth = first.value_or(lf.depth);
  if (first) {
    // Witness: the smallest point already repeated at the first collision level.
    Form<ResidueField> upto{Poly<ResidueField>{R.one()}, 0};
    for (std::size_t k = 0; k <= *first; ++k)
      if (lf.levels[k].degree > 0) upto = form::mul(R, upto, reduce_forms(K, P, {&lf.levels[k]})[0]);
    std::vector<std::pair<ClosedPoint, int>> reps;
    if (upto.infinity_multiplicity() >= 2)
      reps.push_back({ClosedPoint{true, {}}, static_cast<int>(upto.infinity_multiplicity())});
    for (auto& e : ff::factor(R, upto.coeffs))
      if (e.multiplicity > 1) reps.push_back({ClosedPoint{false, e.factor}, e.multiplicity});
    cv.witness = reps.front().first;
    cv.multiplicity = reps.front().second;
  }
  const KForm& C = lf.cumulative;
  if (exact_check && C.degree >= 2 && C.degree <= kExactDiscMaxDegree) {
    NFElem d = form::discriminant(K, C);
    if (d.is_zero()) throw std::logic_error("cumulative pre-critical form is not squarefree");
    long minv = 0;
    reduce_forms(K, P, {&C}, &minv);
    ExtRational v = valuation(K, P, d);
    const bool hit = v.value() - Rational(static_cast<long>(2 * C.degree - 2) * minv) > 0;
    cv.by_discriminant = hit;
    // The full-depth discriminant sees every collision up to depth N.
    if (hit != cv.collision)
      throw std::logic_error("collision detectors disagree at " + P.label());
  }
  return out;
}

}  // namespace

CollisionVerdict has_collision(const RationalMap& f, const PrimeSpec& P, std::size_t N,
                               bool exact_check) {
  reduce_map(f, P);  // good reduction precondition
  return residual_analysis(f, P, precritical_form(f, N), exact_check).collision;
}

CollisionVerdict collision_from_levels(const RationalMap& f, const PrimeSpec& P,
                                       const LevelForms& lf, bool exact_check) {
  return residual_analysis(f, P, lf, exact_check).collision;
}

PortraitRec portrait(const RationalMap& f, const PrimeSpec& P, const PortraitOptions& opt) {
  return portrait(f, P, precritical_form(f, opt.depth), opt.exact_check);
}

PortraitRec portrait(const RationalMap& f, const PrimeSpec& P, const LevelForms& lf,
                     bool exact_check) {
  ReducedMap r = reduce_map(f, P);
  HeightData hd = height_and_untwist(r);
  if (hd.height > 0)
    throw PreconditionError("positive height at " + P.label() + ": wild regime, no portrait");
  Residual res = residual_analysis(f, P, lf, exact_check);
  auto& V = res.vertices;
  std::sort(V.begin(), V.end(), [](const PortraitVertex& a, const PortraitVertex& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.name < b.name;
  });
  PortraitRec rec{P, lf.depth, hd.height, regime(r), {}, {}, {}, res.collision,
                  lf.cumulative.degree};
  std::map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < V.size(); ++i) where[to_string(P.field, V[i].point)] = i;
  for (std::size_t i = 0; i < V.size(); ++i) {
    auto [F, z] = generic_point(P.field, V[i].point);
    ClosedPoint img = closed_point(F, over(r, F).apply(z));
    auto it = where.find(to_string(P.field, img));
    if (it != where.end()) rec.edges.push_back({i, it->second});
  }
  rec.vertices = std::move(V);
  rec.directed = has_directed_cycle(r);
  return rec;
}

// ---------------------------------------------------------------------------
// Verdicts

GcrVerdict good_critical_reduction(const RationalMap& f, const PrimeSpec& P, std::size_t N) {
  ReducedMap r = reduce_map(f, P);
  GcrVerdict v;
  v.depth = N;
  v.directed = has_directed_cycle(r);
  v.collision = residual_analysis(f, P, precritical_form(f, N), true).collision;
  v.bad = v.directed.found || v.collision.collision;
  return v;
}

namespace {

std::string cycle_text(const ResidueField& R, const std::vector<ClosedPoint>& c) {
  std::string s;
  for (const auto& p : c) s += point_name(R, p) + " -> ";
  return s + point_name(R, c.front());
}

}  // namespace

std::string to_string(const GcrVerdict& v) {
  if (!v.bad) return "GOOD_UP_TO(" + std::to_string(v.depth) + ")";
  std::string s = "BAD(";
  if (v.directed.found) s += "directed cycle";
  if (v.directed.found && v.collision.collision) s += "; ";
  if (v.collision.collision) s += "collision at depth " + std::to_string(v.collision.depth);
  return s + ")";
}

std::string export_dot(const PortraitRec& rec) {
  const ResidueField& R = rec.prime.field;
  std::ostringstream o;
  o << "digraph portrait {\n";
  o << "  label=\"" << rec.prime.label() << " depth " << rec.depth << "\";\n";
  o << "  node [shape=circle];\n";
  for (const auto& v : rec.vertices)
    o << "  \"" << v.name << "\" [label=\"" << v.name << "\\nL" << v.level << "\"];\n";
  for (auto [a, b] : rec.edges)
    o << "  \"" << rec.vertices[a].name << "\" -> \"" << rec.vertices[b].name << "\";\n";
  for (const auto& v : rec.vertices)
    if (v.multiplicity > 1)
      o << "  \"" << v.name << "\" -> \"" << v.name << "\" [dir=none, style=dashed, label=\""
        << v.multiplicity << "\"];\n";
  if (rec.directed.found)
    o << "  // directed cycle: " << cycle_text(R, rec.directed.cycle) << "\n";
  o << "}\n";
  return o.str();
}

}  // namespace arbor

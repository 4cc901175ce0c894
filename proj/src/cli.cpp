#include "arbor/cli.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "json.hpp"

namespace arbor::cli {

using Json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Parsing

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path + ": " + msg, path);
}

void only_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path.empty() ? "/" : path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : keys) ok = ok || k == a;
    if (!ok) fail(path + "/" + k, "unknown key");
  }
}

Integer integer_at(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Integer(j.dump());
  if (j.is_string()) {
    try {
      Rational q = parse_rational(j.get<std::string>());
      if (q.get_den() == 1) return q.get_num();
    } catch (const ParseError&) {
    }
  }
  fail(path, "expected an integer");
}

std::uint64_t count_at(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

Rational rational_at(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected fraction text such as \"-3/4\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

ElemLiteral elem_at(const Json& j, const std::string& path) {
  if (j.is_string()) return {rational_at(j, path)};
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of fraction text");
  ElemLiteral out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_at(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<ElemLiteral> coeffs_at(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of coefficients");
  std::vector<ElemLiteral> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(elem_at(j[i], path + "/" + std::to_string(i)));
  return out;
}

Json elem_json(const ElemLiteral& c) {
  Json a = Json::array();
  for (const auto& q : c) a.push_back(to_string(q));
  return a;
}

Json elem_json(const NFElem& a) {
  Json out = Json::array();
  for (const auto& q : a.coords()) out.push_back(to_string(q));
  return out;
}

Json coeffs_json(const std::vector<ElemLiteral>& c) {
  Json a = Json::array();
  for (const auto& e : c) a.push_back(elem_json(e));
  return a;
}

Json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

}  // namespace

ProblemConfig parse_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), "");
  }
  only_keys(j, "", {"field", "map", "options"});
  ProblemConfig c;
  if (!j.contains("field")) fail("/field", "missing");
  if (!j.contains("map")) fail("/map", "missing");
  const Json& fj = j["field"];
  only_keys(fj, "/field", {"min_poly"});
  if (!fj.contains("min_poly") || !fj["min_poly"].is_array() || fj["min_poly"].size() < 2)
    fail("/field/min_poly", "expected an array of at least two integers");
  for (std::size_t i = 0; i < fj["min_poly"].size(); ++i)
    c.min_poly.push_back(integer_at(fj["min_poly"][i], "/field/min_poly/" + std::to_string(i)));
  if (c.min_poly.back() != 1) fail("/field/min_poly", "minimal polynomial must be monic");

  const Json& mj = j["map"];
  only_keys(mj, "/map", {"num", "den"});
  if (!mj.contains("num")) fail("/map/num", "missing");
  c.num = coeffs_at(mj["num"], "/map/num");
  if (mj.contains("den")) c.den = coeffs_at(mj["den"], "/map/den");
  if (c.den && c.den->size() != c.num.size())
    fail("/map", "num/den degree mismatch (" + std::to_string(c.num.size() - 1) + " vs " +
                     std::to_string(c.den->size() - 1) + ")");

  if (j.contains("options")) {
    const Json& oj = j["options"];
    only_keys(oj, "/options",
              {"depth", "policy", "primes", "p_max", "base", "critical_point", "threads"});
    Options& o = c.options;
    if (oj.contains("depth")) o.depth = count_at(oj["depth"], "/options/depth");
    if (oj.contains("policy")) {
      if (!oj["policy"].is_string()) fail("/options/policy", "expected a string");
      o.policy = oj["policy"].get<std::string>();
      try {
        parse_policy(*o.policy);
      } catch (const Error& e) {
        fail("/options/policy", e.what());
      }
    }
    if (oj.contains("primes")) {
      if (!oj["primes"].is_array()) fail("/options/primes", "expected an array");
      for (std::size_t i = 0; i < oj["primes"].size(); ++i) {
        const std::string at = "/options/primes/" + std::to_string(i);
        std::uint64_t p = count_at(oj["primes"][i], at);
        if (!is_probable_prime(Integer(static_cast<unsigned long>(p)))) fail(at, "not a prime");
        o.primes.push_back(p);
      }
    }
    if (oj.contains("p_max")) o.p_max = count_at(oj["p_max"], "/options/p_max");
    if (oj.contains("base")) o.base = elem_at(oj["base"], "/options/base");
    if (oj.contains("critical_point"))
      o.critical_point = elem_at(oj["critical_point"], "/options/critical_point");
    if (oj.contains("threads"))
      o.threads = static_cast<unsigned>(count_at(oj["threads"], "/options/threads"));
  }
  build(c);  // semantic validation
  return c;
}

std::string serialize(const ProblemConfig& c) {
  Json j;
  Json mp = Json::array();
  for (const auto& z : c.min_poly) mp.push_back(integer_json(z));
  j["field"]["min_poly"] = mp;
  j["map"]["num"] = coeffs_json(c.num);
  if (c.den) j["map"]["den"] = coeffs_json(*c.den);
  Json o = Json::object();
  const Options& op = c.options;
  if (op.depth) o["depth"] = *op.depth;
  if (op.policy) o["policy"] = *op.policy;
  if (!op.primes.empty()) o["primes"] = op.primes;
  if (op.p_max) o["p_max"] = *op.p_max;
  if (op.base) o["base"] = elem_json(*op.base);
  if (op.critical_point) o["critical_point"] = elem_json(*op.critical_point);
  if (op.threads) o["threads"] = *op.threads;
  if (!o.empty()) j["options"] = o;
  return j.dump(2) + "\n";
}

NFElem to_element(const NumberField& K, const ElemLiteral& c) {
  if (c.size() > K.degree())
    throw ParseError("field element has " + std::to_string(c.size()) +
                     " coordinates, field degree is " + std::to_string(K.degree()));
  std::vector<Rational> full(c);
  full.resize(K.degree(), Rational(0));
  return K.from_coords(full);
}

Problem build(const ProblemConfig& c) {
  std::shared_ptr<const NumberField> K;
  try {
    K = std::make_shared<const NumberField>(c.min_poly);
  } catch (const PreconditionError& e) {
    fail("/field/min_poly", e.what());
  }
  auto poly_of = [&](const std::vector<ElemLiteral>& v, const std::string& path) {
    KPoly p;
    for (std::size_t i = 0; i < v.size(); ++i) {
      try {
        p.push_back(to_element(*K, v[i]));
      } catch (const ParseError& e) {
        fail(path + "/" + std::to_string(i), e.what());
      }
    }
    poly::trim(*K, p);
    return p;
  };
  const std::size_t d = c.num.size() - 1;
  KPoly num = poly_of(c.num, "/map/num");
  KPoly den;
  if (c.den) {
    den = poly_of(*c.den, "/map/den");
  } else {
    den = KPoly{K->one()};
  }
  try {
    KForm A = form::make(*K, num, d), B = form::make(*K, den, d);
    return Problem{K, new_map(K, A, B)};
  } catch (const PreconditionError& e) {
    fail("/map", e.what());
  } catch (const std::invalid_argument& e) {
    fail("/map", e.what());
  }
}

NFElem parse_element(const NumberField& K, std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ParseError("empty field element", "--base");
  if (s.front() == '[' || s.front() == '"') {
    Json j;
    try {
      j = Json::parse(s);
    } catch (const Json::parse_error&) {
      throw ParseError("malformed element literal '" + std::string(text) + "'", "--base");
    }
    return to_element(K, elem_at(j, "--base"));
  }
  // Sum of terms  [q][*]t[^k]  or  q.
  NFElem acc = K.zero();
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i > 0) {
      throw ParseError("malformed element '" + std::string(text) + "'", "--base");
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    i = j;
    if (term.empty()) throw ParseError("malformed element '" + std::string(text) + "'", "--base");
    Rational coef(1);
    unsigned long k = 0;
    auto tpos = term.find('t');
    std::string q = tpos == std::string::npos ? term : term.substr(0, tpos);
    if (!q.empty() && q.back() == '*') q.pop_back();
    if (!q.empty()) coef = parse_rational(q);
    if (tpos != std::string::npos) {
      std::string rest = term.substr(tpos + 1);
      k = 1;
      if (!rest.empty()) {
        if (rest[0] != '^' || rest.size() < 2 ||
            rest.find_first_not_of("0123456789", 1) != std::string::npos)
          throw ParseError("malformed power in '" + std::string(text) + "'", "--base");
        k = std::stoul(rest.substr(1));
      }
    }
    acc = K.add(acc, K.scale(K.pow(K.theta(), k), coef * sign));
  }
  return acc;
}

std::string error_json(const std::string& kind, const std::string& message, const std::string& path) {
  Json e;
  e["kind"] = kind;
  e["message"] = message;
  if (!path.empty()) e["path"] = path;
  Json j;
  j["error"] = e;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string kpoly_text(const NumberField& K, const KPoly& p) {
  if (p.empty()) return "0";
  std::string out;
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i].is_zero()) continue;
    std::string c = K.to_string(p[i]);
    if (p[i].is_rational() && c[0] == '-') {
      out += out.empty() ? "-" : " - ";
      c.erase(0, 1);
    } else if (!out.empty()) {
      out += " + ";
    }
    if (i == 0) {
      out += c;
      continue;
    }
    if (c != "1") out += (p[i].is_rational() ? c : "(" + c + ")") + "*";
    out += i == 1 ? std::string("x") : "x^" + std::to_string(i);
  }
  return out;
}

Json ext_json(const ExtRational& v) { return to_string(v); }

template <class T>
Json opt_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json factorization_json(const IntegerFactorization& f) {
  Json a = Json::array();
  for (const auto& [q, e] : f.factors) a.push_back(Json::array({integer_json(q), e}));
  Json j;
  j["factors"] = a;
  j["cofactor"] = integer_json(f.cofactor);
  return j;
}

Json names(const ResidueField& R, const std::vector<ClosedPoint>& v) {
  Json a = Json::array();
  for (const auto& c : v) a.push_back(point_name(R, c));
  return a;
}

Json collision_json(const ResidueField& R, const CollisionVerdict& c) {
  Json j;
  j["collision"] = c.collision;
  j["depth"] = c.depth;
  j["witness"] = c.witness ? Json(point_name(R, *c.witness)) : Json(nullptr);
  j["multiplicity"] = c.multiplicity;
  j["by_discriminant"] = opt_json(c.by_discriminant);
  return j;
}

struct Ctx {
  const Problem& pb;
  const ProblemConfig& cfg;
  const Overrides& ov;
  Json params = Json::object();

  const NumberField& K() const { return *pb.K; }

  std::size_t depth(std::size_t dflt) {
    std::size_t d = ov.depth ? *ov.depth : cfg.options.depth.value_or(dflt);
    params["depth"] = d;
    return d;
  }
  NFElem base() {
    NFElem a = ov.base ? parse_element(K(), *ov.base)
                       : cfg.options.base ? to_element(K(), *cfg.options.base) : K().zero();
    params["base"] = elem_json(a);
    return a;
  }
  Policy policy() {
    std::string s = ov.policy ? *ov.policy : cfg.options.policy.value_or("nearest-cycle");
    Policy p;
    try {
      p = parse_policy(s);
    } catch (const Error& e) {
      throw ParseError(e.what(), "--policy");
    }
    params["policy"] = to_string(p);
    return p;
  }
  std::uint64_t p_max() {
    auto v = ov.p_max ? ov.p_max : cfg.options.p_max;
    if (!v) throw ParseError("no bound given (--p-max or options.p_max)", "/options/p_max");
    params["p_max"] = *v;
    return *v;
  }
  std::vector<PrimeSpec> primes() {
    std::vector<std::uint64_t> ps = ov.prime ? std::vector<std::uint64_t>{*ov.prime} : cfg.options.primes;
    if (ps.empty()) throw ParseError("no prime given (--prime or options.primes)", "/options/primes");
    for (auto p : ps)
      if (!is_probable_prime(Integer(static_cast<unsigned long>(p))))
        throw ParseError(std::to_string(p) + " is not a prime", "--prime");
    params["primes"] = ps;
    std::vector<PrimeSpec> out;
    for (auto p : ps)
      for (auto& P : primes_above(K(), p)) out.push_back(std::move(P));
    return out;
  }
};

Json cmd_pcf(Ctx& c) {
  const NumberField& K = c.K();
  PcfCheck chk = pcf_check(c.pb.f);
  Json j;
  j["pcf"] = chk.pcf;
  j["inconclusive"] = chk.inconclusive;
  j["note"] = chk.note;
  Json orbits = Json::array();
  for (const auto& o : chk.orbits) {
    Json oj;
    oj["critical_point"] = o.at_infinity ? std::string("inf") : "root of " + kpoly_text(K, o.component);
    Json pts = Json::array();
    for (const auto& z : o.points) pts.push_back(z.infinite ? std::string("inf") : kpoly_text(K, z.value));
    oj["points"] = pts;
    oj["finite"] = o.finite;
    oj["tail"] = o.tail;
    oj["period"] = o.period;
    orbits.push_back(oj);
  }
  j["orbits"] = orbits;
  if (!chk.pcf) return j;
  PcfReport rep = pcf_primes(c.pb.f, chk);
  Json delta = Json::array();
  for (const auto& e : rep.delta) {
    Json ej;
    ej["orbit"] = e.orbit;
    ej["n"] = e.n;
    ej["zero"] = e.zero;
    ej["unit"] = e.unit;
    ej["value"] = (e.zero || e.unit) ? Json(nullptr) : Json(kpoly_text(K, e.value));
    ej["norm"] = (e.zero || e.unit) ? Json(nullptr) : Json(to_string(e.norm));
    ej["factorization"] = (e.zero || e.unit) ? Json(nullptr) : factorization_json(e.factorization);
    delta.push_back(ej);
  }
  j["delta"] = delta;
  j["all_primes"] = rep.all_primes;
  j["candidate_primes"] = rep.candidate_primes;
  j["wild_primes"] = rep.wild_primes;
  j["bad_primes"] = rep.bad_primes;
  j["skipped_primes"] = rep.skipped_primes;
  j["wild_infinitely_ramified"] = rep.wild_infinitely_ramified;
  j["primes_note"] = rep.note;
  return j;
}

Json portrait_json(const PortraitRec& r) {
  const ResidueField& R = r.prime.field;
  Json j;
  j["prime"] = r.prime.label();
  j["depth"] = r.depth;
  j["height"] = r.height;
  j["regime"] = to_string(r.regime);
  Json vs = Json::array();
  for (const auto& v : r.vertices) {
    Json vj;
    vj["name"] = v.name;
    vj["level"] = v.level;
    vj["multiplicity"] = v.multiplicity;
    vs.push_back(vj);
  }
  j["vertices"] = vs;
  Json es = Json::array();
  for (auto [a, b] : r.edges) es.push_back(Json::array({r.vertices[a].name, r.vertices[b].name}));
  j["edges"] = es;
  j["directed_cycle"] = r.directed.found ? names(R, r.directed.cycle) : Json(nullptr);
  j["collision"] = collision_json(R, r.collision);
  j["cumulative_degree"] = r.cumulative_degree;
  return j;
}

Json cmd_portrait(Ctx& c, std::string& dot) {
  auto Ps = c.primes();
  LevelForms lf = precritical_form(c.pb.f, c.depth(kDefaultDepth));
  Json a = Json::array();
  for (const auto& P : Ps) {
    PortraitRec r = portrait(c.pb.f, P, lf);
    a.push_back(portrait_json(r));
    dot += export_dot(r);
  }
  Json j;
  j["portraits"] = a;
  return j;
}

Json cmd_gcr(Ctx& c) {
  auto Ps = c.primes();
  std::size_t N = c.depth(kDefaultDepth);
  Json a = Json::array();
  for (const auto& P : Ps) {
    GcrVerdict v = good_critical_reduction(c.pb.f, P, N);
    Json vj;
    vj["prime"] = P.label();
    vj["verdict"] = to_string(v);
    vj["bad"] = v.bad;
    vj["directed_cycle"] = v.directed.found ? names(P.field, v.directed.cycle) : Json(nullptr);
    vj["collision"] = collision_json(P.field, v.collision);
    a.push_back(vj);
  }
  Json j;
  j["verdicts"] = a;
  return j;
}

Json cmd_branch(Ctx& c) {
  auto Ps = c.primes();
  NFElem a0 = c.base();
  Policy pol = c.policy();
  long depth = static_cast<long>(c.depth(kDefaultDepth));
  Json a = Json::array();
  for (const auto& P : Ps) {
    BranchSimRec s = branch_valuations(c.pb.f, P, a0, depth, pol);
    Json sj;
    sj["prime"] = P.label();
    sj["regime"] = to_string(s.regime);
    sj["precision"] = s.precision;
    sj["start_index"] = s.start_index;
    sj["cycle"] = s.cycle;
    Json steps = Json::array();
    for (const auto& st : s.steps) {
      Json tj;
      tj["level"] = st.level;
      tj["delta"] = ext_json(st.delta);
      tj["abs_val"] = st.abs_val ? Json(to_string(*st.abs_val)) : Json(nullptr);
      tj["certificate"] = integer_json(st.certificate);
      steps.push_back(tj);
    }
    sj["steps"] = steps;
    if (pol == Policy::ALL) {
      Json lv = Json::array();
      for (const auto& l : s.levels) {
        Json lj;
        lj["level"] = l.level;
        Json on = Json::array();
        for (const auto& v : l.on_disk) on.push_back(ext_json(v));
        lj["on_disk"] = on;
        lj["off_disk"] = integer_json(l.off_disk);
        lv.push_back(lj);
      }
      sj["levels"] = lv;
    }
    const GrowthLaw& g = s.growth;
    Json gj;
    gj["period"] = g.period;
    gj["e_B"] = g.e_B;
    gj["onset"] = opt_json(g.onset);
    gj["delta_onset"] = g.delta_onset ? ext_json(*g.delta_onset) : Json(nullptr);
    gj["first_ramified"] = opt_json(g.first_ramified);
    gj["asserted"] = g.asserted;
    sj["growth"] = gj;
    a.push_back(sj);
  }
  Json j;
  j["branches"] = a;
  return j;
}

Json cmd_scan(Ctx& c) {
  NFElem a0 = c.base();
  std::uint64_t pm = c.p_max();
  std::size_t depth = c.depth(kScanDepth);
  ScanReport rep = scan(c.pb.f, a0, pm, depth, c.cfg.options.threads.value_or(0));
  Json rows = Json::array();
  for (const auto& row : rep.rows) {
    Json rj;
    rj["p"] = row.p;
    if (row.skipped) {
      rj["skipped"] = row.skip_reason;
      rows.push_back(rj);
      continue;
    }
    Json ps = Json::array();
    for (const auto& pr : row.primes) {
      const ResidueField& R = pr.prime.field;
      Json pj;
      pj["prime"] = pr.prime.label();
      pj["good"] = pr.good;
      pj["verdict"] = to_string(pr.verdict.verdict);
      if (pr.good) {
        pj["height"] = pr.height;
        pj["regime"] = to_string(pr.regime);
        pj["directed"] = opt_json(pr.directed);
        pj["directed_cycle"] = pr.directed_cycle;
        pj["collision_depth"] = opt_json(pr.collision_depth);
      }
      if (pr.verdict.critical) {
        pj["witness"] = point_name(R, *pr.verdict.critical);
        pj["witness_cycle"] = names(R, pr.verdict.cycle);
      }
      if (pr.wild_infinitely_ramified) pj["wild_infinitely_ramified"] = true;
      ps.push_back(pj);
    }
    rj["primes"] = ps;
    rows.push_back(rj);
  }
  Json j;
  j["rows"] = rows;
  j["inf_ramified"] = rep.inf_ramified;
  return j;
}

Json cmd_height(Ctx& c) {
  auto Ps = c.primes();
  Json a = Json::array();
  for (const auto& P : Ps) {
    Json hj;
    hj["prime"] = P.label();
    hj["good"] = good_reduction(c.pb.f, P);
    if (hj["good"]) {
      ReducedMap r = reduce_map(c.pb.f, P);
      HeightData hd = height_and_untwist(r);
      hj["height"] = hd.height;
      hj["regime"] = to_string(regime(r));
      hj["untwisted_num"] = to_string(P.field, hd.Q.num.coeffs);
      hj["untwisted_den"] = to_string(P.field, hd.Q.den.coeffs);
      hj["untwisted_degree"] = hd.Q.degree;
    }
    a.push_back(hj);
  }
  Json j;
  j["heights"] = a;
  return j;
}

Json cmd_newton(Ctx& c) {
  auto Ps = c.primes();
  NFElem a0 = c.base();
  const NumberField& K = c.K();
  const RationalMap& f = c.pb.f;
  KPoly fiber = poly::sub(K, f.num.coeffs, poly::scale(K, f.den.coeffs, a0));
  Json a = Json::array();
  for (const auto& P : Ps) {
    std::vector<ExtRational> vals;
    for (const auto& x : fiber) vals.push_back(valuation(K, P, x));
    NewtonPolygon np = newton_polygon(vals);
    Json nj;
    nj["prime"] = P.label();
    Json vj = Json::array();
    for (const auto& v : vals) vj.push_back(ext_json(v));
    nj["valuations"] = vj;
    Json sj = Json::array();
    for (const auto& s : np.segments) {
      Json e;
      e["slope"] = to_string(s.slope);
      e["length"] = s.length;
      sj.push_back(e);
    }
    nj["segments"] = sj;
    Json rv = Json::array();
    for (const auto& v : np.root_valuations()) rv.push_back(to_string(v));
    nj["root_valuations"] = rv;
    nj["zero_roots"] = np.zero_roots;
    a.push_back(nj);
  }
  Json j;
  j["polynomial"] = kpoly_text(K, fiber);
  j["polygons"] = a;
  return j;
}

Json cmd_sparseness(Ctx& c) {
  const NumberField& K = c.K();
  if (!c.cfg.options.critical_point)
    throw ParseError("sparseness needs options.critical_point", "/options/critical_point");
  NFElem cp = to_element(K, *c.cfg.options.critical_point);
  c.params["critical_point"] = elem_json(cp);
  NFElem a0 = c.base();
  std::uint64_t pm = c.p_max();
  std::size_t depth = c.depth(kDefaultDepth);
  Json hits = Json::array();
  for (const auto& h : sparseness_scan(c.pb.f, cp, a0, pm, depth)) {
    Json hj;
    hj["p"] = h.p;
    hj["n"] = h.n;
    hj["m"] = h.m;
    hits.push_back(hj);
  }
  Json j;
  j["hits"] = hits;
  return j;
}

}  // namespace

RunResult run(const std::string& command, const ProblemConfig& config, const Overrides& o) {
  Problem pb = build(config);
  Ctx c{pb, config, o};
  RunResult rr;
  Json result;
  if (command == "pcf") result = cmd_pcf(c);
  else if (command == "portrait") result = cmd_portrait(c, rr.dot);
  else if (command == "gcr") result = cmd_gcr(c);
  else if (command == "branch") result = cmd_branch(c);
  else if (command == "scan") result = cmd_scan(c);
  else if (command == "height") result = cmd_height(c);
  else if (command == "newton") result = cmd_newton(c);
  else if (command == "sparseness") result = cmd_sparseness(c);
  else throw ParseError("unknown command '" + command + "'", "");
  Json doc;
  doc["tool"] = "arbor";
  doc["version"] = kToolVersion;
  doc["command"] = command;
  doc["input"] = Json::parse(serialize(config));
  doc["parameters"] = c.params;
  doc["result"] = result;
  rr.json = doc.dump(2) + "\n";
  return rr;
}

}  // namespace arbor::cli

#pragma once

// Branch-level ramification: periodic points lifted into W_B, valuation
// simulation along backward branches by Newton polygons, a brute-force
// oracle over the iterates, PCF orbits and prime enumeration, and scans.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arbor/newton.hpp"
#include "arbor/portrait.hpp"

namespace arbor {

enum class Policy { NEAREST, FARTHEST, ALL };
Policy parse_policy(const std::string& s);  // "nearest-cycle"/"nearest", "farthest", "all"
const char* to_string(Policy p);

/// A point of P^1 over W_B in a chart: (coord : 1), or (1 : coord) when the
/// residue is ∞.
struct LocalPoint {
  bool inverted = false;
  LocalRing::Elem coord;
};

struct LiftedCycle {
  LocalRing W;  // W_B, extended by the cycle's residue field when needed
  std::vector<GeoPoint> residues;  // in W.point_field()
  std::vector<LocalPoint> points;  // f(points[i]) = points[i+1 mod m] to precision B
  std::vector<long> local_degrees;
};

/// Hensel/Newton lift of the residual cycle through `start`. Requires good
/// reduction, height 0, a purely periodic start, and multiplier of f~^m not 1.
LiftedCycle lift_periodic_point(const RationalMap& f, const PrimeSpec& P, const ClosedPoint& start,
                                long precision = kInitialPrecision);

/// Root valuations of S(y) - w where v(w) = delta and S has coefficient
/// valuations `vals` (index 0 ignored, vals[e] = 0). Points at or above delta
/// are irrelevant. Returns e valuations, descending.
std::vector<ExtRational> step_root_valuations(const std::vector<ExtRational>& vals,
                                              const ExtRational& delta);

struct BranchStep {
  long level = 0;
  ExtRational delta;                   // v(α_n - c_n)
  std::optional<Rational> abs_val;     // v(α_n) when determined
  Integer certificate = 1;             // denominator of delta
};

struct LevelMultiset {
  long level = 0;
  std::vector<ExtRational> on_disk;  // descending
  Integer off_disk = 0;
};

struct GrowthLaw {
  long period = 0;
  long e_B = 1;
  std::optional<long> onset;
  std::optional<ExtRational> delta_onset;
  std::optional<long> first_ramified;
  bool asserted = false;  // only under TAME
};

struct BranchSimRec {
  PrimeSpec prime;
  NFElem alpha0;
  Policy policy = Policy::NEAREST;
  long depth = 0;
  Regime regime = Regime::TAME;
  long precision = 0;
  long start_index = 0;  // position of α~0 on the cycle
  std::vector<std::string> cycle;  // residual cycle, forward from α~0
  std::vector<BranchStep> steps;   // the selected path (nearest path under ALL)
  std::vector<LevelMultiset> levels;  // only under ALL
  GrowthLaw growth;
};

BranchSimRec branch_valuations(const RationalMap& f, const PrimeSpec& P, const NFElem& alpha0,
                               long depth, Policy policy = Policy::NEAREST);

/// (m, e, onset, ...) from a delta sequence: the least n0 such that
/// delta_{n+m} = delta_n / e for every simulated n >= n0.
GrowthLaw growth_law(const std::vector<ExtRational>& deltas, long m, long e);

/// Root valuation multiset of f^n(shift + x) - α0 (numerator), all d^n
/// roots: `values` descending (+∞ for exact roots), `at_infinity` counts
/// roots lost to a degree drop.
struct ValuationMultiset {
  std::vector<ExtRational> values;
  long at_infinity = 0;
  long precision = 0;
  /// Positive valuations (descending) and the count of the rest.
  std::vector<ExtRational> positive() const;
  Integer off_disk() const;
};

inline constexpr long kOracleDegreeCap = 4096;

ValuationMultiset iterate_valuation_oracle(const RationalMap& f, const PrimeSpec& P,
                                           const NFElem& alpha0, unsigned n,
                                           const std::optional<NFElem>& shift = std::nullopt);
/// Shift given as a point over W (e.g. a lifted periodic point).
ValuationMultiset iterate_valuation_oracle(const RationalMap& f, const PrimeSpec& P,
                                           const NFElem& alpha0, unsigned n, const LocalRing& W,
                                           const LocalPoint& shift);

/// Every certificate divides (d!)^{2d-2}. Throws PreconditionError unless TAME
/// and no directed cycle at P.
bool tame_bound_check(const RationalMap& f, const PrimeSpec& P, const BranchSimRec& sim);
bool tame_bound_check(const RationalMap& f, const PrimeSpec& P,
                      const std::vector<Integer>& denominators);
Integer tame_bound(std::size_t d);

/// Valuation-driven simulation of a single series g with coefficient
/// valuations `vals` (g_e unit, e = weierstrass degree) from v(α0) = delta0.
std::vector<ExtRational> simulate_series(const std::vector<ExtRational>& vals,
                                         const ExtRational& delta0, std::size_t depth,
                                         Policy policy = Policy::NEAREST);
/// First n with vals[i] >= delta_n (e - i) / e for all 0 < i < e.
std::optional<std::size_t> polygon_onset(const std::vector<ExtRational>& vals,
                                         const std::vector<ExtRational>& deltas);

/// Ramified step from a collision: walks forward from the witness to a
/// residual critical point q, lifts it to s in K and takes α0 = f(s) + p.
struct RamifiedStep {
  NFElem shift, alpha0;
  ClosedPoint critical;
  ValuationMultiset oracle;  // n = 1, shift s
  Integer max_denominator = 1;
};
RamifiedStep collision_recipe(const RationalMap& f, const PrimeSpec& P,
                              const CollisionVerdict& collision);

/// Lift of a residue field element to K (coordinates in [0, p)).
NFElem lift_residue(const NumberField& K, const PrimeSpec& P, const ResidueField::Elem& a);

// ---------------------------------------------------------------------------
// PCF maps

/// A point of the orbit of a generic root of h: an element of K[x]/(h) or ∞.
struct OrbitValue {
  bool infinite = false;
  KPoly value;  // reduced mod h
};

struct CriticalOrbit {
  bool at_infinity = false;  // the critical point ∞
  KPoly component;           // monic squarefree factor of the critical support
  std::vector<OrbitValue> points;  // z_0 = c, z_1 = f(c), ...
  std::size_t tail = 0, period = 0;
  bool finite = false;
};

struct PcfCheck {
  bool pcf = false;
  bool inconclusive = false;
  std::string note;
  std::vector<CriticalOrbit> orbits;
};

inline constexpr std::size_t kPcfStepCap = 64;
inline constexpr std::size_t kPcfBitsCap = 20000;

PcfCheck pcf_check(const RationalMap& f, std::size_t step_cap = kPcfStepCap);

struct DeltaEntry {
  std::size_t orbit = 0, n = 0;
  bool zero = false;  // periodic critical point: qualifies at every tame prime
  bool unit = false;  // meets no prime (distance from a point to ∞ that is 0)
  KPoly value;        // c - f^n(c), or 1/y when one side is ∞
  Rational norm;      // N_{K/Q}(Res(component, value))
  IntegerFactorization factorization;
};

struct PcfReport {
  PcfCheck check;
  std::vector<DeltaEntry> delta;
  bool all_primes = false;  // some entry is zero
  std::vector<std::uint64_t> candidate_primes;  // from nonzero entries
  std::vector<std::uint64_t> wild_primes;       // p <= d
  std::vector<std::uint64_t> bad_primes;        // dividing N(Res(num, den))
  std::vector<std::uint64_t> skipped_primes;    // dividing disc(m)
  bool wild_infinitely_ramified = false;  // PCF polynomial of prime-power degree
  std::string note;
};

/// Throws PreconditionError when pcf_check does not certify PCF.
PcfReport pcf_primes(const RationalMap& f);
PcfReport pcf_primes(const RationalMap& f, PcfCheck check);

// ---------------------------------------------------------------------------
// Base points and scans

enum class Verdict { INF_RAMIFIED, NO_INF_RAMIFICATION, WILD_REGIME, BAD_REDUCTION };
const char* to_string(Verdict v);

struct BasepointVerdict {
  Verdict verdict = Verdict::NO_INF_RAMIFICATION;
  std::optional<ClosedPoint> critical;  // witness critical point
  std::vector<ClosedPoint> cycle;       // its residual cycle (contains α~0)
};

BasepointVerdict basepoint_verdict(const RationalMap& f, const NFElem& alpha0, const PrimeSpec& P);

struct PrimeRow {
  PrimeSpec prime;
  bool good = false;
  long height = 0;
  Regime regime = Regime::TAME;
  std::optional<bool> directed;
  std::optional<std::size_t> collision_depth;  // none up to the scan depth
  BasepointVerdict verdict;
  std::vector<std::string> directed_cycle;
  bool wild_infinitely_ramified = false;
};

struct ScanRow {
  std::uint64_t p = 0;
  bool skipped = false;
  std::string skip_reason;
  std::vector<PrimeRow> primes;
};

struct ScanReport {
  NFElem alpha0;
  std::uint64_t p_max = 0;
  std::size_t depth = 0;
  std::vector<ScanRow> rows;
  std::vector<std::uint64_t> inf_ramified;  // rational primes with an INF row
};

inline constexpr std::size_t kScanDepth = 3;

ScanReport scan(const RationalMap& f, const NFElem& alpha0, std::uint64_t p_max,
                std::size_t depth = kScanDepth, unsigned threads = 0);

std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

struct SparseHit {
  std::uint64_t p = 0;
  std::size_t n = 0, m = 0;  // f^n(c) - c and f^m(c) - α0
};
std::vector<SparseHit> sparseness_scan(const RationalMap& f, const NFElem& c, const NFElem& alpha0,
                                       std::uint64_t p_max, std::size_t depth);

}  // namespace arbor

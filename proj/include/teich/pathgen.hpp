#pragma once

// Deformation paths through the length-and-twist coordinates. A section maps
// target lengths for a curve system to a full marked structure that passes
// through its anchor point, holds every twist as a fixed fraction of its
// curve's length, and steers the remaining lengths so the pants stay within
// the certified defect bounds. Coordinate twists layer on top of a section,
// and the staged shrinking algorithm sweeps sections to drive a curve system
// short while every declared witness keeps certifying that the endpoints are
// far apart. Paths are emitted as fully sampled traces and re-audited from
// coordinates alone.

#include <teich/calibration.hpp>
#include <teich/json_io.hpp>
#include <teich/order.hpp>
#include <teich/projections.hpp>
#include <teich/surface.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace teich {

// ---------------------------------------------------------------------------
// Sections of the length map over a curve system.

struct SectionMap {
  enum class Profile { constant, scale, respond };

  const Surface* S = nullptr;
  FNPoint anchor;
  std::vector<int> moving;     // curve indices the section is parametrized by
  std::vector<double> theta;   // twist fraction held for every curve
  Profile profile = Profile::constant;
  int responder = -1;          // curve carrying the moving sum, respond only
  RearCuffsSection rear;       // responder profile, respond only
  double scale_ref = 0.0;      // anchor length of the single moving curve

  bool is_moving(int c) const {
    return std::find(moving.begin(), moving.end(), c) != moving.end();
  }

  // Evaluate at target lengths for the moving curves. Feeding the anchor
  // lengths returns the anchor bit for bit; any curve whose length comes out
  // unchanged keeps its anchor twist exactly.
  FNPoint at(const std::vector<double>& lam) const {
    if (lam.size() != moving.size())
      throw std::invalid_argument("section takes one length per moving curve");
    for (double l : lam)
      if (!(l > 0.0) || !std::isfinite(l))
        throw std::invalid_argument("section lengths must be positive and finite");
    FNPoint P = anchor;
    for (size_t k = 0; k < moving.size(); ++k) P.length[moving[k]] = lam[k];
    switch (profile) {
      case Profile::constant:
        break;
      case Profile::scale: {
        double r = scale_ref > 0.0 ? std::min(lam[0] / scale_ref, 1.0) : 1.0;
        for (int c = 0; c < S->num_curves; ++c)
          if (!is_moving(c)) P.length[c] = anchor.length[c] * r;
        break;
      }
      case Profile::respond: {
        CuffLengths t = rear.at(lam[0], lam[1]);
        P.length[responder] = t[0];
        break;
      }
    }
    for (int c = 0; c < S->num_curves; ++c)
      P.twist[c] = P.length[c] == anchor.length[c] ? anchor.twist[c]
                                                   : theta[c] * P.length[c];
    return P;
  }

  std::vector<double> anchor_lengths() const {
    std::vector<double> lam;
    lam.reserve(moving.size());
    for (int c : moving) lam.push_back(anchor.length[c]);
    return lam;
  }
};

// Build the section through X over the given curves. Complementary curves
// shrink homothetically with a single moving curve; when two of the three
// curves of the closed surface move, the third responds through the
// rear-cuff pants section. The pants-level preconditions are replaced here
// by the trace audit: every emitted path is re-checked observable by
// observable.
inline SectionMap build_section(const Surface& S, const FNPoint& X,
                                std::vector<int> beta) {
  S.validate(X);
  std::sort(beta.begin(), beta.end());
  beta.erase(std::unique(beta.begin(), beta.end()), beta.end());
  for (int c : beta)
    if (c < 0 || c >= S.num_curves)
      throw std::invalid_argument("section curve index out of range");
  SectionMap sec;
  sec.S = &S;
  sec.anchor = X;
  sec.moving = beta;
  sec.theta.resize(S.num_curves);
  for (int c = 0; c < S.num_curves; ++c) sec.theta[c] = X.twist[c] / X.length[c];
  int free = S.num_curves - static_cast<int>(beta.size());
  if (free == 0 || beta.empty()) {
    sec.profile = SectionMap::Profile::constant;
  } else if (beta.size() == 1) {
    sec.profile = SectionMap::Profile::scale;
    sec.scale_ref = X.length[beta[0]];
  } else if (beta.size() == 2 && S.num_curves == 3) {
    sec.profile = SectionMap::Profile::respond;
    for (int c = 0; c < S.num_curves; ++c)
      if (!sec.is_moving(c)) sec.responder = c;
    sec.rear.base = {X.length[sec.responder], X.length[beta[0]], X.length[beta[1]]};
    double tot = sec.rear.base[1] + sec.rear.base[2];
    sec.rear.floor_coef =
        tot > 0.0 ? std::min(1e-3, 0.5 * sec.rear.base[0] / tot) : 1e-3;
  } else {
    throw std::invalid_argument("no section profile for this curve system");
  }
  return sec;
}

// Coordinate twists over a section: t counts full turns around each moving
// curve, entering the twist coordinate in length units.
inline FNPoint phi(const SectionMap& sec, const std::vector<double>& t,
                   const std::vector<double>& lam) {
  if (t.size() != sec.moving.size())
    throw std::invalid_argument("twist vector takes one entry per moving curve");
  FNPoint P = sec.at(lam);
  for (size_t k = 0; k < t.size(); ++k) P.twist[sec.moving[k]] += t[k] * lam[k];
  return P;
}

// ---------------------------------------------------------------------------
// Witnesses with a given curve on their boundary, and the separation they
// certify between two marked structures.

struct PathWitness {
  int curve = -1;
  bool is_annulus = true;
  int piece = -1;
  std::string label;
};

inline PathWitness collar_witness(int curve) {
  return {curve, true, -1, "collar" + std::to_string(curve)};
}

inline PathWitness piece_witness(const Surface& S, int curve, int piece) {
  return {curve, false, piece, S.pieces[piece].label};
}

// Pieces adjacent to a curve: the ones having it on their boundary rather
// than as their core.
inline std::vector<int> adjacent_pieces(const Surface& S, int curve) {
  std::vector<int> out;
  for (size_t p = 0; p < S.pieces.size(); ++p)
    if (S.pieces[p].core != curve) out.push_back(static_cast<int>(p));
  return out;
}

struct ObstructionReport {
  int curve = 0;
  double inv_len_x = 0.0;
  double inv_len_y = 0.0;
  long long annulus_dist = 0;
  std::vector<std::pair<int, long long>> piece_dist;  // adjacent pieces only
  PathWitness best;       // witness with the largest separation; collar on ties
  long long best_dist = 0;
  double value = 0.0;     // max of the length and separation contributions
};

// Per-curve obstruction measured over the witnesses that carry the curve on
// their boundary: its collar, then the adjacent pieces in label order. This
// is the quantity the staged paths certify to stay above K.
inline ObstructionReport boundary_obstruction(const Surface& S, const FNPoint& X,
                                              const FNPoint& Y, int curve,
                                              int crossing_budget = kCrossingBudget,
                                              int slope_budget = kSlopeBudget) {
  ObstructionReport rep;
  rep.curve = curve;
  rep.inv_len_x = 1.0 / X.length[curve];
  rep.inv_len_y = 1.0 / Y.length[curve];
  rep.annulus_dist = annulus_projection(S, X, Y, curve, crossing_budget).dist();
  rep.best = collar_witness(curve);
  rep.best_dist = rep.annulus_dist;
  for (int p : adjacent_pieces(S, curve)) {
    long long d =
        piece_projection(S, X, Y, p, crossing_budget, slope_budget).dist;
    rep.piece_dist.emplace_back(p, d);
    if (d > rep.best_dist) {
      rep.best_dist = d;
      rep.best = piece_witness(S, curve, p);
    }
  }
  rep.value = std::max({rep.inv_len_x, rep.inv_len_y,
                        static_cast<double>(rep.best_dist)});
  return rep;
}

// ---------------------------------------------------------------------------
// Time order between witnesses. Only distinct pieces of the two larger
// surfaces overlap; each sees the boundary of the other as its own core, so
// the separation of a point from the core decides the order exactly as the
// annular rule does in the one-holed torus.

inline long long piece_core_gap(const Surface& S, const FNPoint& Z, int piece,
                                int crossing_budget = kCrossingBudget,
                                int slope_budget = kSlopeBudget) {
  Surface::TwistReduction rz = S.reduce_twists(Z);
  Slope tag = shift_tag(
      S, piece,
      piece_tag(S, S.represent(rz.reduced), piece, crossing_budget, slope_budget),
      rz.turns[S.pieces[piece].core]);
  return farey_distance(Slope{1, 0}, tag);
}

inline TimeOrder path_witness_order(const Surface& S, const FNPoint& X,
                                    const FNPoint& Y, const PathWitness& u,
                                    const PathWitness& v, const Calibration& cal) {
  bool comparable = !u.is_annulus && !v.is_annulus && u.piece != v.piece &&
                    (S.kind == Surface::Kind::genus1_2 ||
                     S.kind == Surface::Kind::genus2_0);
  if (!comparable) return TimeOrder::unordered;
  double thr = cal.order_near_threshold;
  bool u_first = static_cast<double>(piece_core_gap(S, Y, u.piece)) >= thr &&
                 static_cast<double>(piece_core_gap(S, X, v.piece)) >= thr;
  bool v_first = static_cast<double>(piece_core_gap(S, Y, v.piece)) >= thr &&
                 static_cast<double>(piece_core_gap(S, X, u.piece)) >= thr;
  if (u_first && !v_first) return TimeOrder::first_earlier;
  if (v_first && !u_first) return TimeOrder::second_earlier;
  return TimeOrder::unordered;
}

// ---------------------------------------------------------------------------
// Staged paths.

struct PathStep {
  std::string branch;          // "stage" or "base"
  std::vector<int> swept;      // curves driven down in this step
  std::vector<int> held;       // section coordinates pinned to their values
  int witness_curve = -1;
  std::string witness;         // selected witness label, stage branch only
  long long witness_gap = 0;   // its separation when selected
  int first_sample = 0;
  int last_sample = 0;
};

struct PathTrace {
  std::string kind;
  std::vector<int> alpha;
  double K = 0.0;
  FNPoint start, target;
  std::vector<double> t;
  std::vector<FNPoint> samples;
  std::vector<PathStep> steps;
  std::uint64_t seed = 0;
  int crossing_budget = kCrossingBudget;
  int slope_budget = kSlopeBudget;
  std::string calibration;     // fingerprint of the budgets in force
};

namespace detail {

inline double log_step_gap(const FNPoint& a, const FNPoint& b) {
  double worst = 0.0;
  for (size_t c = 0; c < a.length.size(); ++c)
    worst = std::max(worst, std::abs(std::log(b.length[c] / a.length[c])));
  return worst;
}

// Sweep the drive coordinates of a section geometrically down to the target
// length, appending samples so that no section coordinate moves more than
// five percent between consecutive ones.
inline void run_sweep(const Surface& S, PathTrace& tr, FNPoint& cur,
                      const std::vector<int>& beta, const std::vector<int>& drive,
                      double target, PathStep step) {
  SectionMap sec = build_section(S, cur, beta);
  std::vector<double> lam0 = sec.anchor_lengths();
  double worst_ratio = 1.0;
  for (int c : drive) worst_ratio = std::max(worst_ratio, cur.length[c] / target);
  int m = std::max(20, static_cast<int>(
                           std::ceil(std::log(worst_ratio) / std::log(1.05))));
  step.first_sample = static_cast<int>(tr.samples.size()) - 1;
  for (int k = 1; k <= m; ++k) {
    std::vector<double> lam = lam0;
    double u = static_cast<double>(k) / static_cast<double>(m);
    for (size_t j = 0; j < sec.moving.size(); ++j) {
      int c = sec.moving[j];
      if (std::find(drive.begin(), drive.end(), c) != drive.end())
        lam[j] = lam0[j] * std::pow(target / lam0[j], u);
    }
    FNPoint nxt = sec.at(lam);
    tr.t.push_back(tr.t.back() + log_step_gap(tr.samples.back(), nxt));
    tr.samples.push_back(nxt);
  }
  cur = tr.samples.back();
  step.last_sample = static_cast<int>(tr.samples.size()) - 1;
  tr.steps.push_back(step);
}

}  // namespace detail

// Drive every curve of the system short while the obstruction toward the
// far endpoint stays above K at every sample. Curves already short at either
// end are handled by a single final section sweep; each remaining curve is
// scheduled by its strongest witness, earliest witness first, and shrunk
// along a section holding the already-short curves fixed. Targets sit at
// half the pinching threshold so each finished curve strictly enters the
// short regime before the next stage begins.
inline PathTrace twist_and_shrink(const Surface& S, const FNPoint& X,
                                  const FNPoint& Y, std::vector<int> alpha,
                                  double K,
                                  const Calibration& cal = Calibration::active()) {
  S.validate(X);
  S.validate(Y);
  std::sort(alpha.begin(), alpha.end());
  alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
  if (alpha.empty()) throw std::invalid_argument("empty curve system");
  for (int c : alpha)
    if (c < 0 || c >= S.num_curves)
      throw std::invalid_argument("curve index out of range");
  if (!(K > 0.0) || K * cal.thin_threshold < 1.0 - 1e-12)
    throw std::domain_error(
        "K must be at least the reciprocal of the thin threshold");
  const double eps = 1.0 / K;
  const double stage_unit = 2.0 * cal.order_margin + cal.section_projection_drift;

  PathTrace tr;
  tr.kind = S.name;
  tr.alpha = alpha;
  tr.K = K;
  tr.start = X;
  tr.target = Y;
  tr.seed = cal.default_seed;
  tr.calibration = cal.fingerprint_hex();
  tr.t.push_back(0.0);
  tr.samples.push_back(X);

  FNPoint cur = X;
  auto partition = [&](std::vector<int>& ax, std::vector<int>& ay,
                       std::vector<int>& a0) {
    ax.clear();
    ay.clear();
    a0.clear();
    for (int c : alpha) {
      if (cur.length[c] < eps) ax.push_back(c);
      else if (Y.length[c] < eps) ay.push_back(c);
      else a0.push_back(c);
    }
  };

  // Entry requirement: every pending curve must carry a witness separation
  // above the full staged budget.
  {
    std::vector<int> ax, ay, a0;
    partition(ax, ay, a0);
    double need = K + stage_unit * static_cast<double>(a0.size());
    std::string failing;
    for (int c : a0) {
      ObstructionReport r = boundary_obstruction(S, cur, Y, c);
      if (!(static_cast<double>(r.best_dist) > need))
        failing += (failing.empty() ? "" : ", ") + std::to_string(c);
    }
    if (!failing.empty())
      throw std::domain_error(
          "twist-and-shrink hypothesis fails for curve(s) " + failing +
          ": no witness separation above " + format_g17(need));
  }

  for (;;) {
    std::vector<int> ax, ay, a0;
    partition(ax, ay, a0);
    if (a0.empty()) break;
    double floor_h = K + stage_unit * static_cast<double>(a0.size());
    std::vector<ObstructionReport> obs;
    for (int c : a0) {
      ObstructionReport r = boundary_obstruction(S, cur, Y, c);
      if (!(static_cast<double>(r.best_dist) > floor_h))
        throw std::runtime_error("witness exhaustion at curve " +
                                 std::to_string(c) + ": best separation " +
                                 std::to_string(r.best_dist) +
                                 " does not clear the stage budget " +
                                 format_g17(floor_h));
      obs.push_back(r);
    }
    size_t n = obs.size();
    std::vector<std::vector<TimeOrder>> M(
        n, std::vector<TimeOrder>(n, TimeOrder::unordered));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        TimeOrder v = path_witness_order(S, cur, Y, obs[i].best, obs[j].best, cal);
        M[i][j] = v;
        M[j][i] = v == TimeOrder::first_earlier    ? TimeOrder::second_earlier
                  : v == TimeOrder::second_earlier ? TimeOrder::first_earlier
                                                   : TimeOrder::unordered;
      }
    std::vector<size_t> src = maximal_elements(M);
    size_t pick = src.front();
    for (size_t s : src) {
      bool better = (!obs[s].best.is_annulus && obs[pick].best.is_annulus) ||
                    (obs[s].best.is_annulus == obs[pick].best.is_annulus &&
                     obs[s].curve < obs[pick].curve);
      if (better) pick = s;
    }
    int c1 = obs[pick].curve;
    std::vector<int> beta = ax;
    beta.push_back(c1);
    std::sort(beta.begin(), beta.end());
    PathStep step;
    step.branch = "stage";
    step.swept = {c1};
    step.held = ax;
    step.witness_curve = c1;
    step.witness = obs[pick].best.label;
    step.witness_gap = obs[pick].best_dist;
    detail::run_sweep(S, tr, cur, beta, {c1}, 0.5 * eps, step);
  }

  std::vector<int> ax, ay, a0;
  partition(ax, ay, a0);
  if (!ay.empty()) {
    PathStep step;
    step.branch = "base";
    step.swept = ay;
    step.held = ax;
    detail::run_sweep(S, tr, cur, alpha, ay, 0.5 * eps, step);
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Audit: recompute every certified observable of a trace from coordinates.

struct TraceCheck {
  std::string name;
  bool pass = true;
  double worst = 0.0;
  std::string detail;
};

struct TraceReport {
  bool pass = true;
  std::vector<TraceCheck> checks;
  const TraceCheck* find(const std::string& name) const {
    for (const TraceCheck& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

// Witnesses declared immobile along a path: every curve collar (twists are
// held as fractions, so even the swept collars stay put) and the pieces
// whose core is outside the system.
inline std::vector<PathWitness> immobile_witnesses(const Surface& S,
                                                   const std::vector<int>& alpha) {
  std::vector<PathWitness> ws;
  for (int c = 0; c < S.num_curves; ++c) ws.push_back(collar_witness(c));
  for (size_t p = 0; p < S.pieces.size(); ++p)
    if (std::find(alpha.begin(), alpha.end(), S.pieces[p].core) == alpha.end())
      ws.push_back(piece_witness(S, S.pieces[p].core, static_cast<int>(p)));
  return ws;
}

inline TraceReport verify_trace(const Surface& S, const PathTrace& tr,
                                const FNPoint& Y, double K,
                                const Calibration& cal = Calibration::active()) {
  TraceReport rep;
  auto add = [&](TraceCheck c) {
    rep.pass = rep.pass && c.pass;
    rep.checks.push_back(std::move(c));
  };

  TraceCheck structure;
  structure.name = "structure";
  if (tr.samples.empty() || tr.samples.size() != tr.t.size()) {
    structure.pass = false;
    structure.detail = "sample and parameter counts disagree";
    add(structure);
    rep.pass = false;
    return rep;
  }
  for (const FNPoint& P : tr.samples)
    if (static_cast<int>(P.length.size()) != S.num_curves ||
        static_cast<int>(P.twist.size()) != S.num_curves) {
      structure.pass = false;
      structure.detail = "sample coordinate count does not match the surface";
      add(structure);
      return rep;
    }
  for (size_t k = 0; k + 1 < tr.t.size(); ++k)
    if (!(tr.t[k] < tr.t[k + 1])) {
      structure.pass = false;
      structure.detail = "path parameter is not strictly increasing";
    }
  for (int c = 0; c < S.num_curves; ++c)
    if (tr.samples.front().length[c] != tr.start.length[c] ||
        tr.samples.front().twist[c] != tr.start.twist[c]) {
      structure.pass = false;
      structure.detail = "first sample is not the start point";
    }
  const double step_cap = std::log(1.05) + 1e-9;
  for (const PathStep& st : tr.steps) {
    if (st.first_sample < 0 || st.last_sample >= static_cast<int>(tr.samples.size()) ||
        st.first_sample >= st.last_sample) {
      structure.pass = false;
      structure.detail = "step sample range is malformed";
      continue;
    }
    for (int k = st.first_sample; k < st.last_sample; ++k) {
      const FNPoint& a = tr.samples[k];
      const FNPoint& b = tr.samples[k + 1];
      for (int c : st.swept) {
        double dl = std::log(b.length[c] / a.length[c]);
        structure.worst = std::max(structure.worst, std::abs(dl));
        if (dl > 1e-12) {
          structure.pass = false;
          structure.detail = "a swept length increased inside a step";
        }
        if (std::abs(dl) > step_cap) {
          structure.pass = false;
          structure.detail = "a swept length moved more than the step bound";
        }
      }
      for (int c : st.held) {
        if (b.length[c] != a.length[c] || b.twist[c] != a.twist[c]) {
          structure.pass = false;
          structure.detail = "a held coordinate moved inside a step";
        }
      }
    }
  }
  add(structure);

  TraceCheck final_len;
  final_len.name = "final-lengths";
  for (int c : tr.alpha) {
    double l = tr.samples.back().length[c];
    final_len.worst = std::max(final_len.worst, l * K);
    if (!(l < 1.0 / K)) {
      final_len.pass = false;
      final_len.detail = "curve " + std::to_string(c) + " ends at length " +
                         format_g17(l);
    }
  }
  add(final_len);

  TraceCheck obstruction;
  obstruction.name = "obstruction-floor";
  double worst_value = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < tr.samples.size(); ++k)
    for (int c : tr.alpha) {
      double v = boundary_obstruction(S, tr.samples[k], Y, c, tr.crossing_budget,
                                      tr.slope_budget)
                     .value;
      worst_value = std::min(worst_value, v);
      if (!(v > K)) {
        obstruction.pass = false;
        obstruction.detail = "curve " + std::to_string(c) + " at sample " +
                             std::to_string(k) + " has obstruction " +
                             format_g17(v);
      }
    }
  obstruction.worst = worst_value;
  add(obstruction);

  TraceCheck drift;
  drift.name = "witness-drift";
  for (const PathWitness& w : immobile_witnesses(S, tr.alpha)) {
    for (size_t k = 1; k < tr.samples.size(); ++k) {
      long long d =
          w.is_annulus
              ? annulus_projection(S, tr.samples.front(), tr.samples[k], w.curve,
                                   tr.crossing_budget)
                    .dist()
              : piece_projection(S, tr.samples.front(), tr.samples[k], w.piece,
                                 tr.crossing_budget, tr.slope_budget)
                    .dist;
      drift.worst = std::max(drift.worst, static_cast<double>(d));
      if (!(static_cast<double>(d) <= cal.path_projection_margin)) {
        drift.pass = false;
        drift.detail = "witness " + w.label + " drifts to " + std::to_string(d) +
                       " at sample " + std::to_string(k);
      }
    }
  }
  add(drift);

  return rep;
}

// ---------------------------------------------------------------------------
// Trace files: a CSV of samples and observables plus a JSON sidecar carrying
// the branch log and the calibration snapshot.

inline void write_trace_csv(const Surface& S, const PathTrace& tr,
                            const FNPoint& Y, std::ostream& os) {
  std::vector<PathWitness> ws = immobile_witnesses(S, tr.alpha);
  os << "t";
  for (int c = 0; c < S.num_curves; ++c) os << ",len" << c;
  for (int c = 0; c < S.num_curves; ++c) os << ",twist" << c;
  for (const PathWitness& w : ws) os << ",dW_" << w.label;
  for (int c : tr.alpha) os << ",mm" << c;
  os << "\n";
  for (size_t k = 0; k < tr.samples.size(); ++k) {
    const FNPoint& P = tr.samples[k];
    os << format_g17(tr.t[k]);
    for (int c = 0; c < S.num_curves; ++c) os << ',' << format_g17(P.length[c]);
    for (int c = 0; c < S.num_curves; ++c) os << ',' << format_g17(P.twist[c]);
    for (const PathWitness& w : ws) {
      long long d = w.is_annulus
                        ? annulus_projection(S, tr.samples.front(), P, w.curve,
                                             tr.crossing_budget)
                              .dist()
                        : piece_projection(S, tr.samples.front(), P, w.piece,
                                           tr.crossing_budget, tr.slope_budget)
                              .dist;
      os << ',' << d;
    }
    for (int c : tr.alpha)
      os << ','
         << format_g17(boundary_obstruction(S, P, Y, c, tr.crossing_budget,
                                            tr.slope_budget)
                           .value);
    os << "\n";
  }
}

inline nlohmann::json trace_sidecar(const PathTrace& tr,
                                    const Calibration& cal = Calibration::active()) {
  nlohmann::json j;
  j["kind"] = tr.kind;
  j["alpha"] = tr.alpha;
  j["K"] = tr.K;
  j["seed"] = tr.seed;
  j["crossing_budget"] = tr.crossing_budget;
  j["slope_budget"] = tr.slope_budget;
  j["start"] = fn_to_json(tr.start);
  j["target"] = fn_to_json(tr.target);
  j["samples"] = tr.samples.size();
  j["T"] = tr.t.empty() ? 0.0 : tr.t.back();
  nlohmann::json steps = nlohmann::json::array();
  for (const PathStep& st : tr.steps) {
    nlohmann::json s;
    s["branch"] = st.branch;
    s["swept"] = st.swept;
    s["held"] = st.held;
    if (st.branch == "stage") {
      s["witness_curve"] = st.witness_curve;
      s["witness"] = st.witness;
      s["witness_gap"] = st.witness_gap;
    }
    s["first_sample"] = st.first_sample;
    s["last_sample"] = st.last_sample;
    steps.push_back(s);
  }
  j["steps"] = steps;
  j["calibration"] = cal.to_json();
  if (tr.calibration != cal.fingerprint_hex())
    j["calibration_mismatch"] = tr.calibration;
  return j;
}

// Rebuild a trace from its two files. The CSV carries the coordinates; the
// sidecar carries identity, budgets, and the branch log.
inline PathTrace read_trace(std::istream& csv, const nlohmann::json& sidecar) {
  PathTrace tr;
  tr.kind = sidecar.at("kind").get<std::string>();
  tr.alpha = sidecar.at("alpha").get<std::vector<int>>();
  tr.K = sidecar.at("K").get<double>();
  tr.seed = sidecar.at("seed").get<std::uint64_t>();
  tr.crossing_budget = sidecar.at("crossing_budget").get<int>();
  tr.slope_budget = sidecar.at("slope_budget").get<int>();
  tr.start = fn_from_json(sidecar.at("start"));
  tr.target = fn_from_json(sidecar.at("target"));
  if (sidecar.contains("calibration") &&
      sidecar.at("calibration").contains("fingerprint"))
    tr.calibration = sidecar.at("calibration").at("fingerprint").get<std::string>();
  for (const auto& s : sidecar.at("steps")) {
    PathStep st;
    st.branch = s.at("branch").get<std::string>();
    st.swept = s.at("swept").get<std::vector<int>>();
    st.held = s.at("held").get<std::vector<int>>();
    if (s.contains("witness_curve")) st.witness_curve = s.at("witness_curve").get<int>();
    if (s.contains("witness")) st.witness = s.at("witness").get<std::string>();
    if (s.contains("witness_gap"))
      st.witness_gap = s.at("witness_gap").get<long long>();
    st.first_sample = s.at("first_sample").get<int>();
    st.last_sample = s.at("last_sample").get<int>();
    tr.steps.push_back(st);
  }
  int nc = static_cast<int>(tr.start.length.size());
  std::string line;
  if (!std::getline(csv, line)) throw std::runtime_error("empty trace file");
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    if (static_cast<int>(vals.size()) < 1 + 2 * nc)
      throw std::runtime_error("trace row is too short");
    FNPoint P;
    P.length.assign(vals.begin() + 1, vals.begin() + 1 + nc);
    P.twist.assign(vals.begin() + 1 + nc, vals.begin() + 1 + 2 * nc);
    tr.t.push_back(vals[0]);
    tr.samples.push_back(P);
  }
  if (tr.samples.empty()) throw std::runtime_error("trace has no samples");
  return tr;
}

}  // namespace teich

// Front end over the length-twist coordinate library: measurements,
// deformations, staged shrinking paths, and verification suites.
//
// Exit codes: 0 pass, 1 usage or IO error, 2 property violation,
// 3 numerical failure (holonomy overflow or an exhausted search budget).
//
// Reports are JSON (or flattened key,value CSV with --format csv) and every
// report embeds the active calibration fingerprint, the seed, and the search
// budgets, so reruns with identical configuration are byte-identical.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <teich/calibration.hpp>
#include <teich/json_io.hpp>
#include <teich/order.hpp>
#include <teich/pants.hpp>
#include <teich/pathgen.hpp>
#include <teich/projections.hpp>
#include <teich/surface.hpp>
#include <teich/testkit.hpp>

namespace {

using namespace teich;
using nlohmann::json;

// Bad input or unreadable files; mapped to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string calibration_file;
  std::string format = "json";
  std::uint64_t seed = 0;
  Calibration cal;
};

json load_json(const std::string& spec) {
  try {
    if (!spec.empty() && spec[0] == '{') return json::parse(spec);
    std::ifstream in(spec);
    if (!in) throw UsageError("cannot open " + spec);
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw UsageError("bad JSON in " + spec + ": " + e.what());
  }
}

FNPoint load_point(const Surface& S, const std::string& spec) {
  FNPoint X;
  try {
    X = fn_from_json(load_json(spec));
  } catch (const UsageError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw UsageError(std::string(e.what()) + " in " + spec);
  }
  S.validate(X);
  return X;
}

void flatten(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array()) {
    int i = 0;
    for (const auto& v : j) flatten(v, prefix + "[" + std::to_string(i++) + "]", os);
  } else if (j.is_number_float()) {
    os << prefix << ',' << format_g17(j.get<double>()) << '\n';
  } else if (j.is_string()) {
    os << prefix << ',' << j.get<std::string>() << '\n';
  } else {
    os << prefix << ',' << j.dump() << '\n';
  }
}

void emit(const Options& opts, const json& j) {
  if (opts.format == "csv") flatten(j, "", std::cout);
  else std::cout << j.dump(2) << '\n';
}

json base_report(const Options& opts, const std::string& command) {
  json j;
  j["command"] = command;
  j["calibration"] = opts.cal.fingerprint_hex();
  j["seed"] = opts.seed;
  j["budgets"] = {{"crossing", kCrossingBudget}, {"slope", kSlopeBudget}};
  return j;
}

json annulus_json(const AnnulusReport& a) {
  json j;
  j["curve"] = a.curve;
  j["raw"] = a.raw;
  j["tw"] = a.tw;
  j["dist"] = a.dist();
  j["same"] = a.same;
  j["turns_x"] = a.turns_x;
  j["turns_y"] = a.turns_y;
  j["shear_x"] = a.shear_x;
  j["shear_y"] = a.shear_y;
  j["nominee_x"] = format_word(a.wx);
  j["nominee_y"] = format_word(a.wy);
  return j;
}

json piece_json(const Surface& S, const PieceReport& p) {
  json j;
  j["piece"] = p.piece;
  j["label"] = S.pieces[p.piece].label;
  j["core"] = S.pieces[p.piece].core;
  j["tag_x"] = to_string(p.tag_x);
  j["tag_y"] = to_string(p.tag_y);
  j["dist"] = p.dist;
  return j;
}

json audit_json(const TraceReport& rep) {
  json j;
  j["pass"] = rep.pass;
  json checks = json::array();
  for (const TraceCheck& c : rep.checks) {
    json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["worst"] = c.worst;
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(e);
  }
  j["checks"] = checks;
  return j;
}

int resolve_piece(const Surface& S, const std::string& spec) {
  for (size_t p = 0; p < S.pieces.size(); ++p)
    if (S.pieces[p].label == spec) return static_cast<int>(p);
  try {
    size_t pos = 0;
    int p = std::stoi(spec, &pos);
    if (pos == spec.size() && p >= 0 && p < static_cast<int>(S.pieces.size()))
      return p;
  } catch (const std::exception&) {
  }
  throw UsageError("unknown piece: " + spec);
}

int cmd_pants(const Options& opts, double l1, double l2, double l3,
              double slack) {
  CuffLengths l{l1, l2, l3};
  validate_cuffs(l);
  PantsBoundsReport r = check_pants_bounds(l, slack);
  json j = base_report(opts, "pants");
  j["cuffs"] = {l[0], l[1], l[2]};
  j["slack"] = r.slack;
  bool closed = l[0] > 0.0 && l[1] > 0.0 && l[2] > 0.0;
  json cuffs = json::array();
  for (int i = 0; i < 3; ++i) {
    json c;
    c["defect"] = length_defect(l, i);
    c["x"] = truncated_self_perp(l, i);
    c["y"] = truncated_seam(l, i);
    if (closed) {
      c["self_perp"] = self_perp_length(l, i);
      c["seam"] = seam_length(l, i);
    }
    cuffs.push_back(c);
  }
  j["cuff"] = cuffs;
  j["worst_excess"] = r.worst_excess;
  j["worst_cuff"] = r.worst_cuff;
  j["ok"] = r.ok;
  emit(opts, j);
  return r.ok ? 0 : 2;
}

int cmd_length(const Options& opts, const std::string& kind,
               const std::string& point, int curve, const std::string& word) {
  Surface S = make_surface(kind);
  FNPoint X = load_point(S, point);
  json j = base_report(opts, "length");
  j["surface"] = S.name;
  Word w;
  if (!word.empty()) {
    w = parse_word(word);
    j["word"] = format_word(w);
  } else {
    if (curve < 0 || curve >= S.num_curves)
      throw UsageError("curve index out of range");
    w = S.curve_word[curve];
    j["curve"] = curve;
  }
  j["length"] = S.curve_length(X, w);
  emit(opts, j);
  return 0;
}

int cmd_twist(const Options& opts, const std::string& kind,
              const std::string& point, int curve, const std::string& target,
              double turns, bool apply, const std::string& out) {
  Surface S = make_surface(kind);
  FNPoint X = load_point(S, point);
  if (curve < 0 || curve >= S.num_curves)
    throw UsageError("curve index out of range");
  json j = base_report(opts, "twist");
  j["surface"] = S.name;
  j["curve"] = curve;
  if (apply) {
    FNPoint E = S.earthquake(X, curve, turns * X.length[curve]);
    j["turns"] = turns;
    j["result"] = fn_to_json(E);
    if (!out.empty()) {
      std::ofstream os(out);
      if (!os) throw UsageError("cannot write " + out);
      os << fn_to_json(E).dump(2) << '\n';
      j["written"] = out;
    }
  } else {
    FNPoint Y = load_point(S, target);
    j["annulus"] = annulus_json(annulus_projection(S, X, Y, curve));
  }
  emit(opts, j);
  return 0;
}

int cmd_project(const Options& opts, const std::string& kind,
                const std::string& point, const std::string& target, int curve,
                const std::string& piece) {
  Surface S = make_surface(kind);
  FNPoint X = load_point(S, point);
  FNPoint Y = load_point(S, target);
  json j = base_report(opts, "project");
  j["surface"] = S.name;
  if (!piece.empty()) {
    int p = resolve_piece(S, piece);
    j["piece"] = piece_json(S, piece_projection(S, X, Y, p));
  } else {
    if (curve < 0 || curve >= S.num_curves)
      throw UsageError("curve index out of range");
    j["annulus"] = annulus_json(annulus_projection(S, X, Y, curve));
  }
  emit(opts, j);
  return 0;
}

int cmd_mm(const Options& opts, const std::string& kind,
           const std::string& point, const std::string& target, int curve) {
  Surface S = make_surface(kind);
  FNPoint X = load_point(S, point);
  FNPoint Y = load_point(S, target);
  if (curve >= S.num_curves) throw UsageError("curve index out of range");
  json j = base_report(opts, "mm");
  j["surface"] = S.name;
  json rows = json::array();
  double overall = 0.0;
  for (int c = 0; c < S.num_curves; ++c) {
    if (curve >= 0 && c != curve) continue;
    MMReport m = mm_curve(S, X, Y, c);
    json r;
    r["curve"] = m.curve;
    r["inv_len_x"] = m.inv_len_x;
    r["inv_len_y"] = m.inv_len_y;
    r["annulus"] = annulus_json(m.annulus);
    r["piece"] = piece_json(S, m.piece);
    r["value"] = m.value;
    rows.push_back(r);
    overall = std::max(overall, m.value);
  }
  j["curves"] = rows;
  j["value"] = overall;
  emit(opts, j);
  return 0;
}

const char* order_name(TimeOrder v) {
  switch (v) {
    case TimeOrder::first_earlier: return "first_earlier";
    case TimeOrder::second_earlier: return "second_earlier";
    default: return "unordered";
  }
}

int cmd_order(const Options& opts, const std::string& point,
              const std::string& target, const std::vector<std::string>& cores) {
  Surface S = make_surface("genus1_1");
  FNPoint X = load_point(S, point);
  FNPoint Y = load_point(S, target);
  if (cores.empty()) throw UsageError("order needs at least one witness core");
  std::vector<Witness> ws;
  for (const std::string& c : cores) {
    Slope s;
    try {
      s = parse_slope(c);
    } catch (const std::exception&) {
      throw UsageError("bad slope: " + c);
    }
    ws.push_back({to_string(s), s});
  }
  Surface::Rep RX = S.represent(X), RY = S.represent(Y);
  json j = base_report(opts, "order");
  json rows = json::array();
  for (const Witness& w : ws) {
    json r;
    r["label"] = w.label;
    r["coefficient"] = witness_coefficient(S, RX, RY, w);
    rows.push_back(r);
  }
  j["witnesses"] = rows;
  std::vector<std::vector<TimeOrder>> M = time_order_matrix(S, X, Y, ws, opts.cal);
  json mat = json::array();
  for (const auto& row : M) {
    json r = json::array();
    for (TimeOrder v : row) r.push_back(order_name(v));
    mat.push_back(r);
  }
  j["order"] = mat;
  j["maximal"] = maximal_elements(M);
  bool cycle = order_has_cycle(M);
  j["cycle"] = cycle;
  emit(opts, j);
  return cycle ? 2 : 0;
}

int cmd_path(const Options& opts, const std::string& kind,
             const std::string& point, const std::string& target,
             const std::vector<int>& alpha, double K,
             const std::string& prefix) {
  Surface S = make_surface(kind);
  FNPoint X = load_point(S, point);
  FNPoint Y = load_point(S, target);
  PathTrace tr = twist_and_shrink(S, X, Y, alpha, K, opts.cal);
  TraceReport rep = verify_trace(S, tr, Y, K, opts.cal);
  std::string csv_path = prefix + ".csv", sidecar_path = prefix + ".json";
  {
    std::ofstream os(csv_path);
    if (!os) throw UsageError("cannot write " + csv_path);
    write_trace_csv(S, tr, Y, os);
  }
  {
    std::ofstream os(sidecar_path);
    if (!os) throw UsageError("cannot write " + sidecar_path);
    os << trace_sidecar(tr, opts.cal).dump(2) << '\n';
  }
  json j = base_report(opts, "path");
  j["seed"] = tr.seed;
  j["surface"] = S.name;
  j["alpha"] = tr.alpha;
  j["K"] = tr.K;
  j["samples"] = tr.samples.size();
  j["T"] = tr.t.back();
  json steps = json::array();
  for (const PathStep& st : tr.steps) {
    json s;
    s["branch"] = st.branch;
    s["swept"] = st.swept;
    s["held"] = st.held;
    if (st.branch == "stage") {
      s["witness"] = st.witness;
      s["witness_gap"] = st.witness_gap;
    }
    steps.push_back(s);
  }
  j["steps"] = steps;
  j["audit"] = audit_json(rep);
  j["files"] = {{"csv", csv_path}, {"sidecar", sidecar_path}};
  emit(opts, j);
  return rep.pass ? 0 : 2;
}

// ---------------------------------------------------------------------------
// Named verify suites. Small, seeded, deterministic; the heavyweight runs
// live in the acceptance harness.

int suite_trace(const Options& opts, const std::string& prefix,
                std::string csv_path, std::string sidecar_path) {
  if (!prefix.empty()) {
    csv_path = prefix + ".csv";
    sidecar_path = prefix + ".json";
  }
  if (csv_path.empty() || sidecar_path.empty())
    throw UsageError("verify trace needs --trace PREFIX or --csv and --sidecar");
  std::ifstream csv(csv_path);
  if (!csv) throw UsageError("cannot open " + csv_path);
  json sidecar = load_json(sidecar_path);
  PathTrace tr;
  try {
    tr = read_trace(csv, sidecar);
  } catch (const json::exception& e) {
    throw UsageError("malformed sidecar: " + std::string(e.what()));
  } catch (const std::runtime_error& e) {
    throw UsageError("malformed trace: " + std::string(e.what()));
  }
  Surface S = make_surface(tr.kind);
  TraceReport rep = verify_trace(S, tr, tr.target, tr.K, opts.cal);
  json j = base_report(opts, "verify");
  j["suite"] = "trace";
  j["files"] = {{"csv", csv_path}, {"sidecar", sidecar_path}};
  j["surface"] = tr.kind;
  j["alpha"] = tr.alpha;
  j["K"] = tr.K;
  j["samples"] = tr.samples.size();
  j["calibration_match"] = tr.calibration == opts.cal.fingerprint_hex();
  j["audit"] = audit_json(rep);
  emit(opts, j);
  return rep.pass ? 0 : 2;
}

int suite_pants_bounds(const Options& opts, int count) {
  if (count <= 0) count = 2000;
  std::mt19937_64 gen(opts.seed);
  double worst = -std::numeric_limits<double>::infinity();
  int fails = 0;
  for (int n = 0; n < count; ++n) {
    CuffLengths l = random_cuffs(gen, 0.05, 15.0);
    PantsBoundsReport r = check_pants_bounds(l, opts.cal.pants_slack);
    worst = std::max(worst, r.worst_excess);
    if (!r.ok) ++fails;
  }
  json j = base_report(opts, "verify");
  j["suite"] = "pants-bounds";
  j["count"] = count;
  j["slack"] = opts.cal.pants_slack;
  j["worst_excess"] = worst;
  j["failures"] = fails;
  j["pass"] = fails == 0;
  emit(opts, j);
  return fails == 0 ? 0 : 2;
}

int suite_dehn_twist_sign(const Options& opts, int count) {
  if (count <= 0) count = 5;
  std::mt19937_64 gen(opts.seed);
  double worst = 0.0;
  for (const std::string& kind : surface_kinds()) {
    Surface S = make_surface(kind);
    for (int n = 0; n < count; ++n) {
      FNPoint X = random_point(S, gen, 0.4, 5.0, 4.0);
      for (int i = 0; i < S.num_curves; ++i) {
        FNPoint E = S.earthquake(X, i, X.length[i]);
        std::vector<Word> probes = S.curve_word;
        probes.insert(probes.end(), S.transversal.begin(), S.transversal.end());
        for (const Word& w : probes) {
          double a = S.curve_length(E, w);
          double b = S.curve_length(X, S.twist_up[i](w));
          worst = std::max(worst, std::abs(a - b));
        }
      }
    }
  }
  const double tol = 1e-6;
  json j = base_report(opts, "verify");
  j["suite"] = "dehn-twist-sign";
  j["count"] = count;
  j["worst_error"] = worst;
  j["tolerance"] = tol;
  j["pass"] = worst < tol;
  emit(opts, j);
  return worst < tol ? 0 : 2;
}

int suite_earthquake_laws(const Options& opts, int count) {
  if (count <= 0) count = 100;
  std::mt19937_64 gen(opts.seed);
  std::uniform_real_distribution<double> mag(-9.0, 9.0);
  std::vector<std::string> kinds = surface_kinds();
  double worst = 0.0;
  int exact_fails = 0;
  for (int n = 0; n < count; ++n) {
    Surface S = make_surface(kinds[n % kinds.size()]);
    FNPoint X = random_point(S, gen, 0.5, 5.0, 4.0);
    int i = n % S.num_curves;
    double s1 = mag(gen), s2 = mag(gen);
    FNPoint E = S.earthquake(X, i, s1);
    FNPoint E2 = S.earthquake(E, i, s2);
    if (E2.twist[i] != X.twist[i] + s1 + s2) ++exact_fails;
    for (int c = 0; c < S.num_curves; ++c) {
      if (E2.length[c] != X.length[c]) ++exact_fails;
      if (c != i && E2.twist[c] != X.twist[c]) ++exact_fails;
    }
    if (S.num_curves > 1) {
      int k = (i + 1) % S.num_curves;
      FNPoint P = S.earthquake(S.earthquake(X, i, s1), k, s2);
      FNPoint Q = S.earthquake(S.earthquake(X, k, s2), i, s1);
      for (int c = 0; c < S.num_curves; ++c)
        if (P.twist[c] != Q.twist[c] || P.length[c] != Q.length[c]) ++exact_fails;
    }
    for (int c = 0; c < S.num_curves; ++c)
      worst = std::max(worst, std::abs(S.curve_length(E, S.curve_word[c]) -
                                       S.curve_length(X, S.curve_word[c])));
  }
  const double tol = 1e-9;
  json j = base_report(opts, "verify");
  j["suite"] = "earthquake-laws";
  j["count"] = count;
  j["exact_failures"] = exact_fails;
  j["worst_length_drift"] = worst;
  j["tolerance"] = tol;
  bool pass = exact_fails == 0 && worst < tol;
  j["pass"] = pass;
  emit(opts, j);
  return pass ? 0 : 2;
}

int suite_annulus_distance(const Options& opts, int count) {
  if (count <= 0) count = 30;
  std::mt19937_64 gen(opts.seed);
  std::vector<std::string> kinds = surface_kinds();
  int law_fails = 0;
  long long worst_slack = 0;
  for (int n = 0; n < count; ++n) {
    Surface S = make_surface(kinds[n % kinds.size()]);
    int c = n % S.num_curves;
    FNPoint X = random_point(S, gen, 0.6, 4.0, 3.0);
    FNPoint Y = random_point(S, gen, 0.6, 4.0, 3.0);
    FNPoint Z = random_point(S, gen, 0.6, 4.0, 3.0);
    AnnulusReport axy = annulus_projection(S, X, Y, c);
    if (axy.dist() != (axy.same ? 0 : std::llabs(axy.tw) + 1)) ++law_fails;
    AnnulusReport ayz = annulus_projection(S, Y, Z, c);
    AnnulusReport axz = annulus_projection(S, X, Z, c);
    worst_slack =
        std::max(worst_slack, std::llabs(axz.tw - axy.tw - ayz.tw));
  }
  long long bound =
      1 + 2 * static_cast<long long>(opts.cal.twist_additivity);
  json j = base_report(opts, "verify");
  j["suite"] = "annulus-distance";
  j["count"] = count;
  j["law_failures"] = law_fails;
  j["worst_additivity_slack"] = worst_slack;
  j["bound"] = bound;
  bool pass = law_fails == 0 && worst_slack <= bound;
  j["pass"] = pass;
  emit(opts, j);
  return pass ? 0 : 2;
}

int suite_farey_oracle(const Options& opts, int count) {
  if (count <= 0) count = 100;
  std::mt19937_64 gen(opts.seed);
  std::uniform_int_distribution<long long> entry(-12, 12);
  std::map<Slope, std::map<Slope, int>> balls;
  int checked = 0, mismatches = 0;
  while (checked < count) {
    long long p = entry(gen), q = std::abs(entry(gen));
    long long r = entry(gen), s = std::abs(entry(gen));
    if ((p == 0 && q == 0) || (r == 0 && s == 0)) continue;
    Slope a = make_slope(p, q), b = make_slope(r, s);
    int cf = farey_distance(a, b);
    if (cf > 4) continue;
    ++checked;
    auto it = balls.find(a);
    if (it == balls.end()) it = balls.emplace(a, farey_bfs_ball(a, 4, 200)).first;
    auto hit = it->second.find(b);
    int bfs = hit == it->second.end() ? -1 : hit->second;
    if (bfs != cf) ++mismatches;
  }
  json j = base_report(opts, "verify");
  j["suite"] = "farey-oracle";
  j["count"] = checked;
  j["mismatches"] = mismatches;
  j["pass"] = mismatches == 0;
  emit(opts, j);
  return mismatches == 0 ? 0 : 2;
}

int cmd_verify(const Options& opts, const std::string& name, int count,
               const std::string& trace_prefix, const std::string& csv_path,
               const std::string& sidecar_path) {
  if (name == "trace") return suite_trace(opts, trace_prefix, csv_path, sidecar_path);
  if (name == "pants-bounds") return suite_pants_bounds(opts, count);
  if (name == "dehn-twist-sign") return suite_dehn_twist_sign(opts, count);
  if (name == "earthquake-laws") return suite_earthquake_laws(opts, count);
  if (name == "annulus-distance") return suite_annulus_distance(opts, count);
  if (name == "farey-oracle") return suite_farey_oracle(opts, count);
  throw UsageError("unknown suite: " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Length-twist coordinates on small hyperbolic surfaces: holonomy "
      "lengths, coarse twisting, subsurface projections, and staged "
      "shrinking paths with verified traces."};
  app.require_subcommand(1);

  Options opts;
  bool seed_given = false;
  app.add_option("--calibration", opts.calibration_file,
                 "calibration JSON overriding the built-in constants "
                 "(otherwise the TEICHPATH_CALIB file, if set)");
  app.add_option("--format", opts.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--seed", opts.seed, "seed for the randomized suites")
      ->each([&](const std::string&) { seed_given = true; });

  double l1 = 0, l2 = 0, l3 = 0, slack = -1.0;
  auto* pants = app.add_subcommand(
      "pants", "certify the length bounds of a hyperbolic pair of pants");
  pants->add_option("l1", l1, "first cuff length")->required();
  pants->add_option("l2", l2, "second cuff length")->required();
  pants->add_option("l3", l3, "third cuff length")->required();
  pants->add_option("--slack", slack, "additive slack (default: calibrated)");

  std::string kind, point, target, word, piece, out, prefix = "trace";
  int curve = -1;
  auto add_surface = [&](CLI::App* c) {
    c->add_option("--surface", kind, "surface kind")
        ->required()
        ->check(CLI::IsMember(surface_kinds()));
  };
  auto add_point = [&](CLI::App* c, std::string& dst, const char* opt,
                       const char* what) {
    c->add_option(opt, dst, what)->required();
  };

  auto* length = app.add_subcommand(
      "length", "geodesic length of a curve at a marked structure");
  add_surface(length);
  add_point(length, point, "--point", "structure (JSON file or inline)");
  length->add_option("--curve", curve, "decomposition curve index");
  length->add_option("--word", word, "curve as a word in the generators");

  double turns = 0.0;
  auto* twist = app.add_subcommand(
      "twist", "coarse twisting about a curve, or an earthquake deformation");
  add_surface(twist);
  add_point(twist, point, "--point", "structure (JSON file or inline)");
  twist->add_option("--curve", curve, "decomposition curve index")->required();
  twist->add_option("--target", target, "second structure to compare against");
  auto* apply_opt = twist->add_option(
      "--apply", turns, "apply an earthquake of this many full turns instead");
  twist->add_option("--out", out, "write the deformed structure to this file");

  auto* project = app.add_subcommand(
      "project", "subsurface projection distance between two structures");
  add_surface(project);
  add_point(project, point, "--point", "first structure");
  add_point(project, target, "--target", "second structure");
  project->add_option("--curve", curve, "annulus about this curve");
  project->add_option("--piece", piece, "piece label or index");

  auto* mm = app.add_subcommand(
      "mm", "per-curve obstruction between two structures");
  add_surface(mm);
  add_point(mm, point, "--point", "first structure");
  add_point(mm, target, "--target", "second structure");
  mm->add_option("--curve", curve, "restrict to one curve (default: all)");

  std::vector<std::string> cores;
  auto* order = app.add_subcommand(
      "order", "time order of annular witnesses on the one-holed torus");
  add_point(order, point, "--point", "first structure");
  add_point(order, target, "--target", "second structure");
  order->add_option("--cores", cores, "witness core slopes, e.g. 1/0,0/1")
      ->required()
      ->delimiter(',');

  std::vector<int> alpha;
  double K = 10.0;
  auto* path = app.add_subcommand(
      "path", "staged shrinking path with a verified trace");
  add_surface(path);
  add_point(path, point, "--point", "start structure");
  add_point(path, target, "--target", "far structure the path is certified against");
  path->add_option("--alpha", alpha, "curves to shrink, e.g. 0,2")
      ->required()
      ->delimiter(',');
  path->add_option("--K", K, "shrink parameter")->capture_default_str();
  path->add_option("--out", prefix, "trace file prefix")->capture_default_str();

  std::string suite, trace_prefix, csv_path, sidecar_path;
  int count = 0;
  auto* verify = app.add_subcommand("verify", "run a named property suite");
  verify->add_option("suite", suite,
                     "trace | pants-bounds | dehn-twist-sign | "
                     "earthquake-laws | annulus-distance | farey-oracle")
      ->required();
  verify->add_option("--count", count, "instances per suite (0: suite default)");
  verify->add_option("--trace", trace_prefix, "trace prefix for the trace suite");
  verify->add_option("--csv", csv_path, "trace CSV path");
  verify->add_option("--sidecar", sidecar_path, "trace sidecar path");

  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);

    if (!opts.calibration_file.empty()) {
      try {
        opts.cal = Calibration::load(opts.calibration_file);
      } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
      }
    } else {
      opts.cal = Calibration::active();
    }
    if (!seed_given) opts.seed = opts.cal.default_seed;

    if (pants->parsed())
      return cmd_pants(opts, l1, l2, l3,
                       slack >= 0.0 ? slack : opts.cal.pants_slack);
    if (length->parsed()) {
      if (word.empty() == (curve < 0))
        throw UsageError("length needs exactly one of --curve or --word");
      return cmd_length(opts, kind, point, curve, word);
    }
    if (twist->parsed()) {
      bool apply = apply_opt->count() > 0;
      if (apply == !target.empty())
        throw UsageError("twist needs exactly one of --target or --apply");
      return cmd_twist(opts, kind, point, curve, target, turns, apply, out);
    }
    if (project->parsed()) {
      if (piece.empty() == (curve < 0))
        throw UsageError("project needs exactly one of --curve or --piece");
      return cmd_project(opts, kind, point, target, curve, piece);
    }
    if (mm->parsed()) return cmd_mm(opts, kind, point, target, curve);
    if (order->parsed()) return cmd_order(opts, point, target, cores);
    if (path->parsed())
      return cmd_path(opts, kind, point, target, alpha, K, prefix);
    if (verify->parsed())
      return cmd_verify(opts, suite, count, trace_prefix, csv_path, sidecar_path);
    throw UsageError("no subcommand");
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "violation: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::overflow_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

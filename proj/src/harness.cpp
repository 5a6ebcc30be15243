#include "shiftlab/harness.hpp"

#include "shiftlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace shiftlab {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// integers and rationals may come as JSON numbers or strings
Rational rational_of(const json& v) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  bad("expected an integer or a \"p/q\" string, got " + v.dump());
}

std::uint64_t uint_of(const json& v, const char* what) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    bad(std::string(what) + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Word word_of(const json& v, Codec codec = Codec::Numeric) {
  if (!v.is_string()) bad("expected a word string, got " + v.dump());
  return parse_word(v.get<std::string>(), codec);
}

Substitution substitution_of(const json& doc) {
  if (doc.is_string()) {
    if (upper(doc.get<std::string>()) == "FIBONACCI") return Substitution::fibonacci();
    bad("unknown substitution " + doc.dump());
  }
  Substitution s;
  s.rules.clear();
  s.seed = static_cast<Symbol>(uint_of(doc.value("seed", json(0)), "seed"));
  if (!doc.contains("rules") || !doc["rules"].is_object()) bad("substitution needs a rules object");
  for (const auto& [key, image] : doc["rules"].items()) {
    auto lhs = parse_word(key);
    if (lhs.size() != 1) bad("substitution rule keys are single symbols");
    s.rules[lhs[0]] = word_of(image);
  }
  return s;
}

GapSet gaps_of(const json& doc) {
  if (doc.is_array()) return GapSet(doc.get<std::vector<std::uint64_t>>());
  std::vector<std::uint64_t> members;
  if (doc.contains("explicit")) members = doc["explicit"].get<std::vector<std::uint64_t>>();
  std::optional<GapSet::Tail> tail;
  if (doc.contains("tail") && !doc["tail"].is_null()) {
    const auto& t = doc["tail"];
    tail = GapSet::Tail{uint_of(t.at("first"), "tail.first"), uint_of(t.value("step", json(1)), "tail.step")};
  }
  return GapSet(std::move(members), tail);
}

FiniteGraphData graph_of(const json& doc) {
  FiniteGraphData g;
  g.vertices = uint_of(doc.at("vertices"), "vertices");
  g.root = uint_of(doc.value("root", json(0)), "root");
  for (const auto& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 3) bad("edges are [from, to, label] triples");
    g.edges.push_back({uint_of(e[0], "from"), uint_of(e[1], "to"), static_cast<Symbol>(uint_of(e[2], "label"))});
  }
  return g;
}

}  // namespace

BetaNumber parse_beta(const std::string& text) {
  std::string t = upper(text);
  if (t == "GOLDEN" || t == "PHI") return BetaNumber::golden_ratio();
  return BetaNumber::rational(parse_rational(text));
}

BetaNumber beta_from_json(const json& doc) {
  if (doc.is_string()) return parse_beta(doc.get<std::string>());
  if (doc.is_number_integer()) return BetaNumber::rational(Rational(doc.get<long>()));
  if (!doc.is_object()) bad("beta must be a string or an object");
  if (doc.contains("num")) return BetaNumber::rational(frac(BigInt(doc["num"].get<long>()), BigInt(doc.value("den", 1L))));
  if (doc.contains("decimal")) {
    return BetaNumber::decimal(doc["decimal"].get<std::string>(), static_cast<unsigned>(uint_of(doc.at("precision"), "precision")));
  }
  if (doc.contains("poly")) {
    std::vector<BigInt> poly;
    for (const auto& c : doc["poly"]) poly.emplace_back(c.is_string() ? c.get<std::string>() : std::to_string(c.get<long>()));
    return BetaNumber::algebraic(std::move(poly), rational_of(doc.at("lo")), rational_of(doc.at("hi")));
  }
  bad("beta object needs num/den, decimal/precision or poly/lo/hi");
}

SystemPtr system_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("kind")) bad("system description needs a kind");
  const std::string kind = upper(doc["kind"].get<std::string>());
  if (kind == "FULL") return make_full_shift(uint_of(doc.value("alphabet", json(2)), "alphabet"));
  if (kind == "GOLDEN" || kind == "GOLDEN_MEAN") return make_golden_mean();
  if (kind == "SFT") {
    std::vector<Word> forbidden;
    for (const auto& f : doc.value("forbidden", json::array())) forbidden.push_back(word_of(f));
    return make_sft(uint_of(doc.value("alphabet", json(2)), "alphabet"), std::move(forbidden));
  }
  if (kind == "SGAP") return make_sgap(gaps_of(doc.at("S")));
  if (kind == "BETA") {
    auto digits = uint_of(doc.value("digits", json(256)), "digits");
    return make_beta(beta_from_json(doc.at("beta")), digits);
  }
  if (kind == "DYCK") return make_dyck();
  if (kind == "CODED") return make_coded(graph_of(doc.at("graph")));
  if (kind == "SMALLCENTER") return make_small_center(system_from_json(doc.at("base_system")));
  if (kind == "TWOERGODIC") {
    return make_two_ergodic(doc.contains("omega") ? substitution_of(doc["omega"]) : Substitution::fibonacci());
  }
  if (kind == "XPRIME") {
    return make_counterexample(CounterexampleKind::XPrime,
                               doc.contains("omega") ? substitution_of(doc["omega"]) : Substitution::fibonacci());
  }
  if (kind == "XDOUBLEPRIME") return make_counterexample(CounterexampleKind::XDoublePrime);
  bad("unknown system kind " + kind);
}

Point point_from_text(const std::string& text) {
  // numeric points use (period)^inf, Dyck points {period}^inf
  Codec codec = text.find('{') != std::string::npos ? Codec::Dyck : Codec::Numeric;
  return parse_point(text, codec);
}

FinMeasure measure_from_json(const json& doc) {
  if (!doc.is_array() || doc.empty()) bad("a measure is a non-empty list of {point, mass}");
  std::vector<std::pair<Point, Rational>> atoms;
  for (const auto& a : doc) {
    atoms.emplace_back(point_from_text(a.at("point").get<std::string>()), rational_of(a.at("mass")));
  }
  return FinMeasure::exact(std::move(atoms));
}

Combo combo_from_json(const json& doc) {
  if (!doc.is_array() || doc.empty()) bad("a combination is a non-empty list of {weight, point}");
  Combo out;
  for (const auto& a : doc) {
    const json& w = a.contains("weight") ? a["weight"] : a.at("lambda");
    out.emplace_back(rational_of(w), point_from_text(a.at("point").get<std::string>()));
  }
  return out;
}

json to_json(const ClosingCertificate& c, Codec codec) {
  json j;
  if (const auto* p = std::get_if<Point>(&c.x)) {
    j["x"] = format_point(*p, codec);
  } else {
    j["x_prefix_length"] = std::get<Word>(c.x).size();
  }
  j["epsilon"] = to_string(c.epsilon);
  j["N"] = c.N;
  j["p"] = c.p;
  j["q"] = c.q;
  j["y"] = format_point(c.y, codec);
  j["period"] = c.y.period_length();
  j["strategy"] = c.strategy;
  return j;
}

json to_json(const LinkCertificate& c, Codec codec) {
  return json{{"y1", format_point(c.y1, codec)},
              {"y2", format_point(c.y2, codec)},
              {"lambda", to_string(c.lambda)},
              {"epsilon", to_string(c.epsilon)},
              {"a", c.a},
              {"b", c.b},
              {"p1", c.p1},
              {"q1", c.q1},
              {"p2", c.p2},
              {"q2", c.q2},
              {"divisor", c.divisor},
              {"period", c.z.period_length()},
              {"degenerate", c.degenerate},
              {"z", format_point(c.z, codec)}};
}

json to_json(const ApproxResult& r, Codec codec) {
  json trace = json::array();
  for (const auto& s : r.trace) {
    json link = to_json(s.link, codec);
    link.erase("z");  // the final z is reported once
    trace.push_back({{"link", link}, {"tolerance", to_string(s.tolerance)}, {"distance", to_string(s.distance)}});
  }
  return json{{"z", format_point(r.z, codec)},
              {"period", r.z.period_length()},
              {"distance", to_string(r.distance)},
              {"tightening", r.tightening},
              {"trace", trace}};
}

// ---------------------------------------------------------------------------

CsvTable::CsvTable(std::string experiment, std::uint64_t seed, std::vector<std::string> columns)
    : experiment_(std::move(experiment)), seed_(seed), columns_(std::move(columns)) {}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != columns_.size()) throw std::logic_error("csv row width mismatch");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  out << "# shiftlab " << experiment_ << " schema v" << kCsvSchemaVersion << " rng " << kRngName
      << " seed " << seed_ << "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& c = cells[i];
      if (i) out << ',';
      if (c.find_first_of(",\"\n") != std::string::npos) {
        out << '"';
        for (char ch : c) out << (ch == '"' ? "\"\"" : std::string(1, ch));
        out << '"';
      } else {
        out << c;
      }
    }
    out << "\n";
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  for (const auto& n : notes_) out << "# " << n << "\n";
  return out.str();
}

void CsvTable::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  f << str();
}

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  ExperimentConfig c;
  if (!doc.is_object()) bad("experiment config must be an object");
  if (!doc.contains("seed")) bad("experiment config needs a seed");
  c.seed = uint_of(doc["seed"], "seed");
  c.experiment = doc.value("experiment", "");
  if (doc.contains("system")) c.system = doc["system"];
  if (doc.contains("maxPeriod")) c.max_period = uint_of(doc["maxPeriod"], "maxPeriod");
  if (doc.contains("horizon")) c.horizon = uint_of(doc["horizon"], "horizon");
  if (doc.contains("trials")) c.trials = uint_of(doc["trials"], "trials");
  if (doc.contains("nMax")) c.n_max = uint_of(doc["nMax"], "nMax");
  c.out = doc.value("out", "");
  return c;
}

void ExperimentConfig::validate() const {
  auto limit = [](const std::string& what) { throw Error(ErrorCode::LimitExceeded, what); };
  if (trials > kMaxTrials) limit("trials above " + std::to_string(kMaxTrials));
  if (horizon > kMaxHorizon) limit("horizon above " + std::to_string(kMaxHorizon));
  if (n_max > kMaxEntropySteps) limit("nMax above " + std::to_string(kMaxEntropySteps));
  if (max_period > kMaxPeriodXDoublePrime) limit("maxPeriod above " + std::to_string(kMaxPeriodXDoublePrime));
}

namespace {

std::string combo_text(const Combo& c, Codec codec) {
  std::string s;
  for (const auto& [l, p] : c) {
    if (!s.empty()) s += " + ";
    s += to_string(l) + " " + format_point(p, codec);
  }
  return s;
}

}  // namespace

std::vector<DensityRow> run_density(const ShiftSystem& system, std::size_t trials, std::uint64_t seed,
                                    const DensityOptions& opts) {
  if (trials > kMaxTrials) throw Error(ErrorCode::LimitExceeded, "trials above " + std::to_string(kMaxTrials));
  std::vector<Rational> eps = opts.eps;
  if (eps.empty()) eps = {dyadic(3), dyadic(4), dyadic(5)};

  auto g = root_graph(system);
  std::vector<Point> pool;
  {
    std::set<Point> seen;
    for (const auto& w : loops_through(*g, opts.loop_length)) {
      Point p = Point::periodic(w);
      if (seen.insert(p).second) pool.push_back(p);
    }
  }
  if (pool.empty()) throw Error(ErrorCode::InvalidInput, "no root loops up to length " + std::to_string(opts.loop_length));

  // draw every target first so the rows do not depend on evaluation order
  Rng rng(seed);
  std::vector<Combo> targets;
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min(opts.max_parts, pool.size()))(rng);
    std::vector<Point> chosen = pool;
    std::shuffle(chosen.begin(), chosen.end(), rng);
    chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(k), chosen.end());
    std::vector<long> w(k);
    long total = 0;
    for (auto& x : w) total += x = std::uniform_int_distribution<long>(1, 8)(rng);
    Combo c;
    for (std::size_t i = 0; i < k; ++i) c.emplace_back(frac(w[i], total), chosen[i]);
    targets.push_back(std::move(c));
  }

  std::vector<DensityRow> rows;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto target = combo_measure(targets[t]);
    for (const auto& e : eps) {
      auto r = approx_convex(system, targets[t], e);
      DensityRow row;
      row.trial = t;
      row.combo = targets[t];
      row.eps = e;
      row.period = r.z.period_length();
      row.links = r.trace.size();
      row.tightening = r.tightening;
      auto gz = co_measure(r.z);
      row.distance = dbar(gz, target).value;
      if (row.distance != r.distance) throw std::logic_error("density: distance does not reproduce");
      if (gz.size() <= kBruteforceSupport && target.size() <= kBruteforceSupport) {
        if (dbar_bruteforce(gz, target) != row.distance) throw std::logic_error("density: oracle mismatch");
        row.brute_checked = true;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

CsvTable density_table(const std::vector<DensityRow>& rows, std::uint64_t seed, Codec codec) {
  CsvTable t("density", seed,
             {"trial", "target", "eps", "distance", "distance_decimal", "below_eps", "period", "links", "tightening",
              "oracle_checked"});
  for (const auto& r : rows) {
    t.add({std::to_string(r.trial), combo_text(r.combo, codec), to_string(r.eps), to_string(r.distance),
           fixed(to_double(r.distance), 8), r.distance < r.eps ? "yes" : "no", std::to_string(r.period),
           std::to_string(r.links), std::to_string(r.tightening), r.brute_checked ? "yes" : "no"});
  }
  return t;
}

std::vector<ObstructionReport> run_obstruction(const ShiftSystem& system, const FinMeasure& target,
                                               std::size_t max_period) {
  std::size_t guard = 0;
  switch (system.kind()) {
    case SystemKind::XDoublePrime: guard = kMaxPeriodXDoublePrime; break;
    case SystemKind::Dyck: guard = kMaxPeriodDyck; break;
    default: throw Error(ErrorCode::InvalidInput, "obstruction runs are defined for XDOUBLEPRIME and DYCK");
  }
  if (max_period == 0) throw Error(ErrorCode::InvalidInput, "maxPeriod must be positive");
  if (!target.mode().is_exact()) throw Error(ErrorCode::ModeMismatch, "obstruction targets are EXACT measures");
  if (max_period > guard) {
    throw Error(ErrorCode::LimitExceeded, "maxPeriod " + std::to_string(max_period) + " above " + std::to_string(guard));
  }
  const Symbol k = static_cast<Symbol>(*system.alphabet_size());

  struct Best {
    std::optional<Rational> d;
    Point at = Point::constant(0);
    std::size_t count = 0;
  };
  std::vector<Best> by_length(max_period + 1);
  std::map<std::size_t, std::map<Word, Rational>> cylinder_cache;
  auto target_cylinders = [&](std::size_t k) -> const std::map<Word, Rational>& {
    auto it = cylinder_cache.find(k);
    if (it != cylinder_cache.end()) return it->second;
    std::map<Word, Rational> m;
    for (const auto& a : target.atoms()) m[a.point->prefix(k - 1)] += a.mass;
    return cylinder_cache.emplace(k, std::move(m)).first->second;
  };

  // depth-first over the (factor-closed) language; each primitive necklace
  // is met once, as its least rotation
  Word w;
  auto visit = [&](auto&& self) -> void {
    if (!w.empty() && primitive_root(w).multiplicity == 1 && least_rotation(w) == 0 && system.contains_periodic(w)) {
      auto& b = by_length[w.size()];
      ++b.count;
      bool hopeless = false;
      if (b.d) {
        // every band below the current best relates a subset of the pairs at
        // radius 2^-k, so a cylinder deficiency >= best there rules w out
        std::size_t k = 0;
        while (dyadic(k) >= *b.d) ++k;
        std::map<Word, Rational> diff;
        const Rational share = frac(1, w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
          Word c(k - 1);
          for (std::size_t j = 0; j + 1 < k; ++j) c[j] = w[(i + j) % w.size()];
          diff[std::move(c)] += share;
        }
        for (const auto& [c, m] : target_cylinders(k)) diff[c] -= m;
        Rational plus = 0, minus = 0;
        for (const auto& [c, d] : diff) (d > 0 ? plus : minus) += d;
        hopeless = plus >= *b.d || -minus >= *b.d;
      }
      if (!hopeless) {
        Point p = Point::periodic(w);
        Rational d = dbar(co_measure(p), target).value;
        if (!b.d || d < *b.d) {
          b.d = d;
          b.at = p;
        }
      }
    }
    if (w.size() == max_period) return;
    for (Symbol s = 0; s < k; ++s) {
      w.push_back(s);
      if (system.contains(w)) self(self);
      w.pop_back();
    }
  };
  visit(visit);

  std::vector<ObstructionReport> out;
  ObstructionReport running;
  running.target = target;
  std::optional<Rational> best;
  for (std::size_t n = 1; n <= max_period; ++n) {
    const auto& b = by_length[n];
    running.candidates += b.count;
    if (b.d && (!best || *b.d < *best)) {
      best = b.d;
      running.argmin = b.at;
    }
    running.period_bound = n;
    running.min_distance = best ? *best : Rational(1);
    out.push_back(running);
  }
  return out;
}

CsvTable obstruction_table(const std::vector<ObstructionReport>& reps, std::uint64_t seed, Codec codec) {
  CsvTable t("obstruct", seed, {"period_bound", "candidates", "min_distance", "min_distance_decimal", "argmin"});
  for (const auto& r : reps) {
    t.add({std::to_string(r.period_bound), std::to_string(r.candidates), to_string(r.min_distance),
           fixed(to_double(r.min_distance), 8), format_point(r.argmin, codec)});
  }
  if (!reps.empty()) t.note("target " + reps.front().target.describe(codec));
  return t;
}

EntropyRun run_entropy(std::size_t n_max) {
  if (n_max > kMaxEntropySteps) {
    throw Error(ErrorCode::LimitExceeded, "nMax above " + std::to_string(kMaxEntropySteps));
  }
  EntropyRun run;
  run.counts = return_counts(*make_gamma_ent(), n_max);
  const auto& r = run.counts.r;
  run.recurrence.assign(n_max + 1, std::nullopt);
  for (std::size_t n = 4; n <= n_max; ++n) run.recurrence[n] = r[n] == r[n - 1] + r[n - 2];
  const double ln_phi = std::log((1 + std::sqrt(5.0)) / 2);
  run.ln_phi_gap = n_max > 0 ? std::abs(run.counts.est_r[n_max] - ln_phi) : std::nan("");
  return run;
}

CsvTable entropy_table(const EntropyRun& run, std::uint64_t seed) {
  CsvTable t("entropy", seed, {"n", "r_n", "l_n", "est_r", "est_l", "recurrence"});
  const auto& c = run.counts;
  for (std::size_t n = 0; n < c.r.size(); ++n) {
    std::string rec = run.recurrence[n] ? (*run.recurrence[n] ? "pass" : "fail") : "";
    t.add({std::to_string(n), c.r[n].get_str(), c.l[n].get_str(), fixed(c.est_r[n], 9), fixed(c.est_l[n], 9), rec});
  }
  t.note("spr_margin " + fixed(c.spr_margin, 9) + " ln_phi_gap " + fixed(run.ln_phi_gap, 9));
  return t;
}

CsvTable run_generic(const ShiftSystem& system, const std::vector<Combo>& targets, std::size_t L, bool oscillate,
                     std::uint64_t seed, const GenericOptions& opts) {
  if (L > kMaxHorizon) throw Error(ErrorCode::LimitExceeded, "horizon above " + std::to_string(kMaxHorizon));
  CsvTable t(oscillate ? "oscillation" : "generic", seed,
             {"n", "lo", "hi", "lo_decimal", "hi_decimal", "stage", "target"});
  GenericReport rep;
  std::vector<Rational> minima;
  if (oscillate) {
    auto o = oscillation_prefix(system, targets, L, opts);
    rep = std::move(o.generic);
    minima = std::move(o.min_hi);
  } else {
    rep = generic_prefix(system, targets, L, opts);
  }
  for (const auto& cp : rep.checkpoints) {
    t.add({std::to_string(cp.n), to_string(cp.lo), to_string(cp.hi), fixed(to_double(cp.lo), 8),
           fixed(to_double(cp.hi), 8), std::to_string(cp.stage), std::to_string(cp.target)});
  }
  t.note("stages " + std::to_string(rep.stages.size()) + " certified_prefix " + std::to_string(rep.certified));
  for (std::size_t i = 0; i < minima.size(); ++i) {
    t.note("target " + std::to_string(i) + " min_hi " + to_string(minima[i]) + " (" + fixed(to_double(minima[i]), 8) + ")");
  }
  return t;
}

}  // namespace shiftlab

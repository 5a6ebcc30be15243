#include "shiftlab/simplexmetrics.hpp"

#include "shiftlab/error.hpp"
#include "shiftlab/maxflow.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace shiftlab {

std::string MeasureMode::describe() const {
  return is_exact() ? "EXACT" : "TRUNCATED(" + std::to_string(depth) + ")";
}

// ---------------------------------------------------------------------------
// FinMeasure

namespace {

void check_masses(const Rational& total) {
  if (total != 1) {
    throw Error(ErrorCode::WeightsNotNormalized, "masses sum to " + to_string(total) + ", not 1");
  }
}

}  // namespace

FinMeasure FinMeasure::exact(std::vector<std::pair<Point, Rational>> atoms) {
  std::map<Point, Rational> merged;
  Rational total = 0;
  for (auto& [p, m] : atoms) {
    if (m <= 0) throw Error(ErrorCode::InvalidInput, "atom masses must be positive");
    merged[p] += m;
    total += m;
  }
  check_masses(total);
  FinMeasure out;
  out.mode_ = MeasureMode::exact();
  for (auto& [p, m] : merged) out.atoms_.push_back({p, Word{}, m});
  return out;
}

FinMeasure FinMeasure::truncated(std::size_t m, std::vector<std::pair<Word, Rational>> atoms) {
  if (m == 0) throw Error(ErrorCode::InvalidInput, "truncation depth must be positive");
  std::map<Word, Rational> merged;
  Rational total = 0;
  for (auto& [w, mass] : atoms) {
    if (w.size() != m) throw Error(ErrorCode::InvalidInput, "truncated atom of the wrong length");
    if (mass <= 0) throw Error(ErrorCode::InvalidInput, "atom masses must be positive");
    merged[w] += mass;
    total += mass;
  }
  check_masses(total);
  FinMeasure out;
  out.mode_ = MeasureMode::truncated(m);
  for (auto& [w, mass] : merged) out.atoms_.push_back({std::nullopt, w, mass});
  return out;
}

FinMeasure FinMeasure::dirac(const Point& x) { return exact({{x, Rational(1)}}); }

Rational FinMeasure::mass_of(const Point& x) const {
  if (!mode_.is_exact()) return mass_of(x.prefix(mode_.depth));
  for (const auto& a : atoms_) {
    if (*a.point == x) return a.mass;
  }
  return 0;
}

Rational FinMeasure::mass_of(std::span<const Symbol> word) const {
  if (mode_.is_exact()) throw Error(ErrorCode::ModeMismatch, "word lookup needs TRUNCATED mode");
  for (const auto& a : atoms_) {
    if (std::equal(a.word.begin(), a.word.end(), word.begin(), word.end())) return a.mass;
  }
  return 0;
}

FinMeasure FinMeasure::truncate(std::size_t m) const {
  if (!mode_.is_exact()) {
    if (m == mode_.depth) return *this;
    throw Error(ErrorCode::ModeMismatch, "cannot re-truncate " + mode_.describe());
  }
  std::vector<std::pair<Word, Rational>> out;
  for (const auto& a : atoms_) out.emplace_back(a.point->prefix(m), a.mass);
  return truncated(m, std::move(out));
}

std::string FinMeasure::describe(Codec codec) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) os << " + ";
    const auto& a = atoms_[i];
    os << to_string(a.mass) << "*"
       << (a.point ? format_point(*a.point, codec) : "[" + format_word(a.word, codec) + "]");
  }
  return os.str();
}

bool operator==(const FinMeasure& a, const FinMeasure& b) {
  if (!(a.mode_ == b.mode_) || a.atoms_.size() != b.atoms_.size()) return false;
  for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
    const auto& x = a.atoms_[i];
    const auto& y = b.atoms_[i];
    if (x.mass != y.mass || x.word != y.word) return false;
    if (x.point && !(*x.point == *y.point)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// empirical, CO-measures, mixtures

FinMeasure empirical(const Point& x, std::size_t n, MeasureMode mode) {
  if (n == 0) throw Error(ErrorCode::InvalidInput, "empirical measure needs n >= 1");
  std::vector<std::pair<Point, Rational>> atoms;
  const Rational unit(1, n);
  const std::size_t pre = std::min(n, x.preperiod_length());
  for (std::size_t j = 0; j < pre; ++j) atoms.emplace_back(shift(x, j), unit);
  // the rest cycles through the orbit of the periodic part
  const std::size_t rest = n - pre;
  const std::size_t p = x.period_length();
  for (std::size_t r = 0; r < p && r < rest; ++r) {
    std::size_t count = rest / p + (r < rest % p ? 1 : 0);
    atoms.emplace_back(shift(x, pre + r), frac(count, n));
  }
  FinMeasure out = FinMeasure::exact(std::move(atoms));
  return mode.is_exact() ? out : out.truncate(mode.depth);
}

FinMeasure empirical(std::span<const Symbol> x, std::size_t n, std::size_t m) {
  if (n == 0) throw Error(ErrorCode::InvalidInput, "empirical measure needs n >= 1");
  if (m == 0) throw Error(ErrorCode::InvalidInput, "word prefixes need TRUNCATED(m), m >= 1");
  if (x.size() < n + m) {
    throw Error(ErrorCode::InsufficientPrefix, "prefix of length " + std::to_string(x.size()) +
                                                   " < n + m = " + std::to_string(n + m));
  }
  std::map<Word, std::size_t> counts;
  Word key(m);
  for (std::size_t j = 0; j < n; ++j) {
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(j), x.begin() + static_cast<std::ptrdiff_t>(j + m),
              key.begin());
    ++counts[key];
  }
  std::vector<std::pair<Word, Rational>> atoms;
  atoms.reserve(counts.size());
  for (auto& [w, c] : counts) atoms.emplace_back(w, frac(c, n));
  return FinMeasure::truncated(m, std::move(atoms));
}

FinMeasure co_measure(const Point& p, MeasureMode mode) {
  if (!p.is_periodic()) throw Error(ErrorCode::InvalidInput, "CO-measure needs a purely periodic point");
  return empirical(p, p.period_length(), mode);
}

FinMeasure co_measure_word(const Word& w) {
  if (w.empty()) throw Error(ErrorCode::InvalidInput, "empty period");
  if (primitive_root(w).multiplicity != 1) {
    throw Error(ErrorCode::InvalidInput, "period " + format_word(w) + " is not primitive");
  }
  return co_measure(Point::periodic(w));
}

FinMeasure convex(const std::vector<std::pair<Rational, FinMeasure>>& parts) {
  if (parts.empty()) throw Error(ErrorCode::InvalidInput, "empty convex combination");
  Rational total = 0;
  const MeasureMode mode = parts.front().second.mode();
  for (const auto& [lambda, mu] : parts) {
    if (lambda < 0 || lambda > 1) throw Error(ErrorCode::InvalidInput, "weights must lie in [0,1]");
    if (!(mu.mode() == mode)) throw Error(ErrorCode::ModeMismatch, "mixing measures of different modes");
    total += lambda;
  }
  if (total != 1) {
    throw Error(ErrorCode::WeightsNotNormalized, "weights sum to " + to_string(total) + ", not 1");
  }
  if (mode.is_exact()) {
    std::vector<std::pair<Point, Rational>> atoms;
    for (const auto& [lambda, mu] : parts) {
      if (lambda == 0) continue;
      for (const auto& a : mu.atoms()) atoms.emplace_back(*a.point, lambda * a.mass);
    }
    return FinMeasure::exact(std::move(atoms));
  }
  std::vector<std::pair<Word, Rational>> atoms;
  for (const auto& [lambda, mu] : parts) {
    if (lambda == 0) continue;
    for (const auto& a : mu.atoms()) atoms.emplace_back(a.word, lambda * a.mass);
  }
  return FinMeasure::truncated(mode.depth, std::move(atoms));
}

// ---------------------------------------------------------------------------
// d-bar

namespace {

// Union of both supports; an atom of either measure appears once.
struct Site {
  const MeasureAtom* atom;
  Rational mass[2];  // mu, nu
};

std::vector<Site> joint_sites(const FinMeasure& mu, const FinMeasure& nu) {
  std::vector<Site> sites;
  if (mu.mode().is_exact()) {
    std::map<Point, std::size_t> index;
    for (int side = 0; side < 2; ++side) {
      for (const auto& a : (side == 0 ? mu : nu).atoms()) {
        auto [it, fresh] = index.emplace(*a.point, sites.size());
        if (fresh) sites.push_back({&a, {Rational(0), Rational(0)}});
        sites[it->second].mass[side] += a.mass;
      }
    }
  } else {
    std::map<Word, std::size_t> index;
    for (int side = 0; side < 2; ++side) {
      for (const auto& a : (side == 0 ? mu : nu).atoms()) {
        auto [it, fresh] = index.emplace(a.word, sites.size());
        if (fresh) sites.push_back({&a, {Rational(0), Rational(0)}});
        sites[it->second].mass[side] += a.mass;
      }
    }
  }
  return sites;
}

// One direction of the band sweep, fed radii in decreasing order. The first
// band with D > t fixes the answer from the band just above it.
struct OneSided {
  Rational above = 1;  // radius of the last feasible band (every eps >= 1 is feasible)
  Rational value;
  bool attained = false;
  bool done = false;

  void visit(const Rational& t, const Rational& d) {
    if (done) return;
    if (d <= t) {
      above = t;
      if (t == 0) done = true;  // feasible all the way down: value 0
      return;
    }
    done = true;
    if (d <= above) {
      value = d;
      attained = true;
    } else {
      value = above;
    }
  }
};

struct Cylinder {
  std::vector<std::size_t> members;
  Rational mass[2];
};

Rational positive_part(const Rational& r) { return r > 0 ? r : Rational(0); }

}  // namespace

// At radius 2^-(d+1) two sites are related iff they agree on their first d
// symbols. The relation is an equivalence, so the bipartite network of each
// band is a disjoint union of complete blocks, one per cylinder, and its
// max-flow is sum_c min(mu_c, nu_c). Cylinders are refined one symbol at a
// time, coarse to fine, and only while they still hold mass of both measures;
// the sweep stops as soon as both directions have found their binding band.
DistanceResult dbar(const FinMeasure& mu, const FinMeasure& nu) {
  if (!(mu.mode() == nu.mode())) {
    throw Error(ErrorCode::ModeMismatch, mu.mode().describe() + " vs " + nu.mode().describe());
  }
  const auto sites = joint_sites(mu, nu);
  OneSided dir[2];
  Rational frozen[2] = {Rational(0), Rational(0)};
  std::vector<Cylinder> open;

  auto settle = [&](Cylinder&& c) {
    if (c.members.size() > 1 && c.mass[0] > 0 && c.mass[1] > 0) {
      open.push_back(std::move(c));
    } else {
      frozen[0] += positive_part(c.mass[0] - c.mass[1]);
      frozen[1] += positive_part(c.mass[1] - c.mass[0]);
    }
  };
  {
    Cylinder all;
    all.mass[0] = all.mass[1] = 1;
    for (std::size_t i = 0; i < sites.size(); ++i) all.members.push_back(i);
    settle(std::move(all));
  }

  const std::size_t limit = mu.mode().depth;
  for (std::size_t d = 0; !open.empty() && !(dir[0].done && dir[1].done); ++d) {
    if (limit && d >= limit) throw Error(ErrorCode::InvalidInput, "truncated atoms are not distinct");
    Rational deficiency[2] = {frozen[0], frozen[1]};
    for (const auto& c : open) {
      deficiency[0] += positive_part(c.mass[0] - c.mass[1]);
      deficiency[1] += positive_part(c.mass[1] - c.mass[0]);
    }
    const Rational t = dyadic(d + 1);
    dir[0].visit(t, deficiency[0]);
    dir[1].visit(t, deficiency[1]);

    std::vector<Cylinder> current = std::move(open);
    open.clear();
    for (auto& c : current) {
      std::map<Symbol, Cylinder> parts;
      for (auto i : c.members) {
        auto& part = parts[sites[i].atom->at(d + 1)];
        part.members.push_back(i);
        part.mass[0] += sites[i].mass[0];
        part.mass[1] += sites[i].mass[1];
      }
      for (auto& [s, part] : parts) settle(std::move(part));
    }
  }
  // below the finest split the relation is equality
  if (open.empty()) {
    dir[0].visit(Rational(0), frozen[0]);
    dir[1].visit(Rational(0), frozen[1]);
  }

  DistanceResult r;
  r.forward = dir[0].value;
  r.forward_attained = dir[0].attained;
  r.backward = dir[1].value;
  r.backward_attained = dir[1].attained;
  r.value = max(r.forward, r.backward);
  r.lo = r.value;
  r.hi = r.value;
  // truncation lowers every distance by at most 2^-(m+1)
  if (!mu.mode().is_exact()) r.hi += dyadic(mu.mode().depth);
  return r;
}

namespace {

Rational site_distance(const MeasureAtom& x, const MeasureAtom& y) {
  if (x.point) {
    auto k = first_difference(*x.point, *y.point);
    return k ? dyadic(*k) : Rational(0);
  }
  for (std::size_t i = 0; i < x.word.size(); ++i) {
    if (x.word[i] != y.word[i]) return dyadic(i + 1);
  }
  return 0;
}

}  // namespace

Rational band_deficiency_flow(const FinMeasure& mu, const FinMeasure& nu, std::size_t k) {
  if (!(mu.mode() == nu.mode())) throw Error(ErrorCode::ModeMismatch, "mode mismatch");
  const Rational t = k == 0 ? Rational(0) : dyadic(k);
  MaxFlow net(2);
  const std::size_t source = 0, sink = 1;
  std::vector<std::size_t> left, right;
  for (const auto& a : mu.atoms()) {
    left.push_back(net.add_node());
    net.add_edge(source, left.back(), a.mass);
  }
  for (const auto& b : nu.atoms()) {
    right.push_back(net.add_node());
    net.add_edge(right.back(), sink, b.mass);
  }
  const Rational unbounded(2);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      if (site_distance(mu.atoms()[i], nu.atoms()[j]) <= t) net.add_edge(left[i], right[j], unbounded);
    }
  }
  return Rational(1) - net.run(source, sink);
}

Rational cylinder_deficiency(const FinMeasure& mu, const FinMeasure& nu, std::size_t k) {
  if (!(mu.mode() == nu.mode())) throw Error(ErrorCode::ModeMismatch, "mode mismatch");
  std::map<Word, Rational> diff;
  auto key = [&](const MeasureAtom& a) -> Word {
    if (k == 0) {
      if (a.point) return a.point->prefix(a.point->preperiod_length() + 2 * a.point->period_length());
      return a.word;
    }
    if (a.point) return a.point->prefix(k - 1);
    return Word(a.word.begin(), a.word.begin() + static_cast<std::ptrdiff_t>(std::min(k - 1, a.word.size())));
  };
  if (k == 0 && mu.mode().is_exact()) {
    Rational total = 0;
    for (const auto& a : mu.atoms()) {
      Rational d = a.mass - nu.mass_of(*a.point);
      if (d > 0) total += d;
    }
    return total;
  }
  for (const auto& a : mu.atoms()) diff[key(a)] += a.mass;
  for (const auto& a : nu.atoms()) diff[key(a)] -= a.mass;
  Rational total = 0;
  for (const auto& [w, d] : diff) {
    if (d > 0) total += d;
  }
  return total;
}

// ---------------------------------------------------------------------------
// subset oracle

namespace {

Rational brute_one_sided(const FinMeasure& a, const FinMeasure& b) {
  const std::size_t na = a.size(), nb = b.size();
  std::vector<std::vector<Rational>> dist(na, std::vector<Rational>(nb));
  std::vector<Rational> ts{Rational(0)};
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      dist[i][j] = site_distance(a.atoms()[i], b.atoms()[j]);
      ts.push_back(dist[i][j]);
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::optional<Rational> best;
  for (std::size_t ti = 0; ti < ts.size(); ++ti) {
    const Rational& t = ts[ti];
    std::vector<std::uint32_t> nbr(na, 0);
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < nb; ++j) {
        if (dist[i][j] <= t) nbr[i] |= std::uint32_t{1} << j;
      }
    }
    Rational worst = 0;
    for (std::uint32_t set = 1; set < (std::uint32_t{1} << na); ++set) {
      Rational inside = 0;
      std::uint32_t reach = 0;
      for (std::size_t i = 0; i < na; ++i) {
        if (set >> i & 1) {
          inside += a.atoms()[i].mass;
          reach |= nbr[i];
        }
      }
      for (std::size_t j = 0; j < nb; ++j) {
        if (reach >> j & 1) inside -= b.atoms()[j].mass;
      }
      if (inside > worst) worst = inside;
    }
    // band (t, next t]; the last band is unbounded
    bool feasible = ti + 1 == ts.size() || worst <= ts[ti + 1];
    if (!feasible) continue;
    Rational v = max(t, worst);
    if (!best || v < *best) best = v;
  }
  return *best;
}

}  // namespace

Rational dbar_bruteforce(const FinMeasure& mu, const FinMeasure& nu) {
  if (!(mu.mode() == nu.mode())) throw Error(ErrorCode::ModeMismatch, "mode mismatch");
  if (mu.size() + nu.size() > kBruteforceSupport) {
    throw Error(ErrorCode::SupportTooLarge, "supports " + std::to_string(mu.size()) + " + " +
                                                std::to_string(nu.size()) + " exceed " +
                                                std::to_string(kBruteforceSupport));
  }
  return max(brute_one_sided(mu, nu), brute_one_sided(nu, mu));
}

// ---------------------------------------------------------------------------
// empirical-measure arithmetic

bool AuxReport::all_hold() const noexcept {
  for (const auto& it : item) {
    if (it.applicable && !it.holds) return false;
  }
  return true;
}

namespace {

AuxItem make_item(Rational lhs, Rational rhs) {
  AuxItem it;
  it.margin = rhs - lhs;
  it.holds = it.margin >= 0;
  it.lhs = std::move(lhs);
  it.rhs = std::move(rhs);
  return it;
}

Rational d(const FinMeasure& a, const FinMeasure& b) { return dbar(a, b).value; }

}  // namespace

AuxReport check_aux(const AuxInstance& in) {
  AuxReport rep;
  if (in.k < in.n && in.n <= in.m) {
    rep.item[0] = make_item(d(empirical(in.x, in.m), empirical(shift(in.x, in.k), in.n - in.k)),
                            frac(in.m - in.n + in.k, in.n));
  } else {
    rep.item[0].applicable = false;
  }
  FinMeasure mix = convex({{in.alpha, in.mu1}, {1 - in.alpha, in.mu2}});
  rep.item[1] = make_item(max(d(mix, in.mu1), d(mix, in.mu2)), d(in.mu1, in.mu2));
  FinMeasure other = convex({{in.beta, in.nu1}, {1 - in.beta, in.nu2}});
  rep.item[2] = make_item(d(mix, other),
                          abs(in.alpha - in.beta) + max(d(in.mu1, in.nu1), d(in.mu2, in.nu2)));
  Rational d1 = d(empirical(in.x, in.m), in.mu1);
  Rational d2 = d(empirical(shift(in.x, in.m), in.n), in.mu2);
  Rational total(in.m + in.n);
  FinMeasure target = convex({{Rational(in.m) / total, in.mu1}, {Rational(in.n) / total, in.mu2}});
  rep.item[3] = make_item(d(empirical(in.x, in.m + in.n), target), max(d1, d2));
  return rep;
}

}  // namespace shiftlab
